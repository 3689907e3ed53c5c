"""Backend selection for the hot kernels.

The compiled extension is used when it imports; ``QSPECTRA_PURE=1`` forces
the pure-Python kernels.
"""

import os

from . import _pykernels

pure = _pykernels

if os.environ.get("QSPECTRA_PURE") == "1":
    compiled = None
else:
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

active = compiled if compiled is not None else pure
BACKEND = "compiled" if compiled is not None else "python"

canonical_form = active.canonical_form
canonical_code = active.canonical_code
extend_code = active.extend_code
charpoly = active.charpoly
charpoly_code = active.charpoly_code
rows_to_code = _pykernels.rows_to_code
code_to_rows = _pykernels.code_to_rows
