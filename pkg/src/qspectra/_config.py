"""Build-wide limits.

``MAX_ORDER`` bounds every graph the package will construct.  It can be
raised through the ``QSPECTRA_MAX_ORDER`` environment variable, up to the
64-vertex ceiling imposed by the one-word adjacency rows of the compiled
kernels.
"""

import os

HARD_MAX_ORDER = 64


def _read_max_order() -> int:
    raw = os.environ.get("QSPECTRA_MAX_ORDER")
    if not raw:
        return 16
    value = int(raw)
    if not 1 <= value <= HARD_MAX_ORDER:
        raise ValueError(f"QSPECTRA_MAX_ORDER must be in 1..{HARD_MAX_ORDER}, got {value}")
    return value


MAX_ORDER = _read_max_order()


class CapacityError(ValueError):
    """An operation would produce a graph larger than MAX_ORDER or the enumeration budget."""
