import numpy as np
import pytest

from qspectra import _kernels
from qspectra.cospectral import CensusStore
from qspectra.graph import Graph
from qspectra.linalg import build_matrix


@pytest.fixture(scope="session")
def store(tmp_path_factory):
    """One census cache shared by the whole run."""
    return CensusStore(tmp_path_factory.mktemp("censuses"))


@pytest.fixture(params=["pure", "compiled"])
def kernels(request):
    if request.param == "compiled" and _kernels.compiled is None:
        pytest.skip("compiled kernels not built")
    return getattr(_kernels, request.param)


def numeric_spectrum(g: Graph, kind: str) -> np.ndarray:
    """Independent floating-point oracle."""
    if g.n == 0:
        return np.zeros(0)
    return np.sort(np.linalg.eigvalsh(np.array(build_matrix(g, kind), dtype=float)))


def to_networkx(g: Graph):
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


# -- acceptance reporting ------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
