"""Isomorph-free generation of all graphs of a given order.

Graphs are grown one vertex at a time by canonical-deletion augmentation (see
``_pykernels.extend_code``), depth first, children of each parent in sorted
code order, so the output stream is deterministic.  Work is sharded by the
position of the order-(n-1) parent in that stream.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Callable, Iterator

from . import _kernels
from ._config import MAX_ORDER, CapacityError
from .graph import Graph, is_bipartite, is_connected

CanonicalCode = bytes

# generation of order > 12 is possible but not something this package budgets for
ENUMERATION_LIMIT = 12


def canonical_code(g: Graph) -> CanonicalCode:
    return _kernels.canonical_code(g.n, g.rows)


def graph_from_code(code: CanonicalCode) -> Graph:
    n, rows = _kernels.code_to_rows(code)
    return Graph(n, rows)


def canonical_form(g: Graph) -> Graph:
    return graph_from_code(canonical_code(g))


def are_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.m == h.m and canonical_code(g) == canonical_code(h)


@dataclass(frozen=True)
class GraphFilter:
    """Predicate on emitted graphs.

    ``kind`` is one of ``all``, ``connected``, ``trees``, ``unicyclic``,
    ``connected-non-bipartite``, ``connected-bipartite``; the optional bounds
    apply on top of it.
    """

    kind: str = "all"
    min_edges: int | None = None
    max_edges: int | None = None
    min_degree: int | None = None
    max_degree: int | None = None

    KINDS = ("all", "connected", "trees", "unicyclic", "connected-non-bipartite", "connected-bipartite")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown filter {self.kind!r}; expected one of {self.KINDS}")

    def accepts(self, g: Graph) -> bool:
        m = g.m
        if self.min_edges is not None and m < self.min_edges:
            return False
        if self.max_edges is not None and m > self.max_edges:
            return False
        if self.min_degree is not None or self.max_degree is not None:
            degs = [r.bit_count() for r in g.rows]
            if self.min_degree is not None and min(degs, default=0) < self.min_degree:
                return False
            if self.max_degree is not None and max(degs, default=0) > self.max_degree:
                return False
        kind = self.kind
        if kind == "all":
            return True
        if not is_connected(g):
            return False
        if kind == "connected":
            return True
        if kind == "trees":
            return m == g.n - 1
        if kind == "unicyclic":
            return m == g.n
        bip = is_bipartite(g)
        return bip if kind == "connected-bipartite" else not bip


ALL = GraphFilter()


@dataclass(frozen=True)
class WorkPartition:
    shard_index: int = 0
    shard_count: int = 1

    def __post_init__(self) -> None:
        if self.shard_count < 1 or not 0 <= self.shard_index < self.shard_count:
            raise ValueError(f"invalid shard {self.shard_index} of {self.shard_count}")

    @classmethod
    def all_shards(cls, count: int) -> list["WorkPartition"]:
        return [cls(i, count) for i in range(count)]


def _check_order(n: int) -> None:
    if n < 0:
        raise ValueError("order must be non-negative")
    if n > min(MAX_ORDER, ENUMERATION_LIMIT):
        raise CapacityError(f"enumeration of order {n} exceeds limit {min(MAX_ORDER, ENUMERATION_LIMIT)}")


def enumerate_codes(
    n: int,
    partition: WorkPartition = WorkPartition(),
    extend: Callable[[bytes], list[bytes]] | None = None,
) -> Iterator[CanonicalCode]:
    """Canonical codes of all order-``n`` graphs in this shard."""
    _check_order(n)
    extend = extend or _kernels.extend_code
    root = _kernels.rows_to_code(0, ())
    if n == 0:
        if partition.shard_index == 0:
            yield root
        return
    counter = 0

    def walk(code: bytes, order: int) -> Iterator[bytes]:
        nonlocal counter
        if order == n - 1:
            mine = counter % partition.shard_count == partition.shard_index
            counter += 1
            if mine:
                yield from extend(code)
            return
        for child in extend(code):
            yield from walk(child, order + 1)

    yield from walk(root, 0)


def enumerate_graphs(
    n: int,
    filter: GraphFilter = ALL,
    partition: WorkPartition = WorkPartition(),
) -> Iterator[Graph]:
    """One representative (in canonical labeling) per isomorphism class."""
    for code in enumerate_codes(n, partition):
        g = graph_from_code(code)
        if filter.accepts(g):
            yield g


# -- reference generator -------------------------------------------------------

REFERENCE_LIMIT = 6


def reference_graphs(n: int) -> list[Graph]:
    """Brute-force isomorphism classes, independent of the canonical labeling.

    Walk every labeled graph on ``n`` vertices in mask order; the first unseen
    mask starts a new class and every relabeling of it is marked seen.
    """
    if n > REFERENCE_LIMIT:
        raise CapacityError(f"reference generator limited to order {REFERENCE_LIMIT}")
    pairs = list(combinations(range(n), 2))
    index = {p: i for i, p in enumerate(pairs)}
    perm_maps = []
    for perm in permutations(range(n)):
        perm_maps.append([index[tuple(sorted((perm[u], perm[v])))] for u, v in pairs])
    seen = bytearray(1 << len(pairs))
    reps = []
    for mask in range(1 << len(pairs)):
        if seen[mask]:
            continue
        reps.append(Graph.from_edges(n, (pairs[i] for i in range(len(pairs)) if mask >> i & 1)))
        for pm in perm_maps:
            image = 0
            for i, j in enumerate(pm):
                if mask >> i & 1:
                    image |= 1 << j
            seen[image] = 1
    return reps
