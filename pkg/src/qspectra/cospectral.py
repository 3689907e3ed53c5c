"""Cospectrality censuses: all graphs of one order grouped by exact characteristic polynomial."""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import _kernels
from ._config import CapacityError
from .enumeration import CanonicalCode, WorkPartition, canonical_code, enumerate_codes, graph_from_code
from .graph import Graph
from .graph6 import encode_graph6
from .linalg import KINDS, CharPoly

MAGIC = b"QSCENSUS"
FORMAT_VERSION = 1
GENERATOR = "qspectra-orderly-1"
DEFAULT_BUDGET = 9
LARGE_BUDGET = 10

Key = tuple[int, ...]


class CensusError(Exception):
    """Unreadable, mismatched or corrupt census file."""


class CensusVersionError(CensusError):
    pass


class CensusChecksumError(CensusError):
    pass


class MissingCensusError(LookupError):
    pass


def _check_budget(n: int, allow_large: bool) -> None:
    limit = LARGE_BUDGET if allow_large else DEFAULT_BUDGET
    if n > limit:
        hint = "" if allow_large else " (order 10 needs allow_large=True)"
        raise CapacityError(f"census of order {n} exceeds budget {limit}{hint}")


# Keys are stored as n+1 unsigned big-endian words, each coefficient offset
# by 2**63, so byte order of the packed key equals tuple order of the ints.
_OFFSET = 1 << 63


def _key_width(n: int) -> int:
    return 8 * (n + 1)


def _code_width(n: int) -> int:
    return 1 + n * ((n + 7) // 8)


def pack_key(coeffs: Sequence[int]) -> bytes:
    try:
        return struct.pack(f">{len(coeffs)}Q", *(c + _OFFSET for c in coeffs))
    except struct.error:
        raise CensusError("characteristic polynomial coefficient exceeds 64 bits") from None


def unpack_key(raw: bytes) -> Key:
    return tuple(v - _OFFSET for v in struct.unpack(f">{len(raw) // 8}Q", raw))


def _rows_as_strings(rows: np.ndarray) -> np.ndarray:
    """Fixed-width byte-string view of a contiguous uint8 matrix (for sorting and search)."""
    rows = np.ascontiguousarray(rows)
    return rows.view(f"S{rows.shape[1]}").ravel()


class Census:
    """All graphs of one order grouped by exact characteristic polynomial.

    Storage is columnar so an order-10 census (about 12 million graphs) fits
    in memory: ``keys`` holds one packed polynomial per class in ascending
    order, ``offsets[i]:offsets[i+1]`` indexes that class's rows of ``codes``,
    and each class's canonical codes are sorted.
    """

    def __init__(self, n: int, kind: str, keys: np.ndarray, offsets: np.ndarray,
                 codes: np.ndarray, metadata: dict | None = None):
        self.n = n
        self.kind = kind
        self.keys = keys
        self.offsets = offsets
        self.codes = codes
        self.metadata = metadata or {}
        self._dict: dict[Key, list[CanonicalCode]] | None = None

    @classmethod
    def from_classes(cls, n: int, kind: str, classes: Mapping[Key, Iterable[CanonicalCode]],
                     metadata: dict | None = None) -> "Census":
        recs = bytearray()
        for key, members in classes.items():
            packed = pack_key(key)
            for code in members:
                recs += packed + code
        return _from_records(n, kind, [recs], metadata or {})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Census):
            return NotImplemented
        return (self.n == other.n and self.kind == other.kind
                and np.array_equal(self.keys, other.keys)
                and np.array_equal(self.offsets, other.offsets)
                and np.array_equal(self.codes, other.codes))

    def __repr__(self) -> str:
        return f"Census(n={self.n}, kind={self.kind!r}, graphs={self.graph_count}, classes={self.class_count})"

    @property
    def graph_count(self) -> int:
        return len(self.codes)

    @property
    def class_count(self) -> int:
        return len(self.keys)

    def class_sizes(self) -> np.ndarray:
        return np.diff(self.offsets)

    def histogram(self) -> dict[int, int]:
        """class size -> number of classes of that size"""
        sizes, counts = np.unique(self.class_sizes(), return_counts=True)
        return {int(s): int(c) for s, c in zip(sizes, counts)}

    def _members_at(self, i: int) -> list[CanonicalCode]:
        return [row.tobytes() for row in self.codes[self.offsets[i]:self.offsets[i + 1]]]

    def iter_classes(self, min_size: int = 1) -> Iterator[tuple[Key, list[CanonicalCode]]]:
        """(key, members) in key order without materialising every class at once."""
        sizes = self.class_sizes()
        for i in np.flatnonzero(sizes >= min_size):
            yield unpack_key(self.keys[i].tobytes()), self._members_at(int(i))

    @property
    def classes(self) -> dict[Key, list[CanonicalCode]]:
        if self._dict is None:
            self._dict = dict(self.iter_classes())
        return self._dict

    def members(self, key: Key) -> list[CanonicalCode]:
        if not self.class_count:
            return []
        target = np.array([pack_key(key)], dtype=f"S{self.keys.shape[1]}")
        haystack = _rows_as_strings(self.keys)
        i = int(np.searchsorted(haystack, target[0]))
        if i < self.class_count and haystack[i] == target[0]:
            return self._members_at(i)
        return []

    def key_of(self, code: CanonicalCode) -> Key:
        key = spectrum_key(code, self.kind)
        if code not in self.members(key):
            raise KeyError("graph is not in this census")
        return key

    def cospectral_classes(self) -> Iterable[list[CanonicalCode]]:
        return (members for _, members in self.iter_classes(min_size=2))


def spectrum_key(code: CanonicalCode, kind: str) -> Key:
    return tuple(_kernels.charpoly_code(code, kind))


def _from_records(n: int, kind: str, chunks: Sequence[bytes | bytearray | np.ndarray], metadata: dict) -> Census:
    """Sort (key, code) records and cut them into classes."""
    kw, cw = _key_width(n), _code_width(n)
    width = kw + cw
    parts = [np.frombuffer(c, dtype=np.uint8) if not isinstance(c, np.ndarray) else c.reshape(-1)
             for c in chunks]
    flat = np.concatenate(parts) if len(parts) != 1 else np.array(parts[0], copy=True)
    del parts
    recs = flat.reshape(-1, width)
    recs.view(f"S{width}").ravel().sort()
    total = len(recs)
    change = np.ones(total, dtype=bool)
    step = 1 << 20
    for lo in range(1, total, step):
        hi = min(total, lo + step)
        a = _rows_as_strings(recs[lo:hi, :kw])
        b = _rows_as_strings(recs[lo - 1:hi - 1, :kw])
        change[lo:hi] = a != b
    starts = np.flatnonzero(change)
    keys = recs[starts, :kw].copy()
    codes = np.ascontiguousarray(recs[:, kw:])
    del recs, flat
    offsets = np.append(starts, total).astype(np.int64)
    return Census(n, kind, keys, offsets, codes, metadata)


_FLUSH = 1 << 16


def classify_shard(n: int, kinds: Sequence[str], partition: WorkPartition) -> dict[str, Census]:
    """Shard-local censuses for several matrix kinds from one enumeration pass."""
    chunks: dict[str, list[bytes]] = {k: [] for k in kinds}
    pending: dict[str, list[bytes]] = {k: [] for k in kinds}
    fmt = struct.Struct(f">{n + 1}Q")
    charpoly = _kernels.charpoly_code
    for code in enumerate_codes(n, partition):
        for kind in kinds:
            buf = pending[kind]
            try:
                buf.append(fmt.pack(*[c + _OFFSET for c in charpoly(code, kind)]) + code)
            except struct.error:
                raise CensusError("characteristic polynomial coefficient exceeds 64 bits") from None
            if len(buf) >= _FLUSH:
                chunks[kind].append(b"".join(buf))
                buf.clear()
    meta = {"generator": GENERATOR, "shards": [[partition.shard_index, partition.shard_count]]}
    out = {}
    for kind in kinds:
        chunks[kind].append(b"".join(pending[kind]))
        pending[kind].clear()
        out[kind] = _from_records(n, kind, chunks.pop(kind), dict(meta))
    return out


def _records(c: Census) -> np.ndarray:
    keys = np.repeat(c.keys, c.class_sizes(), axis=0)
    return np.concatenate([keys, c.codes], axis=1)


def merge_censuses(parts: Sequence[Census]) -> Census:
    """Associative merge; the result is independent of part order."""
    if not parts:
        raise ValueError("nothing to merge")
    n, kind = parts[0].n, parts[0].kind
    if any((p.n, p.kind) != (n, kind) for p in parts):
        raise ValueError("cannot merge censuses of different order or kind")
    shards = sorted(s for p in parts for s in p.metadata.get("shards", []))
    meta = {"generator": GENERATOR, "shards": shards}
    if len(parts) == 1:
        p = parts[0]
        return Census(n, kind, p.keys, p.offsets, p.codes, meta)
    return _from_records(n, kind, [_records(p) for p in parts], meta)


def classify_many(n: int, kinds: Sequence[str] = KINDS, shard_count: int = 1,
                  allow_large: bool = False) -> dict[str, Census]:
    _check_budget(n, allow_large)
    for kind in kinds:
        if kind not in KINDS:
            raise ValueError(f"unknown matrix kind {kind!r}")
    per_shard = [classify_shard(n, kinds, p) for p in WorkPartition.all_shards(shard_count)]
    return {kind: merge_censuses([s[kind] for s in per_shard]) for kind in kinds}


def classify(n: int, kind: str, shard_count: int = 1, allow_large: bool = False) -> Census:
    return classify_many(n, (kind,), shard_count, allow_large)[kind]


# -- queries ---------------------------------------------------------------------

@dataclass(frozen=True)
class DeterminationStatus:
    das: bool
    dls: bool
    dqs: bool

    def to_dict(self) -> dict[str, bool]:
        return {"das": self.das, "dls": self.dls, "dqs": self.dqs}


def _census_for(censuses, n: int, kind: str) -> Census:
    if isinstance(censuses, CensusStore):
        return censuses.get(n, kind)
    census = censuses.get(kind) if isinstance(censuses, Mapping) else None
    if census is None or census.n != n:
        raise MissingCensusError(f"no {kind}-census of order {n} available")
    return census


def class_of(g: Graph, kind: str, census: Census) -> list[CanonicalCode]:
    if census.n != g.n or census.kind != kind:
        raise MissingCensusError(f"need a {kind}-census of order {g.n}, got {census.kind}-census of order {census.n}")
    return census.members(spectrum_key(canonical_code(g), kind))


def is_determined(g: Graph, kind: str, census: Census) -> bool:
    return len(class_of(g, kind, census)) == 1


def determination_status(g: Graph, censuses) -> DeterminationStatus:
    """``censuses``: a mapping kind -> Census of order |V(G)|, or a CensusStore."""
    flags = {kind: is_determined(g, kind, _census_for(censuses, g.n, kind)) for kind in KINDS}
    return DeterminationStatus(das=flags["A"], dls=flags["L"], dqs=flags["Q"])


def mates(g: Graph, kind: str, census: Census) -> list[Graph]:
    own = canonical_code(g)
    return [graph_from_code(c) for c in class_of(g, kind, census) if c != own]


def mates_report(g: Graph, kind: str, census: Census) -> dict:
    key = spectrum_key(canonical_code(g), kind)
    return {
        "schema": "qspectra.mates/1",
        "graph6": encode_graph6(g),
        "kind": kind,
        "char_poly": CharPoly(key).serialize(),
        "mates": [encode_graph6(h) for h in mates(g, kind, census)],
    }


# -- persistence -----------------------------------------------------------------
#
# MAGIC, u32 header length, JSON header, body.  The body is three arrays back
# to back: class keys (class_count x 8(n+1) bytes, packed as in memory),
# class sizes (class_count x u32 big-endian), canonical codes
# (graph_count x code width).  Everything is fixed width and sorted, so equal
# censuses serialise to equal bytes.

def _body_parts(c: Census) -> list[bytes]:
    return [c.keys.tobytes(), c.class_sizes().astype(">u4").tobytes(), c.codes.tobytes()]


def _header(c: Census, digest: str) -> bytes:
    header = {
        "magic": MAGIC.decode(),
        "version": FORMAT_VERSION,
        "n": c.n,
        "kind": c.kind,
        "class_count": c.class_count,
        "graph_count": c.graph_count,
        "generator": c.metadata.get("generator", GENERATOR),
        "sha256": digest,
    }
    head = json.dumps(header, sort_keys=True).encode()
    return MAGIC + struct.pack(">I", len(head)) + head


def census_bytes(c: Census) -> bytes:
    body = b"".join(_body_parts(c))
    return _header(c, hashlib.sha256(body).hexdigest()) + body


def save_census(c: Census, path: str | Path) -> None:
    parts = _body_parts(c)
    h = hashlib.sha256()
    for part in parts:
        h.update(part)
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_header(c, h.hexdigest()))
        for part in parts:
            fh.write(part)
    tmp.replace(path)


def parse_census(data: bytes) -> Census:
    if not data.startswith(MAGIC):
        raise CensusVersionError("not a census file (bad magic)")
    pos = len(MAGIC)
    if len(data) < pos + 4:
        raise CensusError("truncated census header")
    (hlen,) = struct.unpack_from(">I", data, pos)
    pos += 4
    try:
        header = json.loads(data[pos:pos + hlen])
    except ValueError as exc:
        raise CensusError(f"corrupt census header: {exc}") from None
    pos += hlen
    if header.get("version") != FORMAT_VERSION:
        raise CensusVersionError(f"unsupported census version {header.get('version')}")
    body = memoryview(data)[pos:]
    if hashlib.sha256(body).hexdigest() != header["sha256"]:
        raise CensusChecksumError("census body checksum mismatch")
    n, classes, graphs = header["n"], header["class_count"], header["graph_count"]
    kw, cw = _key_width(n), _code_width(n)
    if len(body) != classes * (kw + 4) + graphs * cw:
        raise CensusError("census body length does not match its header")
    keys = np.frombuffer(body, np.uint8, classes * kw).reshape(classes, kw).copy()
    sizes = np.frombuffer(body, ">u4", classes, classes * kw).astype(np.int64)
    codes = np.frombuffer(body, np.uint8, graphs * cw, classes * (kw + 4)).reshape(graphs, cw).copy()
    offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
    if offsets[-1] != graphs:
        raise CensusError("class sizes do not add up to the graph count")
    return Census(n, header["kind"], keys, offsets, codes, {"generator": header["generator"]})


def load_census(path: str | Path) -> Census:
    return parse_census(Path(path).read_bytes())


def census_path(cache_dir: str | Path, n: int, kind: str) -> Path:
    return Path(cache_dir) / f"census-n{n}-{kind}.qsc"


class CensusStore:
    """Lazily built censuses keyed by (order, kind), optionally cached on disk.

    ``builder`` may be swapped for a parallel implementation; it receives
    ``(n, kinds)`` and returns a mapping kind -> Census.
    """

    def __init__(self, cache_dir: str | Path | None = None, allow_large: bool = False, builder=None):
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self.allow_large = allow_large
        self.builder = builder or (lambda n, kinds: classify_many(n, kinds, allow_large=self.allow_large))
        self._mem: dict[tuple[int, str], Census] = {}

    def get(self, n: int, kind: str) -> Census:
        return self.get_many(n, (kind,))[kind]

    def get_many(self, n: int, kinds: Sequence[str]) -> dict[str, Census]:
        _check_budget(n, self.allow_large)
        missing = [k for k in kinds if (n, k) not in self._mem]
        if self.cache_dir:
            for k in list(missing):
                path = census_path(self.cache_dir, n, k)
                if path.exists():
                    self._mem[n, k] = load_census(path)
                    missing.remove(k)
        if missing:
            built = self.builder(n, missing)
            for k in missing:
                self._mem[n, k] = built[k]
                if self.cache_dir:
                    self.cache_dir.mkdir(parents=True, exist_ok=True)
                    save_census(built[k], census_path(self.cache_dir, n, k))
        return {k: self._mem[n, k] for k in kinds}
