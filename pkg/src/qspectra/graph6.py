"""graph6 encoding of simple graphs.

Header: ``chr(n + 63)`` for ``n <= 62``, otherwise ``'~'`` followed by three
6-bit groups.  Body: the upper triangle read column by column
(``(0,1), (0,2), (1,2), (0,3), ...``), packed six bits per byte, each byte
offset by 63, the final group zero-padded.
"""

from __future__ import annotations

from .graph import Graph

HEADER = ">>graph6<<"


class Graph6Error(ValueError):
    pass


def _encode_order(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> shift) & 63) + 63) for shift in (12, 6, 0))
    raise Graph6Error(f"order {n} too large for graph6")


def encode_graph6(g: Graph) -> str:
    n = g.n
    bits = []
    for j in range(1, n):
        row = g.rows[j]
        bits.extend(row >> i & 1 for i in range(j))
    bits.extend([0] * (-len(bits) % 6))
    body = []
    for k in range(0, len(bits), 6):
        value = 0
        for b in bits[k:k + 6]:
            value = value << 1 | b
        body.append(chr(value + 63))
    return _encode_order(n) + "".join(body)


def decode_graph6(text: str | bytes) -> Graph:
    if isinstance(text, bytes):
        text = text.decode("ascii")
    s = text.strip()
    if s.startswith(HEADER):
        s = s[len(HEADER):]
    if not s:
        raise Graph6Error("empty graph6 string")
    data = [ord(c) - 63 for c in s]
    if any(not 0 <= d <= 63 for d in data):
        raise Graph6Error(f"character outside graph6 range in {s!r}")
    if data[0] == 63:
        if len(data) < 4 or data[1] == 63:
            raise Graph6Error(f"unsupported or truncated graph6 header in {s!r}")
        n = data[1] << 12 | data[2] << 6 | data[3]
        body = data[4:]
    else:
        n = data[0]
        body = data[1:]
    nbits = n * (n - 1) // 2
    if len(body) != (nbits + 5) // 6:
        raise Graph6Error(f"graph6 body for order {n} needs {(nbits + 5) // 6} bytes, got {len(body)}")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if body[k // 6] >> (5 - k % 6) & 1:
                edges.append((i, j))
            k += 1
    pad = len(body) * 6 - nbits
    if pad and body[-1] & ((1 << pad) - 1):
        raise Graph6Error("nonzero padding bits in graph6 body")
    return Graph.from_edges(n, edges)
