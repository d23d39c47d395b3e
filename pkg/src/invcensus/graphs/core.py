"""Simple undirected graphs, graph6 and adjacency-list text formats."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

from ..errors import DomainError, ParseError, PreconditionError

GRAPH6_HEADER = ">>graph6<<"


class Graph:
    """Simple undirected graph on vertices 0..n-1 with sorted adjacency lists."""

    __slots__ = ("n", "adj", "_cache")

    def __init__(self, n: int, adj: Sequence[Iterable[int]]):
        if len(adj) != n:
            raise DomainError("adjacency list length must equal n")
        rows = tuple(tuple(sorted(set(int(u) for u in nbrs))) for nbrs in adj)
        for v, nbrs in enumerate(rows):
            for u in nbrs:
                if u == v:
                    raise PreconditionError(f"loop at vertex {v}")
                if not 0 <= u < n:
                    raise DomainError(f"neighbour {u} out of range")
        for v, nbrs in enumerate(rows):
            for u in nbrs:
                if v not in rows[u]:
                    raise PreconditionError("adjacency is not symmetric")
        self.n = n
        self.adj = rows
        self._cache: dict = {}

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise PreconditionError(f"loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        return cls(n, adj)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.num_edges})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degree_sequence(self) -> list[int]:
        return sorted(len(a) for a in self.adj)

    @property
    def valency(self) -> int | None:
        """Common degree, or None if the graph is not regular."""
        degs = {len(a) for a in self.adj}
        if len(degs) == 1:
            return degs.pop()
        return 0 if not degs else None

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            comp = [s]
            seen[s] = True
            for v in comp:
                for u in self.adj[v]:
                    if not seen[u]:
                        seen[u] = True
                        comp.append(u)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        if "connected" not in self._cache:
            self._cache["connected"] = self.n <= 1 or len(self.components()) == 1
        return self._cache["connected"]

    def distances_from(self, s: int) -> list[int]:
        dist = [-1] * self.n
        dist[s] = 0
        q = deque([s])
        while q:
            v = q.popleft()
            for u in self.adj[v]:
                if dist[u] < 0:
                    dist[u] = dist[v] + 1
                    q.append(u)
        return dist

    def girth(self) -> float:
        """Length of a shortest cycle (inf for forests)."""
        best = float("inf")
        for s in range(self.n):
            dist = [-1] * self.n
            parent = [-1] * self.n
            dist[s] = 0
            q = deque([s])
            while q:
                v = q.popleft()
                if 2 * dist[v] + 1 >= best:
                    break
                for u in self.adj[v]:
                    if dist[u] < 0:
                        dist[u] = dist[v] + 1
                        parent[u] = v
                        q.append(u)
                    elif u != parent[v]:
                        best = min(best, dist[u] + dist[v] + 1)
        return best

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Graph with vertex v renamed perm[v]."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for v in range(self.n):
            adj[perm[v]] = [perm[u] for u in self.adj[v]]
        return Graph(self.n, adj)

    def is_automorphism(self, perm: Sequence[int]) -> bool:
        return all(
            tuple(sorted(perm[u] for u in self.adj[v])) == self.adj[perm[v]] for v in range(self.n)
        )

    # canonical form and automorphisms live in canon.py --------------------

    def certificate(self) -> bytes:
        from .canon import canonical_certificate

        return canonical_certificate(self)

    def automorphism_group(self):
        from .canon import automorphism_group

        return automorphism_group(self)

    # formats ---------------------------------------------------------------

    def to_graph6(self, header: bool = False) -> str:
        return (GRAPH6_HEADER if header else "") + encode_graph6(self)

    @classmethod
    def from_graph6(cls, text: str) -> Graph:
        return decode_graph6(text)

    def to_adjacency_text(self) -> str:
        lines = [str(self.n)]
        lines += [f"{v}: " + " ".join(map(str, self.adj[v])) for v in range(self.n)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_adjacency_text(cls, text: str) -> Graph:
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        try:
            n = int(lines[0])
        except (ValueError, IndexError):
            raise ParseError("expected vertex count", 1) from None
        adj: list[list[int]] = [[] for _ in range(n)]
        for lineno, ln in enumerate(lines[1:], start=2):
            head, _, tail = ln.partition(":")
            try:
                v = int(head)
                adj[v] = [int(x) for x in tail.split()]
            except (ValueError, IndexError):
                raise ParseError("expected 'v: u1 u2 ...'", lineno) from None
        return cls(n, adj)


def _encode_n(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    if n < 258048:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n < 1 << 36:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise DomainError("graph too large for graph6")


def encode_graph6(g: Graph) -> str:
    n = g.n
    bits = []
    for j in range(1, n):
        bits.extend(_row_bits(g.adj[j], j))
    while len(bits) % 6:
        bits.append(0)
    out = [_encode_n(n)]
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k : k + 6]:
            v = (v << 1) | b
        out.append(chr(v + 63))
    return "".join(out)


def _row_bits(nbrs: Sequence[int], j: int) -> list[int]:
    row = [0] * j
    for i in nbrs:
        if i < j:
            row[i] = 1
    return row


def decode_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER) :]
    if not s:
        raise ParseError("empty graph6 string")
    vals = [ord(ch) - 63 for ch in s]
    if any(not 0 <= v < 64 for v in vals):
        raise ParseError("character outside the graph6 range")
    if vals[0] != 63:
        n, pos = vals[0], 1
    elif len(vals) > 1 and vals[1] != 63:
        if len(vals) < 4:
            raise ParseError("truncated size field")
        n = (vals[1] << 12) | (vals[2] << 6) | vals[3]
        pos = 4
    else:
        if len(vals) < 8:
            raise ParseError("truncated size field")
        n = 0
        for v in vals[2:8]:
            n = (n << 6) | v
        pos = 8
    need = n * (n - 1) // 2
    nchars = (need + 5) // 6
    body = vals[pos:]
    if len(body) != nchars:
        raise ParseError(f"expected {nchars} data characters, found {len(body)}")
    adj: list[list[int]] = [[] for _ in range(n)]
    k = 0
    j, i = 1, 0
    for v in body:
        for shift in range(5, -1, -1):
            if k >= need:
                break
            if (v >> shift) & 1:
                adj[i].append(j)
                adj[j].append(i)
            k += 1
            i += 1
            if i == j:
                j += 1
                i = 0
    return Graph(n, adj)


def read_graph6_file(path) -> list[Graph]:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                out.append(decode_graph6(line))
            except (ParseError, DomainError, PreconditionError) as exc:
                raise ParseError(str(exc), lineno) from None
    return out
