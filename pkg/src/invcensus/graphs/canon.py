"""Canonical labelling and automorphism groups by individualisation-refinement.

Partitions are ordered: ``lab`` lists the vertices, cells are contiguous
ranges of ``lab`` identified by their start position.  Refinement splits
cells by neighbour counts into a splitter cell; everything it does depends
only on cell positions, so the recorded trace is an isomorphism invariant.

The search keeps the first leaf and the best leaf (largest trace path, then
largest relabelled adjacency).  Equal leaves give automorphisms, which prune
the tree through orbits of the pointwise stabiliser of the current prefix.
"""

from __future__ import annotations

import sys
from array import array

from ..permgroup import PermGroup
from .core import Graph


class _Partition:
    __slots__ = ("lab", "cell_of", "cend")

    def __init__(self, lab, cell_of, cend):
        self.lab = lab
        self.cell_of = cell_of
        self.cend = cend

    @classmethod
    def unit(cls, n: int, colours=None) -> _Partition:
        if colours is None:
            lab = list(range(n))
            return cls(lab, [0] * n, {0: n} if n else {})
        order = sorted(range(n), key=lambda v: (colours[v], v))
        cell_of = [0] * n
        cend = {}
        start = 0
        for pos in range(1, n + 1):
            if pos == n or colours[order[pos]] != colours[order[start]]:
                for k in range(start, pos):
                    cell_of[order[k]] = start
                cend[start] = pos
                start = pos
        return cls(order, cell_of, cend)

    def copy(self) -> _Partition:
        return _Partition(self.lab[:], self.cell_of[:], dict(self.cend))

    def is_discrete(self) -> bool:
        return len(self.cend) == len(self.lab)

    def target_cell(self) -> int:
        """Start of the first smallest non-singleton cell."""
        best, best_size = -1, None
        for start in sorted(self.cend):
            size = self.cend[start] - start
            if size > 1 and (best_size is None or size < best_size):
                best, best_size = start, size
        return best

    def individualise(self, v: int) -> int:
        """Move v to the front of its cell and split it off; returns the new singleton start."""
        start = self.cell_of[v]
        end = self.cend[start]
        lab = self.lab
        i = lab.index(v, start, end)
        lab[start], lab[i] = lab[i], lab[start]
        self.cend[start] = start + 1
        self.cend[start + 1] = end
        for k in range(start + 1, end):
            self.cell_of[lab[k]] = start + 1
        return start


def _refine(adj, part: _Partition, queue: list[int]) -> int:
    """Equitable refinement; returns a hash of the refinement trace."""
    lab, cell_of, cend = part.lab, part.cell_of, part.cend
    inq = set(queue)
    trace = []
    qi = 0
    while qi < len(queue):
        w = queue[qi]
        qi += 1
        inq.discard(w)
        count: dict[int, int] = {}
        for k in range(w, cend[w]):
            for u in adj[lab[k]]:
                count[u] = count.get(u, 0) + 1
        touched: dict[int, list[int]] = {}
        for u in count:
            touched.setdefault(cell_of[u], []).append(u)
        for x in sorted(touched):
            end = cend[x]
            size = end - x
            hit = touched[x]
            if size == 1:
                trace.append((x, count[hit[0]]))
                continue
            buckets: dict[int, list[int]] = {}
            if len(hit) < size:
                buckets[0] = [v for v in lab[x:end] if v not in count]
            for v in hit:
                buckets.setdefault(count[v], []).append(v)
            if len(buckets) == 1:
                trace.append((x, next(iter(buckets))))
                continue
            keys = sorted(buckets)
            pos = x
            starts = []
            for key in keys:
                frag = buckets[key]
                frag.sort()
                fstart = pos
                starts.append((fstart, len(frag)))
                for v in frag:
                    lab[pos] = v
                    cell_of[v] = fstart
                    pos += 1
                cend[fstart] = pos
            trace.append((x, w, tuple(keys), tuple(s for _, s in starts)))
            if x in inq:
                for s, _ in starts[1:]:
                    queue.append(s)
                    inq.add(s)
            else:
                largest = max(range(len(starts)), key=lambda i: (starts[i][1], -i))
                for i, (s, _) in enumerate(starts):
                    if i != largest:
                        queue.append(s)
                        inq.add(s)
    return hash(tuple(trace))


def _leaf_certificate(adj, lab) -> bytes:
    n = len(lab)
    inv = [0] * n
    for i, v in enumerate(lab):
        inv[v] = i
    out = array("I")
    for v in lab:
        out.extend(sorted(inv[u] for u in adj[v]))
        out.append(0xFFFFFFFF)
    if sys.byteorder == "little":
        out.byteswap()
    return out.tobytes()


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b) -> bool:
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        if a > b:
            a, b = b, a
        self.parent[b] = a
        return True


class _Search:
    def __init__(self, graph: Graph, colours=None):
        self.g = graph
        self.adj = graph.adj
        self.n = graph.n
        self.colours = colours
        self.gens: list[tuple[int, ...]] = []
        self.first = None  # (traces, lab, cert)
        self.best = None
        self.leaves = 0

    def run(self):
        n = self.n
        part = _Partition.unit(n, self.colours)
        if n == 0:
            self.best = self.first = ((), [], b"")
            return
        t0 = _refine(self.adj, part, sorted(part.cend))
        self._node(part, [], [t0])

    # pruning bookkeeping ---------------------------------------------------

    def _add_gen(self, lab_a, lab_b):
        gamma = [0] * self.n
        for a, b in zip(lab_a, lab_b):
            gamma[a] = b
        gamma = tuple(gamma)
        if gamma not in self.gens and any(gamma[i] != i for i in range(self.n)):
            self.gens.append(gamma)

    @staticmethod
    def _common_prefix(a, b) -> int:
        k = 0
        for x, y in zip(a, b):
            if x != y:
                break
            k += 1
        return k

    def _node(self, part: _Partition, prefix: list[int], traces: list[int]):
        """Explore a node; returns a level to unwind to, or None."""
        if part.is_discrete():
            return self._leaf(part, prefix, traces)
        level = len(prefix)
        start = part.target_cell()
        cell = sorted(part.lab[start : part.cend[start]])
        uf = _UnionFind(self.n)
        seen_gens = 0
        explored: list[int] = []
        for v in cell:
            # fold in automorphisms found so far that fix the prefix pointwise
            while seen_gens < len(self.gens):
                gamma = self.gens[seen_gens]
                seen_gens += 1
                if all(gamma[p] == p for p in prefix):
                    for i in range(self.n):
                        uf.union(i, gamma[i])
            root = uf.find(v)
            if any(uf.find(e) == root for e in explored):
                continue
            explored.append(v)
            child = part.copy()
            child.individualise(v)
            t = _refine(self.adj, child, [child.cell_of[v]])
            ctraces = traces + [t]
            if self.first is not None:
                k = len(ctraces)
                eqf = self.first[0][:k] == tuple(ctraces)
                btr = list(self.best[0][:k])
                if not eqf and ctraces < btr:
                    continue
            jump = self._node(child, prefix + [v], ctraces)
            if jump is not None and jump < level:
                return jump
        return None

    def _leaf(self, part: _Partition, prefix, traces):
        self.leaves += 1
        lab = part.lab
        cert = _leaf_certificate(self.adj, lab)
        key = (tuple(traces), lab[:], cert, tuple(prefix))
        if self.first is None:
            self.first = self.best = key
            return None
        if key[0] == self.first[0] and cert == self.first[2]:
            self._add_gen(self.first[1], lab)
            return self._common_prefix(prefix, self.first[3])
        if key[0] == self.best[0] and cert == self.best[2]:
            self._add_gen(self.best[1], lab)
            return self._common_prefix(prefix, self.best[3])
        if (list(key[0]), cert) > (list(self.best[0]), self.best[2]):
            self.best = key
        return None


def _search(g: Graph) -> _Search:
    if "search" not in g._cache:
        s = _Search(g)
        s.run()
        g._cache["search"] = s
    return g._cache["search"]


def canonical_labeling(g: Graph) -> list[int]:
    """lab with lab[i] = original vertex receiving canonical label i."""
    return list(_search(g).best[1])


def canonical_certificate(g: Graph) -> bytes:
    s = _search(g)
    return g.n.to_bytes(4, "big") + s.best[2]


def automorphism_group(g: Graph) -> PermGroup:
    if "aut" not in g._cache:
        g._cache["aut"] = PermGroup(g.n, _search(g).gens)
    return g._cache["aut"]


def canonical_form(g: Graph) -> Graph:
    lab = canonical_labeling(g)
    perm = [0] * g.n
    for i, v in enumerate(lab):
        perm[v] = i
    return g.relabel(perm)


def are_isomorphic_graphs(a: Graph, b: Graph) -> bool:
    return canonical_certificate(a) == canonical_certificate(b)
