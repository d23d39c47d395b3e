"""Graph constructions: Cayley graphs, coset graphs, voltage covers and a few
standard graphs, including the Tutte-Coxeter graph."""

from __future__ import annotations

import functools
import itertools
from typing import Mapping

import numpy as np

from ..errors import DomainError, IntegrityError, PreconditionError
from ..permgroup import FiniteGroup, PermGroup, Subgroup, regular_representation
from .core import Graph


def cayley_graph(G: FiniteGroup, S, check: bool = True) -> Graph:
    """Cay(G, S): u ~ v iff u v^-1 in S, so the neighbours of u are s u."""
    S = sorted({int(s) for s in S})
    if 0 in S:
        raise PreconditionError("connection set contains the identity")
    inv = G.inv
    if any(int(inv[s]) not in S for s in S):
        raise PreconditionError("connection set is not inverse-closed")
    t = G.table
    adj = [[int(t[s, u]) for s in S] for u in range(G.order)]
    g = Graph(G.order, adj)
    if check:
        for p in regular_representation(G).gens:
            if not g.is_automorphism(p):
                raise IntegrityError("right multiplication is not an automorphism")
    return g


def _perm_elements(G: PermGroup) -> np.ndarray:
    return np.array(G.elements(), dtype=np.int32)


def coset_graph(G, A, b) -> Graph:
    """Cos(G, A, b): right cosets Ag, edges {Ag, Abg} for g in G.

    G is a FiniteGroup with A a Subgroup and b an element index, or a
    PermGroup with A a PermGroup (a subgroup of G) and b a permutation.
    Cosets are numbered by their smallest element.
    """
    if isinstance(G, FiniteGroup):
        if not isinstance(A, Subgroup):
            A = Subgroup.generated(G, A)
        b = int(b)
        if b in A:
            raise PreconditionError("b lies in A")
        t = G.table
        label = np.full(G.order, -1, dtype=np.int64)
        count = 0
        for g in range(G.order):
            if label[g] < 0:
                label[t[A.elements, g]] = count
                count += 1
        edges = {(int(label[g]), int(label[t[b, g]])) for g in range(G.order)}
        elems = list(range(G.order))
        act = [t[:, x] for x in G.gens]
    elif isinstance(G, PermGroup):
        b = tuple(int(x) for x in b)
        if b in A:
            raise PreconditionError("b lies in A")
        if b not in G:
            raise DomainError("b is not an element of G")
        elems_arr = _perm_elements(G)
        a_arr = _perm_elements(A)
        barr = np.array(b, dtype=np.int32)
        label_of: dict[bytes, int] = {}

        def coset(g: np.ndarray) -> int:
            # right coset Ag = {a then g}; key is its lexicographically least member
            rows = g[a_arr]
            key = rows[np.lexsort(rows.T[::-1])[0]].tobytes()
            if key not in label_of:
                label_of[key] = len(label_of)
            return label_of[key]

        # number cosets by their least element, which is the order elements() returns
        for g in elems_arr:
            coset(g)
        edges = {(coset(g), coset(g[barr])) for g in elems_arr}
        count = len(label_of)
        label = {g.tobytes(): coset(g) for g in elems_arr}
        elems = [g.tobytes() for g in elems_arr]
        act = [
            {g.tobytes(): np.array(s, dtype=np.int32)[g].tobytes() for g in elems_arr} for s in G.gens
        ]
    else:
        raise DomainError("G must be a FiniteGroup or a PermGroup")
    if any(u == v for u, v in edges):
        raise PreconditionError("coset graph would have loops")
    graph = Graph.from_edges(count, edges)
    if act is not None:
        # right multiplication by generators permutes cosets
        for col in act:
            perm = [0] * count
            for g in elems:
                perm[int(label[g])] = int(label[col[g]])  # Ag -> Ags
            if not graph.is_automorphism(perm):
                raise IntegrityError("right multiplication is not an automorphism")
    return graph


def voltage_cover(base: Graph, k: int, voltages: Mapping[tuple[int, int], int]) -> Graph:
    """Derived graph with vertices (u, g), g in F_2^k, and (u,g) ~ (v, g + w(uv)).

    Vertex (u, g) gets index u * 2^k + g. Edges missing from ``voltages``
    carry the zero vector. The result may be disconnected.
    """
    if k < 0:
        raise DomainError("k must be non-negative")
    size = 1 << k
    volt: dict[tuple[int, int], int] = {}
    for (u, v), w in voltages.items():
        w = int(w)
        if not 0 <= w < size:
            raise DomainError(f"voltage {w} is not a vector of dimension {k}")
        if v not in base.adj[u]:
            raise DomainError(f"({u}, {v}) is not an edge of the base graph")
        key = (min(u, v), max(u, v))
        if volt.get(key, w) != w:
            raise DomainError(f"conflicting voltages on edge {key}")
        volt[key] = w
    edges = []
    for u, v in base.edges():
        w = volt.get((u, v), 0)
        for g in range(size):
            edges.append((u * size + g, v * size + (g ^ w)))
    return Graph.from_edges(base.n * size, edges)


# -- standard graphs ---------------------------------------------------------


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise DomainError("cycles need at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_bipartite_graph(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def prism_graph(n: int) -> Graph:
    """C_n x K_2."""
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges += [(n + i, n + (i + 1) % n) for i in range(n)]
    edges += [(i, n + i) for i in range(n)]
    return Graph.from_edges(2 * n, edges)


def hypercube_graph(d: int) -> Graph:
    n = 1 << d
    return Graph.from_edges(n, [(v, v ^ (1 << i)) for v in range(n) for i in range(d) if v < v ^ (1 << i)])


def tutte_coxeter_edges() -> list[tuple[int, int]]:
    """Incidence graph of the generalized quadrangle of order (2,2).

    Points are the 15 pairs from {0..5} (vertices 0..14), lines are the 15
    perfect matchings of {0..5} (vertices 15..29); a pair lies on a matching
    when it is one of its three pairs.
    """
    duads = list(itertools.combinations(range(6), 2))
    synthemes = []
    for m in itertools.combinations(duads, 3):
        pts = {x for pair in m for x in pair}
        if len(pts) == 6:
            synthemes.append(m)
    idx = {d: i for i, d in enumerate(duads)}
    return [(idx[pair], 15 + j) for j, m in enumerate(synthemes) for pair in m]


@functools.lru_cache(maxsize=None)
def _tutte_coxeter(verify: bool) -> Graph:
    g = Graph.from_edges(30, tutte_coxeter_edges())
    if verify:
        from .predicates import s_arc_transitivity

        if g.num_edges != 45 or g.valency != 3 or g.girth() != 8:
            raise IntegrityError("built-in Tutte-Coxeter graph fails the girth/valency check")
        if g.automorphism_group().order() != 1440:
            raise IntegrityError("built-in Tutte-Coxeter graph has the wrong automorphism group")
        if s_arc_transitivity(g, 6).max_s != 5:
            raise IntegrityError("built-in Tutte-Coxeter graph is not exactly 5-arc-transitive")
    return g


def tutte_coxeter_graph(verify: bool = True) -> Graph:
    """The Tutte 8-cage; verified (girth, |Aut|, max_s) on first use."""
    return _tutte_coxeter(verify)


def permgroup_to_table(G: PermGroup) -> tuple[FiniteGroup, list[tuple[int, ...]]]:
    """Multiplication table of a small permutation group, elements in sorted order."""
    elems = G.elements()
    arr = np.array(elems, dtype=np.int64).reshape(len(elems), G.degree)
    n = len(elems)
    # an element is determined by the images of the base points; encode those
    # images in mixed radix and look products up by binary search
    base = G.base or [0]
    if G.degree ** len(base) >= 1 << 62:
        raise DomainError("base too long for integer keys")
    radix = np.array([G.degree**k for k in range(len(base) - 1, -1, -1)], dtype=np.int64)
    keys = arr[:, base] @ radix
    order = np.argsort(keys)
    sorted_keys = keys[order]
    table = np.empty((n, n), dtype=np.int64)
    for j in range(n):
        prods = arr[j][arr[:, base]]  # images of base points under e_i then e_j
        table[:, j] = order[np.searchsorted(sorted_keys, prods @ radix)]
    index = {e: i for i, e in enumerate(elems)}
    gens = [index[tuple(g)] for g in G.gens]
    return FiniteGroup(table, gens), elems
