"""Symmetry predicates: vertex-transitivity, s-arc-transitivity, GRR."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DomainError, PreconditionError
from ..permgroup import Permutation, PermGroup, identity_perm, mul
from .core import Graph

S_MAX_CAP = 8


@dataclass(frozen=True)
class SArcReport:
    """transitive_at[s] says whether Aut acts transitively on s-arcs (s = 0 is vertices)."""

    max_s: int
    transitive_at: tuple[bool, ...]


def is_vertex_transitive(g: Graph) -> bool:
    return g.n <= 1 or g.automorphism_group().is_transitive()


def is_grr(g: Graph) -> bool:
    """Aut(g) is regular on vertices."""
    aut = g.automorphism_group()
    return aut.order() == g.n and aut.is_transitive()


def vertex_stabilizer_order(g: Graph) -> int:
    if not is_vertex_transitive(g):
        raise PreconditionError("graph is not vertex-transitive")
    return g.automorphism_group().order() // max(g.n, 1)


def count_s_arcs(g: Graph, s: int) -> int:
    """Number of s-arcs, by counting non-backtracking walks."""
    if s == 0:
        return g.n
    # cur[(u, v)]: number of arcs of the current length ending with u -> v
    cur = {(u, v): 1 for u in range(g.n) for v in g.adj[u]}
    for _ in range(s - 1):
        nxt: dict[tuple[int, int], int] = {}
        for (u, v), c in cur.items():
            for w in g.adj[v]:
                if w != u:
                    nxt[(v, w)] = nxt.get((v, w), 0) + c
        cur = nxt
    return sum(cur.values())


def _some_s_arc(g: Graph, s: int) -> tuple[int, ...] | None:
    arc = [0]
    while len(arc) <= s:
        v = arc[-1]
        prev = arc[-2] if len(arc) > 1 else -1
        nxt = [u for u in g.adj[v] if u != prev]
        if not nxt:
            return None
        arc.append(nxt[0])
    return tuple(arc)


def _orbit_size(gens: list[Permutation], start: tuple[int, ...], cap: int) -> int:
    seen = {start}
    queue = [start]
    for t in queue:
        for p in gens:
            im = tuple(p[x] for x in t)
            if im not in seen:
                seen.add(im)
                queue.append(im)
                if len(seen) > cap:
                    return len(seen)
    return len(seen)


def s_arc_transitivity(g: Graph, s_max: int) -> SArcReport:
    """Decide s-arc-transitivity for s = 0..s_max by comparing one orbit with the arc count.

    A graph with no s-arcs is reported as not s-arc-transitive. Checking stops
    at the first failure, so transitive_at is always downward-closed.
    """
    if not 0 <= s_max <= S_MAX_CAP:
        raise DomainError(f"s_max must lie in 0..{S_MAX_CAP}")
    if not g.is_connected():
        raise PreconditionError("s-arc-transitivity needs a connected graph")
    aut = g.automorphism_group()
    order = aut.order()
    gens = aut.gens
    flags: list[bool] = []
    for s in range(s_max + 1):
        total = count_s_arcs(g, s)
        start = _some_s_arc(g, s)
        ok = start is not None and total <= order and _orbit_size(gens, start, total) == total
        flags.append(ok)
        if not ok:
            break
    flags += [False] * (s_max + 1 - len(flags))
    max_s = -1
    while max_s + 1 <= s_max and flags[max_s + 1]:
        max_s += 1
    return SArcReport(max_s, tuple(flags))


def transitive_subgroup_gens(g: Graph, A: PermGroup, v: int = 0) -> list[Permutation]:
    """Elements g_i of A sending v to its neighbours v_i; <g_i> is checked to be transitive."""
    if A.degree != g.n:
        raise DomainError("group degree differs from the graph order")
    if not A.is_transitive():
        raise PreconditionError("A is not vertex-transitive")
    # transversal from v by breadth-first search over the generators
    reach: dict[int, Permutation] = {v: identity_perm(g.n)}
    queue = [v]
    for x in queue:
        for p in A.gens:
            y = p[x]
            if y not in reach:
                reach[y] = mul(reach[x], p)
                queue.append(y)
    out = [reach[u] for u in g.adj[v]]
    for p in out:
        if p not in A or not g.is_automorphism(p):
            raise PreconditionError("A does not act by automorphisms of the graph")
    if g.n > 1 and not PermGroup(g.n, out).is_transitive():
        raise PreconditionError("neighbour transversal does not generate a transitive group; is the graph connected?")
    return out
