"""The two construction pipelines.

grr_lower_pipeline: cubic (more generally d-valent) Cayley graphs of quotients
Q/N of a nilpotent quotient Q of W_d, where N runs over Sym(d)-free
subspaces of a central elementary abelian section H/K.

five_arc_pipeline: regular elementary abelian 2-covers of the Tutte-Coxeter
graph, kept when they are 5-arc-transitive.
"""

from __future__ import annotations

import functools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, IntegrityError, ResourceError
from ..f2linalg import F2Matrix, F2Subspace, enumerate_subspaces, rref
from ..graphs import Graph, cayley_graph, tutte_coxeter_graph, voltage_cover
from ..permgroup import Subgroup, quotient_group, set_preserving_automorphisms
from ..presentations import build_quotient
from ..series import p_series, rr_kernel, section_action_matrices
from .records import CensusRecord, PipelineConfig, dedup_records
from .store import CensusStore

# -- GRR lower-bound pipeline -------------------------------------------------


@dataclass
class _GrrContext:
    quotient: object
    H: Subgroup
    K: Subgroup
    basis: list[int]  # elements of H lifting the coordinate basis of H/K
    movers: list[tuple[tuple[int, ...], F2Matrix]]
    r: int
    h_index: int

    @property
    def log_index(self) -> int:
        """log2 |Q : H|."""
        return (self.quotient.group.order // self.H.order).bit_length() - 1


@functools.lru_cache(maxsize=8)
def _grr_context(d: int, c: int, coset_cap: int, h_index: int | None) -> _GrrContext:
    q = build_quotient(d, c, coset_cap)
    series = p_series(q)
    nontrivial = [i for i in range(1, len(series.p_terms)) if series.p_terms[i].order > 1]
    if not nontrivial:
        raise DomainError("quotient has no nontrivial series term")
    i = nontrivial[-1] if h_index is None else h_index
    if i not in nontrivial:
        raise DomainError(f"P_{i} is trivial or out of range; usable indices are {nontrivial}")
    H = series.p_terms[i]
    K = rr_kernel(q, H)
    mats, basis, _ = section_action_matrices(q, H, K)
    ident = tuple(range(d))
    movers = [(sigma, a) for sigma, a in mats if sigma != ident]
    return _GrrContext(q, H, K, basis, movers, len(basis), i)


def _orbit_rep_and_free(w: F2Subspace, movers) -> tuple[bool, bool]:
    """(free, is the lexicographically least basis in its orbit)."""
    images = [w.image(a) for _, a in movers]
    free = all(im.basis != w.basis for im in images)
    least = all(w.basis <= im.basis for im in images)
    return free, least


def _lift(ctx: _GrrContext, v: int) -> int:
    g = ctx.quotient.group
    e = 0
    for k, b in enumerate(ctx.basis):
        if (v >> (ctx.r - 1 - k)) & 1:
            e = g.mul(e, b)
    return e


def _grr_candidate(ctx: _GrrContext, w: F2Subspace, s: int, cfg_key: dict) -> CensusRecord | None:
    q = ctx.quotient
    g = q.group
    N = Subgroup.generated(g, list(ctx.K.gens) + [_lift(ctx, v) for v in w.basis])
    Qn, proj = quotient_group(g, N)
    S = [int(proj[x]) for x in q.xgens]
    if len(set(S)) != len(S) or 0 in S:
        return None
    if set_preserving_automorphisms(Qn, S).order() != 1:
        return None
    graph = cayley_graph(Qn, S)
    if not graph.is_connected():
        raise IntegrityError("Cayley graph on generating involutions is disconnected")
    prov = dict(cfg_key, s=s, subspace=list(w.basis), h_index=ctx.h_index, cayley=True)
    rec = CensusRecord.from_graph(graph, prov)
    if q.d == 3 and not rec.grr:
        raise IntegrityError(f"trivial Aut(G,S) but not a GRR: subspace {list(w.basis)}")
    return rec


def _grr_chunk(args) -> list[CensusRecord]:
    d, c, coset_cap, h_index, s, lead, cfg_key = args
    ctx = _grr_context(d, c, coset_cap, h_index)
    out = []
    for w in enumerate_subspaces(ctx.r, s, leading_pivot=lead):
        free, least = _orbit_rep_and_free(w, ctx.movers)
        if free and least:
            rec = _grr_candidate(ctx, w, s, cfg_key)
            if rec is not None:
                out.append(rec)
    return out


def achievable_orders(cfg: PipelineConfig) -> list[int]:
    """Exponents m for which the GRR pipeline can target order 2^m."""
    ctx = _grr_context(cfg.d, cfg.c, cfg.coset_cap, cfg.h_index)
    return list(range(ctx.log_index, ctx.log_index + ctx.r + 1))


def grr_lower_pipeline(cfg: PipelineConfig, stats: dict | None = None) -> list[CensusRecord]:
    """Records of Cay(Q/N, images of x_1..x_d) over Sym(d)-free N with |H : N| = 2^s.

    The target order 2^m fixes s = m - log2|Q : H|. Each orbit of Sym(d) on
    subspaces is processed once, through its lexicographically least member.
    """
    ctx = _grr_context(cfg.d, cfg.c, cfg.coset_cap, cfg.h_index)
    if cfg.m is not None:
        s = cfg.m - ctx.log_index
        if not 0 <= s <= ctx.r:
            lo, hi = ctx.log_index, ctx.log_index + ctx.r
            raise DomainError(f"order 2^{cfg.m} is not reachable; achievable exponents are {lo}..{hi}")
        codims = [s]
    else:
        lo, hi = cfg.s_window if cfg.s_window is not None else (0, ctx.r)
        codims = list(range(lo, min(hi, ctx.r) + 1))
    key = {"pipeline": "grr_lower", "d": cfg.d, "c": cfg.c}
    tasks = []
    for s in codims:
        k = ctx.r - s
        leads = list(range(ctx.r)) if k > 0 else [0]
        tasks += [(cfg.d, cfg.c, cfg.coset_cap, cfg.h_index, s, lp, dict(key, m=ctx.log_index + s)) for lp in leads]
    found = _run(tasks, _grr_chunk, cfg.workers)
    out = dedup_records(found)
    if stats is not None:
        stats.update(candidates=len(found), records=len(out), r=ctx.r, log_index=ctx.log_index)
    if cfg.output:
        CensusStore(cfg.output).add(out)
    return out


def _run(tasks, fn, workers: int) -> list:
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(fn, tasks))
    else:
        parts = [fn(t) for t in tasks]
    return [rec for part in parts for rec in part]


# -- five-arc cover pipeline --------------------------------------------------


class CycleSpace:
    """Z_2 cycle space of a connected graph with respect to a BFS spanning tree.

    Coordinates are indexed by cotree edges (column j is cotree edge j);
    the fundamental cycle of cotree edge j is basis vector j.
    """

    def __init__(self, g: Graph):
        if not g.is_connected():
            raise DomainError("cycle space needs a connected graph")
        self.graph = g
        parent = [-1] * g.n
        seen = [False] * g.n
        seen[0] = True
        order = [0]
        for v in order:
            for u in g.adj[v]:
                if not seen[u]:
                    seen[u] = True
                    parent[u] = v
                    order.append(u)
        self.parent = parent
        tree = {(min(u, p), max(u, p)) for u, p in enumerate(parent) if p >= 0}
        self.cotree = [e for e in g.edges() if e not in tree]
        self.index = {e: j for j, e in enumerate(self.cotree)}
        self.dim = len(self.cotree)
        self.cycles = [self._fundamental(e) for e in self.cotree]

    def _root_path(self, v: int) -> list[int]:
        out = []
        while v != -1:
            out.append(v)
            v = self.parent[v]
        return out

    def _fundamental(self, e) -> list[tuple[int, int]]:
        u, v = e
        pu, pv = self._root_path(u), self._root_path(v)
        common = set(pu) & set(pv)
        edges = [e]
        for path in (pu, pv):
            for a, b in zip(path, path[1:]):
                if a in common:
                    break
                edges.append((min(a, b), max(a, b)))
        return edges

    def vector(self, edges) -> int:
        v = 0
        for a, b in edges:
            j = self.index.get((min(a, b), max(a, b)))
            if j is not None:
                v ^= 1 << (self.dim - 1 - j)
        return v

    def action_matrix(self, perm) -> F2Matrix:
        """Matrix of an automorphism on the cycle space (row-vector convention)."""
        rows = [self.vector([(perm[a], perm[b]) for a, b in cyc]) for cyc in self.cycles]
        return F2Matrix(self.dim, self.dim, tuple(rows))

    def voltages(self, functionals, k: int) -> dict[tuple[int, int], int]:
        """Voltage on cotree edge j: bit i is functional i evaluated on cycle j."""
        out = {}
        for j, e in enumerate(self.cotree):
            w = 0
            for i, f in enumerate(functionals):
                if (f >> (self.dim - 1 - j)) & 1:
                    w |= 1 << (k - 1 - i)
            if w:
                out[e] = w
        return out


def _transpose(a: F2Matrix) -> F2Matrix:
    r, c = a.nrows, a.ncols
    rows = []
    for j in range(c):
        v = 0
        for i in range(r):
            if (a.rows[i] >> (c - 1 - j)) & 1:
                v |= 1 << (r - 1 - i)
        rows.append(v)
    return F2Matrix(c, r, tuple(rows))


def _image_table(a: F2Matrix) -> np.ndarray:
    """Images v.a for every v in GF(2)^r, by linearity."""
    r = a.nrows
    out = np.zeros(1 << r, dtype=np.int64)
    idx = np.arange(1 << r)
    for k in range(r):
        bit = 1 << (r - 1 - k)
        out[(idx & bit) != 0] ^= a.rows[k]
    return out


@functools.lru_cache(maxsize=2)
def _tc_dual_action():
    tc = tutte_coxeter_graph()
    cs = CycleSpace(tc)
    gens = tc.automorphism_group().gens
    # functionals f transform as f -> f . M^T
    dual = [_transpose(cs.action_matrix(p)) for p in gens]
    return tc, cs, dual


def functional_orbit_reps(dual: list[F2Matrix], dim: int) -> list[tuple[int, int]]:
    """(least member, orbit size) for every orbit on GF(2)^dim, zero included."""
    tables = [_image_table(a) for a in dual]
    seen = np.zeros(1 << dim, dtype=bool)
    reps = []
    for v in range(1 << dim):
        if seen[v]:
            continue
        seen[v] = True
        orb = [v]
        for x in orb:
            for t in tables:
                y = int(t[x])
                if not seen[y]:
                    seen[y] = True
                    orb.append(y)
        reps.append((v, len(orb)))
    return reps


def invariant_subspaces(dual: list[F2Matrix], dim: int, k: int) -> list[tuple[int, ...]]:
    """All k-dimensional subspaces invariant under every matrix in ``dual``.

    Such a subspace is a union of orbits of size < 2^k, so only small orbits
    are combined.
    """
    if k == 0:
        return [()]
    tables = [_image_table(a) for a in dual]
    small = []
    for v, size in functional_orbit_reps(dual, dim):
        if v and size < (1 << k):
            orb = {v}
            queue = [v]
            for x in queue:
                for t in tables:
                    y = int(t[x])
                    if y not in orb:
                        orb.add(y)
                        queue.append(y)
            small.append(tuple(sorted(orb)))
    found: set[tuple[int, ...]] = set()
    frontier = {()}
    while frontier:
        nxt = set()
        for basis in frontier:
            for orb in small:
                span = rref(list(basis) + list(orb), dim)
                if len(span) > len(basis) and len(span) <= k and span not in found:
                    found.add(span)
                    nxt.add(span)
        frontier = nxt
    return sorted(b for b in found if len(b) == k)


def _cover_record(tc: Graph, cs: CycleSpace, functionals, k: int, stats: dict) -> CensusRecord | None:
    volts = cs.voltages(functionals, k)
    g = voltage_cover(tc, k, volts)
    if not g.is_connected():
        stats["disconnected"] = stats.get("disconnected", 0) + 1
        return None
    prov = {
        "pipeline": "five_arc",
        "k": k,
        "functionals": list(functionals),
        "voltages": [[u, v, w] for (u, v), w in sorted(volts.items())],
        "cayley": False,
    }
    rec = CensusRecord.from_graph(g, prov)
    if rec.valency == 3 and rec.max_s > 5:
        raise IntegrityError("cubic graph beyond Tutte's bound; automorphism computation is wrong")
    if rec.max_s != 5:
        return None
    if rec.aut_order != 48 * rec.order:
        raise IntegrityError(f"5-arc-transitive cover with |Aut| = {rec.aut_order} != 48 n")
    return rec


def five_arc_pipeline(cfg: PipelineConfig, stats: dict | None = None) -> list[CensusRecord]:
    """5-arc-transitive regular covers of the Tutte-Coxeter graph by F_2^k.

    Connected covers correspond to surjections from the cycle space onto
    F_2^k, i.e. to k-dimensional spaces of functionals. For k = 1 every
    orbit of Aut(Tutte-Coxeter) on functionals is tried (zero included, which
    yields the disconnected double cover). For k >= 2 only Aut-invariant
    spaces are tried: exactly the covers to which the whole group lifts.
    """
    if stats is None:
        stats = {}
    tc, cs, dual = _tc_dual_action()
    found = []
    for k in cfg.k_values:
        if tc.n << k > cfg.order_cap:
            raise ResourceError(f"cover order {tc.n << k} exceeds order_cap={cfg.order_cap}")
        if k == 0:
            cands = [()]
        elif k == 1:
            cands = [(v,) for v, _ in functional_orbit_reps(dual, cs.dim)]
        else:
            cands = invariant_subspaces(dual, cs.dim, k)
        stats[f"candidates_k{k}"] = len(cands)
        for fs in cands:
            rec = _cover_record(tc, cs, fs, k, stats)
            if rec is not None:
                found.append(rec)
    out = dedup_records(found)
    stats["records"] = len(out)
    if cfg.output:
        CensusStore(cfg.output).add(out)
    return out
