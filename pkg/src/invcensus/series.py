"""Lower central series, the refined subgroups M_{i,j}, rr-ranks and the
Sym(d) action inside a finite quotient of W_d."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PreconditionError
from .f2linalg import F2Matrix
from .permgroup import (
    FiniteGroup,
    Subgroup,
    commutator_subgroup,
    product_subgroup,
    section_rank,
    squares_subgroup,
)
from .presentations import MarkedQuotient

__all__ = [
    "Subgroup",
    "SeriesData",
    "p_series",
    "m_subgroup",
    "rr_rank",
    "rr_kernel",
    "symd_action",
    "faithfulness_check",
    "section_action_matrices",
    "section_is_faithful",
    "stabilising_permutations",
    "rank_table",
]


@dataclass
class SeriesData:
    """p_terms[i] is P_i for i >= 1 (index 0 holds the whole quotient);
    gamma[i - 1] is gamma_i."""

    quotient: MarkedQuotient
    p_terms: list[Subgroup]
    gamma: list[Subgroup]
    m_terms: dict[tuple[int, int], Subgroup] = field(default_factory=dict)
    ranks: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def factor_ranks(self) -> list[int]:
        """rk(gamma_i / gamma_{i+1}) for i = 1, 2, ..."""
        g = self.quotient.group
        return [section_rank(g, a, b) for a, b in zip(self.gamma, self.gamma[1:])]

    def p(self, i: int) -> Subgroup:
        if i < len(self.p_terms):
            return self.p_terms[i]
        return Subgroup.trivial(self.quotient.group)


def p_series(q: MarkedQuotient) -> SeriesData:
    """gamma_i of the quotient down to 1; P_1 = <y_i> and P_i = gamma_i for i >= 2."""
    g = q.group
    whole = Subgroup.whole(g)
    gamma = [whole]
    while gamma[-1].order > 1:
        nxt = commutator_subgroup(g, gamma[-1], whole)
        if nxt.order == gamma[-1].order:
            raise DomainError("quotient is not nilpotent")
        gamma.append(nxt)
    for a, b in zip(gamma, gamma[1:]):
        section_rank(g, a, b)  # raises unless elementary abelian
    p1 = Subgroup.generated(g, q.ygens)
    p_terms = [whole, p1] + gamma[1:]
    section_rank(g, p1, p_terms[2] if len(p_terms) > 2 else Subgroup.trivial(g))
    return SeriesData(q, p_terms, gamma)


def _power_commutator_elements(q: MarkedQuotient, length: int, power: int) -> set[int]:
    g = q.group
    out = set()
    for tup in itertools.product(q.ygens, repeat=length):
        x = tup[0]
        for a in tup[1:]:
            x = int(g.commutator(x, a))
        out.add(g.power(x, power))
    return out


def m_subgroup(q: MarkedQuotient, i: int, j: int, series: SeriesData | None = None) -> Subgroup:
    """<P_{i+1}, [a_1, ..., a_{i-s}]^(2^s) : a_k in ygens, j <= s <= i-1>."""
    if i < 1 or not 0 <= j <= i:
        raise DomainError("need i >= 1 and 0 <= j <= i")
    if series is None:
        series = p_series(q)
    if series.m_terms.get((i, j)) is not None:
        return series.m_terms[(i, j)]
    g = q.group
    gens = set(series.p(i + 1).gens)
    for s in range(j, i):
        gens |= _power_commutator_elements(q, i - s, 2 ** s)
    sub = Subgroup.generated(g, gens)
    series.m_terms[(i, j)] = sub
    return sub


def rr_kernel(q: MarkedQuotient, h: Subgroup) -> Subgroup:
    """[H, Q] H^2."""
    if not h.is_normal():
        raise PreconditionError("H must be normal in the quotient")
    g = q.group
    return product_subgroup(g, commutator_subgroup(g, h, Subgroup.whole(g)), squares_subgroup(g, h))


def rr_rank(q: MarkedQuotient, h: Subgroup) -> int:
    return section_rank(q.group, h, rr_kernel(q, h))


def symd_action(q: MarkedQuotient) -> list[tuple[tuple[int, ...], np.ndarray]]:
    """(sigma, automorphism) for every sigma in Sym(d), sigma in lexicographic order.

    The automorphism sends xgens[i] to xgens[sigma[i]] and is returned as an
    image array over all elements; each map is verified against the table.
    """
    g = q.group
    key = ("symd", q.xgens)
    if key in g._cache:
        return g._cache[key]
    t = g.table
    out = []
    for sigma in itertools.permutations(range(q.d)):
        images = [q.xgens[sigma[i]] for i in range(q.d)]
        phi = np.full(g.order, -1, dtype=np.int64)
        phi[0] = 0
        frontier = [0]
        while frontier:
            nxt = []
            for a in frontier:
                for x, y in zip(q.xgens, images):
                    b = int(t[a, x])
                    v = int(t[phi[a], y])
                    if phi[b] < 0:
                        phi[b] = v
                        nxt.append(b)
                    elif phi[b] != v:
                        raise RuntimeError("Sym(d) map is not well defined on this quotient")
            frontier = nxt
        if len(np.unique(phi)) != g.order or not np.array_equal(phi[t], t[phi[:, None], phi[None, :]]):
            raise RuntimeError("Sym(d) map is not an automorphism of this quotient")
        out.append((sigma, phi))
    g._cache[key] = out
    return out


def _coordinates(g: FiniteGroup, upper: Subgroup, lower: Subgroup):
    """Identify upper/lower with GF(2)^r: returns (basis elements, coord array).

    coord[a] is the vector of element a of ``upper`` (-1 elsewhere); basis
    element k gets the bit for column k.
    """
    r = section_rank(g, upper, lower)
    coord = np.full(g.order, -1, dtype=np.int64)
    coord[lower.elements] = 0
    basis: list[int] = []
    for a in upper.elements:
        if coord[a] >= 0:
            continue
        k = len(basis)
        basis.append(int(a))
        bit = 1 << (r - 1 - k)
        known = np.nonzero(coord >= 0)[0]
        prods = g.table[known, a]
        coord[prods] = coord[known] ^ bit
    return basis, coord, r


def section_action_matrices(q: MarkedQuotient, upper: Subgroup, lower: Subgroup, actions=None):
    """Matrices of the Sym(d) automorphisms on upper/lower (row-vector convention)."""
    g = q.group
    basis, coord, r = _coordinates(g, upper, lower)
    if actions is None:
        actions = symd_action(q)
    mats = []
    for sigma, phi in actions:
        imgs = coord[phi[upper.elements]]
        if (imgs < 0).any() or not (coord[phi[lower.elements]] == 0).all():
            raise PreconditionError(f"section is not invariant under sigma={sigma}")
        mats.append((sigma, F2Matrix(r, r, tuple(int(coord[phi[b]]) for b in basis))))
    return mats, basis, coord


def _stabilises(phi: np.ndarray, sub: Subgroup) -> bool:
    return bool(sub.mask[phi[sub.elements]].all())


def faithfulness_check(q: MarkedQuotient, i: int, series: SeriesData | None = None) -> bool:
    """Whether Sym(d) acts faithfully on M_{i,i-2} / M_{i,i}."""
    if i < 2:
        raise DomainError("need i >= 2")
    if series is None:
        series = p_series(q)
    upper = m_subgroup(q, i, i - 2, series)
    lower = m_subgroup(q, i, i, series)
    if upper.order == lower.order:
        raise DomainError(f"degenerate section M_{{{i},{i - 2}}} = M_{{{i},{i}}}")
    return section_is_faithful(q, upper, lower)


def section_is_faithful(q: MarkedQuotient, upper: Subgroup, lower: Subgroup) -> bool:
    g = q.group
    low = lower.mask
    for sigma, phi in symd_action(q):
        if sigma == tuple(range(q.d)):
            continue
        if not (_stabilises(phi, upper) and _stabilises(phi, lower)):
            raise PreconditionError(f"section is not Sym(d)-invariant (sigma={sigma})")
        # sigma acts trivially iff phi(a) a^-1 lies in lower for every a in upper
        moved = g.table[phi[upper.elements], g.inv[upper.elements]]
        if low[moved].all():
            return False
    return True


def stabilising_permutations(q: MarkedQuotient, sub: Subgroup) -> list[tuple[int, ...]]:
    return [sigma for sigma, phi in symd_action(q) if _stabilises(phi, sub)]


def rank_table(q: MarkedQuotient, series: SeriesData | None = None) -> dict:
    """Summary of factor ranks and M-section ranks, JSON-friendly."""
    if series is None:
        series = p_series(q)
    g = q.group
    out = {"order": g.order, "gamma_factor_ranks": series.factor_ranks, "m_section_ranks": {}}
    for i in range(1, q.c + 1):
        for j in range(i):
            a = m_subgroup(q, i, j, series)
            b = m_subgroup(q, i, j + 1, series)
            rk = section_rank(g, a, b)
            series.ranks[(i, j)] = rk
            out["m_section_ranks"][f"{i},{j}"] = rk
    return out
