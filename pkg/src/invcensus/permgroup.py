"""Finite groups as multiplication tables, and permutation groups.

Permutations are tuples of images; products act on the right, so
``mul(p, q)`` applies ``p`` first, then ``q``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ParseError, PreconditionError

MAX_TABLE_ORDER = 4096

Permutation = tuple


# -- plain permutations ------------------------------------------------------


def identity_perm(n: int) -> Permutation:
    return tuple(range(n))


def mul(p: Sequence[int], q: Sequence[int]) -> Permutation:
    return tuple(q[i] for i in p)


def inverse(p: Sequence[int]) -> Permutation:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def check_perm(p: Sequence[int]) -> None:
    if sorted(p) != list(range(len(p))):
        raise DomainError("not a permutation")


def perm_from_cycles(n: int, cycles: Iterable[Sequence[int]]) -> Permutation:
    img = list(range(n))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            img[a] = b
    return tuple(img)


# -- multiplication-table groups ---------------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A group of order ``n`` given by its table; element 0 is the identity."""

    table: np.ndarray
    gens: tuple[int, ...]
    labels: tuple[str, ...] | None = None
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int32)
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "gens", tuple(int(g) for g in self.gens))
        n = t.shape[0]
        if t.ndim != 2 or t.shape != (n, n) or n == 0:
            raise DomainError("table must be a non-empty square array")
        if n > MAX_TABLE_ORDER:
            raise DomainError(f"tables are capped at order {MAX_TABLE_ORDER}")
        ar = np.arange(n)
        if not (np.array_equal(t[0], ar) and np.array_equal(t[:, 0], ar)):
            raise DomainError("element 0 must be a two-sided identity")
        srt = np.sort(t, axis=1)
        if not (srt == ar).all() or not (np.sort(t, axis=0) == ar[:, None]).all():
            raise DomainError("table is not a Latin square")
        # Light's test: associativity on a generating set implies it everywhere
        for g in self.gens:
            if not np.array_equal(t[t[:, g]], t[:, t[g]]):
                raise DomainError("table is not associative")
        if any(not 0 <= g < n for g in self.gens):
            raise DomainError("generator index out of range")
        if len(self.closure(self.gens)) != n:
            raise DomainError("gens do not generate the group")

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self) -> int:
        return self.order

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @property
    def inv(self) -> np.ndarray:
        if "inv" not in self._cache:
            rows, cols = np.nonzero(self.table == 0)
            out = np.empty(self.order, dtype=np.int32)
            out[rows] = cols
            self._cache["inv"] = out
        return self._cache["inv"]

    @property
    def element_orders(self) -> np.ndarray:
        if "orders" not in self._cache:
            n = self.order
            ords = np.zeros(n, dtype=np.int64)
            cur = np.arange(n)
            k = 1
            while (ords == 0).any():
                hit = (cur == 0) & (ords == 0)
                ords[hit] = k
                cur = self.table[cur, np.arange(n)]
                k += 1
            self._cache["orders"] = ords
        return self._cache["orders"]

    def element_order(self, a: int) -> int:
        return int(self.element_orders[a])

    def involutions(self) -> list[int]:
        return [int(a) for a in np.nonzero(self.element_orders == 2)[0]]

    def power(self, a: int, k: int) -> int:
        out = 0
        for _ in range(k):
            out = int(self.table[out, a])
        return out

    def commutator(self, a, b):
        """[a, b] = a^-1 b^-1 a b, vectorised over arrays."""
        t, inv = self.table, self.inv
        return t[t[t[inv[a], inv[b]], a], b]

    def conjugate(self, a, g):
        """a^g = g^-1 a g."""
        t = self.table
        return t[t[self.inv[g], a], g]

    def closure(self, gens: Iterable[int]) -> np.ndarray:
        """Sorted elements of the subgroup generated by ``gens``."""
        gens = np.unique(np.asarray(list(gens), dtype=np.int64))
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        frontier = np.array([0])
        while frontier.size:
            nxt = self.table[np.ix_(frontier, gens)].ravel() if gens.size else np.array([], dtype=np.int64)
            nxt = np.unique(nxt[~mask[nxt]])
            mask[nxt] = True
            frontier = nxt
        return np.nonzero(mask)[0]

    def evaluate_word(self, word: Sequence[int], images: Sequence[int]) -> int:
        """Evaluate a signed-letter word (letters 1-based, negative = inverse)."""
        out = 0
        for letter in word:
            g = images[abs(letter) - 1]
            if letter < 0:
                g = int(self.inv[g])
            out = int(self.table[out, g])
        return out

    def center(self) -> np.ndarray:
        t = self.table
        mask = np.ones(self.order, dtype=bool)
        for g in self.gens:
            mask &= t[:, g] == t[g, :]
        return np.nonzero(mask)[0]

    def derived_length(self) -> int:
        cur = Subgroup.whole(self)
        k = 0
        while cur.order > 1:
            nxt = commutator_subgroup(self, cur, cur)
            if nxt.order == cur.order:
                return -1  # not solvable
            cur = nxt
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    # text format ---------------------------------------------------------

    def to_text(self) -> str:
        lines = [str(self.order)]
        lines += [" ".join(map(str, row)) for row in self.table.tolist()]
        lines.append("gens: " + " ".join(map(str, self.gens)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> FiniteGroup:
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        try:
            n = int(lines[0])
        except (ValueError, IndexError):
            raise ParseError("expected order on first line", 1) from None
        rows = []
        for lineno in range(2, n + 2):
            try:
                row = [int(x) for x in lines[lineno - 1].split()]
            except (ValueError, IndexError):
                raise ParseError("malformed table row", lineno) from None
            if len(row) != n:
                raise ParseError(f"expected {n} entries", lineno)
            rows.append(row)
        if len(lines) < n + 2 or not lines[n + 1].startswith("gens:"):
            raise ParseError("missing 'gens:' line", n + 2)
        gens = tuple(int(x) for x in lines[n + 1][5:].split())
        return cls(np.array(rows), gens)


def cyclic_group(n: int) -> FiniteGroup:
    a = np.arange(n)
    return FiniteGroup((a[:, None] + a[None, :]) % n, (1 % n,) if n > 1 else (), name=f"C{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """Element (a, b) has index a * |h| + b."""
    m = h.order
    ta, tb = g.table, h.table
    n = g.order * m
    idx = np.arange(n)
    a, b = idx // m, idx % m
    table = ta[a[:, None], a[None, :]] * m + tb[b[:, None], b[None, :]]
    gens = [x * m for x in g.gens] + list(h.gens)
    return FiniteGroup(table, gens, name=f"{g.name}x{h.name}")


def elementary_abelian_group(k: int) -> FiniteGroup:
    a = np.arange(1 << k)
    return FiniteGroup(a[:, None] ^ a[None, :], tuple(1 << i for i in range(k)), name=f"C2^{k}")


def dihedral_group(n: int) -> FiniteGroup:
    """Dihedral group of order 2n: r^i s^e has index i + n*e."""
    idx = np.arange(2 * n)
    i, e = idx % n, idx // n
    # (r^i s^e)(r^j s^f) = r^(i + (-1)^e j) s^(e+f)
    sign = np.where(e == 0, 1, -1)
    ni = (i[:, None] + sign[:, None] * i[None, :]) % n
    ne = (e[:, None] + e[None, :]) % 2
    gens = (1 % n, n) if n > 1 else (n,)
    return FiniteGroup(ni + n * ne, gens, name=f"D{2 * n}")


def symmetric_group_table(d: int) -> tuple[FiniteGroup, list[Permutation]]:
    """Sym(d) as a table; elements listed in lexicographic order (identity first)."""
    perms = list(itertools.permutations(range(d)))
    index = {p: i for i, p in enumerate(perms)}
    table = np.array([[index[mul(p, q)] for q in perms] for p in perms])
    gens = []
    if d >= 2:
        gens.append(index[perm_from_cycles(d, [[0, 1]])])
        gens.append(index[perm_from_cycles(d, [list(range(d))])])
    return FiniteGroup(table, gens, name=f"S{d}"), perms


# -- subgroups of table groups ----------------------------------------------


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    elements: np.ndarray
    gens: tuple[int, ...] = ()

    @classmethod
    def generated(cls, group: FiniteGroup, gens: Iterable[int]) -> Subgroup:
        gens = tuple(sorted({int(g) for g in gens if int(g) != 0}))
        return cls(group, group.closure(gens), gens)

    @classmethod
    def whole(cls, group: FiniteGroup) -> Subgroup:
        return cls(group, np.arange(group.order), group.gens)

    @classmethod
    def trivial(cls, group: FiniteGroup) -> Subgroup:
        return cls(group, np.array([0]), ())

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[self.elements] = True
        return m

    def __contains__(self, a) -> bool:
        return bool(self.mask[int(a)])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and other.parent is self.parent
            and np.array_equal(self.elements, other.elements)
        )

    def __hash__(self):
        return hash(self.elements.tobytes())

    def issubset(self, other: Subgroup) -> bool:
        return bool(other.mask[self.elements].all())

    def is_normal(self) -> bool:
        m = self.mask
        return all(m[self.parent.conjugate(self.elements, g)].all() for g in self.parent.gens)

    def is_closed(self) -> bool:
        if 0 not in self:
            return False
        t = self.parent.table
        return bool(self.mask[t[np.ix_(self.elements, self.elements)]].all())


def normal_closure(group: FiniteGroup, elems: Iterable[int]) -> Subgroup:
    cur = Subgroup.generated(group, elems)
    while True:
        conj = [group.conjugate(cur.elements, g) for g in group.gens]
        extra = np.unique(np.concatenate(conj)) if conj else np.array([], dtype=np.int64)
        extra = extra[~cur.mask[extra]]
        if extra.size == 0:
            return cur
        cur = Subgroup.generated(group, list(cur.gens) + extra.tolist())


def commutator_subgroup(group: FiniteGroup, h: Subgroup, k: Subgroup) -> Subgroup:
    """[H, K] for H, K normal in the group."""
    kg = np.array(k.gens if k.gens else [0])
    comms = group.commutator(h.elements[:, None], kg[None, :]).ravel()
    return normal_closure(group, np.unique(comms).tolist())


def squares_subgroup(group: FiniteGroup, h: Subgroup) -> Subgroup:
    sq = group.table[h.elements, h.elements]
    return Subgroup.generated(group, np.unique(sq).tolist())


def product_subgroup(group: FiniteGroup, a: Subgroup, b: Subgroup) -> Subgroup:
    return Subgroup.generated(group, list(a.gens) + list(b.gens))


def quotient_group(group: FiniteGroup, n: Subgroup) -> tuple[FiniteGroup, np.ndarray]:
    """G/N for normal N; returns the quotient and the projection array."""
    t = group.table
    labels = t[:, n.elements].min(axis=1)
    reps = np.unique(labels)  # 0 is first since min of N-coset of identity is 0
    relabel = np.full(group.order, -1, dtype=np.int64)
    relabel[reps] = np.arange(len(reps))
    proj = relabel[labels]
    qt = proj[t[np.ix_(reps, reps)]]
    gens = sorted({int(proj[g]) for g in group.gens} - {0})
    return FiniteGroup(qt, gens), proj


def section_rank(group: FiniteGroup, upper: Subgroup, lower: Subgroup) -> int:
    """F2-dimension of upper/lower, which must be an elementary abelian 2-section."""
    if not lower.issubset(upper):
        raise PreconditionError("lower is not contained in upper")
    low = lower.mask
    t = group.table
    up = upper.elements
    if not low[t[up, up]].all():
        raise PreconditionError("section has an element of order > 2")
    if not low[group.commutator(up[:, None], up[None, :])].all():
        raise PreconditionError("section is not abelian")
    ratio = upper.order // lower.order
    k = ratio.bit_length() - 1
    if 1 << k != ratio:
        raise PreconditionError("section order is not a power of 2")
    return k


# -- permutation groups ------------------------------------------------------


class PermGroup:
    """Permutation group with a deterministic Schreier-Sims stabilizer chain."""

    def __init__(self, degree: int, gens: Iterable[Sequence[int]] = ()):
        self.degree = degree
        gens = [tuple(int(x) for x in g) for g in gens]
        for g in gens:
            if len(g) != degree:
                raise DomainError("generator degree mismatch")
            check_perm(g)
        ident = identity_perm(degree)
        uniq = []
        for g in gens:
            if g != ident and g not in uniq:
                uniq.append(g)
        self.gens: list[Permutation] = uniq
        self._build_chain()

    # chain ---------------------------------------------------------------

    def _build_chain(self) -> None:
        n = self.degree
        self._id = np.arange(n, dtype=np.int32)
        self.base: list[int] = []
        self._strong: list[list[np.ndarray]] = []
        self._trans: list[dict[int, tuple[np.ndarray, np.ndarray]]] = []
        arrs = [np.array(g, dtype=np.int32) for g in self.gens]
        for g in arrs:
            if all(g[b] == b for b in self.base):
                moved = int(np.nonzero(g != self._id)[0][0])
                self._add_level(moved)
        for lvl in range(len(self.base)):
            self._strong[lvl] = [g for g in arrs if all(g[b] == b for b in self.base[:lvl])]
            self._orbit(lvl)
        i = len(self.base) - 1
        while i >= 0:
            grew = self._check_level(i)
            i = grew if grew is not None else i - 1

    def _add_level(self, point: int) -> None:
        self.base.append(point)
        self._strong.append([])
        self._trans.append({})

    def _orbit(self, lvl: int) -> None:
        b = self.base[lvl]
        trans = {b: (self._id, self._id)}
        queue = [b]
        for beta in queue:
            u = trans[beta][0]
            for s in self._strong[lvl]:
                gamma = int(s[beta])
                if gamma not in trans:
                    w = s[u]
                    winv = np.empty_like(w)
                    winv[w] = self._id
                    trans[gamma] = (w, winv)
                    queue.append(gamma)
        self._trans[lvl] = trans

    def _strip(self, g: np.ndarray, start: int) -> tuple[np.ndarray, int]:
        for lvl in range(start, len(self.base)):
            beta = int(g[self.base[lvl]])
            entry = self._trans[lvl].get(beta)
            if entry is None:
                return g, lvl
            g = entry[1][g]
        return g, len(self.base)

    def _check_level(self, i: int) -> int | None:
        """Sift all Schreier generators at level i; on failure extend and return the level to resume."""
        trans = self._trans[i]
        for beta, (u, _) in list(trans.items()):
            for s in list(self._strong[i]):
                gamma = int(s[beta])
                sg = trans[gamma][1][s[u]]
                h, j = self._strip(sg, i + 1)
                if j < len(self.base) or not np.array_equal(h, self._id):
                    if j == len(self.base):
                        moved = int(np.nonzero(h != self._id)[0][0])
                        self._add_level(moved)
                    for lvl in range(i + 1, j + 1):
                        self._strong[lvl].append(h)
                        self._orbit(lvl)
                    return j
        return None

    # queries -------------------------------------------------------------

    def order(self) -> int:
        out = 1
        for t in self._trans:
            out *= len(t)
        return out

    def __contains__(self, g: Sequence[int]) -> bool:
        if len(g) != self.degree:
            return False
        h, j = self._strip(np.asarray(g, dtype=np.int32), 0)
        return j == len(self.base) and bool(np.array_equal(h, self._id))

    def transversal(self, level: int) -> dict[int, Permutation]:
        return {b: tuple(int(x) for x in u) for b, (u, _) in self._trans[level].items()}

    def strong_generators(self) -> list[Permutation]:
        seen = []
        for lvl in self._strong:
            for g in lvl:
                t = tuple(int(x) for x in g)
                if t not in seen:
                    seen.append(t)
        return seen

    def elements(self) -> list[Permutation]:
        """All elements; use only for small groups."""
        cur = [self._id]
        for lvl in reversed(range(len(self.base))):
            us = [u for u, _ in self._trans[lvl].values()]
            cur = [u[g] for g in cur for u in us]
        return sorted(tuple(int(x) for x in g) for g in cur)

    def orbit(self, point: int) -> set[int]:
        return orbit(self, point)

    def orbits(self) -> list[list[int]]:
        seen: set[int] = set()
        out = []
        for p in range(self.degree):
            if p not in seen:
                o = sorted(orbit(self, p))
                seen.update(o)
                out.append(o)
        return out

    def is_transitive(self) -> bool:
        return self.degree == 0 or len(orbit(self, 0)) == self.degree

    def stabilizer(self, point: int) -> PermGroup:
        """Point stabilizer via Schreier generators of the orbit."""
        n = self.degree
        trans = {point: identity_perm(n)}
        queue = [point]
        for beta in queue:
            for s in self.gens:
                gamma = s[beta]
                if gamma not in trans:
                    trans[gamma] = mul(trans[beta], s)
                    queue.append(gamma)
        sgens = []
        for beta, u in trans.items():
            for s in self.gens:
                sg = mul(mul(u, s), inverse(trans[s[beta]]))
                if sg != identity_perm(n) and sg not in sgens:
                    sgens.append(sg)
        return PermGroup(n, sgens)

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, order={self.order()})"


def stabilizer_chain(gens: Sequence[Sequence[int]], degree: int | None = None) -> PermGroup:
    if degree is None:
        if not gens:
            degree = 0
        else:
            degree = len(gens[0])
    if any(len(g) != degree for g in gens):
        raise DomainError("generators have different degrees")
    return PermGroup(degree, gens)


def orbit(group: PermGroup, point: int) -> set[int]:
    if not 0 <= point < group.degree:
        raise DomainError("point out of range")
    seen = {point}
    queue = [point]
    for p in queue:
        for g in group.gens:
            q = g[p]
            if q not in seen:
                seen.add(q)
                queue.append(q)
    return seen


def is_regular(group: PermGroup) -> bool:
    return group.is_transitive() and group.order() == group.degree


def regular_representation(group: FiniteGroup) -> PermGroup:
    """Right-regular action x -> x * g."""
    gens = [tuple(int(x) for x in group.table[:, g]) for g in group.gens]
    return PermGroup(group.order, gens)


# -- automorphisms and isomorphisms of table groups --------------------------


def _extend_hom(src: FiniteGroup, dst: FiniteGroup, gens: Sequence[int], images: Sequence[int]):
    """Extend gens -> images to a homomorphism on <gens>.

    Returns (domain elements, image array indexed by src element, -1 outside)
    or None when the assignment is inconsistent or not injective.
    """
    phi = np.full(src.order, -1, dtype=np.int64)
    phi[0] = 0
    ts, td = src.table, dst.table
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            for g, h in zip(gens, images):
                b = int(ts[a, g])
                v = int(td[phi[a], h])
                if phi[b] < 0:
                    phi[b] = v
                    nxt.append(b)
                elif phi[b] != v:
                    return None
        frontier = nxt
    dom = np.nonzero(phi >= 0)[0]
    img = phi[dom]
    if len(np.unique(img)) != len(dom):
        return None
    return dom, phi


def set_preserving_automorphisms(group: FiniteGroup, S: Sequence[int]) -> PermGroup:
    """Automorphisms of the group mapping S onto itself, acting on positions of S."""
    S = sorted(int(s) for s in S)
    if 0 in S:
        raise PreconditionError("S must not contain the identity")
    if len(group.closure(S)) != group.order:
        raise PreconditionError("S does not generate the group")
    ords = group.element_orders
    k = len(S)
    found: list[Permutation] = []

    def backtrack(assign: list[int], used: set[int]):
        i = len(assign)
        if i == k:
            res = _extend_hom(group, group, S, [S[j] for j in assign])
            if res is not None and len(res[0]) == group.order:
                found.append(tuple(assign))
            return
        for j in range(k):
            if j not in used and ords[S[j]] == ords[S[i]]:
                # a partial map must already extend consistently
                if _extend_hom(group, group, S[: i + 1], [S[x] for x in assign + [j]]) is None:
                    continue
                backtrack(assign + [j], used | {j})

    backtrack([], set())
    return PermGroup(k, found)


def small_generating_set(group: FiniteGroup) -> list[int]:
    """Greedy generating set, adding elements of largest order first."""
    ords = group.element_orders
    cand = sorted(range(1, group.order), key=lambda a: (-ords[a], a))
    gens: list[int] = []
    size = 1
    for a in cand:
        if size == group.order:
            break
        new = len(group.closure(gens + [a]))
        if new > size:
            gens.append(a)
            size = new
    return gens


def fingerprint(group: FiniteGroup) -> tuple:
    ords = group.element_orders
    return (
        group.order,
        tuple(sorted(np.bincount(ords).tolist())),
        tuple(np.bincount(ords).tolist()),
        len(group.center()),
        group.derived_length(),
    )


def are_isomorphic(g1: FiniteGroup, g2: FiniteGroup) -> bool:
    if g1.order != g2.order:
        return False
    if fingerprint(g1) != fingerprint(g2):
        return False
    gens = small_generating_set(g1)
    o1, o2 = g1.element_orders, g2.element_orders
    cands = [[b for b in range(g2.order) if o2[b] == o1[a]] for a in gens]

    def backtrack(images: list[int]) -> bool:
        i = len(images)
        if i == len(gens):
            res = _extend_hom(g1, g2, gens, images)
            return res is not None and len(res[0]) == g1.order
        for b in cands[i]:
            trial = images + [b]
            if _extend_hom(g1, g2, gens[: i + 1], trial) is None:
                continue
            if backtrack(trial):
                return True
        return False

    return backtrack([])
