"""Finite presentations, HLT coset enumeration, and class-c quotients of W_d.

Words are tuples of signed letters: generator ``i`` (0-based) is ``i + 1`` and
its inverse is ``-(i + 1)``.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, ParseError, ResourceError
from .permgroup import MAX_TABLE_ORDER, FiniteGroup

DEFAULT_COSET_CAP = 1 << 20

Word = tuple[int, ...]


def free_reduce(word: Sequence[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def commutator(a: Sequence[int], b: Sequence[int]) -> Word:
    """[a, b] = a^-1 b^-1 a b."""
    return free_reduce(invert(a) + invert(b) + tuple(a) + tuple(b))


def left_normed_commutator(words: Sequence[Sequence[int]]) -> Word:
    """[w1, ..., wk] = [[w1, ..., w(k-1)], wk]; a single word is itself."""
    out = tuple(words[0])
    for w in words[1:]:
        out = commutator(out, w)
    return out


@dataclass(frozen=True)
class Presentation:
    ngens: int
    relators: tuple[Word, ...]

    def __post_init__(self):
        rels = tuple(tuple(int(x) for x in w) for w in self.relators)
        object.__setattr__(self, "relators", rels)
        for w in rels:
            if not w:
                raise DomainError("relators must be non-empty")
            if any(x == 0 or abs(x) > self.ngens for x in w):
                raise DomainError("generator index out of range")

    def to_text(self) -> str:
        lines = [f"gens {self.ngens}"]
        lines += [word_to_letters(w) for w in self.relators]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Presentation:
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("#")]
        if not lines or not lines[0].startswith("gens"):
            raise ParseError("expected 'gens d' header", 1)
        try:
            ngens = int(lines[0].split()[1])
        except (IndexError, ValueError):
            raise ParseError("expected 'gens d' header", 1) from None
        rels = []
        for lineno, ln in enumerate(lines[1:], start=2):
            try:
                rels.append(letters_to_word(ln, ngens))
            except DomainError as exc:
                raise ParseError(str(exc), lineno) from None
        return cls(ngens, tuple(rels))


def word_to_letters(word: Sequence[int]) -> str:
    return "".join(
        string.ascii_lowercase[x - 1] if x > 0 else string.ascii_uppercase[-x - 1] for x in word
    )


def letters_to_word(text: str, ngens: int) -> Word:
    out = []
    for ch in text:
        if ch.islower():
            x = ord(ch) - ord("a") + 1
        elif ch.isupper():
            x = -(ord(ch) - ord("A") + 1)
        else:
            raise DomainError(f"unexpected character {ch!r}")
        if abs(x) > ngens:
            raise DomainError(f"letter {ch!r} beyond {ngens} generators")
        out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class CosetTable:
    """rows[c][2*i] = c * g_i and rows[c][2*i + 1] = c * g_i^-1."""

    ngens: int
    rows: tuple[tuple[int, ...], ...]
    complete: bool = True

    @property
    def index(self) -> int:
        return len(self.rows)

    def act(self, coset: int, word: Sequence[int]) -> int:
        for x in word:
            coset = self.rows[coset][2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1]
        return coset

    def generator_permutations(self) -> list[np.ndarray]:
        arr = np.array(self.rows, dtype=np.int64).reshape(self.index, 2 * self.ngens)
        return [arr[:, 2 * i] for i in range(self.ngens)]

    def satisfies(self, relators: Sequence[Sequence[int]]) -> bool:
        return all(self.act(c, w) == c for c in range(self.index) for w in relators)


def todd_coxeter(
    pres: Presentation,
    subgens: Sequence[Sequence[int]] = (),
    coset_cap: int = DEFAULT_COSET_CAP,
) -> CosetTable:
    """HLT coset enumeration with lookahead when the cap is reached."""
    if coset_cap < 1:
        raise DomainError("coset_cap must be positive")
    if pres.ngens >= 1 and not pres.relators and not subgens:
        raise ResourceError("no relators and no subgroup generators: the group is infinite")
    return _Enumerator(pres, subgens, coset_cap).run()


class _Enumerator:
    def __init__(self, pres, subgens, cap):
        n = pres.ngens
        self.ngens = n
        self.cap = cap
        invol = set()
        for w in pres.relators:
            if len(w) == 2 and w[0] == w[1]:
                invol.add(abs(w[0]) - 1)
        # involutory generators share one column with their inverse
        col = {}
        ncols = 0
        for i in range(n):
            col[i + 1] = ncols
            if i in invol:
                col[-(i + 1)] = ncols
                ncols += 1
            else:
                col[-(i + 1)] = ncols + 1
                ncols += 2
        self.col = col
        self.ncols = ncols
        self.invcol = [0] * ncols
        for i in range(n):
            self.invcol[col[i + 1]] = col[-(i + 1)]
            self.invcol[col[-(i + 1)]] = col[i + 1]
        self.rels = self._prepare(pres.relators, invol)
        self.subgens = [self._to_cols(free_reduce(w), invol) for w in subgens]
        self.subgens = [w for w in self.subgens if w]
        self.table: list[list[int]] = []
        self.p: list[int] = []
        self.live = 0
        self.queue: list[int] = []

    def _to_cols(self, word, invol):
        w = [abs(x) if abs(x) - 1 in invol else x for x in word]
        # with x = x^-1, adjacent equal involutory letters cancel
        out: list[int] = []
        for x in w:
            if out and (out[-1] == -x or (x == out[-1] and abs(x) - 1 in invol)):
                out.pop()
            else:
                out.append(x)
        return [self.col[x] for x in out]

    def _prepare(self, relators, invol):
        seen = set()
        out = []
        for w in relators:
            cw = self._to_cols(w, invol)
            if not cw:
                continue
            key = min(tuple(cw[i:] + cw[:i]) for i in range(len(cw)))
            if key in seen:
                continue
            seen.add(key)
            out.append(cw)
        out.sort(key=len)
        return out

    # coset bookkeeping -----------------------------------------------------

    def _new(self) -> int:
        c = len(self.table)
        self.table.append([-1] * self.ncols)
        self.p.append(c)
        self.live += 1
        return c

    def _define(self, c: int, x: int) -> int:
        if self.live >= self.cap:
            raise _CapHit
        d = self._new()
        self.table[c][x] = d
        self.table[d][self.invcol[x]] = c
        return d

    def _rep(self, c: int) -> int:
        p = self.p
        r = c
        while p[r] != r:
            r = p[r]
        while p[c] != r:
            p[c], c = r, p[c]
        return r

    def _merge(self, a: int, b: int) -> None:
        a, b = self._rep(a), self._rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        self.p[b] = a
        self.live -= 1
        self.queue.append(b)

    def _coincidence(self, a: int, b: int) -> None:
        self.queue = []
        self._merge(a, b)
        table, invcol = self.table, self.invcol
        i = 0
        while i < len(self.queue):
            e = self.queue[i]
            i += 1
            row = table[e]
            for x in range(self.ncols):
                f = row[x]
                if f < 0:
                    continue
                xi = invcol[x]
                if table[f][xi] == e:
                    table[f][xi] = -1
                e1, f1 = self._rep(e), self._rep(f)
                if table[e1][x] >= 0:
                    self._merge(f1, table[e1][x])
                elif table[f1][xi] >= 0:
                    self._merge(e1, table[f1][xi])
                else:
                    table[e1][x] = f1
                    table[f1][xi] = e1

    def _scan(self, c: int, w: list[int], define: bool) -> None:
        table, invcol = self.table, self.invcol
        f, b = c, c
        i, j = 0, len(w) - 1
        while True:
            while i <= j:
                nf = table[f][w[i]]
                if nf < 0:
                    break
                f = nf
                i += 1
            if i > j:
                if f != b:
                    self._coincidence(f, b)
                return
            while j >= i:
                nb = table[b][invcol[w[j]]]
                if nb < 0:
                    break
                b = nb
                j -= 1
            if j < i:
                self._coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][invcol[w[i]]] = f
                return
            if not define:
                return
            self._define(f, w[i])

    def _lookahead(self) -> None:
        c = 0
        while c < len(self.table):
            if self.p[c] == c:
                for w in self.rels:
                    self._scan(c, w, define=False)
                    if self.p[c] != c:
                        break
            c += 1

    def run(self) -> CosetTable:
        self._new()
        for w in self.subgens:
            self._with_lookahead(lambda w=w: self._scan(self._rep(0), w, True))
        c = 0
        while c < len(self.table):
            if self.p[c] == c:
                for w in self.rels:
                    self._with_lookahead(lambda w=w: self._scan(c, w, True))
                    if self.p[c] != c:
                        break
                if self.p[c] == c:
                    for x in range(self.ncols):
                        if self.table[c][x] < 0:
                            self._with_lookahead(lambda x=x: self._define(c, x) if self.table[c][x] < 0 else None)
            c += 1
        return self._compress()

    def _with_lookahead(self, step) -> None:
        try:
            step()
        except _CapHit:
            before = self.live
            self._lookahead()
            if self.live >= before:
                raise ResourceError(f"coset enumeration exceeded the cap of {self.cap} cosets") from None
            self._with_lookahead(step)

    def _compress(self) -> CosetTable:
        live = [c for c in range(len(self.table)) if self.p[c] == c]
        index = {c: k for k, c in enumerate(live)}
        rows = []
        for c in live:
            row = []
            for i in range(self.ngens):
                row.append(index[self._rep(self.table[c][self.col[i + 1]])])
                row.append(index[self._rep(self.table[c][self.col[-(i + 1)]])])
            rows.append(tuple(row))
        return CosetTable(self.ngens, tuple(rows), True)


class _CapHit(Exception):
    pass


# -- groups from presentations -----------------------------------------------


def group_from_coset_table(table: CosetTable, name: str = "") -> FiniteGroup:
    """The regular action on cosets of the trivial subgroup, as a table group.

    Element ``i`` is the group element carrying coset 0 to coset ``i``.
    """
    n = table.index
    if n > MAX_TABLE_ORDER:
        raise ResourceError(f"group of order {n} exceeds the table cap of {MAX_TABLE_ORDER}")
    perms = table.generator_permutations()
    cols = np.empty((n, n), dtype=np.int64)
    cols[:, 0] = np.arange(n)
    done = np.zeros(n, dtype=bool)
    done[0] = True
    order = [0]
    for j in order:
        for g in perms:
            k = int(g[j])
            if not done[k]:
                done[k] = True
                cols[:, k] = g[cols[:, j]]
                order.append(k)
    if not done.all():
        raise DomainError("coset table is not transitive")
    gens = sorted({int(g[0]) for g in perms} - {0})
    return FiniteGroup(cols, gens, name=name)


def group_from_presentation(pres: Presentation, coset_cap: int = DEFAULT_COSET_CAP, name: str = "") -> FiniteGroup:
    return group_from_coset_table(todd_coxeter(pres, (), coset_cap), name=name)


def wd_class_relators(d: int, c: int) -> Presentation:
    """x_i^2 and every left-normed (c+1)-fold commutator of generators."""
    if d < 1 or c < 1:
        raise DomainError("need d >= 1 and c >= 1")
    rels: list[Word] = [(i + 1, i + 1) for i in range(d)]
    for tup in itertools.product(range(1, d + 1), repeat=c + 1):
        w = left_normed_commutator([(x,) for x in tup])
        if w:
            rels.append(w)
    return Presentation(d, tuple(rels))


@dataclass(frozen=True)
class MarkedQuotient:
    group: FiniteGroup
    xgens: tuple[int, ...]
    ygens: tuple[int, ...]
    d: int
    c: int

    def __post_init__(self):
        g = self.group
        for x in self.xgens:
            if g.element_order(x) != 2:
                raise DomainError("x-generators must be involutions")
        for i, y in enumerate(self.ygens):
            if y != g.mul(self.xgens[i], self.xgens[-1]):
                raise DomainError("y_i must equal x_i x_d")
        if len(g.closure(self.xgens)) != g.order:
            raise DomainError("x-generators do not generate")


def build_quotient(d: int, c: int, coset_cap: int = DEFAULT_COSET_CAP) -> MarkedQuotient:
    """W_d / gamma_{c+1}(W_d) with its marked involutions and y_i = x_i x_d."""
    if d < 2 or c < 1:
        raise DomainError("need d >= 2 and c >= 1")
    pres = wd_class_relators(d, c)
    try:
        table = todd_coxeter(pres, (), coset_cap)
    except ResourceError as exc:
        raise ResourceError(f"build_quotient(d={d}, c={c}): {exc} (coset_cap={coset_cap})") from None
    perms = table.generator_permutations()
    group = group_from_coset_table(table, name=f"W{d}/gamma{c + 1}")
    xgens = tuple(int(g[0]) for g in perms)
    ygens = tuple(group.mul(x, xgens[-1]) for x in xgens[:-1])
    return MarkedQuotient(group, xgens, ygens, d, c)
