"""Exact linear algebra over GF(2).

Vectors of dimension ``r`` are Python ints; column 0 is the most significant
bit (``1 << (r - 1)``), so the bit string of a row reads left to right.
Matrices act on row vectors from the right: ``v * A``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, ParseError


def _bit(r: int, col: int) -> int:
    return 1 << (r - 1 - col)


def vec_from_bits(bits: Sequence[int]) -> int:
    v = 0
    for b in bits:
        v = (v << 1) | (1 if b else 0)
    return v


def vec_to_bits(v: int, r: int) -> list[int]:
    return [(v >> (r - 1 - i)) & 1 for i in range(r)]


def rref(rows: Iterable[int], ncols: int) -> tuple[int, ...]:
    """Reduced row echelon form; zero rows dropped, pivots strictly increasing."""
    basis: list[int] = []
    for v in rows:
        for b in basis:
            if v & _lead(b):
                v ^= b
        if v:
            lead = _lead(v)
            basis = [b ^ v if b & lead else b for b in basis]
            basis.append(v)
    basis.sort(reverse=True)
    return tuple(basis)


def _lead(v: int) -> int:
    return 1 << (v.bit_length() - 1)


def rank(rows: Iterable[int], ncols: int) -> int:
    return len(rref(rows, ncols))


def reduce_vector(v: int, basis: Sequence[int]) -> int:
    """Reduce ``v`` against an RREF basis; zero iff ``v`` lies in the span."""
    for b in basis:
        if v & _lead(b):
            v ^= b
    return v


@dataclass(frozen=True)
class F2Matrix:
    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.nrows:
            raise DomainError("row count does not match nrows")
        limit = 1 << self.ncols
        for row in self.rows:
            if not 0 <= row < limit:
                raise DomainError("row wider than ncols")

    @classmethod
    def identity(cls, r: int) -> F2Matrix:
        return cls(r, r, tuple(_bit(r, i) for i in range(r)))

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> F2Matrix:
        ncols = len(entries[0]) if entries else 0
        if any(len(row) != ncols for row in entries):
            raise DomainError("ragged matrix")
        return cls(len(entries), ncols, tuple(vec_from_bits(row) for row in entries))

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> F2Matrix:
        """Matrix sending basis vector e_i to e_{perm[i]}."""
        r = len(perm)
        return cls(r, r, tuple(_bit(r, perm[i]) for i in range(r)))

    @classmethod
    def block_diagonal(cls, blocks: Sequence[F2Matrix]) -> F2Matrix:
        r = sum(b.nrows for b in blocks)
        c = sum(b.ncols for b in blocks)
        rows = []
        col_off = 0
        for b in blocks:
            shift = c - col_off - b.ncols
            rows.extend(row << shift for row in b.rows)
            col_off += b.ncols
        return cls(r, c, tuple(rows))

    def to_lists(self) -> list[list[int]]:
        return [vec_to_bits(row, self.ncols) for row in self.rows]

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> (self.ncols - 1 - j)) & 1

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def apply(self, v: int) -> int:
        """Row vector times matrix."""
        out = 0
        i = self.nrows - 1
        while v:
            if v & 1:
                out ^= self.rows[i]
            v >>= 1
            i -= 1
        return out

    def __matmul__(self, other: F2Matrix) -> F2Matrix:
        if self.ncols != other.nrows:
            raise DomainError("dimension mismatch in product")
        return F2Matrix(self.nrows, other.ncols, tuple(other.apply(row) for row in self.rows))

    def rank(self) -> int:
        return rank(self.rows, self.ncols)

    def is_invertible(self) -> bool:
        return self.is_square and self.rank() == self.nrows

    def is_identity(self) -> bool:
        return self == F2Matrix.identity(self.nrows) if self.is_square else False

    def inverse(self) -> F2Matrix:
        if not self.is_square:
            raise DomainError("only square matrices are invertible")
        r = self.nrows
        # augmented rows [A | I] as 2r-bit ints
        aug = [(row << r) | _bit(r, i) for i, row in enumerate(self.rows)]
        for col in range(r):
            mask = 1 << (2 * r - 1 - col)
            piv = next((i for i in range(col, r) if aug[i] & mask), None)
            if piv is None:
                raise DomainError("matrix is singular over GF(2)")
            aug[col], aug[piv] = aug[piv], aug[col]
            for i in range(r):
                if i != col and aug[i] & mask:
                    aug[i] ^= aug[col]
        low = (1 << r) - 1
        return F2Matrix(r, r, tuple(row & low for row in aug))

    def order(self, cap: int = 1 << 20) -> int:
        if not self.is_invertible():
            raise DomainError("matrix is singular over GF(2)")
        ident = F2Matrix.identity(self.nrows)
        p, k = self, 1
        while p != ident:
            p = p @ self
            k += 1
            if k > cap:
                raise DomainError("order exceeds cap")
        return k

    def to_text(self) -> str:
        lines = [f"{self.nrows} {self.ncols}"]
        lines += ["".join(map(str, row)) for row in self.to_lists()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> F2Matrix:
        lines = [ln.strip() for ln in text.strip().splitlines()]
        try:
            nrows, ncols = map(int, lines[0].split())
        except (ValueError, IndexError):
            raise ParseError("expected header 'r c'", 1) from None
        body = lines[1:]
        if len(body) != nrows:
            raise ParseError(f"expected {nrows} rows, found {len(body)}")
        rows = []
        for lineno, ln in enumerate(body, start=2):
            if len(ln) != ncols or set(ln) - {"0", "1"}:
                raise ParseError(f"row must be {ncols} characters from {{0,1}}", lineno)
            rows.append(int(ln, 2) if ln else 0)
        return cls(nrows, ncols, tuple(rows))


@dataclass(frozen=True)
class F2Subspace:
    """A subspace of GF(2)^r held by its canonical (RREF) basis."""

    basis: tuple[int, ...]
    ambient_dim: int

    @classmethod
    def span(cls, vectors: Iterable[int], r: int) -> F2Subspace:
        return cls(rref(vectors, r), r)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def codim(self) -> int:
        return self.ambient_dim - len(self.basis)

    def __contains__(self, v: int) -> bool:
        return reduce_vector(v, self.basis) == 0

    def image(self, alpha: F2Matrix) -> F2Subspace:
        return F2Subspace.span((alpha.apply(b) for b in self.basis), self.ambient_dim)

    def is_invariant(self, alpha: F2Matrix) -> bool:
        return all(reduce_vector(alpha.apply(b), self.basis) == 0 for b in self.basis)

    def elements(self) -> list[int]:
        out = [0]
        for b in self.basis:
            out += [v ^ b for v in out]
        return out

    def as_matrix(self) -> F2Matrix:
        return F2Matrix(self.dim, self.ambient_dim, self.basis)


def _gaussian_binomial(r: int, s: int, q: int) -> int:
    """Product formula, returning 0 outside ``0 <= s <= r``."""
    if s < 0 or r < 0 or s > r:
        return 0
    s = min(s, r - s)
    out = 1
    for i in range(s):
        # partial products are themselves Gaussian binomials, so // is exact
        out = out * (q ** (r - i) - 1) // (q ** (i + 1) - 1)
    return out


def gaussian_binomial(r: int, s: int, q: int = 2) -> int:
    """Number of s-dimensional subspaces of an r-dimensional space over F_q."""
    if q < 2:
        raise DomainError("q must be at least 2")
    if not 0 <= s <= r:
        raise DomainError(f"need 0 <= s <= r, got r={r}, s={s}")
    return _gaussian_binomial(r, s, q)


def enumerate_subspaces(r: int, codim: int, leading_pivot: int | None = None) -> Iterator[F2Subspace]:
    """Yield every codimension-``codim`` subspace of GF(2)^r exactly once.

    Order: pivot column tuples lexicographically, then free entries counted in
    binary.  ``leading_pivot`` restricts the stream to bases whose first pivot
    is that column, which partitions the stream for parallel consumers.
    """
    if not 0 <= codim <= r:
        raise DomainError(f"need 0 <= codim <= r, got r={r}, codim={codim}")
    k = r - codim
    for pivots in itertools.combinations(range(r), k):
        if leading_pivot is not None and k > 0 and pivots[0] != leading_pivot:
            continue
        if leading_pivot is not None and k == 0 and leading_pivot != 0:
            continue
        pivset = set(pivots)
        free = [[c for c in range(p + 1, r) if c not in pivset] for p in pivots]
        nfree = sum(len(f) for f in free)
        for mask in range(1 << nfree):
            rows = []
            bit = nfree - 1
            for p, cols in zip(pivots, free):
                row = _bit(r, p)
                for c in cols:
                    if (mask >> bit) & 1:
                        row |= _bit(r, c)
                    bit -= 1
                rows.append(row)
            yield F2Subspace(tuple(rows), r)


def multiplicative_order_of_2(p: int) -> int:
    if p < 3 or p % 2 == 0:
        raise DomainError("need an odd prime")
    k, x = 1, 2 % p
    while x != 1:
        x = (x * 2) % p
        k += 1
    return k


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def fix_count_formula(r: int, s: int, p: int, t: int, ell: int | None = None) -> int:
    """Number of codimension-s subspaces fixed by an order-p element of GL(r, 2).

    For p = 2, ``t`` is the number of Jordan blocks of size 2.  For odd p the
    element acts on its non-fixed part as a scalar of GL(t, 2^ell), where ell
    is the multiplicative order of 2 modulo p.
    """
    if not _is_prime(p):
        raise DomainError(f"{p} is not prime")
    if t < 1:
        raise DomainError("t must be at least 1 (the identity is excluded)")
    if not 0 <= s <= r:
        raise DomainError(f"need 0 <= s <= r, got r={r}, s={s}")
    gb = _gaussian_binomial
    if p == 2:
        if 2 * t > r:
            raise DomainError(f"{t} Jordan blocks of size 2 do not fit in dimension {r}")
        hi = min(t, (r - s) // 2)
        return sum(
            gb(t, x, 2) * gb(r - t - x, r - s - 2 * x, 2) * 2 ** ((s - t + x) * x)
            for x in range(max(0, t - s), hi + 1)
        )
    order2 = multiplicative_order_of_2(p)
    if ell is None:
        ell = order2
    elif ell != order2:
        raise DomainError(f"ell must be the order of 2 mod {p}, which is {order2}")
    if t * ell > r:
        raise DomainError(f"{t} blocks of size {ell} do not fit in dimension {r}")
    lo = max(0, ceil(Fraction(t * ell - s, ell)))
    hi = min(t, (r - s) // ell)
    return sum(
        gb(t, x, 2 ** ell) * gb(r - t * ell, r - s - x * ell, 2)
        for x in range(lo, hi + 1)
    )


def fix_count_bruteforce(alpha: F2Matrix, s: int) -> int:
    """Count codimension-s subspaces W with W * alpha = W by enumeration."""
    if not alpha.is_invertible():
        raise DomainError("alpha must be invertible")
    r = alpha.nrows
    if not 0 <= s <= r:
        raise DomainError(f"need 0 <= s <= r, got r={r}, s={s}")
    return sum(1 for w in enumerate_subspaces(r, s) if w.is_invariant(alpha))


def transvection_bound(r: int, s: int) -> int:
    """Upper bound on fixed codimension-s subspaces, attained by a transvection."""
    if not 0 < s < r:
        raise DomainError(f"need 0 < s < r, got r={r}, s={s}")
    gb = _gaussian_binomial
    return gb(r - 1, s - 1, 2) + gb(r - 2, s, 2) * 2 ** s


def free_subspace_lower_bound(r: int, s: int, group_size: int) -> int:
    """ceil(binom(r,s)_2 * (1 - (|T|-1) 2^(1-min(r-s,s)))), clamped at 0."""
    frac = 1 - (group_size - 1) * Fraction(2) ** (1 - min(r - s, s))
    value = gaussian_binomial(r, s, 2) * frac
    return max(0, ceil(value))


def count_T_free_subspaces(r: int, s: int, T: Sequence[F2Matrix], workers: int = 1) -> tuple[int, int]:
    """Count codimension-s subspaces moved by every non-identity element of T.

    Returns ``(exact, lower_bound)``.  ``T`` is taken as given; pass a full
    group listing (see :func:`matrix_group_closure`).
    """
    if not 0 < s < r:
        raise DomainError(f"need 0 < s < r, got r={r}, s={s}")
    mats = _distinct(T)
    for a in mats:
        if a.nrows != r or not a.is_invertible():
            raise DomainError("T must consist of invertible r x r matrices")
    movers = [a for a in mats if not a.is_identity()]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_count_free_part, [(r, s, movers, lp) for lp in range(r)])
            exact = sum(parts)
    else:
        exact = _count_free_part((r, s, movers, None))
    n_group = len(movers) + 1
    return exact, free_subspace_lower_bound(r, s, n_group)


def _count_free_part(args) -> int:
    r, s, movers, lp = args
    return sum(
        1
        for w in enumerate_subspaces(r, s, leading_pivot=lp)
        if not any(w.is_invariant(a) for a in movers)
    )


def _distinct(mats: Iterable[F2Matrix]) -> list[F2Matrix]:
    seen: dict[F2Matrix, None] = {}
    for m in mats:
        seen.setdefault(m, None)
    return list(seen)


def matrix_group_closure(gens: Sequence[F2Matrix]) -> list[F2Matrix]:
    """All elements of the group generated by ``gens`` (identity first)."""
    if not gens:
        raise DomainError("need at least one generator to fix the dimension")
    r = gens[0].nrows
    ident = F2Matrix.identity(r)
    out = [ident]
    seen = {ident}
    i = 0
    while i < len(out):
        for g in gens:
            h = out[i] @ g
            if h not in seen:
                seen.add(h)
                out.append(h)
        i += 1
    return out


def general_linear_group(r: int) -> Iterator[F2Matrix]:
    """Every element of GL(r, 2); only sensible for r <= 4."""

    def extend(rows: list[int], span: set[int]):
        if len(rows) == r:
            yield F2Matrix(r, r, tuple(rows))
            return
        for v in range(1, 1 << r):
            if v not in span:
                yield from extend(rows + [v], span | {x ^ v for x in span})

    yield from extend([], {0})


# -- representatives of prime-order conjugacy classes ------------------------


def _poly_mod(a: int, b: int) -> int:
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def _is_irreducible(f: int) -> bool:
    deg = f.bit_length() - 1
    for g in range(2, 1 << (deg // 2 + 1)):
        if 0 < g.bit_length() - 1 <= deg // 2 and _poly_mod(f, g) == 0:
            return False
    return deg >= 1


def cyclotomic_factors(p: int) -> list[int]:
    """Irreducible factors over GF(2) of (x^p - 1)/(x - 1), as bitmask polynomials."""
    ell = multiplicative_order_of_2(p)
    target = (1 << p) - 1  # 1 + x + ... + x^(p-1)
    out = []
    for f in range(1 << ell, 1 << (ell + 1)):
        if f & 1 and _is_irreducible(f) and _poly_mod(target, f) == 0:
            out.append(f)
    return out


def companion_matrix(f: int) -> F2Matrix:
    """Companion matrix of a monic polynomial (bit i = coefficient of x^i)."""
    n = f.bit_length() - 1
    rows = []
    for i in range(n - 1):
        rows.append(_bit(n, i + 1))
    rows.append(sum(_bit(n, j) for j in range(n) if (f >> j) & 1))
    return F2Matrix(n, n, tuple(rows))


def jordan_involution(r: int, t: int) -> F2Matrix:
    """Involution with ``t`` Jordan blocks of size 2 (t = 1 is a transvection)."""
    if not (1 <= t and 2 * t <= r):
        raise DomainError("need 1 <= t <= r/2")
    block = F2Matrix.from_lists([[1, 1], [0, 1]])
    return F2Matrix.block_diagonal([block] * t + [F2Matrix.identity(1)] * (r - 2 * t))


def odd_prime_element(r: int, p: int, blocks: Sequence[int], factor_index: int | Sequence[int] = 0) -> F2Matrix:
    """Order-p element built from companion blocks of cyclotomic factors.

    ``blocks[i]`` copies of the ``i``-th irreducible factor's companion matrix,
    identity on the rest.
    """
    factors = cyclotomic_factors(p)
    mats = []
    for f, count in zip(factors, blocks):
        mats += [companion_matrix(f)] * count
    used = sum(m.nrows for m in mats)
    if used > r or used == 0:
        raise DomainError("block data does not describe a nontrivial element of GL(r, 2)")
    return F2Matrix.block_diagonal(mats + [F2Matrix.identity(1)] * (r - used))


def prime_order_class_representatives(r: int) -> Iterator[tuple[dict, F2Matrix]]:
    """One matrix per conjugacy class of prime-order elements of GL(r, 2).

    Classes are determined by Jordan data (p = 2) or by the multiplicity of
    each irreducible factor of the p-th cyclotomic polynomial (p odd).
    """
    for t in range(1, r // 2 + 1):
        yield {"p": 2, "t": t}, jordan_involution(r, t)
    for p in range(3, 2 ** r):
        if not _is_prime(p):
            continue
        ell = multiplicative_order_of_2(p)
        if ell > r:
            continue
        factors = cyclotomic_factors(p)
        max_blocks = r // ell
        for counts in itertools.product(range(max_blocks + 1), repeat=len(factors)):
            if 0 < sum(counts) <= max_blocks:
                yield {"p": p, "ell": ell, "blocks": counts}, odd_prime_element(r, p, counts)
