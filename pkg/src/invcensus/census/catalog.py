"""A small catalogue of finite groups and the involution-generation count g_d(m)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..errors import DomainError, UnsupportedScaleError
from ..permgroup import (
    FiniteGroup,
    are_isomorphic,
    cyclic_group,
    dihedral_group,
    elementary_abelian_group,
)
from ..presentations import Presentation, group_from_presentation, letters_to_word

EXHAUSTIVE_MAX = 8
FAMILY_MAX = 64

# every group of order <= 8, as (name, generator count, relators in letter form)
PRESENTATIONS: dict[int, list[tuple[str, int, tuple[str, ...]]]] = {
    1: [("C1", 1, ("a",))],
    2: [("C2", 1, ("aa",))],
    3: [("C3", 1, ("aaa",))],
    4: [("C4", 1, ("aaaa",)), ("C2xC2", 2, ("aa", "bb", "ABab"))],
    5: [("C5", 1, ("aaaaa",))],
    6: [("C6", 1, ("aaaaaa",)), ("S3", 2, ("aaa", "bb", "abab"))],
    7: [("C7", 1, ("aaaaaaa",))],
    8: [
        ("C8", 1, ("aaaaaaaa",)),
        ("C4xC2", 2, ("aaaa", "bb", "ABab")),
        ("C2xC2xC2", 3, ("aa", "bb", "cc", "ABab", "ACac", "BCbc")),
        ("D8", 2, ("aaaa", "bb", "abab")),
        ("Q8", 2, ("aaaa", "aaBB", "Baba")),
    ],
}


def group_from_letters(name: str, ngens: int, relators) -> FiniteGroup:
    pres = Presentation(ngens, tuple(letters_to_word(w, ngens) for w in relators))
    return group_from_presentation(pres, name=name)


@dataclass
class GroupCatalog:
    """Groups by order. ``partial`` is set when some order in range is not covered exhaustively."""

    max_order: int
    groups: list[FiniteGroup] = field(default_factory=list)
    exhaustive_orders: tuple[int, ...] = ()

    @property
    def partial(self) -> bool:
        return any(n not in self.exhaustive_orders for n in range(1, self.max_order + 1))

    def of_order(self, n: int) -> list[FiniteGroup]:
        return [g for g in self.groups if g.order == n]

    def __iter__(self):
        return iter(self.groups)

    def __len__(self) -> int:
        return len(self.groups)


def _family_members(n: int) -> list[FiniteGroup]:
    out = [cyclic_group(n)]
    if n % 2 == 0 and n >= 6:
        out.append(dihedral_group(n // 2))
    if n > 1 and n & (n - 1) == 0:
        out.append(elementary_abelian_group(n.bit_length() - 1))
    return out


def small_group_catalog(max_order: int) -> GroupCatalog:
    """Every group of order <= 8, then cyclic, dihedral and elementary abelian
    groups up to ``max_order`` (at most 64), deduplicated up to isomorphism."""
    if not 1 <= max_order <= FAMILY_MAX:
        raise DomainError(f"max_order must lie in 1..{FAMILY_MAX}")
    cat = GroupCatalog(max_order, exhaustive_orders=tuple(range(1, min(max_order, EXHAUSTIVE_MAX) + 1)))
    for n in range(1, max_order + 1):
        if n <= EXHAUSTIVE_MAX:
            found = [group_from_letters(*entry) for entry in PRESENTATIONS[n]]
            for a, b in itertools.combinations(found, 2):
                if a.order != n or b.order != n or are_isomorphic(a, b):
                    raise RuntimeError(f"catalogue presentations of order {n} are not distinct")
        else:
            found = []
            for g in _family_members(n):
                if not any(are_isomorphic(g, h) for h in found):
                    found.append(g)
        cat.groups.extend(found)
    return cat


def generated_by_involutions(group: FiniteGroup, d: int) -> bool:
    """Whether some d distinct involutions generate the group."""
    invs = group.involutions()
    for subset in itertools.combinations(invs, d):
        if len(group.closure(subset)) == group.order:
            return True
    return False


def g_count(d: int, m: int) -> int:
    """Number of groups of order 2^m generated by d distinct involutions (m <= 3)."""
    if d < 1:
        raise DomainError("d must be positive")
    if m < 0:
        raise DomainError("m must be non-negative")
    if 2**m > EXHAUSTIVE_MAX:
        raise UnsupportedScaleError(f"no exhaustive catalogue for order 2^{m}")
    cat = small_group_catalog(2**m)
    return sum(generated_by_involutions(g, d) for g in cat.of_order(2**m))
