import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from invcensus.errors import DomainError, ParseError, ResourceError
from invcensus.permgroup import are_isomorphic, dihedral_group
from invcensus.presentations import (
    Presentation,
    build_quotient,
    commutator,
    free_reduce,
    group_from_presentation,
    invert,
    left_normed_commutator,
    letters_to_word,
    todd_coxeter,
    wd_class_relators,
    word_to_letters,
)

words = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=12).map(tuple)


def pres(ngens, *rels):
    return Presentation(ngens, tuple(letters_to_word(r, ngens) for r in rels))


DIHEDRAL10 = pres(2, "aa", "bb", "ababababab")


@given(words)
def test_word_helpers(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert free_reduce(r + invert(r)) == ()
    assert letters_to_word(word_to_letters(w), 3) == w


def test_commutator_convention():
    assert commutator((1,), (2,)) == (-1, -2, 1, 2)
    assert left_normed_commutator([(1,), (2,), (3,)]) == free_reduce(
        commutator(commutator((1,), (2,)), (3,))
    )
    assert left_normed_commutator([(1,), (1,)]) == ()


def test_presentation_validation_and_text():
    with pytest.raises(DomainError):
        Presentation(1, ((),))
    with pytest.raises(DomainError):
        Presentation(1, ((2,),))
    p = pres(3, "aa", "bB", "ABCabc")
    assert Presentation.from_text(p.to_text()) == p
    with pytest.raises(ParseError):
        Presentation.from_text("aa\n")
    with pytest.raises(ParseError) as exc:
        Presentation.from_text("gens 2\naa\nac\n")
    assert "3" in str(exc.value)


def test_coset_examples():
    assert todd_coxeter(pres(1, "aa")).index == 2
    t = todd_coxeter(DIHEDRAL10)
    assert t.index == 10 and t.complete and t.satisfies(DIHEDRAL10.relators)
    assert todd_coxeter(DIHEDRAL10, [letters_to_word("a", 2)]).index == 5
    assert are_isomorphic(group_from_presentation(DIHEDRAL10), dihedral_group(5))


def test_coset_errors():
    with pytest.raises(DomainError):
        todd_coxeter(pres(1, "aa"), coset_cap=0)
    with pytest.raises(ResourceError):
        todd_coxeter(Presentation(2, ()))
    with pytest.raises(ResourceError):
        todd_coxeter(pres(2, "aa", "bb"), coset_cap=500)  # infinite dihedral group


@pytest.mark.parametrize("n", [3, 4, 6, 7, 12])
def test_dihedral_family(n):
    p = pres(2, "aa", "bb", "ab" * n)
    t = todd_coxeter(p)
    assert t.index == 2 * n and t.satisfies(p.relators)
    assert todd_coxeter(p, [letters_to_word("ab", 2)]).index == 2


def test_coset_numbering_deterministic():
    assert todd_coxeter(DIHEDRAL10).rows == todd_coxeter(DIHEDRAL10).rows


def test_wd_relators():
    p = wd_class_relators(3, 1)
    assert p.ngens == 3 and p.relators[:3] == ((1, 1), (2, 2), (3, 3))
    assert len(p.relators) == 3 + 6  # trivial [x_i, x_i] dropped
    with pytest.raises(DomainError):
        wd_class_relators(3, 0)


@pytest.mark.parametrize("d,c,order", [(3, 1, 8), (3, 2, 64), (4, 1, 16), (2, 3, 16)])
def test_quotient_orders(d, c, order):
    q = build_quotient(d, c)
    assert q.group.order == order
    assert len(set(q.xgens)) == d
    assert all(q.group.element_order(x) == 2 for x in q.xgens)
    assert all(q.group.element_order(y) <= 2 ** c for y in q.ygens)


def test_quotient_cap_error_echoes_cap():
    with pytest.raises(ResourceError, match="coset_cap=40"):
        build_quotient(3, 2, coset_cap=40)


def test_quotients_are_2_groups():
    for d, c in [(3, 1), (3, 2), (3, 3), (4, 2)]:
        n = build_quotient(d, c).group.order
        assert n & (n - 1) == 0


def test_quotient_surjects_onto_previous_class():
    for c in (2, 3):
        big, small = build_quotient(3, c), build_quotient(3, c - 1)
        rels = wd_class_relators(3, c - 1).relators
        g = big.group
        kernel_gens = set()
        for w in rels:
            kernel_gens.add(g.evaluate_word(w, big.xgens))
        # the normal closure of the relator images has index |small|
        from invcensus.permgroup import normal_closure

        k = normal_closure(g, kernel_gens)
        assert g.order // k.order == small.group.order
        # and the relators of class c hold in the class c-1 quotient, so the map on generators is well defined
        for w in wd_class_relators(3, c).relators:
            assert small.group.evaluate_word(w, small.xgens) == 0


def test_permuted_generators_give_isomorphic_quotient():
    base = wd_class_relators(3, 2)
    ref = group_from_presentation(base)
    for sigma in itertools.permutations(range(1, 4)):
        rels = tuple(tuple((1 if x > 0 else -1) * sigma[abs(x) - 1] for x in w) for w in base.relators)
        g = group_from_presentation(Presentation(3, rels))
        assert are_isomorphic(g, ref)


def test_regular_action_table():
    q = build_quotient(3, 2)
    t = q.group.table
    assert np.array_equal(t[0], np.arange(q.group.order))
    assert q.group.mul(q.xgens[0], q.xgens[0]) == 0
