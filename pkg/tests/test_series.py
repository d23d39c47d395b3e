import itertools
from functools import lru_cache

import numpy as np
import pytest

from invcensus.errors import DomainError, PreconditionError
from invcensus.permgroup import Subgroup, normal_closure, section_rank
from invcensus.presentations import build_quotient
from invcensus.series import (
    faithfulness_check,
    m_subgroup,
    p_series,
    rank_table,
    rr_kernel,
    rr_rank,
    section_action_matrices,
    section_is_faithful,
    stabilising_permutations,
    symd_action,
)


@lru_cache(maxsize=None)
def quotient(d, c):
    return build_quotient(d, c)


@lru_cache(maxsize=None)
def series(d, c):
    return p_series(quotient(d, c))


BUILT = [(3, 1), (3, 2), (3, 3), (4, 2)]


def log2(n):
    assert n & (n - 1) == 0
    return n.bit_length() - 1


def test_p_series_examples():
    s1 = series(3, 1)
    assert [h.order for h in s1.gamma] == [8, 1]
    s2 = series(3, 2)
    assert [h.order for h in s2.gamma] == [64, 8, 1]
    s3 = series(3, 3)
    ranks = s3.factor_ranks
    assert ranks[:2] == [3, 3]
    # two routes: coset enumeration order against the sum of factor ranks
    assert quotient(3, 3).group.order == 2 ** (6 + ranks[2])


@pytest.mark.parametrize("d,c", BUILT)
def test_series_invariants(d, c):
    q, s = quotient(d, c), series(d, c)
    g = q.group
    assert sum(s.factor_ranks) == log2(g.order)
    assert len(s.gamma) == c + 1
    for a, b in zip(s.gamma, s.gamma[1:]):
        assert b.issubset(a) and b.order < a.order and b.is_normal()
        section_rank(g, a, b)  # elementary abelian or raises
    assert s.p(1).order * 2 == g.order  # P_1 = <y_i> has index 2
    assert s.p(c + 5).order == 1


@pytest.mark.parametrize("d,c", BUILT)
def test_m_chain(d, c):
    q, s = quotient(d, c), series(d, c)
    for i in range(1, c + 1):
        chain = [m_subgroup(q, i, j, s) for j in range(i + 1)]
        assert chain[0] == s.p(i)
        assert chain[-1] == s.p(i + 1)
        for a, b in zip(chain, chain[1:]):
            assert b.issubset(a)


def test_m_beyond_class_is_trivial():
    q, s = quotient(3, 2), series(3, 2)
    assert m_subgroup(q, 5, 5, s).order == 1
    assert m_subgroup(q, 3, 0, s).order == 1
    with pytest.raises(DomainError):
        m_subgroup(q, 0, 0, s)
    with pytest.raises(DomainError):
        m_subgroup(q, 2, 3, s)


def test_section_ranks_d3():
    q, s = quotient(3, 3), series(3, 3)
    g = q.group
    assert section_rank(g, m_subgroup(q, 2, 1, s), m_subgroup(q, 2, 2, s)) == 2
    assert section_rank(g, m_subgroup(q, 2, 0, s), m_subgroup(q, 2, 1, s)) == 1
    assert faithfulness_check(q, 2, s)


@pytest.mark.parametrize("d,c", [(3, 2), (3, 3), (4, 2)])
def test_section_ranks_general(d, c):
    q, s = quotient(d, c), series(d, c)
    g = q.group
    for i in range(2, c + 1):
        a, b, z = (m_subgroup(q, i, j, s) for j in (i - 2, i - 1, i))
        if b.order == z.order:
            continue
        assert section_rank(g, b, z) == d - 1
        assert section_rank(g, a, b) == (d - 1) * (d - 2) // 2
        assert section_rank(g, a, z) < np.prod(range(1, d + 1))


def test_rank_table_json():
    t = rank_table(quotient(3, 3))
    assert t["gamma_factor_ranks"][:2] == [3, 3]
    assert t["m_section_ranks"]["2,1"] == 2 and t["m_section_ranks"]["2,0"] == 1
    assert t["m_section_ranks"]["1,0"] == 2


def test_rr_examples():
    q1 = quotient(3, 1)
    g = q1.group
    assert rr_rank(q1, Subgroup.trivial(g)) == 0
    assert rr_rank(q1, Subgroup.whole(g)) == 3
    q3, s3 = quotient(3, 3), series(3, 3)
    assert rr_rank(q3, s3.p(2)) == s3.factor_ranks[1] == 3
    assert rr_kernel(q3, s3.p(2)) == s3.p(3)


def test_rr_requires_normal():
    q = quotient(3, 2)
    h = Subgroup.generated(q.group, [q.xgens[0]])
    with pytest.raises(PreconditionError):
        rr_rank(q, h)


@pytest.mark.parametrize("d,c", BUILT)
def test_rr_kernel_properties(d, c):
    q, s = quotient(d, c), series(d, c)
    for i in range(1, c + 1):
        h = s.p(i)
        if not h.is_normal():
            continue
        k = rr_kernel(q, h)
        assert k.issubset(h) and k.is_normal()
    rng = np.random.default_rng(7)
    g = q.group
    for _ in range(5):
        h = normal_closure(g, [int(rng.integers(g.order))])
        k = rr_kernel(q, h)
        assert k.issubset(h) and k.is_normal()


def test_symd_action_basic():
    q = quotient(3, 2)
    acts = symd_action(q)
    assert len(acts) == 6
    sigma0, phi0 = acts[0]
    assert sigma0 == (0, 1, 2) and np.array_equal(phi0, np.arange(q.group.order))
    t = q.group.table
    swap = dict(acts)[(1, 0, 2)]
    assert np.array_equal(swap[swap], np.arange(q.group.order))
    assert np.array_equal(swap[t], t[swap[:, None], swap[None, :]])


def test_symd_composition():
    q = quotient(3, 3)
    acts = dict(symd_action(q))
    for s, t in itertools.product(acts, repeat=2):
        # sigma then tau on generators: x_i -> x_{s(i)} -> x_{t(s(i))}
        comp = tuple(t[s[i]] for i in range(3))
        assert np.array_equal(acts[t][acts[s]], acts[comp])


def test_faithful_on_abelianisation():
    q, s = quotient(3, 3), series(3, 3)
    assert section_is_faithful(q, Subgroup.whole(q.group), s.gamma[1])
    mats, basis, coord = section_action_matrices(q, Subgroup.whole(q.group), s.gamma[1])
    assert len({m.rows for _, m in mats}) == 6


def test_faithfulness_degenerate():
    with pytest.raises(DomainError):
        faithfulness_check(quotient(3, 1), 2)
    with pytest.raises(DomainError):
        faithfulness_check(quotient(3, 3), 1)


def test_non_invariant_negative_control():
    q, s = quotient(3, 3), series(3, 3)
    sub = m_subgroup(q, 3, 2, s)
    stab = stabilising_permutations(q, sub)
    assert len(stab) < 6
    with pytest.raises(PreconditionError):
        section_is_faithful(q, sub, m_subgroup(q, 3, 3, s))


@pytest.mark.parametrize("d,c", BUILT)
def test_m_invariance(d, c):
    q, s = quotient(d, c), series(d, c)
    full = len(symd_action(q))
    for i in range(1, c + 1):
        for j in range(0, i - 1):
            assert len(stabilising_permutations(q, m_subgroup(q, i, j, s))) == full


def test_section_matrices_are_a_representation():
    q, s = quotient(3, 3), series(3, 3)
    mats, basis, coord = section_action_matrices(q, s.p(2), s.p(3))
    table = dict(mats)
    for a, b in itertools.product(table, repeat=2):
        comp = tuple(b[a[i]] for i in range(3))
        # row-vector convention: v (A B) = (v A) B
        assert (table[a] @ table[b]).rows == table[comp].rows
