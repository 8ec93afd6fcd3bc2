import itertools
from fractions import Fraction

import pytest

from pdacache.closed_forms import (
    QZMT_SCHEMES,
    flexible,
    gaussian_binomial,
    hypergraph,
    hypergraph_alt,
    maddah_ali_niesen,
    oa_z1,
    partition,
    projective_2019,
    projective_2021,
    theorem1,
    theorem2,
    theorem3,
    theorem4,
)
from pdacache.constructions import construct_theorem1
from pdacache.oa import ParameterError
from pdacache.pda import canonicalize
from pdacache.verifier import scheme_metrics


def count_subspaces(n, k, q):
    """Brute-force count of k-dimensional subspaces of GF(q)^n (q prime)."""
    vecs = list(itertools.product(range(q), repeat=n))
    spaces = set()
    for basis in itertools.combinations(vecs, k):
        span = set()
        for coeffs in itertools.product(range(q), repeat=k):
            span.add(tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) % q for i in range(n)))
        if len(span) == q**k:
            spaces.add(frozenset(span))
    return len(spaces)


@pytest.mark.parametrize("n,k,q", [(3, 1, 2), (4, 2, 2), (3, 2, 3), (4, 1, 3), (2, 0, 2), (3, 3, 2)])
def test_gaussian_binomial_counts_subspaces(n, k, q):
    assert gaussian_binomial(n, k, q) == count_subspaces(n, k, q)


def test_gaussian_binomial_out_of_range():
    assert gaussian_binomial(3, 4, 2) == 0 and gaussian_binomial(3, -1, 2) == 0


def test_mn():
    cf = maddah_ali_niesen(10, 3)
    assert (cf.K, cf.ratio, cf.rate, cf.F) == (10, Fraction(3, 10), Fraction(7, 4), 120)
    with pytest.raises(ParameterError):
        maddah_ali_niesen(3, 3)


def test_projective_rows():
    assert projective_2019(5, 8, 2, 2).F == 3555772416
    assert projective_2019(3, 6, 2, 2).F == 26040
    cf = projective_2021(2, 3, 1, 6)
    assert (cf.K, cf.ratio, cf.rate, cf.F) == (63, Fraction(16, 21), Fraction(15, 7), 651)
    assert projective_2021(2, 4, 2, 8).F == 10795
    with pytest.raises(ParameterError):
        projective_2019(5, 6, 2, 2)
    with pytest.raises(ParameterError):
        projective_2021(2, 4, 3, 6)


def test_hypergraph_families():
    a, b = hypergraph(3, 3, 2), hypergraph_alt(3, 3, 2)
    assert a.K == b.K == 27
    assert (a.ratio, a.rate, a.F) == (Fraction(5, 9), 4, 27)
    assert (b.ratio, b.rate, b.F) == (Fraction(8, 9), Fraction(1, 4), 108)
    with pytest.raises(ParameterError):
        hypergraph(3, 2, 2)


def test_partition_and_oa_z1():
    assert partition(3, 2) == partition(3, 2)
    cf = partition(3, 2)
    assert (cf.K, cf.ratio, cf.rate, cf.F) == (9, Fraction(1, 3), 2, 9)
    assert oa_z1(9, 3, 2) == theorem1(9, 1, 3, 2)


def test_theorem1_is_flexible_divided_by_q():
    for z in range(1, 9):
        a, b = theorem1(9, z, 3, 2), flexible(9, z, 3, 2)
        assert b.F == 9 * a.F and (a.K, a.ratio, a.rate) == (b.K, b.ratio, b.rate)


def test_example_values():
    assert theorem1(5, 3, 2, 1) == type(theorem1(5, 3, 2, 1))(10, Fraction(3, 5), Fraction(1), 10)
    t2 = theorem2(5, 3, 2, 1)
    assert (t2.K, t2.F, t2.rate) == (15, 5, 2)
    t3 = theorem3(5, 2, 2, 1)
    assert (t3.ratio, t3.rate, t3.F) == (Fraction(1, 4), Fraction(15, 4), 4)
    assert theorem4(8, 4, 4, 1).F == 320


@pytest.mark.parametrize("name", sorted(QZMT_SCHEMES))
def test_registry_exact_types(name):
    cf = QZMT_SCHEMES[name](7, 5, 3, 2)
    assert isinstance(cf.ratio, Fraction) and isinstance(cf.rate, Fraction)


def test_closed_form_matches_built_array():
    for p in [(5, 3, 2, 1), (4, 2, 3, 2), (7, 6, 3, 1)]:
        cf = theorem1(*p)
        m = scheme_metrics(canonicalize(construct_theorem1(*p)))
        assert (cf.K, cf.ratio, cf.rate, cf.F) == (m.K, m.memory_ratio, m.rate, m.F)
