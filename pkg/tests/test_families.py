import random
from math import comb

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.functions.combinatorial.numbers import stirling

from arrlevels.arrangement import Arrangement, intersection_poset, localization
from arrlevels.families import (
    ExponentialFamily,
    NotBraidDeformation,
    binom_convolution_check,
    braid,
    catalan,
    check_braid_deformation,
    chi_from_levels,
    exp_level_formula,
    ish,
    levels_from_chi,
    partition_flat,
    random_deformation,
    semiorder,
    set_partitions,
    shi,
)
from arrlevels.posets import IntPolynomial, char_poly, poset_isomorphic, product
from arrlevels.regions import level_histogram
from tests.oracles import whitney_chi


def test_generator_sizes():
    assert len(braid(3)) == 3 and braid(3).dim == 3
    assert len(shi(3)) == 6
    assert len(catalan(2)) == 3
    assert [h.a for h in catalan(2).hyperplanes] == [-1, 0, 1]
    assert len(semiorder(3)) == 6
    assert len(ish(3)) == 6


def test_ish_equations():
    # pairs in order (1,2), (1,3), (2,3); each adds x_i - x_j = 0 then x_1 - x_j = i
    rows = [(h.w, h.a) for h in ish(3).hyperplanes]
    assert rows == [
        ((1, -1, 0), 0),
        ((1, -1, 0), 1),
        ((1, 0, -1), 0),
        ((1, 0, -1), 1),
        ((0, 1, -1), 0),
        ((1, 0, -1), 2),
    ]


@pytest.mark.parametrize("gen", [braid, shi, catalan, semiorder, ish])
def test_zero_rejected(gen):
    with pytest.raises(ValueError):
        gen(0)


def test_unknown_family():
    with pytest.raises(ValueError):
        ExponentialFamily.named("linial")


@pytest.mark.parametrize("n", range(0, 8))
def test_set_partitions_count(n):
    parts = list(set_partitions(n))
    assert len(parts) == sympy.bell(n)
    for k in range(n + 1):
        assert len(list(set_partitions(n, k))) == stirling(n, k)


def test_set_partitions_are_partitions():
    for p in set_partitions(5):
        assert sorted(x for block in p for x in block) == list(range(5))


def inverted_levels(coeffs, n) -> list:
    """Histogram from a characteristic polynomial through the binomial inversion."""
    chi = lambda t: sum(a * t**d for d, a in enumerate(coeffs))
    return [(-1) ** n * sum((-1) ** k * comb(l, k) * chi(k) for k in range(l + 1)) for l in range(n + 1)]


def whitney_levels(A: Arrangement) -> list:
    return inverted_levels(whitney_chi(A), A.dim)


def test_shi4_catalan4_closed_forms():
    # closed forms: Shi(n) has chi = t (t - n)^(n-1), Catalan(n) has chi = t (t-n-1) ... (t-2n+1)
    shi4 = IntPolynomial.from_roots([0, 4, 4, 4])
    cat4 = IntPolynomial.from_roots([0, 5, 6, 7])
    assert char_poly(intersection_poset(shi(4)).poset(), 4) == shi4
    assert char_poly(intersection_poset(catalan(4)).poset(), 4) == cat4
    assert abs(shi4(-1)) == 125 and abs(cat4(-1)) == 336
    assert inverted_levels(shi4.coeffs, 4) == [0, 27, 38, 36, 24]
    assert inverted_levels(cat4.coeffs, 4) == [0, 120, 120, 72, 24]


@pytest.mark.parametrize("name", ["shi", "catalan", "semiorder"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_exp_formula_small(name, n):
    fam = ExponentialFamily.named(name)
    hist = fam.levels(n)
    assert hist == whitney_levels(fam(n))
    assert [0] + [exp_level_formula(fam, n, l) for l in range(1, n + 1)] == hist


def test_exp_formula_examples():
    fam = ExponentialFamily.named("shi")
    assert [exp_level_formula(fam, 3, l) for l in (1, 2, 3)] == [4, 6, 6]


def test_family_memo_and_base_case():
    fam = ExponentialFamily.named("shi")
    assert fam.levels(0) == [1]
    assert fam.level(0, 1) == 0
    assert fam.levels(3) is fam.levels(3)


@pytest.mark.parametrize("name", ["shi", "catalan"])
def test_convolution_small(name):
    fam = ExponentialFamily.named(name)
    for n in range(4):
        for l1 in range(4):
            for l2 in range(4 - l1):
                assert binom_convolution_check(fam, n, l1, l2).equal


def test_convolution_example():
    res = binom_convolution_check(ExponentialFamily.named("shi"), 3, 1, 1)
    assert res.lhs == res.rhs == 6


def test_chi_from_levels_examples():
    assert chi_from_levels(shi(3), [0, 4, 6, 6]) == IntPolynomial((0, 9, -6, 1))
    assert chi_from_levels(shi(2), [0, 1, 2]) == IntPolynomial((0, -2, 1))
    assert chi_from_levels(braid(3), [0, 0, 0, 6]) == IntPolynomial.from_roots([0, 1, 2])


def test_levels_from_chi_round_trip():
    for A in (shi(3), catalan(3), semiorder(3), ish(3)):
        assert levels_from_chi(A) == level_histogram(A)
        assert chi_from_levels(A, levels_from_chi(A)) == char_poly(intersection_poset(A).poset(), A.dim)


def test_non_braid_rejected():
    with pytest.raises(NotBraidDeformation):
        check_braid_deformation(Arrangement.of(2, [((1, 0), 0), ((0, 1), 0)]))
    with pytest.raises(NotBraidDeformation):
        levels_from_chi(Arrangement.of(3, [((1, 0, 0), 0)]))


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 3), st.randoms(use_true_random=False))
def test_random_deformation_levels_are_characteristic(n, rng):
    A = random_deformation(n, rng)
    assert levels_from_chi(A) == level_histogram(A)


def test_shi_ish_small():
    for n in (1, 2, 3):
        assert char_poly(intersection_poset(shi(n)).poset(), n) == char_poly(intersection_poset(ish(n)).poset(), n)
        assert level_histogram(shi(n)) == level_histogram(ish(n))


@pytest.mark.parametrize("name", ["shi", "catalan", "semiorder"])
def test_localization_is_smaller_member(name):
    """``L((A_n)_{V_S}) = L(A_|S|)`` for the flat where the coordinates in S agree."""
    fam = ExponentialFamily.named(name)
    rng = random.Random(7)
    n = 4
    for _ in range(3):
        S = sorted(rng.sample(range(n), rng.randint(2, n)))
        V = partition_flat(n, [S])
        loc = localization(fam(n), V)
        assert poset_isomorphic(intersection_poset(loc).poset(), intersection_poset(fam(len(S))).poset()) is not None


@pytest.mark.parametrize("name", ["shi", "catalan"])
def test_localization_at_partition_is_product(name):
    fam = ExponentialFamily.named(name)
    n = 4
    for blocks in ([[0, 1], [2, 3]], [[0, 2], [1, 3]], [[0, 1, 2], [3]]):
        loc = localization(fam(n), partition_flat(n, blocks))
        parts = [intersection_poset(fam(len(b))).poset() for b in blocks]
        prod = parts[0]
        for p in parts[1:]:
            prod = product(prod, p)
        assert poset_isomorphic(intersection_poset(loc).poset(), prod) is not None
