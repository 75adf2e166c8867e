"""The ten acceptance criteria, each exact (tolerance 0) and timed.

Run directly (``python tests/test_acceptance.py``) or through pytest; either
way the terminal summary ends with one PASS/FAIL line per criterion.
"""

import random
import time
from pathlib import Path

import pytest

import arrlevels
from arrlevels import checks
from arrlevels.arrangement import centralize, essentialize, intersection_poset, parse_arrangement
from arrlevels.families import (
    ExponentialFamily,
    binom_convolution_check,
    braid,
    catalan,
    chi_from_levels,
    exp_level_formula,
    ish,
    levels_from_chi,
    shi,
)
from arrlevels.posets import IntPolynomial, char_poly, parse_poset, zaslavsky_counts
from arrlevels.regions import chi_via_regions, enumerate_regions, level_histogram, levels_via_formula
from arrlevels.semilattice import (
    GeometricSemilattice,
    chi_identity_check,
    cone,
    delete_filter,
    fano_flats,
    is_atomistic_lattice,
    is_semimodular,
    level_distribution,
    uniform_matroid_flats,
)

CORPUS = Path(arrlevels.__file__).parent / "corpus"
ARRANGEMENTS = {p.stem: parse_arrangement(p.read_text()) for p in sorted(CORPUS.glob("*.arr"))}
POSETS = {
    p.stem: GeometricSemilattice.from_atom_poset(parse_poset(p.read_text())) for p in sorted(CORPUS.glob("*.poset"))
}


def L_of(A):
    return GeometricSemilattice.from_intersection_poset(intersection_poset(A))


def corpus_semilattices():
    return [L_of(A) for A in ARRANGEMENTS.values()] + list(POSETS.values())


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.1f}s, limit {self.limit}s"


def test_criterion_01_braid3():
    """Braid(3): chi, r = 6, b = 0, histogram (0,0,0,6), both paths agree"""
    with Timer(1.0):
        A = braid(3)
        P = intersection_poset(A).poset()
        assert char_poly(P, 3) == IntPolynomial((0, 2, -3, 1))
        assert zaslavsky_counts(P, 3) == (6, 0)
        assert level_histogram(A) == [0, 0, 0, 6] == levels_via_formula(A)


def test_criterion_02_shi3():
    """Shi(3): 16 regions, histogram (0,4,6,6) both ways, chi reconstructed and inverted"""
    with Timer(5.0):
        A = shi(3)
        regions = enumerate_regions(A)
        assert len(regions) == 16
        hist = level_histogram(A, regions)
        assert hist == [0, 4, 6, 6] == levels_via_formula(A)
        chi = chi_from_levels(A, hist)
        assert chi == IntPolynomial((0, 9, -6, 1))
        assert levels_from_chi(A, chi) == hist


def test_criterion_03_catalan3():
    """Catalan(3): 30 regions, histogram (0,12,12,6), both paths agree"""
    with Timer(10.0):
        A = catalan(3)
        regions = enumerate_regions(A)
        assert len(regions) == 30
        assert level_histogram(A, regions) == [0, 12, 12, 6] == levels_via_formula(A)


def test_criterion_04_fuzz():
    """Fuzz: 100 random arrangements, formula = enumeration and boundary identities"""
    rng = random.Random(20261018)
    with Timer(120.0):
        for k in range(100):
            A = checks.random_arrangement(rng, dim=rng.randint(2, 3), max_hyperplanes=6, bound=5)
            assert 2 <= A.dim <= 3 and len(A) <= 6
            regions = enumerate_regions(A)
            hist = level_histogram(A, regions)
            assert levels_via_formula(A) == hist, f"case {k}"
            r, b = zaslavsky_counts(intersection_poset(A).poset(), A.dim)
            assert sum(hist) == r == len(regions)
            assert hist[A.dim - A.rank] == b
            assert hist[A.dim] == zaslavsky_counts(intersection_poset(centralize(A)).poset(), A.dim)[0]


def test_criterion_05_bijection():
    """Bijection: psi(phi(R)) = R for every corpus region; per-flat counts r * b"""
    with Timer(60.0):
        for name, A in ARRANGEMENTS.items():
            assert checks.check_bijection(A, enumerate_regions(A)) is None, name


def test_criterion_06_cone():
    """Cone: matches the geometric cone with a0 -> H0, Wachs round trips, lattice and closure laws"""
    for name, A in ARRANGEMENTS.items():
        assert checks.check_cone_equivalence(A) is None, name
    for m in range(1, 7):
        for k in range(1, min(3, m) + 1):
            L = uniform_matroid_flats(k, m)
            for a in range(L.num_atoms):
                assert checks.wachs_round_trip(L, a) is None, (k, m, a)
    semis = corpus_semilattices() + [delete_filter(uniform_matroid_flats(3, 6), 0), delete_filter(fano_flats(), 0)]
    for M in semis:
        cM = cone(M)
        P = cM.poset()
        assert P.is_graded() and is_atomistic_lattice(P, cM.elements) and is_semimodular(cM)
    small = [M for M in semis if M.num_atoms + 1 <= 8]
    assert len(small) >= 10
    for M in small:
        assert checks.check_closure_laws(M, max_atoms=8) is None
        assert checks.check_covering(M) is None


def test_criterion_07_chi_identity():
    """Chi identity on every corpus semilattice and L - L^a; chi as a sum over regions"""
    extra = [delete_filter(uniform_matroid_flats(k, m), a) for k in (2, 3) for m in range(k + 1, 7) for a in range(m)]
    extra += [delete_filter(fano_flats(), a) for a in range(7)]
    for M in corpus_semilattices() + extra:
        res = chi_identity_check(M)
        assert res.lhs == res.rhs
    for name, A in ARRANGEMENTS.items():
        got = chi_via_regions(A)
        assert got.den == 1 and got.num == char_poly(intersection_poset(A).poset(), A.dim), name


def test_criterion_08_exponential():
    """Exponential families n <= 4: partition formula, convolution, Shi = Ish"""
    with Timer(180.0):
        fams = {name: ExponentialFamily.named(name) for name in ("shi", "catalan", "semiorder")}
        for name, fam in fams.items():
            for n in range(1, 5):
                hist = fam.levels(n)
                assert [0] + [exp_level_formula(fam, n, l) for l in range(1, n + 1)] == hist, (name, n)
        assert sum(fams["shi"].levels(4)) == 125
        assert sum(fams["catalan"].levels(4)) == 336
        for name, fam in fams.items():
            for n in range(5):
                for l1 in range(4):
                    for l2 in range(4 - l1):
                        assert binom_convolution_check(fam, n, l1, l2).equal, (name, n, l1, l2)
        for n in range(1, 5):
            assert char_poly(intersection_poset(shi(n)).poset(), n) == char_poly(intersection_poset(ish(n)).poset(), n)
            assert fams["shi"].levels(n) == level_histogram(ish(n))


def test_criterion_09_not_characteristic():
    """Same chi t^2 - 3t + 2, different histograms (0,2,4) and (0,0,6)"""
    A1, A2 = ARRANGEMENTS["fig1_parallel"], ARRANGEMENTS["fig1_concurrent"]
    chi = IntPolynomial((2, -3, 1))
    assert char_poly(intersection_poset(A1).poset(), 2) == chi == char_poly(intersection_poset(A2).poset(), 2)
    assert level_histogram(A1) == [0, 2, 4]
    assert level_histogram(A2) == [0, 0, 6]


def test_criterion_10_index_shift():
    """Semilattice levels (rank-indexed) equal the essentialized histogram on the corpus"""
    for name, A in ARRANGEMENTS.items():
        assert level_distribution(L_of(A)) == level_histogram(essentialize(A)), name
        assert level_histogram(A)[A.dim - A.rank :] == level_distribution(L_of(A)), name


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
