"""Deformations of the braid arrangement and their level identities."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Iterator, Optional, Sequence

from .arrangement import Arrangement, Hyperplane, centralize, intersection_poset
from .posets import IntPolynomial, PolyFraction, binomial_polynomial, char_poly, poset_isomorphic, zaslavsky_counts
from .regions import enumerate_regions, level_histogram


def _difference(n: int, i: int, j: int) -> tuple:
    w = [Fraction(0)] * n
    w[i], w[j] = Fraction(1), Fraction(-1)
    return tuple(w)


def deformation(n: int, offsets: Callable[[int, int], Sequence]) -> Arrangement:
    """Hyperplanes ``x_i - x_j = a`` for ``i < j`` (1-based in ``offsets``), pairs lexicographic, offsets ascending."""
    if n < 1:
        raise ValueError("n must be at least 1")
    hyps = []
    for i in range(n):
        for j in range(i + 1, n):
            for a in sorted(Fraction(x) for x in offsets(i + 1, j + 1)):
                hyps.append(Hyperplane(_difference(n, i, j), a))
    return Arrangement(n, tuple(hyps))


def braid(n: int) -> Arrangement:
    return deformation(n, lambda i, j: (0,))


def shi(n: int) -> Arrangement:
    return deformation(n, lambda i, j: (0, 1))


def catalan(n: int) -> Arrangement:
    return deformation(n, lambda i, j: (-1, 0, 1))


def semiorder(n: int) -> Arrangement:
    return deformation(n, lambda i, j: (-1, 1))


def ish(n: int) -> Arrangement:
    """``x_i - x_j = 0`` for every pair, then ``x_1 - x_j = i``, in the same pair order as ``shi``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    hyps = []
    for i in range(n):
        for j in range(i + 1, n):
            hyps.append(Hyperplane(_difference(n, i, j), Fraction(0)))
            hyps.append(Hyperplane(_difference(n, 0, j), Fraction(i + 1)))
    return Arrangement(n, tuple(hyps))


GENERATORS = {
    "braid": braid,
    "shi": shi,
    "catalan": catalan,
    "semiorder": semiorder,
    "ish": ish,
}


def set_partitions(n: int, blocks: Optional[int] = None) -> Iterator[list]:
    """Set partitions of ``{0..n-1}`` via restricted growth strings, optionally with a fixed block count."""
    if n == 0:
        if blocks in (None, 0):
            yield []
        return
    a = [0] * n

    def rec(i: int, m: int) -> Iterator[list]:
        if blocks is not None and m + (n - i) < blocks:
            return
        if i == n:
            if blocks is None or m == blocks:
                parts = [[] for _ in range(m)]
                for k, b in enumerate(a):
                    parts[b].append(k)
                yield parts
            return
        for b in range(m + 1):
            if blocks is not None and b == m and m == blocks:
                break
            a[i] = b
            yield from rec(i + 1, max(m, b + 1))

    a[0] = 0
    yield from rec(1, 1)


@dataclass
class ExponentialFamily:
    """A named sequence ``A_1, A_2, ...`` with memoized ``b`` values and level tables."""

    name: str
    generator: Callable[[int], Arrangement]
    _b: dict = field(default_factory=dict, repr=False)
    _levels: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @classmethod
    def named(cls, name: str) -> "ExponentialFamily":
        try:
            return cls(name, GENERATORS[name])
        except KeyError:
            raise ValueError(f"unknown family {name!r}; choose from {sorted(GENERATORS)}") from None

    def __call__(self, n: int) -> Arrangement:
        return self.generator(n)

    def b(self, n: int) -> int:
        with self._lock:
            if n not in self._b:
                A = self.generator(n)
                _, self._b[n] = zaslavsky_counts(intersection_poset(A).poset(), A.dim)
            return self._b[n]

    def levels(self, n: int) -> list:
        """Geometric histogram ``r_0 .. r_n`` of ``A_n``; ``A_0`` is the point with ``(1,)``."""
        with self._lock:
            if n not in self._levels:
                self._levels[n] = [1] if n == 0 else level_histogram(self.generator(n))
            return self._levels[n]

    def level(self, n: int, l: int) -> int:
        table = self.levels(n)
        return table[l] if 0 <= l < len(table) else 0


def exp_level_formula(fam: ExponentialFamily, n: int, l: int) -> int:
    """``l! * sum over partitions into l blocks of prod b(A_|block|)``."""
    total = 0
    for parts in set_partitions(n, l):
        prod = 1
        for block in parts:
            prod *= fam.b(len(block))
        total += prod
    return factorial(l) * total


@dataclass(frozen=True)
class Convolution:
    lhs: int
    rhs: int
    equal: bool


def binom_convolution_check(fam: ExponentialFamily, n: int, l1: int, l2: int) -> Convolution:
    lhs = fam.level(n, l1 + l2)
    rhs = sum(comb(n, i) * fam.level(i, l1) * fam.level(n - i, l2) for i in range(n + 1))
    return Convolution(lhs, rhs, lhs == rhs)


class NotBraidDeformation(ValueError):
    pass


def check_braid_deformation(A: Arrangement) -> None:
    """Raise unless the centralization's intersection poset is that of ``Braid(dim)``."""
    n = A.dim
    if n < 1:
        raise NotBraidDeformation("dimension must be at least 1")
    got = intersection_poset(centralize(A)).poset()
    want = intersection_poset(braid(n)).poset()
    if poset_isomorphic(got, want) is None:
        raise NotBraidDeformation("centralization is not isomorphic to the braid arrangement")


def chi_from_levels(A: Arrangement, levels: Optional[Sequence[int]] = None) -> IntPolynomial:
    """``sum_l (-1)^(n-l) r_l C(t, l)`` from the geometric histogram."""
    check_braid_deformation(A)
    n = A.dim
    levels = level_histogram(A) if levels is None else levels
    total = PolyFraction(IntPolynomial())
    for l, r in enumerate(levels):
        total = total + binomial_polynomial(l).scale((-1) ** (n - l) * r)
    return total.as_int_polynomial()


def levels_from_chi(A: Arrangement, chi: Optional[IntPolynomial] = None) -> list:
    """``r_l = (-1)^n sum_k (-1)^k C(l, k) chi(k)``."""
    check_braid_deformation(A)
    n = A.dim
    if chi is None:
        chi = char_poly(intersection_poset(A).poset(), n)
    return [(-1) ** n * sum((-1) ** k * comb(l, k) * chi(k) for k in range(l + 1)) for l in range(n + 1)]


def random_deformation(n: int, rng, max_offsets: int = 2, span: int = 3) -> Arrangement:
    """Nondegenerate braid deformation with 1..max_offsets small rational offsets per pair."""
    def offsets(i, j):
        pool = {Fraction(rng.randint(-span * 2, span * 2), rng.choice((1, 2))) for _ in range(max_offsets)}
        return sorted(pool)

    return deformation(n, offsets)


def partition_flat(n: int, blocks: Sequence[Sequence[int]]):
    """Linear flat where coordinates in the same block agree."""
    from .arrangement import Flat

    rows = []
    for block in blocks:
        for k in block[1:]:
            rows.append(_difference(n, block[0], k) + (Fraction(0),))
    return Flat.from_equations(n, rows)
