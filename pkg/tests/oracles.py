"""Independent reference computations used only by the tests.

Nothing here calls into the package's linear algebra: floating LPs come from
scipy, exact ranks from sympy, and the combinatorics are brute force.
"""

from __future__ import annotations

from itertools import combinations, product

import sympy
from hypothesis import strategies as st
from scipy.optimize import linprog

from arrlevels.arrangement import Arrangement, Hyperplane
from arrlevels.ratlin import EQ, GT

TOL = 1e-7


def lp_feasible(system) -> bool:
    """Max slack ``t`` over ``coeffs.x (-t if strict) REL rhs`` with ``0 <= t <= 1``."""
    n = system.dim
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    strict = False
    for c in system.constraints:
        row = [float(x) for x in c.coeffs]
        if c.relation == EQ:
            A_eq.append(row + [0.0])
            b_eq.append(float(c.rhs))
        else:
            s = 1.0 if c.relation == GT else 0.0
            strict |= c.relation == GT
            A_ub.append([-x for x in row] + [s])
            b_ub.append(-float(c.rhs))
    res = linprog(
        c=[0.0] * n + [-1.0],
        A_ub=A_ub or None,
        b_ub=b_ub or None,
        A_eq=A_eq or None,
        b_eq=b_eq or None,
        bounds=[(None, None)] * n + [(0, 1)],
        method="highs",
    )
    if res.status != 0:
        return False
    return (-res.fun > TOL) if strict else True


def lp_implicit_equalities(coeff_rows, dim) -> frozenset:
    """Rows ``c`` of ``{v : c.v >= 0}`` whose maximum over the box is 0."""
    rows = [[float(x) for x in r] for r in coeff_rows]
    out = set()
    for i, r in enumerate(rows):
        res = linprog(
            c=[-x for x in r],
            A_ub=[[-x for x in q] for q in rows],
            b_ub=[0.0] * len(rows),
            bounds=[(-1, 1)] * dim,
            method="highs",
        )
        if -res.fun < TOL:
            out.add(i)
    return frozenset(out)


def sympy_rank(rows, ncols) -> int:
    if not rows:
        return 0
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows]).rank()


def brute_force_flats(A: Arrangement) -> dict:
    """``{frozenset of hyperplanes containing the flat: rank}`` over all consistent subsets."""
    n = A.dim
    flats = {frozenset(): 0}
    hyps = A.hyperplanes
    for r in range(1, len(hyps) + 1):
        for S in combinations(range(len(hyps)), r):
            M = [hyps[i].w for i in S]
            aug = [hyps[i].w + (hyps[i].a,) for i in S]
            rk = sympy_rank(M, n)
            if rk != sympy_rank(aug, n + 1):
                continue
            closure = frozenset(
                j
                for j in range(len(hyps))
                if sympy_rank(aug + [hyps[j].w + (hyps[j].a,)], n + 1) == rk
            )
            flats[closure] = rk
    return flats


def whitney_chi(A: Arrangement) -> list:
    """Coefficients (ascending) of ``sum over central subsets S of (-1)^|S| t^(n - rank S)``."""
    n = A.dim
    coeffs = [0] * (n + 1)
    hyps = A.hyperplanes
    for r in range(len(hyps) + 1):
        for S in combinations(range(len(hyps)), r):
            M = [hyps[i].w for i in S]
            aug = [hyps[i].w + (hyps[i].a,) for i in S]
            rk = sympy_rank(M, n)
            if rk == sympy_rank(aug, n + 1):
                coeffs[n - rk] += (-1) ** r
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def brute_force_regions(A: Arrangement) -> list:
    """Sign vectors of all nonempty open cells, by scanning every sign pattern with an LP."""
    from arrlevels.regions import sign_system

    out = []
    for sign in product((1, -1), repeat=len(A)):
        if lp_feasible(sign_system(A, sign)):
            out.append(sign)
    return out


def brute_force_level(A: Arrangement, sign) -> int:
    rows = [tuple(s * x for x in h.w) for h, s in zip(A.hyperplanes, sign)]
    eq = lp_implicit_equalities(rows, A.dim)
    return A.dim - sympy_rank([A.hyperplanes[i].w for i in eq], A.dim)


def hall_mobius(leq, elements, s, t) -> int:
    """Philip Hall: sum over strict chains ``s = x_0 < ... < x_k = t`` of ``(-1)^k``."""
    if s == t:
        return 1
    if not leq(s, t):
        return 0
    between = [x for x in elements if x not in (s, t) and leq(s, x) and leq(x, t)]

    def chains_from(x) -> int:
        total = -1  # step x -> t directly
        for y in between:
            if y != x and leq(x, y):
                total -= chains_from(y)
        return total

    return chains_from(s)


@st.composite
def arrangements(draw, dims=(1, 2, 3), max_hyperplanes=5, bound=3):
    n = draw(st.sampled_from(dims))
    k = draw(st.integers(0, max_hyperplanes))
    hyps, keys = [], set()
    for _ in range(k):
        w = draw(st.lists(st.integers(-bound, bound), min_size=n, max_size=n).filter(any))
        a = draw(st.integers(-bound, bound))
        h = Hyperplane.of(w, a)
        if h.key() not in keys:
            keys.add(h.key())
            hyps.append(h)
    return Arrangement(n, tuple(hyps))
