"""Exact rational linear algebra and linear-inequality feasibility.

Scalars are :class:`fractions.Fraction`.  Matrices are tuples of row tuples.
Feasibility of mixed strict / non-strict systems is decided by
Fourier-Motzkin elimination over integer-scaled rows, with strictness carried
through every combination, so no epsilon ever appears.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

Rational = Fraction
RatVector = tuple  # tuple[Fraction, ...]
RatMatrix = tuple  # tuple[RatVector, ...]

EQ = "="
GE = ">="
GT = ">"
RELATIONS = (EQ, GE, GT)


def as_rational(x) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def vector(values: Iterable) -> tuple:
    return tuple(as_rational(v) for v in values)


def matrix(rows: Iterable[Iterable]) -> tuple:
    return tuple(vector(r) for r in rows)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# --------------------------------------------------------------------------
# Row reduction


def rref(m: Sequence[Sequence]) -> tuple[tuple, int]:
    """Reduced row echelon form of ``m`` and its rank.

    Zero rows are kept at the bottom so the shape of the input is preserved.
    """
    rows = [list(vector(r)) for r in m]
    if not rows:
        return (), 0
    ncols = len(rows[0])
    pivot_row = 0
    for col in range(ncols):
        pr = next((r for r in range(pivot_row, len(rows)) if rows[r][col] != 0), None)
        if pr is None:
            continue
        rows[pivot_row], rows[pr] = rows[pr], rows[pivot_row]
        piv = rows[pivot_row][col]
        if piv != 1:
            rows[pivot_row] = [x / piv for x in rows[pivot_row]]
        prow = rows[pivot_row]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], prow)]
        pivot_row += 1
        if pivot_row == len(rows):
            break
    return tuple(tuple(r) for r in rows), pivot_row


def rank(m: Sequence[Sequence]) -> int:
    return rref(m)[1]


def pivot_columns(reduced: Sequence[Sequence]) -> list[int]:
    cols = []
    for row in reduced:
        c = next((j for j, x in enumerate(row) if x != 0), None)
        if c is None:
            break
        cols.append(c)
    return cols


def null_space(m: Sequence[Sequence], ncols: int) -> list[tuple]:
    """Basis of ``{x : m x = 0}``, one vector per free column of the RREF."""
    reduced, r = rref(m) if m else ((), 0)
    pivots = pivot_columns(reduced[:r])
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def row_space(m: Sequence[Sequence]) -> list[tuple]:
    reduced, r = rref(m) if m else ((), 0)
    return [tuple(row) for row in reduced[:r]]


# --------------------------------------------------------------------------
# Linear systems


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    relation: str
    rhs: Fraction

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")

    def holds(self, x: Sequence) -> bool:
        lhs = dot(self.coeffs, x)
        if self.relation == EQ:
            return lhs == self.rhs
        if self.relation == GE:
            return lhs >= self.rhs
        return lhs > self.rhs


@dataclass(frozen=True)
class LinearSystem:
    """Conjunction of constraints ``coeffs . x REL rhs`` in ``dim`` variables."""

    dim: int
    constraints: tuple = field(default=())

    def __post_init__(self):
        for c in self.constraints:
            if len(c.coeffs) != self.dim:
                raise ValueError(f"constraint has {len(c.coeffs)} coefficients, expected {self.dim}")

    @classmethod
    def build(cls, dim: int, rows: Iterable[tuple]) -> "LinearSystem":
        """``rows`` are ``(coeffs, relation, rhs)`` triples; ``<`` and ``<=`` are negated."""
        out = []
        for coeffs, rel, rhs in rows:
            coeffs, rhs = vector(coeffs), as_rational(rhs)
            if rel in ("<", "<="):
                coeffs, rhs = tuple(-c for c in coeffs), -rhs
                rel = GT if rel == "<" else GE
            out.append(Constraint(coeffs, rel, rhs))
        return cls(dim, tuple(out))

    def extend(self, *more: Constraint) -> "LinearSystem":
        return LinearSystem(self.dim, self.constraints + tuple(more))

    def satisfied_by(self, x: Sequence) -> bool:
        return all(c.holds(x) for c in self.constraints)


# --------------------------------------------------------------------------
# Affine solution sets


@dataclass(frozen=True)
class AffineSolution:
    """Nonempty solution set of ``A x = b`` in canonical (RREF, zero rows dropped) form."""

    dim: int
    canon: tuple  # rows (a_1..a_n, b)

    @property
    def rank(self) -> int:
        return len(self.canon)

    def point(self) -> tuple:
        """The particular solution with every free variable set to 0."""
        x = [Fraction(0)] * self.dim
        for row in self.canon:
            pc = next(j for j in range(self.dim) if row[j] != 0)
            x[pc] = row[-1]
        return tuple(x)

    def directions(self) -> list[tuple]:
        return null_space([row[:-1] for row in self.canon], self.dim)


def canonical_equalities(dim: int, rows: Iterable[tuple]) -> Optional[tuple]:
    """RREF of the augmented system ``[a | b]``, or None when inconsistent."""
    aug = [tuple(r) for r in rows]
    if not aug:
        return ()
    reduced, r = rref(aug)
    canon = reduced[:r]
    for row in canon:
        if all(x == 0 for x in row[:dim]):
            return None
    return tuple(canon)


def solve_affine(system: LinearSystem) -> Optional[AffineSolution]:
    """Solution set of an all-equality system; None when it is empty."""
    if any(c.relation != EQ for c in system.constraints):
        raise ValueError("solve_affine accepts equality constraints only")
    canon = canonical_equalities(system.dim, (c.coeffs + (c.rhs,) for c in system.constraints))
    if canon is None:
        return None
    return AffineSolution(system.dim, canon)


# --------------------------------------------------------------------------
# Fourier-Motzkin feasibility
#
# Internal rows are (coeffs: tuple[int], rhs: Fraction, strict: bool) meaning
# coeffs . x >= rhs (or > rhs when strict), with coeffs primitive.


def _integer_row(coeffs: Sequence[Fraction], rhs: Fraction) -> tuple[tuple, Fraction]:
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if g == 0:
        return tuple(ints), rhs * den
    return tuple(c // g for c in ints), rhs * den / g


class _Infeasible(Exception):
    pass


def _add_row(table: dict, coeffs: tuple, rhs: Fraction, strict: bool) -> None:
    if not any(coeffs):
        if rhs > 0 or (strict and rhs == 0):
            raise _Infeasible
        return
    old = table.get(coeffs)
    if old is None or rhs > old[0] or (rhs == old[0] and strict and not old[1]):
        table[coeffs] = (rhs, strict)


def _normalized(coeffs: list[int], rhs: Fraction) -> tuple[tuple, Fraction]:
    g = 0
    for c in coeffs:
        g = gcd(g, c)
    if g > 1:
        return tuple(c // g for c in coeffs), rhs / g
    return tuple(coeffs), rhs


def _choose_value(lower: list, upper: list) -> Fraction:
    lo = hi = None
    lo_strict = hi_strict = False
    for v, s in lower:
        if lo is None or v > lo or (v == lo and s):
            lo, lo_strict = v, s
    for v, s in upper:
        if hi is None or v < hi or (v == hi and s):
            hi, hi_strict = v, s
    if lo is None and hi is None:
        return Fraction(0)
    if hi is None:
        if not lo_strict:
            return lo
        return Fraction(lo.__floor__() + 1)
    if lo is None:
        if not hi_strict:
            return hi
        return Fraction(hi.__ceil__() - 1)
    if lo == hi:
        return lo
    # prefer an integer strictly inside the interval, else the midpoint
    cand = Fraction(lo.__floor__() + 1)
    if cand < hi:
        return cand
    return (lo + hi) / 2


def feasible(system: LinearSystem) -> Optional[tuple]:
    """Exact witness satisfying every constraint, or None if the system is infeasible."""
    n = system.dim
    table: dict = {}
    try:
        for c in system.constraints:
            coeffs, rhs = _integer_row(c.coeffs, c.rhs)
            if c.relation == EQ:
                _add_row(table, coeffs, rhs, False)
                _add_row(table, tuple(-x for x in coeffs), -rhs, False)
            else:
                _add_row(table, coeffs, rhs, c.relation == GT)

        remaining = set(range(n))
        stages = []
        while remaining:
            rows = list(table.items())
            best = None
            for j in remaining:
                pos = sum(1 for co, _ in rows if co[j] > 0)
                neg = sum(1 for co, _ in rows if co[j] < 0)
                cost = pos * neg - pos - neg
                if best is None or cost < best[0]:
                    best = (cost, j)
            j = best[1]
            remaining.discard(j)
            lower, upper, rest = [], [], {}
            for co, (rhs, strict) in rows:
                if co[j] > 0:
                    lower.append((co, rhs, strict))
                elif co[j] < 0:
                    upper.append((co, rhs, strict))
                else:
                    rest[co] = (rhs, strict)
            stages.append((j, lower, upper))
            table = rest
            for cl, rl, sl in lower:
                p = cl[j]
                for cu, ru, su in upper:
                    q = -cu[j]
                    coeffs = [q * a + p * b for a, b in zip(cl, cu)]
                    coeffs, rhs = _normalized(coeffs, q * rl + p * ru)
                    _add_row(table, coeffs, rhs, sl or su)
    except _Infeasible:
        return None
    # every variable eliminated; leftover rows were checked on insertion
    x = [Fraction(0)] * n
    for j, lower, upper in reversed(stages):
        lo, hi = [], []
        for co, rhs, strict in lower:
            rest = sum((co[i] * x[i] for i in range(n) if i != j and co[i]), Fraction(0))
            lo.append(((rhs - rest) / co[j], strict))
        for co, rhs, strict in upper:
            rest = sum((co[i] * x[i] for i in range(n) if i != j and co[i]), Fraction(0))
            hi.append(((rhs - rest) / co[j], strict))
        x[j] = _choose_value(lo, hi)
    witness = tuple(x)
    assert system.satisfied_by(witness), "Fourier-Motzkin witness failed its own recheck"
    return witness


def implicit_equalities(cone: LinearSystem) -> frozenset:
    """Indices of ``coeffs . x >= 0`` constraints that hold with equality on the whole cone."""
    for c in cone.constraints:
        if c.relation != GE or c.rhs != 0:
            raise ValueError("implicit_equalities expects a homogeneous system of >= 0 constraints")
    undecided = set(range(len(cone.constraints)))
    strict_somewhere = set()
    zero = Fraction(0)
    while undecided:
        i = min(undecided)
        probe = cone.extend(Constraint(cone.constraints[i].coeffs, GT, zero))
        w = feasible(probe)
        if w is None:
            undecided.discard(i)
            continue
        # the witness certifies strictness for every row it already makes positive
        for k in list(undecided):
            if dot(cone.constraints[k].coeffs, w) > 0:
                undecided.discard(k)
                strict_somewhere.add(k)
    return frozenset(range(len(cone.constraints))) - strict_somewhere
