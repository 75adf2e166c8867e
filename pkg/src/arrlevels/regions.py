"""Regions of real arrangements and their levels.

Regions are enumerated by incremental hyperplane insertion, each carrying an
exact witness point.  The level of a region is the dimension of the span of
its recession cone ``{v : sigma_i (w_i . v) >= 0}``; that span is a flat of the
centralization.  ``phi_split``/``psi_join`` split a region into a region of the
restricted centralization and a relatively bounded region of the localization,
and glue such pairs back.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import ratlin
from .arrangement import (
    Arrangement,
    Flat,
    IntersectionPoset,
    centralize,
    intersection_poset,
    localization,
    orientation,
    restriction,
)
from .posets import IntPolynomial, PolyFraction, char_poly, zaslavsky_counts
from .ratlin import GE, GT, Constraint, LinearSystem, dot


@dataclass(frozen=True)
class Region:
    sign: tuple  # +1 / -1 per hyperplane
    witness: tuple

    @property
    def sign_string(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.sign)


@dataclass(frozen=True)
class RecessionCone:
    system: LinearSystem  # sigma_i (w_i . v) >= 0
    implicit_eq: frozenset
    span_flat: Flat
    flat_index: Optional[int] = None

    @property
    def level(self) -> int:
        return self.span_flat.dim


def sign_system(A: Arrangement, sign: Sequence[int]) -> LinearSystem:
    """``sigma_i (w_i . x - a_i) > 0`` for every hyperplane."""
    cons = []
    for h, s in zip(A.hyperplanes, sign):
        cons.append(Constraint(tuple(s * x for x in h.w), GT, s * h.a))
    return LinearSystem(A.dim, tuple(cons))


def region_from_sign(A: Arrangement, sign: Sequence[int]) -> Optional[Region]:
    w = ratlin.feasible(sign_system(A, sign))
    return None if w is None else Region(tuple(sign), w)


def enumerate_regions(A: Arrangement) -> list:
    """All regions, sorted by sign string (``+`` before ``-``)."""
    cells = [((), (Fraction(0),) * A.dim)]
    for i, h in enumerate(A.hyperplanes):
        prefix = Arrangement(A.dim, A.hyperplanes[: i + 1])
        nxt = []
        for sign, wit in cells:
            v = h.value(wit)
            for s in (1, -1):
                if v * s > 0:
                    nxt.append((sign + (s,), wit))
                    continue
                w = ratlin.feasible(sign_system(prefix, sign + (s,)))
                if w is not None:
                    nxt.append((sign + (s,), w))
        cells = nxt
    regions = [Region(s, w) for s, w in cells]
    regions.sort(key=lambda r: r.sign_string)
    return regions


def cone_system(A: Arrangement, sign: Sequence[int]) -> LinearSystem:
    cons = tuple(Constraint(tuple(s * x for x in h.w), GE, Fraction(0)) for h, s in zip(A.hyperplanes, sign))
    return LinearSystem(A.dim, cons)


def recession_cone(
    A: Arrangement, R: Region, central_lattice: Optional[IntersectionPoset] = None
) -> RecessionCone:
    """Recession cone in implicit form, with its span located among the central flats."""
    system = cone_system(A, R.sign)
    eq = ratlin.implicit_equalities(system)
    span = Flat.from_equations(A.dim, (A.hyperplanes[i].w + (Fraction(0),) for i in sorted(eq)))
    if central_lattice is None:
        central_lattice = intersection_poset(centralize(A))
    idx = central_lattice.find(span)
    assert idx is not None, "span of a recession cone must be a flat of the centralization"
    return RecessionCone(system, eq, span, idx)


def level_histogram(A: Arrangement, regions: Optional[list] = None) -> list:
    """``r_0 .. r_n`` from the regions themselves, indexed by ambient dimension."""
    regions = enumerate_regions(A) if regions is None else regions
    out = [0] * (A.dim + 1)
    for R in regions:
        eq = ratlin.implicit_equalities(cone_system(A, R.sign))
        rk = ratlin.rank([A.hyperplanes[i].w for i in eq]) if eq else 0
        out[A.dim - rk] += 1
    return out


class _CentralData:
    """Intersection posets of ``A`` and its centralization plus the index bookkeeping."""

    def __init__(self, A: Arrangement):
        self.A = A
        self.central = centralize(A)
        self.LA = intersection_poset(A)
        self.LC = intersection_poset(self.central)
        # original hyperplane index -> centralized atom
        self.class_of = {}
        for j, pre in enumerate(self.central.origin):
            for i in pre:
                self.class_of[i] = j

    def parallel_indices(self, v: int) -> frozenset:
        """Hyperplanes of ``A`` whose centralization contains central flat ``v``."""
        atoms = self.LC.atoms[v]
        return frozenset(i for i, j in self.class_of.items() if j in atoms)

    def r_restricted(self, v: int) -> int:
        P, _ = self.LC.poset().filter_above(v)
        r, _ = zaslavsky_counts(P, self.LC.flats[v].dim)
        return r

    def b_localized(self, v: int) -> int:
        allowed = self.parallel_indices(v)
        P, _ = self.LA.poset().subposet(self.LA.ideal_within(allowed))
        _, b = zaslavsky_counts(P, self.A.dim)
        return b


def levels_via_formula(A: Arrangement) -> list:
    """``r_0 .. r_n`` from intersection posets alone: sum over central flats of ``r(res) * b(loc)``."""
    data = _CentralData(A)
    out = [0] * (A.dim + 1)
    for v, flat in enumerate(data.LC.flats):
        out[flat.dim] += data.r_restricted(v) * data.b_localized(v)
    return out


def flat_counts(A: Arrangement) -> dict:
    """``{central flat index: r(restriction) * b(localization)}``."""
    data = _CentralData(A)
    return {v: data.r_restricted(v) * data.b_localized(v) for v in range(len(data.LC))}


# --------------------------------------------------------------------------
# The split / join bijection


class BijectionError(RuntimeError):
    pass


@dataclass(frozen=True)
class SplitParts:
    V: Flat
    restricted: Arrangement  # restriction(centralize(A), V), chart coordinates on V
    localized: Arrangement  # localization(A, V), original indices in .origin
    region_u: Region
    region_b: Region


def _parts(A: Arrangement, V: Flat) -> tuple:
    central = centralize(A)
    res = restriction(central, V)
    loc = localization(A, V)
    # original index -> restricted hyperplane index
    to_res = {}
    for j, pre in enumerate(res.origin):
        for c in pre:
            for i in central.origin[c]:
                to_res[i] = j
    return central, res, loc, to_res


def relatively_bounded(A: Arrangement, R: Region) -> bool:
    """True when every cone inequality is an implicit equality."""
    eq = ratlin.implicit_equalities(cone_system(A, R.sign))
    return len(eq) == len(A.hyperplanes)


def phi_split(A: Arrangement, V: Flat, R: Region) -> SplitParts:
    cone = recession_cone(A, R)
    if cone.span_flat != V:
        raise ValueError("region's recession cone does not span the given flat")
    central, res, loc, to_res = _parts(A, V)
    chart = V.chart()
    sign_u = [0] * len(res)
    for i, j in to_res.items():
        s = R.sign[i] * orientation(A.hyperplanes[i], chart, res.hyperplanes[j])
        if sign_u[j] not in (0, s):
            raise BijectionError(f"hyperplanes restricting to {j} disagree on the side of the region")
        sign_u[j] = s
    R_u = region_from_sign(res, sign_u)
    sign_b = tuple(R.sign[pre[0]] for pre in loc.origin)
    R_b = region_from_sign(loc, sign_b)
    if R_u is None or R_b is None:
        raise BijectionError("split produced an empty region")
    if not relatively_bounded(loc, R_b):
        raise BijectionError("localized region is not relatively bounded")
    return SplitParts(V, res, loc, R_u, R_b)


def psi_join(A: Arrangement, V: Flat, R_u: Region, R_b: Region) -> Region:
    central, res, loc, to_res = _parts(A, V)
    chart = V.chart()
    sign = [0] * len(A)
    for i, j in to_res.items():
        sign[i] = R_u.sign[j] * orientation(A.hyperplanes[i], chart, res.hyperplanes[j])
    for pos, pre in enumerate(loc.origin):
        sign[pre[0]] = R_b.sign[pos]
    if 0 in sign:
        raise BijectionError("a hyperplane is neither restricted nor localized")
    R = region_from_sign(A, sign)
    if R is None:
        raise BijectionError("glued sign vector is infeasible")
    if recession_cone(A, R).span_flat != V:
        raise BijectionError("glued region has the wrong recession span")
    return R


# --------------------------------------------------------------------------
# Characteristic polynomial as a sum over regions


def chi_via_regions(A: Arrangement, regions: Optional[list] = None) -> PolyFraction:
    """``(-1)^n sum_R chi_res(t) / chi_res(-1)`` with ``res`` the centralization restricted to ``V_R``."""
    regions = enumerate_regions(A) if regions is None else regions
    LC = intersection_poset(centralize(A))
    per_flat: dict = {}
    for R in regions:
        v = recession_cone(A, R, LC).flat_index
        per_flat[v] = per_flat.get(v, 0) + 1
    total = PolyFraction(IntPolynomial())
    for v, count in sorted(per_flat.items()):
        P, _ = LC.poset().filter_above(v)
        p = char_poly(P, LC.flats[v].dim)
        total = total + PolyFraction(p * count, p(-1))
    return total.scale((-1) ** A.dim)
