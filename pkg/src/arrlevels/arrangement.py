"""Hyperplane arrangements, flats and intersection posets.

Also the derived arrangements: centralization, restriction, localization,
essentialization and the cone, plus the plain-text arrangement format::

    dim 2
    h 1 -1 = 0      # x1 - x2 = 0
    h 1 -1 = 1/2
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import ratlin
from .ratlin import as_rational, dot, format_rational


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Hyperplane:
    """The set ``{x : w . x = a}``."""

    w: tuple
    a: Fraction

    def __post_init__(self):
        if not any(self.w):
            raise ValueError("hyperplane normal must be nonzero")

    @classmethod
    def of(cls, w: Iterable, a) -> "Hyperplane":
        return cls(ratlin.vector(w), as_rational(a))

    def key(self) -> tuple:
        """Point-set identity: ``(w, a)`` scaled so the first nonzero entry of ``w`` is 1."""
        lead = next(x for x in self.w if x != 0)
        return tuple(x / lead for x in self.w) + (self.a / lead,)

    def direction_key(self) -> tuple:
        return self.key()[:-1]

    def value(self, x: Sequence) -> Fraction:
        return dot(self.w, x) - self.a


def _identity_origin(k: int) -> tuple:
    return tuple((i,) for i in range(k))


@dataclass(frozen=True)
class Arrangement:
    """Ordered hyperplanes in ``dim`` coordinates.

    ``origin[j]`` lists the indices of the parent arrangement that produced
    hyperplane ``j`` (identity for arrangements built directly).
    """

    dim: int
    hyperplanes: tuple = ()
    origin: tuple = field(default=None, compare=False)

    def __post_init__(self):
        seen = {}
        for i, h in enumerate(self.hyperplanes):
            if len(h.w) != self.dim:
                raise ValueError(f"hyperplane {i} has normal of length {len(h.w)}, expected {self.dim}")
            k = h.key()
            if k in seen:
                raise ValueError(f"hyperplanes {seen[k]} and {i} are the same point set")
            seen[k] = i
        if self.origin is None:
            object.__setattr__(self, "origin", _identity_origin(len(self.hyperplanes)))

    @classmethod
    def of(cls, dim: int, rows: Iterable[tuple]) -> "Arrangement":
        """``rows`` are ``(w, a)`` pairs."""
        return cls(dim, tuple(Hyperplane.of(w, a) for w, a in rows))

    def __len__(self) -> int:
        return len(self.hyperplanes)

    @property
    def normals(self) -> list:
        return [h.w for h in self.hyperplanes]

    @property
    def rank(self) -> int:
        return ratlin.rank(self.normals) if self.hyperplanes else 0

    def is_central(self) -> bool:
        return ratlin.canonical_equalities(self.dim, (h.w + (h.a,) for h in self.hyperplanes)) is not None

    def same_hyperplanes(self, other: "Arrangement") -> bool:
        """Equality as ordered lists of point sets."""
        return self.dim == other.dim and [h.key() for h in self.hyperplanes] == [
            h.key() for h in other.hyperplanes
        ]

    def sign_vector(self, x: Sequence) -> tuple:
        """Signs of ``w_i . x - a_i``; 0 entries mean ``x`` lies on a hyperplane."""
        out = []
        for h in self.hyperplanes:
            v = h.value(x)
            out.append((v > 0) - (v < 0))
        return tuple(out)


# --------------------------------------------------------------------------
# Flats


@dataclass(frozen=True)
class Flat:
    """Nonempty affine subspace given by the canonical RREF of its equations."""

    ambient: int
    canon: tuple

    @classmethod
    def ambient_space(cls, n: int) -> "Flat":
        return cls(n, ())

    @classmethod
    def from_equations(cls, n: int, rows: Iterable[tuple]) -> Optional["Flat"]:
        canon = ratlin.canonical_equalities(n, rows)
        return None if canon is None else cls(n, canon)

    @classmethod
    def from_hyperplanes(cls, n: int, hyperplanes: Iterable[Hyperplane]) -> Optional["Flat"]:
        return cls.from_equations(n, (h.w + (h.a,) for h in hyperplanes))

    @property
    def rank(self) -> int:
        return len(self.canon)

    @property
    def dim(self) -> int:
        return self.ambient - self.rank

    def is_linear(self) -> bool:
        return all(row[-1] == 0 for row in self.canon)

    def contains_point(self, x: Sequence) -> bool:
        return all(dot(row[:-1], x) == row[-1] for row in self.canon)

    def meet_hyperplane(self, h: Hyperplane) -> Optional["Flat"]:
        return Flat.from_equations(self.ambient, list(self.canon) + [h.w + (h.a,)])

    def inside(self, h: Hyperplane) -> bool:
        """True when this flat is contained in ``h``."""
        g = self.meet_hyperplane(h)
        return g is not None and g.rank == self.rank

    def parallel_to(self, h: Hyperplane) -> bool:
        """True when every direction of this flat is orthogonal to ``h.w``."""
        return all(dot(h.w, d) == 0 for d in self.directions())

    def point(self) -> tuple:
        return ratlin.AffineSolution(self.ambient, self.canon).point()

    def directions(self) -> list:
        if not self.canon:
            return [tuple(Fraction(int(i == j)) for j in range(self.ambient)) for i in range(self.ambient)]
        return ratlin.null_space([row[:-1] for row in self.canon], self.ambient)

    def chart(self) -> tuple:
        """``(p, basis)`` with ``x = p + sum y_k basis_k`` parametrizing the flat."""
        return self.point(), self.directions()

    def linear_part(self) -> "Flat":
        return Flat(self.ambient, tuple(row[:-1] + (Fraction(0),) for row in self.canon))


# --------------------------------------------------------------------------
# Intersection poset


@dataclass
class IntersectionPoset:
    arrangement: Arrangement
    flats: list
    atoms: list  # atoms[f] = frozenset of hyperplane indices containing flat f
    index: dict  # canon -> flat index
    _poset: object = field(default=None, repr=False)

    @property
    def ranks(self) -> list:
        return [f.rank for f in self.flats]

    def rank_profile(self) -> tuple:
        top = max(self.ranks, default=0)
        return tuple(self.ranks.count(r) for r in range(top + 1))

    def __len__(self) -> int:
        return len(self.flats)

    def find(self, flat: Flat) -> Optional[int]:
        return self.index.get(flat.canon)

    def leq(self, s: int, t: int) -> bool:
        return self.atoms[s] <= self.atoms[t]

    @property
    def covers(self) -> list:
        return self.poset().covers

    def poset(self):
        from .posets import RankedPoset

        if self._poset is None:
            self._poset = RankedPoset.from_atom_sets(self.atoms, self.ranks)
        return self._poset

    def filter_above(self, s: int) -> list:
        return [t for t in range(len(self.flats)) if self.atoms[s] <= self.atoms[t]]

    def ideal_within(self, allowed: frozenset) -> list:
        """Flats all of whose hyperplanes lie in ``allowed``."""
        return [t for t in range(len(self.flats)) if self.atoms[t] <= allowed]


def intersection_poset(A: Arrangement) -> IntersectionPoset:
    """Every nonempty intersection of hyperplanes of ``A``, found rank by rank."""
    n = A.dim
    bottom = Flat.ambient_space(n)
    found = {bottom.canon: bottom}
    level = [bottom]
    while level:
        nxt = {}
        for f in level:
            for h in A.hyperplanes:
                g = f.meet_hyperplane(h)
                if g is None or g.rank == f.rank or g.canon in found or g.canon in nxt:
                    continue
                nxt[g.canon] = g
        found.update(nxt)
        level = list(nxt.values())

    def atoms_of(f: Flat) -> frozenset:
        return frozenset(i for i, h in enumerate(A.hyperplanes) if f.inside(h))

    decorated = [(f.rank, tuple(sorted(atoms_of(f))), f) for f in found.values()]
    decorated.sort(key=lambda t: (t[0], t[1]))
    flats = [f for _, _, f in decorated]
    atoms = [frozenset(a) for _, a, _ in decorated]
    return IntersectionPoset(A, flats, atoms, {f.canon: i for i, f in enumerate(flats)})


# --------------------------------------------------------------------------
# Derived arrangements


def centralize(A: Arrangement) -> Arrangement:
    """Translate every hyperplane through the origin; parallel copies collapse."""
    by_dir: dict = {}
    hyps, origin = [], []
    for i, h in enumerate(A.hyperplanes):
        d = h.direction_key()
        if d in by_dir:
            origin[by_dir[d]].append(i)
            continue
        by_dir[d] = len(hyps)
        hyps.append(Hyperplane(h.w, Fraction(0)))
        origin.append([i])
    return Arrangement(A.dim, tuple(hyps), tuple(tuple(o) for o in origin))


def restriction(A: Arrangement, V: Flat) -> Arrangement:
    """``{H cap V}`` minus empty and whole-``V`` intersections, in chart coordinates on ``V``.

    The chart is ``x = p + B y`` with ``p`` the RREF particular point and ``B``
    the RREF null-space basis; for the ambient space it is the identity.
    """
    if V.ambient != A.dim:
        raise ValueError("flat lives in a different ambient space")
    p, basis = V.chart()
    hyps, origin, seen = [], [], {}
    for i, h in enumerate(A.hyperplanes):
        w = tuple(dot(h.w, b) for b in basis)
        a = h.a - dot(h.w, p)
        if not any(w):
            continue  # empty or all of V
        r = Hyperplane(w, a)
        k = r.key()
        if k in seen:
            origin[seen[k]].append(i)
            continue
        seen[k] = len(hyps)
        hyps.append(r)
        origin.append([i])
    return Arrangement(V.dim, tuple(hyps), tuple(tuple(o) for o in origin))


def localization(A: Arrangement, V: Flat) -> Arrangement:
    """Hyperplanes ``H`` with ``V`` inside ``H`` or disjoint from it (``V`` linear).

    Keeps ambient dimension; ``origin`` records the retained indices.
    """
    if not V.is_linear():
        raise ValueError("localization needs a linear subspace (a flat of the centralization)")
    dirs = V.directions()
    keep = [i for i, h in enumerate(A.hyperplanes) if all(dot(h.w, d) == 0 for d in dirs)]
    return Arrangement(A.dim, tuple(A.hyperplanes[i] for i in keep), tuple((i,) for i in keep))


def essential_subspace(A: Arrangement) -> Flat:
    """The span of the normals, as a linear flat."""
    n = A.dim
    span = ratlin.row_space(A.normals) if A.hyperplanes else []
    eqs = ratlin.null_space(span, n) if span else [
        tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)
    ]
    return Flat.from_equations(n, (e + (Fraction(0),) for e in eqs))


def essentialize(A: Arrangement) -> Arrangement:
    """Restriction to the span of the normals, with the RREF row basis as chart."""
    n = A.dim
    basis = ratlin.row_space(A.normals) if A.hyperplanes else []
    hyps = tuple(Hyperplane(tuple(dot(h.w, b) for b in basis), h.a) for h in A.hyperplanes)
    return Arrangement(len(basis), hyps, _identity_origin(len(hyps)))


def cone_arrangement(A: Arrangement) -> Arrangement:
    """Homogenize into ``dim + 1`` coordinates; index 0 is ``{x_{n+1} = 0}``."""
    n = A.dim
    h0 = Hyperplane(tuple(Fraction(int(j == n)) for j in range(n + 1)), Fraction(0))
    rest = tuple(Hyperplane(h.w + (-h.a,), Fraction(0)) for h in A.hyperplanes)
    origin = ((),) + tuple((i,) for i in range(len(A.hyperplanes)))
    return Arrangement(n + 1, (h0,) + rest, origin)


def orientation(h: Hyperplane, chart: tuple, child: Hyperplane) -> int:
    """+1 or -1: how the sides of ``h`` correspond to those of ``child`` on a chart."""
    _, basis = chart
    pulled = [dot(h.w, b) for b in basis]
    j = next(k for k, x in enumerate(child.w) if x != 0)
    ratio = pulled[j] / child.w[j]
    return 1 if ratio > 0 else -1


# --------------------------------------------------------------------------
# Text format


def _parse_token(tok: str, lineno: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational {tok!r}", lineno) from None


def parse_arrangement(text: str) -> Arrangement:
    dim = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "dim":
            if dim is not None or len(parts) != 2:
                raise ParseError("expected a single 'dim <n>' header", lineno)
            try:
                dim = int(parts[1])
            except ValueError:
                raise ParseError(f"bad dimension {parts[1]!r}", lineno) from None
            if dim < 0:
                raise ParseError("dimension must be nonnegative", lineno)
        elif parts[0] == "h":
            if dim is None:
                raise ParseError("'h' line before 'dim' header", lineno)
            if len(parts) != dim + 3 or parts[-2] != "=":
                raise ParseError(f"expected 'h <{dim} coefficients> = <offset>'", lineno)
            w = tuple(_parse_token(t, lineno) for t in parts[1 : dim + 1])
            if not any(w):
                raise ParseError("zero normal vector", lineno)
            rows.append((w, _parse_token(parts[-1], lineno), lineno))
        else:
            raise ParseError(f"unknown directive {parts[0]!r}", lineno)
    if dim is None:
        raise ParseError("missing 'dim <n>' header")
    hyps = []
    seen = {}
    for w, a, lineno in rows:
        h = Hyperplane(w, a)
        if h.key() in seen:
            raise ParseError(f"duplicate of the hyperplane on line {seen[h.key()]}", lineno)
        seen[h.key()] = lineno
        hyps.append(h)
    return Arrangement(dim, tuple(hyps))


def format_arrangement(A: Arrangement) -> str:
    lines = [f"dim {A.dim}"]
    for h in A.hyperplanes:
        lines.append("h " + " ".join(format_rational(x) for x in h.w) + " = " + format_rational(h.a))
    return "\n".join(lines) + "\n"
