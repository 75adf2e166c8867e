"""Finite ranked posets: Moebius function, characteristic polynomials,
Zaslavsky counts and isomorphism search.

The poset text format lists elements by their atom sets; order is atom-set
inclusion::

    elements 3
    e 0 rank 0 atoms {}
    e 1 rank 1 atoms {0}
    e 2 rank 1 atoms {1}
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, lcm
from typing import Iterable, Optional, Sequence


# --------------------------------------------------------------------------
# Integer polynomials


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial in ``t``; ``coeffs[d]`` multiplies ``t**d``."""

    coeffs: tuple = ()

    def __post_init__(self):
        c = [int(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntPolynomial":
        return cls((0,) * degree + (coeff,))

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> "IntPolynomial":
        p = cls((1,))
        for r in roots:
            p = p * cls((-r, 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPolynomial(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-x for x in self.coeffs))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(tuple(other * x for x in self.coeffs))
        out = [0] * (len(self.coeffs) + len(other.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def exact_div(self, d: int) -> "IntPolynomial":
        if any(c % d for c in self.coeffs):
            raise ArithmeticError(f"{self} is not divisible by {d}")
        return IntPolynomial(tuple(c // d for c in self.coeffs))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for d in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[d]
            if c == 0:
                continue
            mag = abs(c)
            if d == 0:
                body = str(mag)
            else:
                var = "t" if d == 1 else f"t^{d}"
                body = var if mag == 1 else f"{mag}*{var}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)


@dataclass(frozen=True)
class PolyFraction:
    """Rational polynomial ``num(t) / den`` with ``den > 0`` and reduced content."""

    num: IntPolynomial
    den: int = 1

    def __post_init__(self):
        if self.den == 0:
            raise ZeroDivisionError("zero denominator")
        num, den = self.num, self.den
        if den < 0:
            num, den = -num, -den
        g = gcd(num.content(), den)
        if g > 1:
            num, den = num.exact_div(g), den // g
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __add__(self, other: "PolyFraction") -> "PolyFraction":
        d = lcm(self.den, other.den)
        return PolyFraction(self.num * (d // self.den) + other.num * (d // other.den), d)

    def scale(self, q) -> "PolyFraction":
        q = Fraction(q)
        return PolyFraction(self.num * q.numerator, self.den * q.denominator)

    def __call__(self, t) -> Fraction:
        return Fraction(self.num(t), self.den)

    def as_int_polynomial(self) -> IntPolynomial:
        if self.den != 1:
            raise ArithmeticError(f"non-integral polynomial ({self.num})/{self.den}")
        return self.num

    def __str__(self) -> str:
        return str(self.num) if self.den == 1 else f"({self.num})/{self.den}"


def binomial_polynomial(k: int) -> PolyFraction:
    """``C(t, k) = t (t-1) ... (t-k+1) / k!``."""
    fact = 1
    for i in range(2, k + 1):
        fact *= i
    return PolyFraction(IntPolynomial.from_roots(range(k)), fact)


# --------------------------------------------------------------------------
# Ranked posets


class PosetError(ValueError):
    pass


class RankedPoset:
    """Finite poset on ``range(size)`` with a rank function and a unique minimum.

    ``up[s]`` is the set of ``t`` with ``s <= t``.  Moebius values are memoized
    per source element behind a lock.
    """

    def __init__(self, ranks: Sequence[int], up: Sequence[Iterable[int]]):
        self.ranks = tuple(ranks)
        self.up = tuple(frozenset(u) for u in up)
        n = len(self.ranks)
        if len(self.up) != n:
            raise PosetError("ranks and order relation disagree in size")
        down = [set() for _ in range(n)]
        for s, u in enumerate(self.up):
            if s not in u:
                raise PosetError(f"order is not reflexive at {s}")
            for t in u:
                down[t].add(s)
        self.down = tuple(frozenset(d) for d in down)
        minima = [s for s in range(n) if len(self.down[s]) == 1]
        if n and len(minima) != 1:
            raise PosetError("poset needs a unique minimum")
        self.min_element = minima[0] if n else None
        if n and len(self.up[self.min_element]) != n:
            raise PosetError("minimum element is not below everything")
        self._covers = None
        self._mobius: dict = {}
        self._lock = threading.Lock()

    @classmethod
    def from_atom_sets(cls, atom_sets: Sequence[frozenset], ranks: Sequence[int]) -> "RankedPoset":
        sets = [frozenset(a) for a in atom_sets]
        containing: dict = {}
        for t, s in enumerate(sets):
            for a in s:
                containing.setdefault(a, set()).add(t)
        everything = set(range(len(sets)))
        up = []
        for s in sets:
            u = set(everything)
            for a in s:
                u &= containing[a]
            up.append(u)
        return cls(ranks, up)

    def __len__(self) -> int:
        return len(self.ranks)

    @property
    def rank(self) -> int:
        return max(self.ranks, default=0)

    def leq(self, s: int, t: int) -> bool:
        return t in self.up[s]

    @property
    def covers(self) -> list:
        """Pairs ``(s, t)`` with ``t`` covering ``s``."""
        if self._covers is None:
            out = []
            for s in range(len(self)):
                strict = self.up[s] - {s}
                shadowed = set()
                for u in strict:
                    shadowed |= self.up[u] - {u}
                out.extend((s, t) for t in sorted(strict - shadowed))
            self._covers = out
        return self._covers

    def is_graded(self) -> bool:
        return self.ranks[self.min_element] == 0 and all(
            self.ranks[t] == self.ranks[s] + 1 for s, t in self.covers
        )

    def rank_profile(self) -> tuple:
        return tuple(self.ranks.count(r) for r in range(self.rank + 1))

    def interval_elements(self, s: int, t: int) -> frozenset:
        return self.up[s] & self.down[t]

    def subposet(self, elements: Iterable[int], rank_shift: int = 0) -> tuple["RankedPoset", list]:
        """Induced subposet, re-indexed; returns it with the old index of each new element."""
        keep = sorted(set(elements), key=lambda e: (self.ranks[e], e))
        pos = {e: i for i, e in enumerate(keep)}
        up = [[pos[t] for t in self.up[e] if t in pos] for e in keep]
        return RankedPoset([self.ranks[e] - rank_shift for e in keep], up), keep

    def filter_above(self, s: int) -> tuple["RankedPoset", list]:
        return self.subposet(self.up[s], rank_shift=self.ranks[s])

    def ideal_below(self, s: int) -> tuple["RankedPoset", list]:
        return self.subposet(self.down[s])

    # -- Moebius function -------------------------------------------------

    def _mobius_row(self, s: int) -> dict:
        row = self._mobius.get(s)
        if row is not None:
            return row
        with self._lock:
            row = self._mobius.get(s)
            if row is None:
                row = {}
                for t in sorted(self.up[s], key=lambda e: self.ranks[e]):
                    if t == s:
                        row[t] = 1
                    else:
                        row[t] = -sum(row[u] for u in self.down[t] & self.up[s] if u != t)
                self._mobius[s] = row
        return row

    def mobius(self, s: int, t: int) -> int:
        if t not in self.up[s]:
            raise PosetError(f"mobius({s}, {t}) undefined: {s} is not below {t}")
        return self._mobius_row(s)[t]


def mobius(P: RankedPoset, s: int, t: int) -> int:
    return P.mobius(s, t)


def char_poly(P: RankedPoset, ambient_degree: Optional[int] = None) -> IntPolynomial:
    """``sum_s mu(0, s) t^(ambient_degree - rank s)``; ambient defaults to the poset rank."""
    if ambient_degree is None:
        ambient_degree = P.rank
    if ambient_degree < P.rank:
        raise PosetError(f"ambient degree {ambient_degree} below poset rank {P.rank}")
    coeffs = [0] * (ambient_degree + 1)
    row = P._mobius_row(P.min_element)
    for s, m in row.items():
        coeffs[ambient_degree - P.ranks[s]] += m
    return IntPolynomial(tuple(coeffs))


def zaslavsky_counts(P: RankedPoset, ambient_degree: Optional[int] = None) -> tuple[int, int]:
    """``(r, b)``: regions and relatively bounded regions.

    ``r`` uses the ambient degree for its sign and ``b`` the poset rank; a
    rank-0 poset has ``b = 1``.
    """
    if ambient_degree is None:
        ambient_degree = P.rank
    chi = char_poly(P, ambient_degree)
    r = (-1) ** ambient_degree * chi(-1)
    b = (-1) ** P.rank * chi(1)
    return r, b


def product(P: RankedPoset, Q: RankedPoset) -> RankedPoset:
    """Cartesian product ordered componentwise; element ``(p, q)`` gets index ``p * len(Q) + q``."""
    m = len(Q)
    ranks = [P.ranks[p] + Q.ranks[q] for p in range(len(P)) for q in range(m)]
    up = [[pp * m + qq for pp in P.up[p] for qq in Q.up[q]] for p in range(len(P)) for q in range(m)]
    return RankedPoset(ranks, up)


# --------------------------------------------------------------------------
# Isomorphism


def _refined_colors(P: RankedPoset, rounds: int = 3) -> list:
    colors = [(P.ranks[s], len(P.up[s]), len(P.down[s])) for s in range(len(P))]
    for _ in range(rounds):
        colors = [
            (
                colors[s],
                tuple(sorted(colors[t] for t in P.up[s] if t != s)),
                tuple(sorted(colors[t] for t in P.down[s] if t != s)),
            )
            for s in range(len(P))
        ]
        # compress to keep the tuples small; canonical across posets since it is content-based
        colors = [hash(c) for c in colors]
    return colors


def poset_isomorphic(P: RankedPoset, Q: RankedPoset, fixed: Optional[dict] = None) -> Optional[dict]:
    """Rank-preserving order isomorphism ``P -> Q`` as a dict, or None.

    ``fixed`` pins some images in advance.  Backtracking proceeds rank by rank
    with colour-refinement pruning.
    """
    if len(P) != len(Q) or sorted(P.ranks) != sorted(Q.ranks):
        return None
    cp, cq = _refined_colors(P), _refined_colors(Q)
    if sorted(cp) != sorted(cq):
        return None
    by_color: dict = {}
    for t in range(len(Q)):
        by_color.setdefault(cq[t], []).append(t)
    order = sorted(range(len(P)), key=lambda s: (P.ranks[s], len(by_color[cp[s]]), s))
    fwd: dict = {}
    used: set = set()
    fixed = dict(fixed or {})
    for s, t in fixed.items():
        if cp[s] != cq[t]:
            return None

    def consistent(s: int, t: int) -> bool:
        for s2, t2 in fwd.items():
            if (s2 in P.up[s]) != (t2 in Q.up[t]) or (s in P.up[s2]) != (t in Q.up[t2]):
                return False
        return True

    def extend(k: int) -> bool:
        if k == len(order):
            return True
        s = order[k]
        candidates = [fixed[s]] if s in fixed else by_color[cp[s]]
        for t in candidates:
            if t in used or (t in fixed.values() and fixed.get(s) != t):
                continue
            if not consistent(s, t):
                continue
            fwd[s] = t
            used.add(t)
            if extend(k + 1):
                return True
            del fwd[s]
            used.discard(t)
        return False

    return dict(fwd) if extend(0) else None


# --------------------------------------------------------------------------
# Text format


@dataclass(frozen=True)
class AtomPoset:
    """Elements given as atom sets over atoms ``0..k-1`` with explicit ranks."""

    atom_sets: tuple
    ranks: tuple
    a0: Optional[int] = None

    @property
    def num_atoms(self) -> int:
        return 1 + max((max(s) for s in self.atom_sets if s), default=-1)


_ELEM = re.compile(r"^e\s+(\d+)\s+rank\s+(\d+)\s+atoms\s*\{([^}]*)\}$")


def parse_poset(text: str) -> AtomPoset:
    from .arrangement import ParseError

    declared = None
    a0 = None
    elems: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "elements":
            if declared is not None or len(parts) != 2 or not parts[1].isdigit():
                raise ParseError("expected a single 'elements <N>' header", lineno)
            declared = int(parts[1])
        elif parts[0] == "a0":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError("expected 'a0 <atom-id>'", lineno)
            a0 = int(parts[1])
        elif parts[0] == "e":
            m = _ELEM.match(line)
            if not m:
                raise ParseError("expected 'e <id> rank <r> atoms {i,j,...}'", lineno)
            eid, r, body = int(m.group(1)), int(m.group(2)), m.group(3).strip()
            try:
                atoms = frozenset(int(x) for x in body.split(",")) if body else frozenset()
            except ValueError:
                raise ParseError(f"bad atom list {{{body}}}", lineno) from None
            if eid in elems:
                raise ParseError(f"element {eid} defined twice", lineno)
            elems[eid] = (atoms, r)
        else:
            raise ParseError(f"unknown directive {parts[0]!r}", lineno)
    if declared is None:
        raise ParseError("missing 'elements <N>' header")
    if sorted(elems) != list(range(declared)):
        raise ParseError(f"expected element ids 0..{declared - 1}")
    return AtomPoset(tuple(elems[i][0] for i in range(declared)), tuple(elems[i][1] for i in range(declared)), a0)


def format_poset(P: AtomPoset) -> str:
    lines = []
    if P.a0 is not None:
        lines.append(f"a0 {P.a0}")
    lines.append(f"elements {len(P.atom_sets)}")
    for i, (s, r) in enumerate(zip(P.atom_sets, P.ranks)):
        lines.append(f"e {i} rank {r} atoms {{{','.join(str(a) for a in sorted(s))}}}")
    return "\n".join(lines) + "\n"


def binomial(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0
