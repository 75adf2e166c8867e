"""Geometric semilattices as families of closed atom sets.

An element of ``M`` is identified with the set of atoms below it, so the order
is inclusion and meets are intersections.  On top of that live the cone ``cM``
with its closure operator, the centralization, localizations, the level
distribution and the characteristic-polynomial identities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .posets import (
    AtomPoset,
    IntPolynomial,
    PolyFraction,
    RankedPoset,
    char_poly,
    poset_isomorphic,
    zaslavsky_counts,
)


class SemilatticeError(ValueError):
    pass


@dataclass
class GeometricSemilattice:
    """Atoms are ``0..num_atoms-1``; ``elements`` are frozensets, ``ranks`` parallel to them."""

    num_atoms: int
    elements: tuple
    ranks: tuple
    _index: dict = field(default=None, init=False, repr=False)
    _containing: list = field(default=None, init=False, repr=False)
    _poset: RankedPoset = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.elements = tuple(frozenset(e) for e in self.elements)
        self.ranks = tuple(self.ranks)
        if len(self.elements) != len(self.ranks):
            raise SemilatticeError("elements and ranks differ in length")
        for e in self.elements:
            if any(a < 0 or a >= self.num_atoms for a in e):
                raise SemilatticeError(f"atom id out of range in {sorted(e)}")
        self._index = {}
        for i, e in enumerate(self.elements):
            self._index.setdefault(e, i)
        self._containing = [set() for _ in range(self.num_atoms)]
        for i, e in enumerate(self.elements):
            for a in e:
                self._containing[a].add(i)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[int]], ranks: Sequence[int]) -> "GeometricSemilattice":
        sets = [frozenset(s) for s in sets]
        order = sorted(range(len(sets)), key=lambda i: (ranks[i], sorted(sets[i])))
        k = 1 + max((max(s) for s in sets if s), default=-1)
        return cls(k, tuple(sets[i] for i in order), tuple(ranks[i] for i in order))

    @classmethod
    def from_atom_poset(cls, P: AtomPoset) -> "GeometricSemilattice":
        return cls.from_sets(P.atom_sets, P.ranks)

    @classmethod
    def from_intersection_poset(cls, L) -> "GeometricSemilattice":
        k = len(L.arrangement.hyperplanes)
        return cls(k, tuple(L.atoms), tuple(L.ranks))

    @classmethod
    def from_ranked_family(cls, family: Sequence[frozenset], ranks: Sequence[int]) -> "GeometricSemilattice":
        """Re-express an atomistic family by its own rank-1 members.

        ``family`` members are arbitrary sets (e.g. elements of a cone); the
        minimum must have rank 0 and the rank-1 members become atoms 0..k-1.
        """
        base = min(range(len(family)), key=lambda i: ranks[i])
        r0 = ranks[base]
        atoms = sorted((i for i in range(len(family)) if ranks[i] == r0 + 1), key=lambda i: sorted(family[i]))
        sets = [frozenset(j for j, a in enumerate(atoms) if family[a] <= family[i]) for i in range(len(family))]
        return cls.from_sets(sets, [r - r0 for r in ranks])

    def to_atom_poset(self, a0: Optional[int] = None) -> AtomPoset:
        return AtomPoset(self.elements, self.ranks, a0)

    # -- basic queries ----------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, s) -> bool:
        return frozenset(s) in self._index

    @property
    def rank(self) -> int:
        return max(self.ranks, default=0)

    def rank_of(self, s: frozenset) -> int:
        return self.ranks[self._index[frozenset(s)]]

    @property
    def bottom(self) -> frozenset:
        return frozenset()

    def poset(self) -> RankedPoset:
        if self._poset is None:
            self._poset = RankedPoset.from_atom_sets(self.elements, self.ranks)
        return self._poset

    def upper_bounds(self, S: Iterable[int]) -> set:
        S = list(S)
        if not S:
            return set(range(len(self.elements)))
        out = set(self._containing[S[0]])
        for a in S[1:]:
            out &= self._containing[a]
            if not out:
                break
        return out

    def join(self, S: Iterable[int]) -> Optional[frozenset]:
        """Least element containing ``S``, or None when ``S`` has no upper bound."""
        ub = self.upper_bounds(S)
        if not ub:
            return None
        best = min(ub, key=lambda i: self.ranks[i])
        return self.elements[best]

    def has_common_upper_bound(self, s: frozenset, a: int) -> bool:
        return bool(self.upper_bounds(set(s) | {a}))

    def parallel_atoms(self, s: frozenset) -> frozenset:
        """Atoms with no common upper bound with ``s``."""
        return frozenset(a for a in range(self.num_atoms) if not self.has_common_upper_bound(s, a))


def validate(M: GeometricSemilattice) -> Optional[str]:
    """First violated axiom as a message, or None when ``M`` is a geometric semilattice."""
    idx = M._index
    if frozenset() not in idx:
        return "missing the empty element (minimum)"
    if M.rank_of(frozenset()) != 0:
        return "minimum must have rank 0"
    if len(idx) != len(M.elements):
        dup = next(e for i, e in enumerate(M.elements) if idx[e] != i)
        return f"two elements share the atom set {sorted(dup)}: not atomistic"
    for a in range(M.num_atoms):
        if frozenset({a}) not in idx:
            return f"atom {a} has no singleton element"
        if M.rank_of(frozenset({a})) != 1:
            return f"atom {a} does not have rank 1"
    P = M.poset()
    for s, t in P.covers:
        if P.ranks[t] != P.ranks[s] + 1:
            return f"cover {sorted(M.elements[s])} < {sorted(M.elements[t])} skips a rank"
    # meet semilattice with meet = intersection
    elems = M.elements
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            if elems[i] & elems[j] not in idx:
                return f"meet of {sorted(elems[i])} and {sorted(elems[j])} is missing"
    # every principal ideal is semimodular (lattice property follows from the meet check)
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            s, t = elems[i], elems[j]
            u = M.join(s | t)
            if u is None:
                continue
            if M.ranks[i] + M.ranks[j] < M.rank_of(s & t) + M.rank_of(u):
                return f"semimodularity fails for {sorted(s)}, {sorted(t)}"
    # exchange condition (b)
    for size in range(1, M.rank + 1):
        for S in combinations(range(M.num_atoms), size):
            j = M.join(S)
            if j is None or M.rank_of(j) != size:
                continue
            for ti, t in enumerate(elems):
                if M.ranks[ti] >= size:
                    continue
                if not any(a not in t and M.has_common_upper_bound(t, a) for a in S):
                    return f"exchange condition fails for independent set {list(S)} and {sorted(t)}"
    return None


# --------------------------------------------------------------------------
# Cone and closure


def _maximal_join(M: GeometricSemilattice, S: Iterable[int]) -> frozenset:
    """A maximal element of the joins of subsets of ``S``, by greedy accumulation."""
    t = frozenset()
    for a in sorted(S):
        j = M.join(t | {a})
        if j is not None:
            t = j
    return t


def central_closure(M: GeometricSemilattice, s: frozenset, a0: int) -> frozenset:
    """``A_s`` together with the atoms parallel to ``s`` and ``a0``."""
    return s | M.parallel_atoms(s) | {a0}


def closure(M: GeometricSemilattice, S: Iterable[int], a0: Optional[int] = None) -> frozenset:
    """Smallest element of ``cM`` containing the atom set ``S`` (``a0`` defaults to ``num_atoms``)."""
    if a0 is None:
        a0 = M.num_atoms
    S = frozenset(S)
    plain = S - {a0}
    if a0 not in S:
        j = M.join(plain)
        if j is not None:
            return j
    return central_closure(M, _maximal_join(M, plain), a0)


@dataclass
class ConedLattice:
    base: GeometricSemilattice
    a0: int
    elements: tuple
    ranks: tuple
    central: tuple  # central[i] is True for the A-underline family
    source: tuple  # an element of the base producing each cone element

    def __len__(self) -> int:
        return len(self.elements)

    def poset(self) -> RankedPoset:
        return RankedPoset.from_atom_sets(self.elements, self.ranks)

    def as_semilattice(self) -> GeometricSemilattice:
        return GeometricSemilattice.from_sets(self.elements, self.ranks)

    def to_atom_poset(self) -> AtomPoset:
        return AtomPoset(self.elements, self.ranks, self.a0)

    def index(self, S: frozenset) -> int:
        return self.elements.index(frozenset(S))

    def join(self, S: frozenset, T: frozenset) -> frozenset:
        return closure(self.base, S | T, self.a0)

    def meet(self, S: frozenset, T: frozenset) -> frozenset:
        return S & T


def cone(M: GeometricSemilattice, check: bool = True) -> ConedLattice:
    if check:
        problem = validate(M)
        if problem:
            raise SemilatticeError(problem)
    a0 = M.num_atoms
    entries: dict = {}
    for s, r in zip(M.elements, M.ranks):
        entries.setdefault(s, (r, False, s))
    for s, r in zip(M.elements, M.ranks):
        entries.setdefault(central_closure(M, s, a0), (r + 1, True, s))
    keys = sorted(entries, key=lambda e: (entries[e][0], entries[e][1], sorted(e)))
    return ConedLattice(
        M,
        a0,
        tuple(keys),
        tuple(entries[k][0] for k in keys),
        tuple(entries[k][1] for k in keys),
        tuple(entries[k][2] for k in keys),
    )


def centralization(M: GeometricSemilattice, cM: Optional[ConedLattice] = None) -> GeometricSemilattice:
    """The central family of ``cM`` re-ranked down by one, on its own atoms."""
    cM = cM or cone(M, check=False)
    fam = [e for e, c in zip(cM.elements, cM.central) if c]
    ranks = [r - 1 for r, c in zip(cM.ranks, cM.central) if c]
    return GeometricSemilattice.from_ranked_family(fam, ranks)


def central_elements(cM: ConedLattice) -> list:
    return [i for i, c in enumerate(cM.central) if c]


def central_filter(cM: ConedLattice, S: frozenset) -> GeometricSemilattice:
    """Principal filter above ``S`` inside the centralization, as a lattice of its own."""
    fam = [e for e, c in zip(cM.elements, cM.central) if c and S <= e]
    ranks = [r for e, r, c in zip(cM.elements, cM.ranks, cM.central) if c and S <= e]
    return GeometricSemilattice.from_ranked_family(fam, ranks)


def localize(M: GeometricSemilattice, S: frozenset, cM: Optional[ConedLattice] = None) -> GeometricSemilattice:
    """Elements of ``M`` inside the central element ``S``, on the atoms of ``S``."""
    cM = cM or cone(M, check=False)
    S = frozenset(S)
    if S not in cM.elements or not cM.central[cM.index(S)]:
        raise SemilatticeError(f"{sorted(S)} is not an element of the centralization")
    atoms = sorted(S - {cM.a0})
    relabel = {a: i for i, a in enumerate(atoms)}
    sets, ranks = [], []
    for e, r in zip(M.elements, M.ranks):
        if e <= S:
            sets.append(frozenset(relabel[a] for a in e))
            ranks.append(r)
    return GeometricSemilattice.from_sets(sets, ranks)


def counts(M: GeometricSemilattice) -> tuple[int, int]:
    """``(r(M), b(M))`` with both signs taken against the rank of ``M``."""
    return zaslavsky_counts(M.poset(), M.rank)


def chi(M: GeometricSemilattice) -> IntPolynomial:
    return char_poly(M.poset(), M.rank)


def level_distribution(M: GeometricSemilattice, cM: Optional[ConedLattice] = None) -> list:
    """``r_0 .. r_n`` for ``n = rank(M)``, indexed by rank."""
    cM = cM or cone(M, check=False)
    n = M.rank
    out = [0] * (n + 1)
    for i in central_elements(cM):
        S = cM.elements[i]
        corank = n - (cM.ranks[i] - 1)
        r_up, _ = counts(central_filter(cM, S))
        _, b_loc = counts(localize(M, S, cM))
        out[corank] += r_up * b_loc
    return out


@dataclass(frozen=True)
class ChiIdentity:
    lhs: IntPolynomial
    rhs: IntPolynomial
    equal: bool


def chi_identity_check(M: GeometricSemilattice, cM: Optional[ConedLattice] = None) -> ChiIdentity:
    """``chi_M(t)`` against the sum over central ``S`` of ``chi(filter above S)(t) * chi(M_S)(1)``."""
    cM = cM or cone(M, check=False)
    lhs = chi(M)
    rhs = IntPolynomial()
    for i in central_elements(cM):
        S = cM.elements[i]
        rhs = rhs + chi(central_filter(cM, S)) * chi(localize(M, S, cM))(1)
    return ChiIdentity(lhs, rhs, lhs == rhs)


@dataclass(frozen=True)
class UniformExpansion:
    levels: tuple  # r_0 .. r_n
    basis: tuple  # basis[d] = chi_{L_d}(t) / chi_{L_d}(-1)
    verified: bool


def uniform_expansion(M: GeometricSemilattice) -> Optional[UniformExpansion]:
    """``chi_M = (-1)^n sum_l r_l(M) chi_d(t) / chi_d(-1)`` when the centralization is uniform, else None."""
    cM = cone(M, check=False)
    n = M.rank
    by_corank: dict = {}
    for i in central_elements(cM):
        d = n - (cM.ranks[i] - 1)
        by_corank.setdefault(d, []).append(central_filter(cM, cM.elements[i]))
    basis = []
    for d in range(n + 1):
        filters = by_corank.get(d, [])
        if not filters:
            return None
        first = filters[0].poset()
        for other in filters[1:]:
            if poset_isomorphic(first, other.poset()) is None:
                return None
        p = chi(filters[0])
        basis.append(PolyFraction(p, p(-1)))
    levels = level_distribution(M, cM)
    total = PolyFraction(IntPolynomial())
    for r, q in zip(levels, basis):
        total = total + q.scale(r)
    # the (-1)^n sign matches the region-sum form; without it odd ranks fail (B_1: chi = t - 1)
    total = total.scale((-1) ** n)
    return UniformExpansion(tuple(levels), tuple(basis), total == PolyFraction(chi(M)))


# --------------------------------------------------------------------------
# Standard examples


def boolean_lattice(k: int) -> GeometricSemilattice:
    sets = [frozenset(c) for r in range(k + 1) for c in combinations(range(k), r)]
    return GeometricSemilattice.from_sets(sets, [len(s) for s in sets])


def uniform_matroid_flats(k: int, m: int) -> GeometricSemilattice:
    """Lattice of flats of ``U_{k,m}``: all sets of size below ``k`` plus the ground set.

    For ``k = 1`` every element is parallel to every other, so the lattice is
    ``{0, 1}`` on a single atom whatever ``m`` is.
    """
    if k == 1 and m >= 1:
        return GeometricSemilattice.from_sets([frozenset(), frozenset({0})], [0, 1])
    sets = [frozenset(c) for r in range(k) for c in combinations(range(m), r)]
    ranks = [len(s) for s in sets]
    if k <= m:
        sets.append(frozenset(range(m)))
        ranks.append(k)
    return GeometricSemilattice.from_sets(sets, ranks)


def fano_flats() -> GeometricSemilattice:
    lines = [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]
    sets = [frozenset()] + [frozenset({i}) for i in range(7)] + [frozenset(l) for l in lines] + [frozenset(range(7))]
    ranks = [0] + [1] * 7 + [2] * 7 + [3]
    return GeometricSemilattice.from_sets(sets, ranks)


def delete_filter(L: GeometricSemilattice, atom: int) -> GeometricSemilattice:
    """``L`` minus every element above ``atom``, atoms relabelled to stay contiguous."""
    keep = [(e, r) for e, r in zip(L.elements, L.ranks) if atom not in e]
    relabel = {a: (a if a < atom else a - 1) for a in range(L.num_atoms) if a != atom}
    sets = [frozenset(relabel[a] for a in e) for e, _ in keep]
    return GeometricSemilattice.from_sets(sets, [r for _, r in keep])


def rank_profile(M: GeometricSemilattice) -> tuple:
    return M.poset().rank_profile()


def is_atomistic_lattice(poset: RankedPoset, sets: Sequence[frozenset]) -> bool:
    """Every element equals the union of the atoms (rank-1 sets) below it."""
    atoms = [s for s, r in zip(sets, poset.ranks) if r == 1]
    for s in sets:
        if frozenset().union(*[a for a in atoms if a <= s]) != s:
            return False
    return True


def is_semimodular(cM: ConedLattice) -> bool:
    elems = cM.elements
    rank_of = dict(zip(elems, cM.ranks))
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            s, t = elems[i], elems[j]
            if rank_of[s] + rank_of[t] < rank_of[s & t] + rank_of[cM.join(s, t)]:
                return False
    return True
