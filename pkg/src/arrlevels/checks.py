"""Invariant checks over arrangements and semilattices.

Each check returns a :class:`CheckResult`; ``arrangement_checks`` and
``semilattice_checks`` run every check applicable to an input and are what
the ``verify`` command prints.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Optional

from . import ratlin
from .arrangement import (
    Arrangement,
    Flat,
    Hyperplane,
    centralize,
    cone_arrangement,
    essentialize,
    format_arrangement,
    intersection_poset,
    localization,
    parse_arrangement,
    restriction,
)
from .posets import char_poly, poset_isomorphic, zaslavsky_counts
from .regions import (
    chi_via_regions,
    cone_system,
    enumerate_regions,
    flat_counts,
    level_histogram,
    levels_via_formula,
    phi_split,
    psi_join,
    recession_cone,
)
from .semilattice import (
    GeometricSemilattice,
    chi_identity_check,
    closure,
    cone,
    counts,
    delete_filter,
    is_atomistic_lattice,
    is_semimodular,
    level_distribution,
    validate,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _run(name: str, fn: Callable[[], Optional[str]]) -> CheckResult:
    """``fn`` returns None on success or a failure message."""
    try:
        msg = fn()
    except Exception as exc:  # a crash inside a check is a failed check
        return CheckResult(name, False, f"{type(exc).__name__}: {exc}")
    return CheckResult(name, msg is None, msg or "")


# --------------------------------------------------------------------------
# Arrangement-level invariants


def check_join_property(A: Arrangement) -> Optional[str]:
    L = intersection_poset(A)
    for s in range(len(L)):
        for t in range(s + 1, len(L)):
            joint = L.atoms[s] | L.atoms[t]
            F = Flat.from_hyperplanes(A.dim, (A.hyperplanes[i] for i in joint))
            if F is None:
                continue
            u = L.find(F)
            if u is None:
                return f"intersection of flats {s},{t} missing from the poset"
            uppers = [x for x in range(len(L)) if joint <= L.atoms[x]]
            if any(not L.atoms[u] <= L.atoms[x] for x in uppers):
                return f"flats {s},{t}: intersection is not their least upper bound"
    return None


def check_poset_shape(A: Arrangement) -> Optional[str]:
    L = intersection_poset(A)
    P = L.poset()
    if not P.is_graded():
        return "intersection poset is not graded by codimension"
    atoms = [L.atoms[i] for i in range(len(L)) if L.ranks[i] == 1]
    if sorted(atoms, key=sorted) != sorted((frozenset({i}) for i in range(len(A))), key=sorted):
        return "atoms are not exactly the hyperplanes"
    for s, t in P.covers:
        if not L.ranks[s] < L.ranks[t]:
            return "order inconsistent with rank"
    return None


def check_mobius_signs(A: Arrangement) -> Optional[str]:
    P = intersection_poset(A).poset()
    for s in range(len(P)):
        if P.mobius(P.min_element, s) * (-1) ** P.ranks[s] <= 0:
            return f"mobius(0, {s}) does not alternate with rank"
    return None


def check_zaslavsky(A: Arrangement, regions: list) -> Optional[str]:
    r, b = zaslavsky_counts(intersection_poset(A).poset(), A.dim)
    hist = level_histogram(A, regions)
    bounded = hist[A.dim - A.rank]
    if r != len(regions) or b != bounded:
        return f"poset gives r={r}, b={b}; enumeration gives r={len(regions)}, b={bounded}"
    return None


def check_formula(A: Arrangement, regions: list) -> Optional[str]:
    hist, form = level_histogram(A, regions), levels_via_formula(A)
    return None if hist == form else f"enumeration {hist} vs formula {form}"


def check_histogram_sums(A: Arrangement, regions: list) -> Optional[str]:
    hist = level_histogram(A, regions)
    _, b = zaslavsky_counts(intersection_poset(A).poset(), A.dim)
    rc, _ = zaslavsky_counts(intersection_poset(centralize(A)).poset(), A.dim)
    if sum(hist) != len(regions):
        return "histogram does not sum to the region count"
    if any(hist[l] for l in range(A.dim - A.rank)):
        return "regions below level n - rank"
    if hist[A.dim - A.rank] != b:
        return f"r_(n-rank) = {hist[A.dim - A.rank]} but b = {b}"
    if hist[A.dim] != rc:
        return f"r_n = {hist[A.dim]} but r(centralization) = {rc}"
    return None


def check_bijection(A: Arrangement, regions: list) -> Optional[str]:
    LC = intersection_poset(centralize(A))
    seen: dict = {}
    for R in regions:
        rc = recession_cone(A, R, LC)
        parts = phi_split(A, rc.span_flat, R)
        back = psi_join(A, rc.span_flat, parts.region_u, parts.region_b)
        if back.sign != R.sign:
            return f"psi(phi(R)) != R for {R.sign_string}"
        again = phi_split(A, rc.span_flat, back)
        if (again.region_u.sign, again.region_b.sign) != (parts.region_u.sign, parts.region_b.sign):
            return f"phi(psi(x)) != x at {R.sign_string}"
        seen[rc.flat_index] = seen.get(rc.flat_index, 0) + 1
    expected = {v: c for v, c in flat_counts(A).items() if c}
    if seen != expected:
        return f"per-flat counts {seen} vs r*b {expected}"
    return None


def check_chi_via_regions(A: Arrangement, regions: list) -> Optional[str]:
    got = chi_via_regions(A, regions)
    want = char_poly(intersection_poset(A).poset(), A.dim)
    if got.den != 1 or got.num != want:
        return f"region sum {got} vs chi {want}"
    return None


def check_cone_equivalence(A: Arrangement) -> Optional[str]:
    M = GeometricSemilattice.from_intersection_poset(intersection_poset(A))
    cM = cone(M)
    LcA = intersection_poset(cone_arrangement(A))
    a0 = cM.index(frozenset({cM.a0}))
    h0 = LcA.atoms.index(frozenset({0}))
    if poset_isomorphic(cM.poset(), LcA.poset(), {a0: h0}) is None:
        return "combinatorial cone is not isomorphic to the geometric cone with a0 -> H0"
    return None


def check_cone_lemma(A: Arrangement) -> Optional[str]:
    """The three embeddings of ``L(A)``, ``L(centralization)`` and localizations inside ``L(cA)``."""
    LcA = intersection_poset(cone_arrangement(A))
    P = LcA.poset()
    h0 = LcA.atoms.index(frozenset({0}))
    above = P.up[h0]
    below_part, _ = P.subposet(set(range(len(P))) - above)
    if poset_isomorphic(below_part, intersection_poset(A).poset()) is None:
        return "L(cA) minus the filter above H0 is not L(A)"
    filt, filt_ids = P.filter_above(h0)
    central = centralize(A)
    LC = intersection_poset(central)
    if poset_isomorphic(filt, LC.poset()) is None:
        return "filter above H0 is not L(centralization)"
    for v, V in enumerate(LC.flats):
        # V x {0} as a flat of the cone arrangement
        rows = [row[:-1] + (Fraction(0), Fraction(0)) for row in V.canon]
        rows.append(cone_arrangement(A).hyperplanes[0].w + (Fraction(0),))
        u = LcA.find(Flat.from_equations(A.dim + 1, rows))
        if u is None:
            return f"central flat {v} not found above H0"
        ideal = [x for x in P.down[u] if x not in above]
        sub, _ = P.subposet(ideal)
        if poset_isomorphic(sub, intersection_poset(localization(A, V)).poset()) is None:
            return f"localization at central flat {v} does not match the cone ideal"
    return None


def check_chi_identity_arrangement(A: Arrangement) -> Optional[str]:
    res = chi_identity_check(GeometricSemilattice.from_intersection_poset(intersection_poset(A)))
    return None if res.equal else f"{res.lhs} != {res.rhs}"


def check_index_shift(A: Arrangement) -> Optional[str]:
    M = GeometricSemilattice.from_intersection_poset(intersection_poset(A))
    dist = level_distribution(M)
    ess = level_histogram(essentialize(A))
    hist = level_histogram(A)
    shift = A.dim - A.rank
    if dist != ess:
        return f"semilattice distribution {dist} vs essentialized histogram {ess}"
    if hist[shift:] != dist:
        return f"ambient histogram {hist} is not {dist} shifted by {shift}"
    return None


def check_derived(A: Arrangement) -> Optional[str]:
    if not restriction(A, Flat.ambient_space(A.dim)).same_hyperplanes(A):
        return "restriction to the ambient space changed the arrangement"
    C = centralize(A)
    if not centralize(C).same_hyperplanes(C):
        return "centralization is not idempotent"
    if C.rank != A.rank:
        return "centralization changed the rank"
    E = essentialize(A)
    if E.dim != A.rank or E.rank != E.dim:
        return "essentialization is not essential of dimension rank(A)"
    if poset_isomorphic(intersection_poset(E).poset(), intersection_poset(A).poset()) is None:
        return "essentialization changed the intersection poset"
    if poset_isomorphic(intersection_poset(essentialize(E)).poset(), intersection_poset(E).poset()) is None:
        return "essentialization is not idempotent up to isomorphism"
    return None


def check_recession_lemmas(A: Arrangement, regions: list) -> Optional[str]:
    LC = intersection_poset(centralize(A))
    for R in regions:
        rc = recession_cone(A, R, LC)
        cone_sys = cone_system(A, R.sign)
        # implicit equalities are exactly the normals orthogonal to the span
        dirs = rc.span_flat.directions()
        perp = frozenset(i for i, h in enumerate(A.hyperplanes) if all(ratlin.dot(h.w, d) == 0 for d in dirs))
        if perp != rc.implicit_eq:
            return f"{R.sign_string}: implicit equalities differ from normals orthogonal to the span"
        # strict interior point built as a sum of per-index witnesses
        samples = []
        for i in range(len(A)):
            if i in rc.implicit_eq:
                continue
            c = cone_sys.constraints[i]
            v = ratlin.feasible(cone_sys.extend(ratlin.Constraint(c.coeffs, ratlin.GT, Fraction(0))))
            if v is None:
                return f"{R.sign_string}: no cone point strict on {i}"
            samples.append(v)
        total = tuple(sum(col, Fraction(0)) for col in zip(*samples)) if samples else (Fraction(0),) * A.dim
        for i in range(len(A)):
            val = ratlin.dot(cone_sys.constraints[i].coeffs, total)
            if (i in rc.implicit_eq and val != 0) or (i not in rc.implicit_eq and val <= 0):
                return f"{R.sign_string}: summed cone point is not strict where expected"
        # rays from the witness along cone points stay inside
        for v in samples + [total]:
            for c in (1, 10, 100):
                x = tuple(xi + c * vi for xi, vi in zip(R.witness, v))
                if A.sign_vector(x) != R.sign:
                    return f"{R.sign_string}: witness + {c} * cone point left the region"
        # a direction violating one inequality eventually leaves
        for i, h in enumerate(A.hyperplanes):
            s = R.sign[i]
            v = tuple(-s * x for x in h.w)
            slack = s * h.value(R.witness)
            c = slack / ratlin.dot(h.w, h.w) + 1
            x = tuple(xi + c * vi for xi, vi in zip(R.witness, v))
            if A.sign_vector(x)[i] == s:
                return f"{R.sign_string}: leaving direction for {i} did not leave"
    return None


def check_semilattice_valid(A: Arrangement) -> Optional[str]:
    return validate(GeometricSemilattice.from_intersection_poset(intersection_poset(A)))


def check_roundtrip(A: Arrangement) -> Optional[str]:
    text = format_arrangement(A)
    B = parse_arrangement(text)
    if B != A or format_arrangement(B) != text:
        return "text format does not round-trip"
    return None


def arrangement_checks(A: Arrangement) -> list:
    regions = enumerate_regions(A)
    return [
        _run("format round trip", lambda: check_roundtrip(A)),
        _run("intersection poset graded, atoms = hyperplanes", lambda: check_poset_shape(A)),
        _run("joins are intersections", lambda: check_join_property(A)),
        _run("intersection poset is a geometric semilattice", lambda: check_semilattice_valid(A)),
        _run("mobius alternates in sign", lambda: check_mobius_signs(A)),
        _run("zaslavsky r, b match enumeration", lambda: check_zaslavsky(A, regions)),
        _run("level formula matches enumeration", lambda: check_formula(A, regions)),
        _run("histogram sums and boundary entries", lambda: check_histogram_sums(A, regions)),
        _run("split/join bijection and per-flat counts", lambda: check_bijection(A, regions)),
        _run("recession cone lemmas", lambda: check_recession_lemmas(A, regions)),
        _run("chi as a sum over regions", lambda: check_chi_via_regions(A, regions)),
        _run("derived arrangements", lambda: check_derived(A)),
        _run("cone embeddings of L(A), L(centralization), localizations", lambda: check_cone_lemma(A)),
        _run("combinatorial cone = geometric cone", lambda: check_cone_equivalence(A)),
        _run("chi identity over the centralization", lambda: check_chi_identity_arrangement(A)),
        _run("semilattice levels = essentialized histogram", lambda: check_index_shift(A)),
    ]


# --------------------------------------------------------------------------
# Semilattice-level invariants


def check_closure_laws(M: GeometricSemilattice, max_atoms: int = 8) -> Optional[str]:
    cM = cone(M, check=False)
    members = set(cM.elements)
    atoms = list(range(M.num_atoms)) + [cM.a0]
    if M.num_atoms > max_atoms:
        return None
    subsets = [frozenset(c) for r in range(len(atoms) + 1) for c in combinations(atoms, r)]
    cl = {S: closure(M, S) for S in subsets}
    for S, c in cl.items():
        if c not in members:
            return f"closure of {sorted(S)} is not in the cone"
        if not S <= c:
            return f"closure of {sorted(S)} is not extensive"
    for S in subsets:
        for a in atoms:
            if a not in S and not cl[S] <= cl[S | {a}]:
                return f"closure not monotone at {sorted(S)} + {a}"
    for X in members:
        if closure(M, X) != X:
            return f"closure moves the cone element {sorted(X)}"
    return None


def check_covering(M: GeometricSemilattice) -> Optional[str]:
    cM = cone(M, check=False)
    rank_of = dict(zip(cM.elements, cM.ranks))
    atoms = list(range(M.num_atoms)) + [cM.a0]
    for S in cM.elements:
        for a in atoms:
            if a in S:
                continue
            T = closure(M, S | {a})
            if rank_of[T] != rank_of[S] + 1 or not S < T:
                return f"{sorted(S)} is not covered by closure(S + {a})"
    return None


def check_cone_geometric(M: GeometricSemilattice) -> Optional[str]:
    cM = cone(M, check=False)
    P = cM.poset()
    if not P.is_graded():
        return "cone is not ranked"
    if not is_atomistic_lattice(P, cM.elements):
        return "cone is not atomistic"
    if not is_semimodular(cM):
        return "cone is not semimodular"
    members = set(cM.elements)
    for S in cM.elements:
        for T in cM.elements:
            if S & T not in members:
                return "cone is not closed under intersection"
    base, _ = P.subposet(i for i, e in enumerate(cM.elements) if cM.a0 not in e)
    if poset_isomorphic(base, M.poset()) is None:
        return "cone minus the filter above a0 is not the input"
    return None


def check_chi_identity(M: GeometricSemilattice) -> Optional[str]:
    res = chi_identity_check(M)
    return None if res.equal else f"{res.lhs} != {res.rhs}"


def check_level_distribution(M: GeometricSemilattice) -> Optional[str]:
    dist = level_distribution(M)
    r, b = counts(M)
    if any(x < 0 for x in dist):
        return f"negative entry in {dist}"
    if dist[0] != b:
        return f"r_0 = {dist[0]} but b = {b}"
    if sum(dist) != r:
        return f"levels {dist} do not sum to r = {r}"
    return None


def wachs_round_trip(L: GeometricSemilattice, atom: int) -> Optional[str]:
    """``cone(L - L^atom)`` is ``L`` with ``a0`` playing ``atom``."""
    M = delete_filter(L, atom)
    cM = cone(M)
    # delete_filter shifts atoms above `atom` down by one, so a0 = k - 1 corresponds to `atom`
    relabel = {a: (a if a < atom else a + 1) for a in range(M.num_atoms)}
    relabel[cM.a0] = atom
    mapped = [frozenset(relabel[a] for a in e) for e in cM.elements]
    if sorted(mapped, key=lambda s: (len(s), sorted(s))) != sorted(L.elements, key=lambda s: (len(s), sorted(s))):
        # fall back to an abstract isomorphism pinned at the atom
        fixed = {cM.index(frozenset({cM.a0})): L.elements.index(frozenset({atom}))}
        if poset_isomorphic(cM.poset(), L.poset(), fixed) is None:
            return f"cone of L minus the filter of atom {atom} is not L"
    return None


def check_wachs(M: GeometricSemilattice) -> Optional[str]:
    """For lattices, every atom deletion cones back to the lattice."""
    top = [e for e, r in zip(M.elements, M.ranks) if r == M.rank]
    if len(top) != 1:
        return None
    for a in range(M.num_atoms):
        msg = wachs_round_trip(M, a)
        if msg:
            return msg
    return None


def semilattice_checks(M: GeometricSemilattice) -> list:
    results = [_run("geometric semilattice axioms", lambda: validate(M))]
    if not results[0].ok:
        return results
    return results + [
        _run("closure operator laws", lambda: check_closure_laws(M)),
        _run("closure covers", lambda: check_covering(M)),
        _run("cone is a geometric lattice", lambda: check_cone_geometric(M)),
        _run("chi identity over the centralization", lambda: check_chi_identity(M)),
        _run("level distribution: nonnegative, r_0 = b, sum = r", lambda: check_level_distribution(M)),
        _run("Wachs round trip (lattices only)", lambda: check_wachs(M)),
    ]


# --------------------------------------------------------------------------
# Fuzzing


def random_arrangement(rng: random.Random, dim: Optional[int] = None, max_hyperplanes: int = 6, bound: int = 5) -> Arrangement:
    """Random arrangement with integer data in ``[-bound, bound]``; degeneracies are left in."""
    n = dim if dim is not None else rng.randint(2, 3)
    k = rng.randint(1, max_hyperplanes)
    hyps, keys = [], set()
    attempts = 0
    while len(hyps) < k and attempts < 200:
        attempts += 1
        w = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(n))
        if not any(w):
            continue
        # bias toward repeated normals and shared offsets so parallel and concurrent cases show up
        if hyps and rng.random() < 0.3:
            w = rng.choice(hyps).w
        h = Hyperplane(w, Fraction(rng.randint(-bound, bound)))
        if h.key() in keys:
            continue
        keys.add(h.key())
        hyps.append(h)
    return Arrangement(n, tuple(hyps))


def fuzz_checks(count: int, seed: int) -> list:
    rng = random.Random(seed)
    results = []
    for k in range(count):
        A = random_arrangement(rng)

        def one(A=A):
            regions = enumerate_regions(A)
            for fn in (check_formula, check_histogram_sums, check_zaslavsky):
                msg = fn(A, regions)
                if msg:
                    return msg + "\n" + format_arrangement(A)
            return None

        results.append(_run(f"fuzz #{k}", one))
    return results


def braid_deformation_checks(A: Arrangement) -> list:
    """Extra checks for arrangements whose centralization is a braid arrangement; empty otherwise."""
    from .families import NotBraidDeformation, check_braid_deformation, chi_from_levels, levels_from_chi

    try:
        check_braid_deformation(A)
    except NotBraidDeformation:
        return []

    def roundtrip():
        hist = level_histogram(A)
        chi = char_poly(intersection_poset(A).poset(), A.dim)
        if chi_from_levels(A, hist) != chi:
            return f"chi from levels gives {chi_from_levels(A, hist)}, poset gives {chi}"
        if levels_from_chi(A, chi) != hist:
            return f"levels from chi {levels_from_chi(A, chi)} vs enumeration {hist}"
        return None

    return [_run("levels determined by chi (braid deformation)", roundtrip)]


def uniform_checks(M: GeometricSemilattice) -> list:
    from .semilattice import uniform_expansion

    exp = uniform_expansion(M)
    if exp is None:
        return []
    return [_run("binomial-type expansion of chi (uniform lattice)", lambda: None if exp.verified else "expansion differs from chi")]
