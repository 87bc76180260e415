"""Drivers computing the exceptional primes of a dense group.

``primes_for_dense`` (prime degree) unions the candidate sets of the sieves and
keeps the candidates modulo which the group does not surject.
``primes_for_dense_transvection`` (any degree, given a transvection ``t`` in
the group) works with the normal closure of ``t`` instead.
"""

import random
from dataclasses import dataclass, field

import sympy

from . import linalg
from .envelope import normal_closure_algebra_basis_Q
from .errors import (DegreeNotPrime, NoSurjectivePrimeFound, NotDense, NotTransvection,
                     StrongApproxError, WitnessNotFound)
from .factor import is_prime, partial_factor
from .groups import Word, WordSampler, derive_seed, evaluate_word, evaluate_word_mod
from .modular import ModularSpan, sl_order
from .params import SieveParams
from .recognition import (exact_oracle_feasible, image_order, is_surjective_mod_m,
                          SurjectivityVerdict, _jsonable)
from .sieves import (CandidateReport, SurjectivityOracle, primes_for_abs_irreducible, primes_for_isometry,
                     primes_for_monomial, primes_for_order, primes_for_similarity,
                     primes_for_solvable)
from .witness import SCREEN_PRIME, ImageSearch, commutator_word

P0_SCAN = 25


@dataclass
class DensityDiagnostics:
    irreducible_element: Word = None
    char_poly: list = None
    non_solvable: dict = None
    trace_asymmetric: Word = None

    def to_json(self):
        return _jsonable({
            "irreducible_element": self.irreducible_element,
            "char_poly": self.char_poly,
            "non_solvable": self.non_solvable,
            "trace_asymmetric": self.trace_asymmetric,
        })


@dataclass
class PiReport:
    label: str
    degree: int
    pi: set
    pi_tilde: set
    p0: int = None
    sieves: list = field(default_factory=list)
    verdicts: dict = field(default_factory=dict)
    undetermined: set = field(default_factory=set)
    diagnostics: DensityDiagnostics = None
    notes: list = field(default_factory=list)

    @property
    def candidates(self):
        out = set()
        for r in self.sieves:
            out |= r.candidates
        return out

    def to_json(self):
        return {
            "label": self.label,
            "degree": self.degree,
            "pi": sorted(self.pi),
            "pi_tilde": sorted(self.pi_tilde),
            "p0": self.p0,
            "candidates": sorted(self.candidates),
            "undetermined": sorted(self.undetermined),
            "sieves": [r.to_json() for r in self.sieves],
            "verdicts": {str(p): v.to_json() for p, v in sorted(self.verdicts.items())},
            "diagnostics": self.diagnostics.to_json() if self.diagnostics else None,
            "notes": list(self.notes),
        }


def _primes_above(bound, count):
    out, p = [], bound
    while len(out) < count:
        p += 1
        if is_prime(p):
            out.append(p)
    return out


def find_p0(G, params=None, oracle=None, scan=P0_SCAN):
    """Smallest prime p > 3 (among the first ``scan``) with ``phi_p(G) = SL(n, p)``."""
    params = params or SieveParams.for_degree(G.degree)
    oracle = oracle or SurjectivityOracle(G, params)
    for p in _primes_above(3, scan):
        if oracle(p).verdict == "yes":
            return p
    raise NoSurjectivePrimeFound(f"no surjective prime among the first {scan} primes above 3")


def pi_tilde(G, pi):
    """Add 2 when the group surjects mod 2 but not mod 4 (degree at most 4)."""
    pi = set(pi)
    if G.degree > 4 or 2 in pi:
        return pi
    if is_surjective_mod_m(G, 2) and not is_surjective_mod_m(G, 4):
        pi.add(2)
    return pi


def _run_sieves(G, params, p0, oracle):
    n = G.degree
    reports = [primes_for_order(G, params=params),
               primes_for_abs_irreducible(G, params=params)]
    if n >= 5:
        reports.append(primes_for_monomial(G, params=params, p0=p0, oracle=oracle))
    reports.append(primes_for_solvable(G, params=params, p0=p0, oracle=oracle))
    if n >= 3:
        reports.append(primes_for_similarity(G, params=params, p0=p0))
    return reports


def primes_for_dense(G, params=None, diagnostics=False):
    """Exceptional primes of a dense subgroup of SL(n, Z), n prime."""
    n = G.degree
    if not is_prime(n):
        raise DegreeNotPrime(f"degree {n} is not prime")
    params = params or SieveParams.for_degree(n)
    oracle = SurjectivityOracle(G, params)
    p0 = find_p0(G, params, oracle)
    reports = _run_sieves(G, params, p0, oracle)
    report = PiReport(G.label, n, set(), set(), p0, reports)
    for r in reports:
        report.notes.extend(f"{r.sieve}: {note}" for note in r.notes)
    for p in sorted(report.candidates):
        v = oracle(p)
        report.verdicts[p] = v
        if v.verdict == "no":
            report.pi.add(p)
        elif v.verdict == "undetermined":
            report.undetermined.add(p)
    report.pi_tilde = pi_tilde(G, report.pi)
    if diagnostics:
        report.diagnostics = density_diagnostics(G, params)
    return report


# ---------------------------------------------------------------- transvections

def _normal_closure_words(G, t_word, seed, length=5, factors=3):
    """Random products of conjugates ``w t^(+-1) w^-1``."""
    sampler = WordSampler(G.ngens, seed, length)
    rng = random.Random(seed)

    def draw():
        out = Word()
        for _ in range(rng.randint(2, factors)):
            tt = t_word if rng.random() < 0.5 else t_word.inverse()
            out = out * tt.conjugate_by(sampler.random_word())
        return out

    return draw


def normal_closure_dim_mod(G, t, p):
    """Dimension over F_p of the algebra spanned by the conjugates of ``t``."""
    n = G.degree
    span = ModularSpan(n * n, p)

    def red(A):
        return tuple(tuple(x % p for x in row) for row in A)

    gens = [(red(g), red(gi)) for g, gi in zip(G.generators, G.inverses)]
    basis = []
    for A in (linalg.identity(n), red(t)):
        if span.add(linalg.vectorize(A)):
            basis.append(A)
    done = 0
    while done < len(basis) and span.dimension < n * n:
        A = basis[done]
        done += 1
        new = [red(linalg.mat_mul(linalg.mat_mul(g, A), gi)) for g, gi in gens]
        new += [red(linalg.mat_mul(A, B)) for B in basis[:done]]
        new += [red(linalg.mat_mul(B, A)) for B in basis[:done]]
        for B in new:
            if span.add(linalg.vectorize(B)):
                basis.append(B)
    return span.dimension


def transvection_verdict(G, t, t_word, p, params):
    """Is ``phi_p(G) = SL(n, p)``?  Exact oracle when feasible; otherwise the
    transvection criterion: an absolutely irreducible image of the normal
    closure of ``t`` with ``tr(h) != tr(h^-1)`` for some element (p odd)."""
    n = G.degree
    if exact_oracle_feasible(n, p, params.bfs_cap, params.orbit_cap):
        order = image_order(G, p, params.bfs_cap, params.orbit_cap, params.seed).order
        verdict = "yes" if order == sl_order(n, p) else "no"
        return SurjectivityVerdict(p, verdict, "exact order", {"order": order})
    if p == 2:
        return SurjectivityVerdict(p, "undetermined", "no exact oracle at p = 2")
    dim = normal_closure_dim_mod(G, t, p)
    if dim < n * n:
        return SurjectivityVerdict(p, "no", "normal closure not absolutely irreducible",
                                   {"algebra_dimension": dim})
    draw = _normal_closure_words(G, t_word, derive_seed(params.seed, "trace", p))
    for _ in range(params.word_budget):
        w = draw()
        x = evaluate_word_mod(G, w, p)
        if x.trace() != x.inverse().trace():
            return SurjectivityVerdict(p, "yes", "generated by transvections",
                                       {"algebra_dimension": dim, "trace_asymmetric": w})
    return SurjectivityVerdict(p, "undetermined", "no trace-asymmetric element found",
                               {"algebra_dimension": dim})


def primes_for_dense_transvection(G, t_word, params=None, scan_primes=()):
    """Exceptional primes of ``G`` containing the transvection ``t = t_word``."""
    n = G.degree
    if n % 2:
        raise StrongApproxError("the transvection driver expects even degree")
    t = evaluate_word(G, t_word)
    if not linalg.is_transvection(t):
        raise NotTransvection(f"{t_word} does not evaluate to a transvection")
    params = params or SieveParams.for_degree(n, order_bound=1)
    basis = normal_closure_algebra_basis_Q(G, t, t_word)
    if not basis.full:
        raise NotDense(f"normal closure of t spans an algebra of dimension {basis.dimension}")
    f = partial_factor(abs(basis.gram_det))
    draw = _normal_closure_words(G, t_word, derive_seed(params.seed, "isometry-N"))
    try:
        iso = primes_for_isometry(G, params=params, word_source=draw, check_irreducible=False)
    except WitnessNotFound as exc:
        raise NotDense(f"normal closure of t looks like an isometry group: {exc}") from exc
    absirr = CandidateReport("normal_closure_abs_irreducible", {"basis_words": basis.words()},
                             abs(basis.gram_det), f, set(f.primes), {},
                             [] if f.complete else [f"unfactored remainder {f.composite_remainder}"])
    report = PiReport(G.label, n, set(), set(), None, [absirr, iso])
    for p in sorted(report.candidates | set(scan_primes)):
        v = transvection_verdict(G, t, t_word, p, params)
        report.verdicts[p] = v
        if v.verdict == "no":
            report.pi.add(p)
        elif v.verdict == "undetermined":
            report.undetermined.add(p)
    report.pi_tilde = pi_tilde(G, report.pi) if n <= 4 else set(report.pi)
    return report


# ---------------------------------------------------------------- diagnostics

def density_diagnostics(G, params=None, budget=None):
    """Best-effort witnesses for density; a missing witness is not a refutation."""
    params = params or SieveParams.for_degree(G.degree)
    budget = budget or params.word_budget
    diag = DensityDiagnostics()
    x = sympy.Symbol("x")
    sampler = WordSampler(G.ngens, derive_seed(params.seed, "diag-irr"), params.word_length)
    for _ in range(min(budget, 200)):
        w = sampler.random_word()
        coeffs = linalg.char_poly(evaluate_word(G, w))
        if sympy.Poly(coeffs, x).is_irreducible:
            diag.irreducible_element, diag.char_poly = w, coeffs
            break
    search = ImageSearch(G, SCREEN_PRIME,
                         WordSampler(G.ngens, derive_seed(params.seed, "diag-tree"), params.word_length))
    found = search.tree_commutator(params.delta + 1, params.leaf_budget)
    if found is not None:
        diag.non_solvable = {"depth": params.delta + 1, "leaves": found[0].leaves()}
    sampler = WordSampler(G.ngens, derive_seed(params.seed, "diag-trace"), params.word_length)
    for _ in range(budget):
        w = commutator_word(sampler.random_word(), sampler.random_word())
        h = evaluate_word(G, w)
        if linalg.trace(h) != linalg.trace(evaluate_word(G, w.inverse())):
            diag.trace_asymmetric = w
            break
    return diag
