"""Candidate-prime sieves.

Each sieve finds one or more witness elements of ``H`` whose defining
property can only fail modulo primes dividing an explicit integer ``d``.  The
primes of ``d`` are the candidates; each candidate is then given a verdict
(``in``: the image really has the property the sieve targets, ``out``: it
does not, ``deferred``: undecided here, left to the surjectivity filter).
"""

from dataclasses import dataclass, field
from math import gcd

from . import linalg
from .envelope import algebra_basis_Q, algebra_dim_mod, respun_basis
from .errors import (DegreeSkip, EnumerationTooLarge, NoInfiniteOrderElement,
                     NotAbsolutelyIrreducible, SolvableWitnessNotFound,
                     WitnessNotFound)
from .factor import PartialFactorization, gcd_refine, partial_factor
from .groups import WordSampler, derive_seed, evaluate_word, evaluate_word_mod
from .params import SieveParams
from .recognition import (derived_series_orders, group_order_bfs, invariant_forms,
                          is_monomial_mod_p, is_surjective_mod_p, nondegenerate_member,
                          preserved_form, EXCEEDS_CAP)
from .witness import SCREEN_PRIME, ImageSearch, commutator_word, evaluate_tree

IN, OUT, DEFERRED = "in", "out", "deferred"

# image sizes up to which structural predicates are decided by enumeration
PREDICATE_CAP = 10**6


class SurjectivityOracle:
    """Memoized ``is_surjective_mod_p`` for one group."""

    def __init__(self, G, params):
        self.G = G
        self.params = params
        self.verdicts = {}

    def __call__(self, p):
        if p not in self.verdicts:
            self.verdicts[p] = is_surjective_mod_p(self.G, p, self.params)
        return self.verdicts[p]


@dataclass
class CandidateReport:
    sieve: str
    witness: dict = field(default_factory=dict)
    d: int = 0
    factorization: PartialFactorization = None
    candidates: set = field(default_factory=set)
    refined: dict = field(default_factory=dict)  # p -> (verdict, certificate)
    notes: list = field(default_factory=list)

    def in_set(self):
        return {p for p, (v, _) in self.refined.items() if v == IN}

    def to_json(self):
        from .recognition import _jsonable
        return {
            "sieve": self.sieve,
            "witness": _jsonable(self.witness),
            "d": str(self.d),
            "factorization": self.factorization.to_json() if self.factorization else None,
            "candidates": sorted(self.candidates),
            "refined": {str(p): {"verdict": v, "certificate": _jsonable(c)}
                        for p, (v, c) in sorted(self.refined.items())},
            "notes": list(self.notes),
        }


def _setup(G, params, p0):
    params = params or SieveParams.for_degree(G.degree)
    return params, (p0 or SCREEN_PRIME)


def _report(name, witness, factorization, notes=()):
    return CandidateReport(name, witness, factorization.input, factorization,
                           set(factorization.primes), {}, list(notes))


def _remainder_note(f):
    if f.complete:
        return []
    return [f"unfactored remainder {f.composite_remainder}"]


# ---------------------------------------------------------------- order

def find_infinite_order_element(G, params, budget=None):
    sampler = WordSampler(G.ngens, derive_seed(params.seed, "order"), params.word_length)
    found = sampler.sample(lambda w: linalg.finite_order_test(evaluate_word(G, w)) is None,
                           budget or params.word_budget)
    if found is None:
        raise NoInfiniteOrderElement("no element of infinite order found")
    return found[0]


def primes_for_order(G, k=None, params=None, h=None):
    """Primes where the image is tiny (at most ``k`` elements).

    With ``h`` of infinite order, ``h^i - 1`` is nonzero for every ``i``; if the
    image has at most ``k`` elements then the image of ``h`` has order
    ``i <= k`` and p divides every entry of ``h^i - 1``.
    """
    params, _ = _setup(G, params, None)
    k = k if k is not None else params.order_bound
    if h is None:
        h = find_infinite_order_element(G, params)
    H = evaluate_word(G, h)
    if linalg.finite_order_test(H) is not None:
        raise NoInfiniteOrderElement(f"witness {h} has finite order")
    l, power = 1, linalg.identity(G.degree)
    gcds = []
    for _ in range(k):
        power = linalg.mat_mul(power, H)
        m_i = linalg.gcd_nonzero_entries(linalg.minus_identity(power))
        gcds.append(m_i)
        l = l * m_i // gcd(l, m_i)
    f = partial_factor(l)
    report = _report("order", {"h": h, "k": k, "m": gcds}, f, _remainder_note(f))
    for p in sorted(report.candidates):
        order = group_order_bfs(G, p, cap=k)
        if order == EXCEEDS_CAP:
            report.refined[p] = (OUT, {"order_exceeds": k})
        else:
            report.refined[p] = (IN, {"order": order})
    return report


# ---------------------------------------------------------------- abs. irreducible

def primes_for_abs_irreducible(G, params=None, max_rounds=3):
    """Primes where the image is not absolutely irreducible: they divide the
    Gram determinant of every Q-basis of the enveloping algebra."""
    params, _ = _setup(G, params, None)
    n = G.degree
    base = algebra_basis_Q(G)
    if not base.full:
        raise NotAbsolutelyIrreducible(f"enveloping algebra has dimension {base.dimension} < {n * n}")
    first = partial_factor(abs(base.gram_det))
    if first.complete:
        f = first
    else:
        rounds = iter(range(max_rounds))

        def run():
            i = next(rounds)
            if i == 0:
                return abs(base.gram_det)
            return abs(respun_basis(G, derive_seed(params.seed, "respin", i)).gram_det)

        f = gcd_refine(run, max_rounds=max_rounds)
    witness = {"basis_words": base.words()}
    report = _report("abs_irreducible", witness, f, _remainder_note(f))
    report.d = abs(base.gram_det)
    for p in sorted(report.candidates):
        dim = algebra_dim_mod(G, p)
        report.refined[p] = (IN if dim < n * n else OUT, {"algebra_dimension": dim})
    return report


# ---------------------------------------------------------------- monomial

def primes_for_monomial(G, params=None, p0=None, oracle=None, rounds=2):
    """Primes where the image may be monomial.

    ``k``-th powers (``k`` the exponent of Sym(n)) of monomial matrices are
    diagonal, so ``[g^k, h^k] = 1`` throughout a monomial image; a witness
    with ``[g^k, h^k] != 1`` over Z confines monomial images to primes of
    ``d = gcd of the nonzero entries of [g^k, h^k] - 1``.
    """
    params, screen = _setup(G, params, p0)
    n = G.degree
    if n <= 3:
        raise DegreeSkip("the solvable sieve covers monomial images in degree <= 3")
    k = params.sym_exponent
    search = ImageSearch(G, screen, WordSampler(G.ngens, derive_seed(params.seed, "monomial"),
                                                params.word_length))
    witnesses = []

    def run():
        for _ in range(params.word_budget):
            (a, x), (b, y) = search.element(), search.element()
            xk, yk = x**k, y**k
            if not (xk.inverse() @ yk.inverse() @ xk @ yk).is_identity():
                break
        else:
            raise WitnessNotFound("every sampled [g^k, h^k] is trivial")
        gk = linalg.mat_pow(evaluate_word(G, a), k)
        hk = linalg.mat_pow(evaluate_word(G, b), k)
        gki = linalg.mat_pow(evaluate_word(G, a.inverse()), k)
        hki = linalg.mat_pow(evaluate_word(G, b.inverse()), k)
        c = linalg.mat_mul(linalg.mat_mul(gki, hki), linalg.mat_mul(gk, hk))
        witnesses.append({"g": a, "h": b, "k": k})
        return linalg.gcd_nonzero_entries(linalg.minus_identity(c))

    f = gcd_refine(run, max_rounds=rounds)
    report = _report("monomial", {"pairs": witnesses}, f, _remainder_note(f))
    oracle = oracle or SurjectivityOracle(G, params)
    for p in sorted(report.candidates):
        v = oracle(p)
        if v.verdict == "yes":
            report.refined[p] = (OUT, {"surjective": True})
        elif p**n <= params.orbit_cap:
            report.refined[p] = (IN if is_monomial_mod_p(G, p) else OUT, {"line_orbits": True})
        else:
            report.refined[p] = (DEFERRED, {})
    return report


# ---------------------------------------------------------------- solvable

def primes_for_solvable(G, delta=None, params=None, p0=None, oracle=None, rounds=2):
    """Primes where the image may be solvable (and proper).

    In a group of derived length at most ``delta`` every balanced commutator
    tree of depth ``delta + 1`` is trivial, so a nontrivial integral tree ``g``
    confines such images to primes of ``gcd of the nonzero entries of g - 1``.
    """
    params, screen = _setup(G, params, p0)
    delta = delta if delta is not None else params.delta
    search = ImageSearch(G, screen, WordSampler(G.ngens, derive_seed(params.seed, "solvable"),
                                                params.word_length))
    trees = []

    def run():
        found = search.tree_commutator(delta + 1, params.leaf_budget)
        if found is None:
            raise SolvableWitnessNotFound(f"no nontrivial commutator tree of depth {delta + 1}")
        node, _ = found
        g, _ = evaluate_tree(G, node)
        trees.append(node.leaves())
        return linalg.gcd_nonzero_entries(linalg.minus_identity(g))

    f = gcd_refine(run, max_rounds=rounds)
    report = _report("solvable", {"depth": delta + 1, "trees": trees}, f, _remainder_note(f))
    oracle = oracle or SurjectivityOracle(G, params)
    for p in sorted(report.candidates):
        v = oracle(p)
        if v.verdict == "yes":
            report.refined[p] = (OUT, {"surjective": True})
            continue
        try:
            series = derived_series_orders(G.generators, p, PREDICATE_CAP)
        except EnumerationTooLarge:
            report.refined[p] = (DEFERRED, {})
            continue
        solvable = series[-1] == 1
        report.refined[p] = (IN if solvable and v.verdict == "no" else OUT,
                             {"derived_series_orders": series})
    return report


# ---------------------------------------------------------------- forms

def _trace_gap(G, w):
    h = evaluate_word(G, w)
    hi = evaluate_word(G, w.inverse())
    return linalg.trace(h) - linalg.trace(hi)


def _trace_sieve(name, G, params, screen, make_word, rounds):
    """Shared search for words ``w`` with ``tr(w) != tr(w^-1)``."""
    words = []

    def run():
        for _ in range(params.word_budget):
            w = make_word()
            x = evaluate_word_mod(G, w, screen)
            if x.trace() != x.inverse().trace():
                a = _trace_gap(G, w)
                if a:
                    words.append(w)
                    return abs(a)
        raise WitnessNotFound(f"{name}: every sampled element has tr(h) = tr(h^-1)")

    f = gcd_refine(run, max_rounds=rounds)
    return _report(name, {"words": words}, f, _remainder_note(f))


def primes_for_isometry(G, params=None, p0=None, word_source=None, rounds=2,
                        check_irreducible=True):
    """Primes where the image may preserve a nondegenerate bilinear form.

    Isometries satisfy ``tr(g) = tr(g^-1)``, so ``a = tr(h) - tr(h^-1) != 0``
    confines such primes to divisors of ``a``.  ``word_source`` (a callable
    returning words over ``G``) replaces uniform random words, e.g. to sample
    a normal subgroup; refinement is then deferred.
    """
    params, screen = _setup(G, params, p0)
    if check_irreducible and not algebra_basis_Q(G).full:
        raise NotAbsolutelyIrreducible("isometry sieve needs an absolutely irreducible input")
    sampler = WordSampler(G.ngens, derive_seed(params.seed, "isometry"), params.word_length)
    report = _trace_sieve("isometry", G, params, screen, word_source or sampler.random_word, rounds)
    for p in sorted(report.candidates):
        if word_source is not None:
            report.refined[p] = (DEFERRED, {})
            continue
        mats = [tuple(tuple(x % p for x in row) for row in g) for g in G.generators]
        F = nondegenerate_member(invariant_forms(mats, p), p)
        report.refined[p] = (IN, {"form": F}) if F is not None else (OUT, {})
    return report


def primes_for_similarity(G, params=None, p0=None, rounds=2):
    """Primes where the image may preserve a form up to scalars.

    Commutators of similarities are isometries, so the witness is a
    commutator ``h`` with ``tr(h) != tr(h^-1)``.
    """
    params, screen = _setup(G, params, p0)
    if G.degree == 2:
        raise DegreeSkip("every subgroup of SL(2, p) preserves a symplectic form")
    if not algebra_basis_Q(G).full:
        raise NotAbsolutelyIrreducible("similarity sieve needs an absolutely irreducible input")
    sampler = WordSampler(G.ngens, derive_seed(params.seed, "similarity"), params.word_length)

    def make_word():
        return commutator_word(sampler.random_word(), sampler.random_word())

    report = _trace_sieve("similarity", G, params, screen, make_word, rounds)
    for p in sorted(report.candidates):
        mats = [tuple(tuple(x % p for x in row) for row in g) for g in G.generators]
        found = preserved_form(mats, p)
        if found is None:
            report.refined[p] = (OUT, {})
        else:
            report.refined[p] = (IN, {"scalars": found[0], "form": found[1]})
    return report
