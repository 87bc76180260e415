"""Properties of congruence images: orders, surjectivity, and subgroup tests.

``is_surjective_mod_p`` proves ``phi_p(G) = SL(n, p)`` by exhibiting, in the
image, one witness against each family of maximal subgroups that can occur in
prime degree: a full enveloping algebra (reducible), a non-monomial commutator
``[g^k, h^k]`` (imprimitive), a nontrivial deep commutator tree (solvable), a
commutator with ``tr(h) != tr(h^-1)`` (classical form preserved up to scalar),
and an element whose order exceeds every element order in the small
exceptional subgroups.  It proves the converse by an obstruction (deficient
algebra, an invariant form, or an exact order below |SL(n, p)|).
"""

import itertools
from math import gcd
import random
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .envelope import algebra_dim_mod
from .errors import CompositeModulus, DegreeNotPrime, EnumerationTooLarge, OrbitTooLarge, OrderOracleUnavailable
from .factor import is_prime, prime_divisors
from .groups import WordSampler, derive_seed
from .modular import ModMatrix, element_order_exceeds, nullspace_mod, sl_order
from .params import BFS_CAP, ORBIT_CAP, SieveParams
from .stabchain import VECTOR_MODULUS_LIMIT, StabChain, bfs_order, encode_vectors, enumerate_group
from .witness import ImageSearch

EXCEEDS_CAP = "exceeds_cap"


@dataclass
class ModGroup:
    label: str
    m: int
    order: object  # int, or EXCEEDS_CAP
    method: str
    certificates: list = field(default_factory=list)


# ---------------------------------------------------------------- orders

def group_order_bfs(G, m, cap=BFS_CAP):
    """Exact order of the image mod ``m`` by enumeration, or EXCEEDS_CAP."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    order = bfs_order(G.generators, m, cap)
    return EXCEEDS_CAP if order is None else order


def group_order_stabilizer_chain(G, m, orbit_cap=ORBIT_CAP, seed=0):
    """Exact order of the image mod ``m`` from a stabilizer chain on (Z_m)^n."""
    chain = StabChain(list(G.generators), m, order_bound=sl_order(G.degree, m),
                      seed=seed, orbit_cap=orbit_cap)
    return chain.order()


def image_order(G, m, bfs_cap=BFS_CAP, orbit_cap=ORBIT_CAP, seed=0):
    """Exact order of ``phi_m(G)`` by whichever oracle fits in the caps."""
    if m == 1:
        return ModGroup(G.label, m, 1, "trivial")
    if m ** G.degree <= orbit_cap:
        order = group_order_stabilizer_chain(G, m, orbit_cap, seed)
        return ModGroup(G.label, m, order, "stabilizer_chain")
    order = group_order_bfs(G, m, bfs_cap)
    if order == EXCEEDS_CAP:
        raise OrderOracleUnavailable(
            f"image mod {m} exceeds the enumeration cap and (Z_{m})^{G.degree} the orbit cap")
    return ModGroup(G.label, m, order, "bfs")


def exact_oracle_feasible(n, m, bfs_cap=BFS_CAP, orbit_cap=ORBIT_CAP):
    return m**n <= orbit_cap or sl_order(n, m) <= bfs_cap


def is_surjective_mod_m(G, m, bfs_cap=BFS_CAP, orbit_cap=ORBIT_CAP):
    """Exact test of ``phi_m(G) = SL(n, Z_m)``."""
    if not exact_oracle_feasible(G.degree, m, bfs_cap, orbit_cap):
        raise OrderOracleUnavailable(f"no exact oracle for SL({G.degree}, Z_{m})")
    return image_order(G, m, bfs_cap, orbit_cap).order == sl_order(G.degree, m)


# ---------------------------------------------------------------- forms

def _form_system(mats, lambdas, p):
    """Rows of the linear system ``g Phi g^T = lambda_g Phi`` in vec(Phi)."""
    n = len(mats[0])
    rows = []
    for g, lam in zip(mats, lambdas):
        for i in range(n):
            for j in range(n):
                row = [g[i][k] * g[j][l] % p for k in range(n) for l in range(n)]
                row[i * n + j] = (row[i * n + j] - lam) % p
                rows.append(row)
    return rows


def invariant_forms(mats, p, lambdas=None):
    """Basis of the bilinear forms Phi with ``g Phi g^T = lambda_g Phi``."""
    n = len(mats[0])
    lambdas = lambdas or [1] * len(mats)
    basis = nullspace_mod(_form_system(mats, lambdas, p), n * n, p)
    return [tuple(tuple(v[i * n:(i + 1) * n]) for i in range(n)) for v in basis]


def nondegenerate_member(forms, p, tries=64, seed=0):
    """A nondegenerate element of the span of ``forms`` found by sampling, or None.

    Exact when the span is one-dimensional or every nonzero member is
    nondegenerate (as for absolutely irreducible groups).
    """
    if not forms:
        return None
    for F in forms:
        if linalg.determinant(F) % p:
            return F
    rng = random.Random(seed)
    n = len(forms[0])
    for _ in range(tries):
        coeffs = [rng.randrange(p) for _ in forms]
        F = tuple(tuple(sum(c * f[i][j] for c, f in zip(coeffs, forms)) % p for j in range(n))
                  for i in range(n))
        if linalg.determinant(F) % p:
            return F
    return None


def roots_of_unity(n, p):
    """The n-th roots of unity in F_p (a cyclic group of order gcd(n, p - 1))."""
    g = gcd(n, p - 1)
    if g == 1:
        return [1]
    primes = prime_divisors(g)
    for a in range(2, p):
        z = pow(a, (p - 1) // g, p)
        if all(pow(z, g // q, p) != 1 for q in primes):
            return sorted(pow(z, i, p) for i in range(g))
    return [1]


def similarity_forms(mats, p):
    """Yield ``(lambdas, forms)`` for every scalar pattern a nondegenerate
    similarity could have.  A nondegenerate ``Phi`` with ``g Phi g^T = l Phi``
    forces ``l^n = det(g)^2 = 1``."""
    n = len(mats[0])
    mu = roots_of_unity(n, p)
    for lambdas in itertools.product(mu, repeat=len(mats)):
        forms = invariant_forms(mats, p, list(lambdas))
        if forms:
            yield list(lambdas), forms


def preserved_form(mats, p):
    """A nondegenerate form preserved up to scalars, as ``(lambdas, Phi)``."""
    for lambdas, forms in similarity_forms(mats, p):
        F = nondegenerate_member(forms, p)
        if F is not None:
            return lambdas, F
    return None


# ---------------------------------------------------------------- predicates

def line_orbits(gens, p):
    """Orbits of ``<gens>`` on the lines of F_p^n (right action ``v -> v g``).

    Lines are represented by vectors whose first nonzero entry is 1.
    """
    n = len(gens[0])
    codes = np.arange(1, p**n, dtype=np.int64)
    V = np.empty((len(codes), n), dtype=np.int64)
    c = codes.copy()
    for j in range(n - 1, -1, -1):
        V[:, j] = c % p
        c //= p
    lead = V[np.arange(len(V)), (V != 0).argmax(axis=1)]
    reps = V[lead == 1]
    inv = np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=np.int64)

    def normalize(W):
        first = W[np.arange(len(W)), (W != 0).argmax(axis=1)]
        return (W * inv[first][:, None]) % p

    rep_codes = encode_vectors(reps, p)
    order = np.argsort(rep_codes)
    rep_codes = rep_codes[order]
    reps = reps[order]
    images = []
    for g in gens:
        W = normalize((reps @ (np.asarray(g, dtype=np.int64) % p)) % p)
        images.append(np.searchsorted(rep_codes, encode_vectors(W, p)))
    # union-find over lines
    parent = np.arange(len(reps))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for img in images:
        for a, b in zip(range(len(reps)), img):
            ra, rb = find(a), find(int(b))
            if ra != rb:
                parent[ra] = rb
    roots = np.array([find(i) for i in range(len(reps))])
    orbits = {}
    for i, r in enumerate(roots):
        orbits.setdefault(int(r), []).append(i)
    return [reps[idx] for idx in orbits.values()]


def is_monomial_mod_p(G, p):
    """Does the image permute n lines of F_p^n that span the space?

    The n lines form a union of line orbits (one orbit when the image is
    irreducible), so search over unions of orbits of size at most n.
    """
    n = G.degree
    gens = [tuple(tuple(x % p for x in row) for row in g) for g in G.generators]
    small = [o.tolist() for o in line_orbits(gens, p) if len(o) <= n]

    def extend(start, rows):
        if len(rows) == n:
            return True
        for i in range(start, len(small)):
            cand = rows + small[i]
            if len(cand) <= n and _rank_mod(cand, p) == len(cand) and extend(i + 1, cand):
                return True
        return False

    return extend(0, [])


def _rank_mod(rows, p):
    n = len(rows[0])
    null = nullspace_mod(rows, n, p)
    return n - len(null)


def derived_series_orders(gens, m, cap):
    """Orders of G, G', G'', ... down to the trivial group or a perfect group.

    Raises EnumerationTooLarge when the image has more than ``cap`` elements.
    """
    current = [np.asarray(g, dtype=np.int64) % m for g in gens]
    orders = []
    while True:
        E = enumerate_group(current, m, cap)
        if E is None:
            raise EnumerationTooLarge(f"image mod {m} has more than {cap} elements")
        orders.append(E.order)
        if E.order == 1:
            return orders
        derived = _derived_generators(current, m, cap)
        if not derived:
            orders.append(1)
            return orders
        Dorder = enumerate_group(derived, m, cap).order
        if Dorder == E.order:
            return orders
        current = derived


def _derived_generators(gens, m, cap):
    """Generators of the derived subgroup: commutators of the generators,
    closed under conjugation by the generators."""
    def inv(A):
        return np.array(ModMatrix(tuple(map(tuple, A.tolist())), m).inverse().rows, dtype=np.int64)

    invs = [inv(g) for g in gens]
    ident = np.eye(len(gens[0]), dtype=np.int64)
    out = []
    for (a, ai), (b, bi) in itertools.combinations(zip(gens, invs), 2):
        c = (ai @ bi % m) @ (a @ b % m) % m
        if not np.array_equal(c, ident):
            out.append(c)
    if not out:
        return out
    while True:
        D = enumerate_group(out, m, cap)
        grown = False
        for g, gi in zip(gens, invs):
            for c in list(out):
                x = (gi @ c % m) @ g % m
                if x not in D:
                    out.append(x)
                    grown = True
                    break
            if grown:
                break
        if not grown:
            return out


@dataclass
class ImagePredicates:
    p: int
    order: int
    solvable: bool
    monomial: bool
    preserves_form: bool
    similarity: bool


def image_predicates(G, p, cap=10**6):
    """Structural predicates of ``phi_p(G)`` (exact; needs enumeration)."""
    if not is_prime(p):
        raise CompositeModulus(f"{p} is not prime")
    series = derived_series_orders(G.generators, p, cap)
    solvable = series[-1] == 1
    mats = [tuple(tuple(x % p for x in row) for row in g) for g in G.generators]
    iso = nondegenerate_member(invariant_forms(mats, p), p) is not None
    sim = preserved_form(mats, p) is not None
    return ImagePredicates(p, series[0], solvable, is_monomial_mod_p(G, p), iso, sim)


# ---------------------------------------------------------------- surjectivity

@dataclass
class SurjectivityVerdict:
    p: int
    verdict: str  # "yes" | "no" | "undetermined"
    reason: str
    certificate: dict = field(default_factory=dict)

    @property
    def surjective(self):
        return self.verdict == "yes"

    def to_json(self):
        return {"p": self.p, "verdict": self.verdict, "reason": self.reason,
                "certificate": _jsonable(self.certificate)}


def _jsonable(x):
    from .groups import Word
    if isinstance(x, Word):
        return x.to_json()
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, int) and not isinstance(x, bool) and abs(x) >= 2**53:
        return str(x)
    return x


def _exact_verdict(G, p, params, reason_prefix=""):
    n = G.degree
    order = image_order(G, p, params.bfs_cap, params.orbit_cap, seed=params.seed).order
    full = sl_order(n, p)
    cert = {"order": order, "sl_order": full}
    if order == full:
        return SurjectivityVerdict(p, "yes", reason_prefix + "exact order equals |SL(n,p)|", cert)
    return SurjectivityVerdict(p, "no", reason_prefix + "exact order below |SL(n,p)|", cert)


def obstruction_mod_p(G, p, params):
    """A proof that the image is proper, or None."""
    n = G.degree
    dim = algebra_dim_mod(G, p)
    if dim < n * n:
        return {"algebra_dimension": dim}
    if n >= 3:
        mats = [tuple(tuple(x % p for x in row) for row in g) for g in G.generators]
        found = None
        for lambdas, forms in similarity_forms(mats, p):
            found = {"form": forms[0], "scalars": lambdas}
            break
        if found:
            return found
    probe = bfs_order(G.generators, p, params.probe_cap) if p < VECTOR_MODULUS_LIMIT else None
    if probe is not None and probe < sl_order(n, p):
        return {"order": probe}
    return None


def surjectivity_certificate(G, p, params):
    """Search for the witnesses that rule out every proper subgroup class.

    Returns ``(certificate, missing)``; ``missing`` lists the classes for which
    no witness was found within the budgets.
    """
    n = G.degree
    k = params.sym_exponent
    search = ImageSearch(G, p, WordSampler(G.ngens, derive_seed(params.seed, "surj", p),
                                           length=params.word_length))
    cert = {"algebra_dimension": algebra_dim_mod(G, p)}
    missing = []
    if cert["algebra_dimension"] < n * n:
        missing.append("absolutely_irreducible")
    if n >= 5:
        found = None
        for _ in range(params.word_budget):
            (a, x), (b, y) = search.element(), search.element()
            xk, yk = x**k, y**k
            c = xk.inverse() @ yk.inverse() @ xk @ yk
            if not c.is_identity():
                found = {"g": a, "h": b, "k": k}
                break
        if found:
            cert["non_monomial"] = found
        else:
            missing.append("non_monomial")
    tree = search.tree_commutator(params.delta + 1, params.leaf_budget)
    if tree is not None:
        node, _ = tree
        cert["non_solvable"] = {"depth": params.delta + 1, "leaves": node.leaves()}
    else:
        missing.append("non_solvable")
    if n >= 3:
        found = search.find_commutator(lambda c: c.trace() != c.inverse().trace(), params.word_budget)
        if found:
            cert["trace_asymmetric"] = found[0]
        else:
            missing.append("trace_asymmetric")
    found = search.find(lambda x: element_order_exceeds(x, params.order_bound), params.word_budget)
    if found:
        cert["large_order"] = {"word": found[0], "exceeds": params.order_bound}
    else:
        missing.append("large_order")
    return cert, missing


def is_surjective_mod_p(G, p, params=None):
    """Decide ``phi_p(G) = SL(n, p)`` for prime degree ``n`` and prime ``p``."""
    n = G.degree
    if not is_prime(n):
        raise DegreeNotPrime(f"degree {n} is not prime")
    if not is_prime(p):
        raise CompositeModulus(f"{p} is not prime")
    params = params or SieveParams.for_degree(n)
    if p <= 3:
        return _exact_verdict(G, p, params)
    obstruction = obstruction_mod_p(G, p, params)
    if obstruction is not None:
        return SurjectivityVerdict(p, "no", "obstruction", obstruction)
    cert, missing = surjectivity_certificate(G, p, params)
    if not missing:
        return SurjectivityVerdict(p, "yes", "certificate", cert)
    if exact_oracle_feasible(n, p, params.bfs_cap, params.orbit_cap):
        try:
            return _exact_verdict(G, p, params, "certificate incomplete; ")
        except (OrbitTooLarge, OrderOracleUnavailable):
            pass
    return SurjectivityVerdict(p, "undetermined", "missing " + ", ".join(missing), cert)
