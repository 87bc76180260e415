"""Constructed groups with a known structure mod p, lifted to SL(n, Z).

Every matrix of SL(n, p) is a product of elementary matrices, and each of
those lifts to SL(n, Z); this gives integral generators whose image mod p is
any prescribed subgroup.
"""

import random

from strongapprox import linalg
from strongapprox.catalog import elementary
from strongapprox.groups import GenSet


def lift_to_sl(A, p):
    """Integral matrix of determinant 1 reducing to ``A`` (in SL(n, p)) mod p."""
    n = len(A)
    M = [[x % p for x in row] for row in A]
    ops = []  # (i, j, c): row_i += c * row_j

    def add(i, j, c):
        c %= p
        if c:
            M[i] = [(a + c * b) % p for a, b in zip(M[i], M[j])]
            ops.append((i, j, c))

    for j in range(n):
        if M[j][j] == 0:
            k = next(k for k in range(j + 1, n) if M[k][j])
            add(j, k, 1)
        inv = pow(M[j][j], -1, p)
        for i in range(n):
            if i != j:
                add(i, j, -M[i][j] * inv)
    for j in range(n - 1):
        a = M[j][j]
        if a == 1:
            continue
        add(j + 1, j, 1)
        add(j, j + 1, (1 - a) * pow(a, -1, p))
        add(j + 1, j, -a)
        add(j, j + 1, -M[j][j + 1] * pow(M[j + 1][j + 1], -1, p))
    assert M == [list(r) for r in linalg.identity(n)]
    # E_k ... E_1 A = I, so A = E_1^-1 ... E_k^-1
    out = linalg.identity(n)
    for i, j, c in ops:
        out = linalg.mat_mul(out, elementary(n, i, j, -c))
    return out


def _det_mod(A, p):
    return linalg.determinant(A) % p


def random_monomial(n, p, rng):
    perm = list(range(n))
    rng.shuffle(perm)
    d = [rng.randrange(1, p) for _ in range(n)]
    A = [[0] * n for _ in range(n)]
    for i in range(n):
        A[i][perm[i]] = d[i]
    det = _det_mod(A, p)
    A[n - 1][perm[n - 1]] = d[n - 1] * pow(det, -1, p) % p
    return tuple(map(tuple, A))


def random_upper_triangular(n, p, rng):
    A = [[rng.randrange(p) if j > i else 0 for j in range(n)] for i in range(n)]
    d = [rng.randrange(1, p) for _ in range(n)]
    prod = 1
    for x in d[:-1]:
        prod = prod * x % p
    d[-1] = pow(prod, -1, p)
    for i in range(n):
        A[i][i] = d[i]
    return tuple(map(tuple, A))


def random_invertible(n, p, rng):
    while True:
        A = tuple(tuple(rng.randrange(p) for _ in range(n)) for _ in range(n))
        if _det_mod(A, p):
            return A


def symmetric_form_isometries(n, p, rng, count=2):
    """Products of two reflections for a random nondegenerate symmetric form
    (p odd); returns ``(form, generators)``."""
    while True:
        S = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                S[i][j] = S[j][i] = rng.randrange(p)
        if _det_mod(S, p):
            break

    def bil(x, y):
        return sum(x[i] * S[i][j] * y[j] for i in range(n) for j in range(n)) % p

    def reflection(v):
        q = bil(v, v)
        inv2 = 2 * pow(q, -1, p)
        # x -> x - 2 B(x, v)/B(v, v) v, as a matrix acting on row vectors x
        return tuple(tuple((int(i == j) - inv2 * sum(S[i][k] * v[k] for k in range(n)) * v[j]) % p
                           for j in range(n)) for i in range(n))

    def anisotropic():
        while True:
            v = [rng.randrange(p) for _ in range(n)]
            if bil(v, v):
                return v

    gens = []
    for _ in range(count):
        r1, r2 = reflection(anisotropic()), reflection(anisotropic())
        gens.append(tuple(tuple(x % p for x in row) for row in linalg.mat_mul(r1, r2)))
    return tuple(map(tuple, S)), gens


def symplectic_isometries(n, p, rng, count=2):
    """Symplectic transvections x -> x + c B(x, v) v for a random alternating
    form B of even degree ``n``; returns ``(form, generators)``."""
    m = n // 2
    J = [[0] * n for _ in range(n)]
    for i in range(m):
        J[i][m + i], J[m + i][i] = 1, p - 1
    P = random_invertible(n, p, rng)
    B = [[x % p for x in row] for row in linalg.mat_mul(linalg.mat_mul(P, J), linalg.transpose(P))]
    gens = []
    for _ in range(count):
        g = linalg.identity(n)
        for _ in range(3):
            v = [rng.randrange(p) for _ in range(n)]
            c = rng.randrange(1, p)
            Bv = [sum(B[i][k] * v[k] for k in range(n)) % p for i in range(n)]
            T = tuple(tuple((int(i == j) + c * Bv[i] * v[j]) % p for j in range(n)) for i in range(n))
            g = tuple(tuple(x % p for x in row) for row in linalg.mat_mul(g, T))
        gens.append(g)
    return tuple(map(tuple, B)), gens


def lifted_group(mats, p, label):
    n = len(mats[0])
    return GenSet(n, tuple(lift_to_sl(A, p) for A in mats), label)


def monomial_family(count, seed=0, degrees=(3, 5), primes=(5, 7, 11, 13)):
    rng = random.Random(seed)
    out = []
    for k in range(count):
        n, p = rng.choice(degrees), rng.choice(primes)
        mats = [random_monomial(n, p, rng) for _ in range(2)]
        out.append((lifted_group(mats, p, f"monomial-{k}"), p))
    return out


def isometry_family(count, seed=0, primes=(5, 7, 11, 13)):
    rng = random.Random(seed)
    out = []
    for k in range(count):
        p = rng.choice(primes)
        if k % 2:
            form, mats = symplectic_isometries(4, p, rng)
        else:
            form, mats = symmetric_form_isometries(rng.choice((3, 5)), p, rng)
        out.append((lifted_group(mats, p, f"isometry-{k}"), p, form))
    return out


def solvable_family(count, seed=0, primes=(3, 5, 7, 11)):
    """Upper triangular groups (degree 3, 4) and monomial groups (degree 3).

    Degree 4 uses p <= 3 so the derived series stays enumerable.
    """
    rng = random.Random(seed)
    out = []
    for k in range(count):
        p = rng.choice(primes)
        if k % 2:
            mats = [random_monomial(3, p, rng) for _ in range(2)]
        else:
            n = rng.choice((3, 4))
            if n == 4:
                p = rng.choice((2, 3))
            mats = [random_upper_triangular(n, p, rng) for _ in range(2)]
        out.append((lifted_group(mats, p, f"solvable-{k}"), p))
    return out


# ---------------------------------------------------------------- soundness checks
# Each returns the number of violations found for one group.

def monomial_violations(G, p, pairs=20, seed=0):
    """``[g^k, h^k]`` must vanish mod p (k the exponent of Sym(n))."""
    from strongapprox.groups import WordSampler
    from strongapprox.params import sym_exponent
    from strongapprox.recognition import is_monomial_mod_p
    from strongapprox.witness import ImageSearch, commutator_mod

    k = sym_exponent(G.degree)
    search = ImageSearch(G, p, WordSampler(G.ngens, seed, 6))
    bad = 0
    for _ in range(pairs):
        (_, x), (_, y) = search.element(), search.element()
        bad += not commutator_mod(x**k, y**k).is_identity()
    bad += not is_monomial_mod_p(G, p)
    return bad


def isometry_violations(G, p, form, words=20, seed=0):
    """``tr(g) = tr(g^-1)`` for every element, and the form is detected."""
    from strongapprox.groups import WordSampler, evaluate_word_mod
    from strongapprox.recognition import invariant_forms, nondegenerate_member

    sampler = WordSampler(G.ngens, seed, 6)
    bad = 0
    for _ in range(words):
        x = evaluate_word_mod(G, sampler.random_word(), p)
        bad += x.trace() != x.inverse().trace()
    mats = [tuple(tuple(v % p for v in row) for row in g) for g in G.generators]
    bad += nondegenerate_member(invariant_forms(mats, p), p) is None
    return bad


def solvable_violations(G, p, trees=10, seed=0):
    """Depth delta+1 commutator trees vanish; the tree search must come up empty."""
    from strongapprox.groups import WordSampler
    from strongapprox.params import default_delta
    from strongapprox.recognition import derived_series_orders
    from strongapprox.witness import ImageSearch, evaluate_tree_mod, tree_from_leaves

    depth = default_delta(G.degree) + 1
    sampler = WordSampler(G.ngens, seed, 4)
    bad = 0
    for _ in range(trees):
        node = tree_from_leaves([sampler.random_word() for _ in range(2**depth)])
        bad += not evaluate_tree_mod(G, node, p).is_identity()
    search = ImageSearch(G, p, WordSampler(G.ngens, seed + 1, 4))
    bad += search.tree_commutator(depth, leaf_budget=256) is not None
    bad += derived_series_orders(G.generators, p, 10**6)[-1] != 1
    return bad
