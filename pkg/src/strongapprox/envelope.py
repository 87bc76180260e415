"""Enveloping algebras of matrix groups by spinning.

The algebra spanned by a group over a field is the span of all products of
generators, so it is found by closing ``{1}`` under right multiplication by
the generators.  Every basis element is recorded together with the word that
produced it, so a basis found over Q can be re-evaluated mod p.
"""

import random
from collections import deque
from dataclasses import dataclass, field

from . import linalg
from .errors import NotTransvection
from .groups import IDENTITY_WORD, Word, evaluate_word
from .modular import ModularSpan


@dataclass
class AlgebraBasis:
    degree: int
    basis: list = field(default_factory=list)  # (Word, matrix) pairs
    gram_det: int = None

    @property
    def dimension(self):
        return len(self.basis)

    @property
    def full(self):
        return self.dimension == self.degree**2

    def words(self):
        return [w for w, _ in self.basis]

    def matrices(self):
        return [A for _, A in self.basis]


def gram_determinant(mats):
    """det[tr(A_i A_j)]; nonzero iff the A_i are a basis of a semisimple
    algebra (over Q, of the full matrix algebra)."""
    gram = [[linalg.trace(linalg.mat_mul(A, B)) for B in mats] for A in mats]
    return linalg.determinant(gram)


def _finish(n, basis):
    out = AlgebraBasis(n, basis)
    if out.full:
        out.gram_det = gram_determinant(out.matrices())
        if out.gram_det == 0:
            raise AssertionError("trace form degenerate on a full matrix algebra basis")
    return out


def algebra_basis_Q(G, order=None):
    """Q-basis of the algebra spanned by ``G``, breadth-first so words stay short.

    ``order`` optionally permutes the generator indices used for spinning.
    """
    n = G.degree
    gens = list(order) if order is not None else list(range(G.ngens))
    span = linalg.RationalSpan(n * n)
    ident = linalg.identity(n)
    span.add(linalg.vectorize(ident))
    basis = [(IDENTITY_WORD, ident)]
    queue = deque(basis)
    while queue and span.dimension < n * n:
        w, A = queue.popleft()
        for i in gens:
            B = linalg.mat_mul(A, G.generators[i])
            if span.add(linalg.vectorize(B)):
                item = (w * Word.letter(i), B)
                basis.append(item)
                queue.append(item)
                if span.dimension == n * n:
                    break
    return _finish(n, basis)


def respun_basis(G, seed, length=5):
    """Another full basis: the Q-basis right-multiplied by a random word.

    If the span mod p is deficient then so is every such translate, so the
    Gram determinants of translates share all primes of deficiency and their
    gcd shrinks the rest.
    """
    base = algebra_basis_Q(G)
    rng = random.Random(seed)
    letters = tuple((rng.randrange(G.ngens), rng.choice((1, -1))) for _ in range(length))
    h = Word(letters)
    H = evaluate_word(G, h)
    basis = [(w * h, linalg.mat_mul(A, H)) for w, A in base.basis]
    return _finish(G.degree, basis)


def algebra_dim_mod(G, p):
    """Dimension over F_p of the algebra spanned by the image of ``G``."""
    n = G.degree
    span = ModularSpan(n * n, p)  # raises CompositeModulus
    gens = [tuple(tuple(x % p for x in row) for row in g) for g in G.generators]
    ident = linalg.identity(n)
    span.add(linalg.vectorize(ident))
    queue = deque([ident])
    while queue and span.dimension < n * n:
        A = queue.popleft()
        for g in gens:
            B = tuple(tuple(x % p for x in row) for row in linalg.mat_mul(A, g))
            if span.add(linalg.vectorize(B)):
                queue.append(B)
    return span.dimension


def normal_closure_algebra_basis_Q(G, t, t_word=None):
    """Q-basis of the algebra spanned by all ``G``-conjugates of ``t``.

    Seeded with {1, t}; closed under multiplication by basis elements and
    under conjugation by the generators of ``G``.  Words are over the
    generators of ``G`` when ``t_word`` is given; otherwise the letter with
    index ``G.ngens`` stands for ``t``.
    """
    if not linalg.is_transvection(t):
        raise NotTransvection("t - 1 must be a nonzero square-zero rank-one matrix")
    n = G.degree
    tw = t_word if t_word is not None else Word.letter(G.ngens)
    span = linalg.RationalSpan(n * n)
    ident = linalg.identity(n)
    basis = []

    def insert(w, A):
        if span.add(linalg.vectorize(A)):
            basis.append((w, A))
            return True
        return False

    insert(IDENTITY_WORD, ident)
    insert(tw, linalg.as_matrix(t))
    done = 0
    while done < len(basis) and span.dimension < n * n:
        w, A = basis[done]
        done += 1
        for k in range(G.ngens):
            g, ginv = G.generators[k], G.inverses[k]
            C = linalg.mat_mul(linalg.mat_mul(g, A), ginv)
            insert(w.conjugate_by(Word.letter(k)), C)
        for v, B in list(basis[:done]):
            insert(w * v, linalg.mat_mul(A, B))
            insert(v * w, linalg.mat_mul(B, A))
    return _finish(n, basis)
