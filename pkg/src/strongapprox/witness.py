"""Searches for group elements with a property, mirrored in a congruence image.

Elements are carried as ``(word, value)`` pairs.  Searching happens with
values in ``SL(n, Z_m)`` (cheap); a found word is evaluated over Z afterwards
when an integral witness is needed.
"""

from dataclasses import dataclass

from . import linalg
from .envelope import gram_determinant
from .groups import Word, evaluate_word, evaluate_word_mod
from .modular import element_order_exceeds

# Large prime used to screen integral computations when no surjective prime
# is known yet.
SCREEN_PRIME = 2147483647


def commutator_word(a, b):
    """``[a, b] = a^-1 b^-1 a b``."""
    return a.inverse() * b.inverse() * a * b


def commutator_mod(x, y):
    return x.inverse() @ y.inverse() @ x @ y


class BudgetExhausted(Exception):
    pass


@dataclass
class TreeNode:
    """Balanced commutator tree; leaves carry words."""

    left: "TreeNode" = None
    right: "TreeNode" = None
    word: Word = None

    @property
    def depth(self):
        return 0 if self.left is None else 1 + self.left.depth

    def full_word(self):
        if self.left is None:
            return self.word
        return commutator_word(self.left.full_word(), self.right.full_word())

    def leaves(self):
        if self.left is None:
            return [self.word]
        return self.left.leaves() + self.right.leaves()


class ImageSearch:
    """Random elements of the image of ``G`` mod ``m`` drawn from a word sampler."""

    def __init__(self, G, m, sampler):
        self.G = G
        self.m = m
        self.sampler = sampler
        self.drawn = 0

    def element(self):
        w = self.sampler.random_word()
        self.drawn += 1
        return w, evaluate_word_mod(self.G, w, self.m)

    def find(self, predicate, budget):
        """First ``(word, value)`` whose value satisfies ``predicate``."""
        for _ in range(budget):
            w, x = self.element()
            if predicate(x):
                return w, x
            self.sampler.record_failure()
        return None

    def find_commutator(self, predicate, budget):
        for _ in range(budget):
            (a, x), (b, y) = self.element(), self.element()
            c = commutator_mod(x, y)
            if predicate(c):
                return commutator_word(a, b), c
            self.sampler.record_failure()
        return None

    def tree_commutator(self, depth, leaf_budget, retries=4):
        """Nontrivial balanced commutator tree of the given depth, or None.

        Every internal node is resampled until it is nontrivial; otherwise one
        commuting pair deep in the tree would kill the whole commutator.
        """
        limit = self.drawn + leaf_budget

        def build(d):
            if d == 0:
                if self.drawn >= limit:
                    raise BudgetExhausted
                w, x = self.element()
                return TreeNode(word=w), x
            for _ in range(retries):
                try:
                    left, x = build(d - 1)
                except _Retry:
                    continue
                for _ in range(retries):
                    try:
                        right, y = build(d - 1)
                    except _Retry:
                        continue
                    c = commutator_mod(x, y)
                    if not c.is_identity():
                        return TreeNode(left, right), c
            self.sampler.record_failure()
            raise _Retry

        while True:
            try:
                return build(depth)
            except _Retry:
                continue
            except BudgetExhausted:
                return None


class _Retry(Exception):
    pass


def evaluate_tree(G, node):
    """Integral value of a commutator tree as ``(value, inverse)``."""
    if node.left is None:
        return evaluate_word(G, node.word), evaluate_word(G, node.word.inverse())
    a, ai = evaluate_tree(G, node.left)
    b, bi = evaluate_tree(G, node.right)
    mul = linalg.mat_mul
    return mul(mul(ai, bi), mul(a, b)), mul(mul(bi, ai), mul(b, a))


def evaluate_tree_mod(G, node, m):
    if node.left is None:
        return evaluate_word_mod(G, node.word, m)
    return commutator_mod(evaluate_tree_mod(G, node.left, m), evaluate_tree_mod(G, node.right, m))


# ---------------------------------------------------------------- claims
#
# A claim is a JSON object ``{"kind": ..., "modulus": m?, ...}`` about a word
# (or, for commutator trees, a list of leaf words).  Without ``modulus`` the
# claim is about the integral matrix.

CLAIM_KINDS = ("infinite_order", "nontrivial", "trace_asymmetric", "order_exceeds",
               "tree_nontrivial", "algebra_basis")


def power_word(w, k):
    return Word(w.factors * k)


def tree_from_leaves(leaves):
    """Balanced commutator tree over ``leaves`` (a power of two of them)."""
    nodes = [TreeNode(word=w) for w in leaves]
    if not nodes or len(nodes) & (len(nodes) - 1):
        raise ValueError("a balanced tree needs a power-of-two number of leaves")
    while len(nodes) > 1:
        nodes = [TreeNode(a, b) for a, b in zip(nodes[::2], nodes[1::2])]
    return nodes[0]


def check_claim(G, word, claim):
    """Re-evaluate a witness; True iff the claimed property holds."""
    kind = claim["kind"]
    m = claim.get("modulus")
    m = int(m) if m is not None else None
    if kind == "tree_nontrivial":
        node = tree_from_leaves([Word.from_json(x) for x in word])
        if m is not None:
            return not evaluate_tree_mod(G, node, m).is_identity()
        return evaluate_tree(G, node)[0] != linalg.identity(G.degree)
    if kind == "algebra_basis":
        mats = [evaluate_word(G, Word.from_json(x)) for x in word]
        if len(mats) != G.degree**2:
            return False
        d = gram_determinant(mats)
        return d != 0 and ("gram_det" not in claim or abs(d) == int(claim["gram_det"]))
    w = Word.from_json(word)
    if kind == "infinite_order":
        return linalg.finite_order_test(evaluate_word(G, w)) is None
    if m is not None:
        x = evaluate_word_mod(G, w, m)
        if kind == "nontrivial":
            return not x.is_identity()
        if kind == "trace_asymmetric":
            return x.trace() != x.inverse().trace()
        if kind == "order_exceeds":
            return element_order_exceeds(x, int(claim["bound"]))
    else:
        if kind == "nontrivial":
            return evaluate_word(G, w) != linalg.identity(G.degree)
        if kind == "trace_asymmetric":
            return linalg.trace(evaluate_word(G, w)) != linalg.trace(evaluate_word(G, w.inverse()))
    raise ValueError(f"unsupported claim {claim!r}")
