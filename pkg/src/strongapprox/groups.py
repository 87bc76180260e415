"""Finitely generated subgroups of SL(n, Z), words, and random word sampling.

A :class:`Word` is a product of generator powers.  Evaluating the same word in
``H`` and in a congruence image is how elements found modulo a prime are
lifted back to ``H``.
"""

import hashlib
import json
import random
from dataclasses import dataclass
from functools import cached_property

from . import linalg
from .errors import IndexOutOfRange, NotDeterminantOne, SchemaError
from .modular import ModMatrix


def derive_seed(seed, *labels):
    """Deterministic 64-bit seed for an independent random stream."""
    text = ":".join([str(seed), *map(str, labels)])
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


@dataclass(frozen=True)
class Word:
    """Product ``g[i1]**e1 * g[i2]**e2 * ...`` (0-based generator indices)."""

    factors: tuple = ()

    def __post_init__(self):
        merged = []
        for i, e in self.factors:
            i, e = int(i), int(e)
            if e == 0:
                continue
            if merged and merged[-1][0] == i:
                e += merged.pop()[1]
                if e == 0:
                    continue
            merged.append((i, e))
        object.__setattr__(self, "factors", tuple(merged))

    @classmethod
    def letter(cls, i, e=1):
        return cls(((i, e),))

    def __mul__(self, other):
        return Word(self.factors + other.factors)

    def inverse(self):
        return Word(tuple((i, -e) for i, e in reversed(self.factors)))

    def __len__(self):
        return sum(abs(e) for _, e in self.factors)

    def conjugate_by(self, w):
        """``w * self * w^-1``."""
        return w * self * w.inverse()

    def to_json(self):
        return [[i, e] for i, e in self.factors]

    @classmethod
    def from_json(cls, data):
        return cls(tuple((int(i), int(e)) for i, e in data))

    def __str__(self):
        if not self.factors:
            return "1"
        return "*".join(f"g{i}" if e == 1 else f"g{i}^{e}" for i, e in self.factors)


IDENTITY_WORD = Word()


@dataclass(frozen=True)
class GenSet:
    degree: int
    generators: tuple
    label: str = ""

    def __post_init__(self):
        if not self.generators:
            raise SchemaError("at least one generator is required")
        gens = tuple(linalg.as_matrix(g) for g in self.generators)
        for idx, g in enumerate(gens):
            if len(g) != self.degree or any(len(row) != self.degree for row in g):
                raise SchemaError(f"generator {idx} is not {self.degree}x{self.degree}")
            det = linalg.determinant(g)
            if det != 1:
                raise NotDeterminantOne(idx, det)
        object.__setattr__(self, "generators", gens)

    @property
    def ngens(self):
        return len(self.generators)

    @cached_property
    def inverses(self):
        return tuple(linalg.unimodular_inverse(g) for g in self.generators)

    @cached_property
    def _mod_cache(self):
        return {}

    def mod_generators(self, m):
        """Generators and their inverses reduced mod ``m``."""
        cached = self._mod_cache.get(m)
        if cached is None:
            gens = tuple(ModMatrix.reduce(g, m) for g in self.generators)
            invs = tuple(ModMatrix.reduce(g, m) for g in self.inverses)
            cached = self._mod_cache[m] = (gens, invs)
        return cached

    def max_entry(self):
        return max(abs(x) for g in self.generators for row in g for x in row)


def _check_word(G, w):
    for i, _ in w.factors:
        if not 0 <= i < G.ngens:
            raise IndexOutOfRange(f"generator index {i} out of range 0..{G.ngens - 1}")


def evaluate_word(G, w):
    _check_word(G, w)
    result = linalg.identity(G.degree)
    for i, e in w.factors:
        base = G.generators[i] if e > 0 else G.inverses[i]
        result = linalg.mat_mul(result, linalg.mat_pow(base, abs(e)))
    return result


def evaluate_word_mod(G, w, m):
    _check_word(G, w)
    gens, invs = G.mod_generators(m)
    result = ModMatrix.identity(G.degree, m)
    for i, e in w.factors:
        base = gens[i] if e > 0 else invs[i]
        result = result @ (base ** abs(e))
    return result


class WordSampler:
    """Random freely reduced words whose length grows after repeated failures.

    Words start at ``length`` letters; every ``block`` consecutive failures
    raise the length by ``step``.  The stream is fully determined by ``seed``.
    """

    def __init__(self, ngens, seed=0, length=5, block=20, step=1):
        self.ngens = ngens
        self.seed = seed
        self.rng = random.Random(seed)
        self.length = length
        self.block = block
        self.step = step
        self.failures = 0

    def random_word(self):
        letters = []
        for _ in range(self.length):
            while True:
                i = self.rng.randrange(self.ngens)
                e = self.rng.choice((1, -1))
                if not letters or letters[-1] != (i, -e):
                    break
            letters.append((i, e))
        return Word(tuple(letters))

    def record_failure(self):
        self.failures += 1
        if self.failures % self.block == 0:
            self.length += self.step

    def sample(self, predicate, budget):
        """First word ``w`` with truthy ``predicate(w)``, as ``(w, value)``.

        Returns None once ``budget`` words have failed.
        """
        if budget < 1:
            raise ValueError("budget must be positive")
        for _ in range(budget):
            w = self.random_word()
            value = predicate(w)
            if value:
                return w, value
            self.record_failure()
        return None


def random_unimodular(n, seed, steps, bound=1):
    """Product of ``steps`` random elementary row operations.

    Multipliers are drawn from ``[-bound, bound] \\ {0}``; the result lies in
    SL(n, Z).
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    rng = random.Random(seed)
    M = [list(row) for row in linalg.identity(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([x for x in range(-bound, bound + 1) if x])
        M[i] = [a + c * b for a, b in zip(M[i], M[j])]
    return linalg.as_matrix(M)


def random_genset(n, ngens, seed, steps=None, bound=1, label=None):
    steps = steps if steps is not None else 3 * n
    gens = tuple(random_unimodular(n, derive_seed(seed, "gen", k), steps, bound)
                 for k in range(ngens))
    return GenSet(n, gens, label or f"random(n={n},seed={seed})")


# ---------------------------------------------------------------- JSON

def group_to_json(G):
    return {
        "degree": G.degree,
        "label": G.label,
        "generators": [[[str(x) for x in row] for row in g] for g in G.generators],
    }


def dump_group(G):
    """Canonical serialization: sorted keys, no optional whitespace."""
    return json.dumps(group_to_json(G), sort_keys=True, separators=(",", ":"))


def _parse_entry(x, where):
    if isinstance(x, bool):
        raise SchemaError(f"{where}: boolean is not an integer")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        s = x.strip()
        body = s[1:] if s[:1] in "+-" else s
        if body.isdigit():
            return int(s)
    raise SchemaError(f"{where}: expected a decimal integer string, got {x!r}")


def group_from_json(doc):
    if not isinstance(doc, dict):
        raise SchemaError("group document must be an object")
    for key in ("degree", "generators"):
        if key not in doc:
            raise SchemaError(f"missing key {key!r}")
    n = doc["degree"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise SchemaError("degree must be a positive integer")
    label = doc.get("label", "")
    if not isinstance(label, str):
        raise SchemaError("label must be a string")
    gens = doc["generators"]
    if not isinstance(gens, list) or not gens:
        raise SchemaError("generators must be a nonempty list")
    parsed = []
    for k, g in enumerate(gens):
        if not isinstance(g, list) or len(g) != n:
            raise SchemaError(f"generator {k} must have {n} rows")
        rows = []
        for r, row in enumerate(g):
            if not isinstance(row, list) or len(row) != n:
                raise SchemaError(f"generator {k} row {r} must have {n} entries")
            rows.append(tuple(_parse_entry(x, f"generator {k} row {r}") for x in row))
        parsed.append(tuple(rows))
    return GenSet(n, tuple(parsed), label)


def parse_group(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return group_from_json(doc)
