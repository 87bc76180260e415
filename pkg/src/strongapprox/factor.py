"""Cheap partial factorization: trial division followed by Pollard rho.

Large witness integers are never factored completely.  Whatever does not split
within the budget is kept as ``composite_remainder`` and reported, and callers
shrink it further with :func:`gcd_refine`.
"""

import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt, prod

TRIAL_BOUND = 10**5
RHO_BUDGET = 10**6
RHO_SEEDS = (2, 3, 5)

_SMALL_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=None)
def primes_below(bound):
    sieve = bytearray([1]) * bound
    sieve[:2] = b"\x00\x00"
    for i in range(2, isqrt(bound - 1) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, bound, i)))
    return tuple(i for i in range(bound) if sieve[i])


def is_prime(n, rounds=64):
    """Miller-Rabin.  Deterministic below 2**64, otherwise ``rounds`` bases
    drawn from a fixed-seed generator."""
    if n < 2:
        return False
    for p in _SMALL_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    def witness(a):
        x = pow(a, d, n)
        if x in (1, n - 1):
            return False
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                return False
        return True

    if n < 1 << 64:
        return not any(witness(a) for a in _SMALL_BASES)
    rng = random.Random(n & 0xFFFFFFFF)
    return not any(witness(rng.randrange(2, n - 1)) for _ in range(rounds))


def next_prime(n):
    n += 1
    while not is_prime(n):
        n += 1
    return n


def pollard_rho(n, seed, budget):
    """Brent's variant of rho with ``x -> x^2 + 1`` started at ``seed``.

    Returns a nontrivial factor or None when ``budget`` iterations pass.
    """
    if n % 2 == 0:
        return 2
    y, r, q, g = seed % n, 1, 1, 1
    x = ys = y
    m = 128
    used = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + 1) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + 1) % n
                q = q * abs(x - y) % n
            g = gcd(q, n)
            k += m
        used += r
        r *= 2
        if used > budget:
            return None
    if g == n:
        while True:
            ys = (ys * ys + 1) % n
            g = gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else None


@dataclass
class PartialFactorization:
    input: int
    prime_powers: dict = field(default_factory=dict)
    composite_remainder: int = 1

    @property
    def primes(self):
        return sorted(self.prime_powers)

    @property
    def complete(self):
        return self.composite_remainder == 1

    def value(self):
        return self.composite_remainder * prod(p**e for p, e in self.prime_powers.items())

    def to_json(self):
        return {
            "input": str(self.input),
            "prime_powers": {str(p): e for p, e in sorted(self.prime_powers.items())},
            "composite_remainder": str(self.composite_remainder),
        }


def _trial_divide(n, bound, out):
    for p in primes_below(bound):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = out.get(p, 0) + e
    if 1 < n < bound * bound:
        # no factor below bound and n < bound^2 means n is prime
        out[n] = out.get(n, 0) + 1
        n = 1
    return n


def partial_factor(d, budget=RHO_BUDGET, trial_bound=TRIAL_BOUND, seeds=RHO_SEEDS):
    """Factor ``d`` as far as trial division and a budgeted rho allow."""
    if d < 1:
        raise ValueError("d must be positive")
    powers = {}
    rest = _trial_divide(d, trial_bound, powers)
    stack = [rest] if rest > 1 else []
    remainder = 1
    while stack:
        n = stack.pop()
        if is_prime(n):
            powers[n] = powers.get(n, 0) + 1
            continue
        root = isqrt(n)
        if root * root == n:
            stack.extend((root, root))
            continue
        f = None
        if budget > 0:
            for s in seeds:
                f = pollard_rho(n, s, budget)
                if f:
                    break
        if f:
            stack.extend((f, n // f))
        else:
            remainder *= n
    return PartialFactorization(d, dict(sorted(powers.items())), remainder)


def prime_divisors(d):
    """Complete factorization for moderate ``d`` (moduli, group orders)."""
    pf = partial_factor(d)
    if not pf.complete:
        raise ValueError(f"could not factor {d}")
    return pf.prime_powers


def gcd_refine(run, max_rounds=4, prime_bound=None, budget=RHO_BUDGET):
    """Shrink a witness integer by taking gcds with fresh witnesses.

    ``run()`` returns a positive integer divisible by every prime of interest.
    Refinement continues while the cheap (trial division only) factorization
    leaves a composite part or a prime above ``prime_bound``; with
    ``prime_bound=None`` every round is used.  The final value gets the full
    budgeted factorization; an unresolved remainder stays in the result.
    """
    d = run()
    for _ in range(max_rounds - 1):
        if d == 1:
            break
        if prime_bound is not None:
            cheap = partial_factor(d, budget=0)
            if cheap.complete and all(p <= prime_bound for p in cheap.prime_powers):
                break
        d = gcd(d, run())
    return partial_factor(d, budget=budget)
