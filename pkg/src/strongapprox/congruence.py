"""Congruence images modulo composite integers, given the level M.

Write ``k = a b c`` with ``a = gcd(k, M)``, every prime of ``b`` dividing
``a``, and ``c`` coprime to ``a``.  Then the image mod ``k`` is the image mod
``a b`` times a full ``SL(n, Z_c)``, so only the part of ``k`` sharing primes
with ``M`` needs computing.
"""

from dataclasses import dataclass
from math import gcd

from .errors import DegreeTwoComposite, OrderOracleUnavailable
from .factor import is_prime, prime_divisors
from .modular import sl_order
from .params import BFS_CAP, ORBIT_CAP
from .recognition import exact_oracle_feasible, image_order


@dataclass(frozen=True)
class ModulusSplit:
    k: int
    M: int
    a: int
    b: int
    c: int

    @property
    def ab(self):
        return self.a * self.b


def decompose_modulus(k, M, degree=3):
    if k < 2 or M < 1:
        raise ValueError("need k >= 2 and M >= 1")
    if degree == 2 and not is_prime(k):
        raise DegreeTwoComposite("in degree 2 only prime moduli can be described")
    a = gcd(k, M)
    rest = k // a
    c = rest
    g = gcd(c, a)
    while g > 1:
        c //= g
        g = gcd(c, a)
    return ModulusSplit(k, M, a, rest // c, c)


def image_order_mod(G, k, bfs_cap=BFS_CAP, orbit_cap=ORBIT_CAP, seed=0):
    """Exact ``|phi_k(G)|``."""
    if not exact_oracle_feasible(G.degree, k, bfs_cap, orbit_cap):
        raise OrderOracleUnavailable(f"no exact oracle for modulus {k} in degree {G.degree}")
    return image_order(G, k, bfs_cap, orbit_cap, seed).order


def predicted_order(G, split, order_mod_ab):
    """Order of the image mod ``k`` assuming the direct-product splitting."""
    return order_mod_ab * sl_order(G.degree, split.c)


def prime_power_ladder(G, p, e_max, bfs_cap=BFS_CAP, orbit_cap=ORBIT_CAP, seed=0):
    """Orders of the images mod ``p, p^2, ..., p^e_max``."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return [image_order_mod(G, p**e, bfs_cap, orbit_cap, seed) for e in range(1, e_max + 1)]


def ladder_exponents(ladder, p):
    """Exponents ``e_i`` with ``ladder[i+1] = ladder[i] * p^e_i``."""
    out = []
    for lo, hi in zip(ladder, ladder[1:]):
        q, r = divmod(hi, lo)
        if r:
            raise ValueError("ladder entries do not divide each other")
        e = 0
        while q % p == 0:
            q //= p
            e += 1
        if q != 1:
            raise ValueError(f"ratio {hi // lo} is not a power of {p}")
        out.append(e)
    return out


def level_primes(M):
    return sorted(prime_divisors(M)) if M > 1 else []
