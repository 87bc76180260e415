"""Matrices over Z_m and the orders of SL(n, Z_m)."""

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, prod

from . import linalg
from .errors import CompositeModulus, DimensionMismatch, NotInvertibleMod
from .factor import is_prime, prime_divisors


@dataclass(frozen=True)
class ModMatrix:
    """Square matrix with entries reduced into ``[0, m)``."""

    rows: tuple
    m: int

    @classmethod
    def reduce(cls, A, m):
        if m < 2:
            raise ValueError("modulus must be at least 2")
        return cls(tuple(tuple(x % m for x in row) for row in A), m)

    @classmethod
    def identity(cls, n, m):
        return cls(linalg.identity(n), m)

    @property
    def degree(self):
        return len(self.rows)

    def __matmul__(self, other):
        if other.m != self.m:
            raise ValueError("moduli differ")
        m = self.m
        cols = tuple(zip(*other.rows))
        return ModMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) % m for col in cols)
                  for row in self.rows),
            m,
        )

    def __pow__(self, e):
        if e < 0:
            return inverse_mod(self) ** (-e)
        result = ModMatrix.identity(self.degree, self.m)
        base = self
        while e:
            if e & 1:
                result = result @ base
            e >>= 1
            if e:
                base = base @ base
        return result

    def is_identity(self):
        return self.rows == linalg.identity(self.degree)

    def trace(self):
        return sum(self.rows[i][i] for i in range(self.degree)) % self.m

    def det(self):
        return linalg.determinant(self.rows) % self.m

    def inverse(self):
        return inverse_mod(self)

    def lift(self):
        return self.rows


def reduce_mod(A, m):
    return ModMatrix.reduce(A, m)


def inverse_mod(A):
    """Inverse over Z_m: Gauss-Jordan for prime m, adjugate otherwise."""
    m, n = A.m, A.degree
    det = linalg.determinant(A.rows) % m
    if gcd(det, m) != 1:
        raise NotInvertibleMod(f"determinant {det} is not a unit mod {m}")
    if is_prime(m):
        M = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(A.rows)]
        for col in range(n):
            piv = next(r for r in range(col, n) if M[r][col] % m)
            M[col], M[piv] = M[piv], M[col]
            inv = pow(M[col][col], -1, m)
            M[col] = [x * inv % m for x in M[col]]
            for r in range(n):
                if r != col and M[r][col]:
                    f = M[r][col]
                    M[r] = [(x - f * y) % m for x, y in zip(M[r], M[col])]
        return ModMatrix(tuple(tuple(row[n:]) for row in M), m)
    dinv = pow(det, -1, m)
    adj = adjugate(A.rows)
    return ModMatrix(tuple(tuple(x * dinv % m for x in row) for row in adj), m)


def adjugate(A):
    n = len(A)
    if n == 1:
        return ((1,),)
    cof = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = tuple(tuple(A[r][c] for c in range(n) if c != j) for r in range(n) if r != i)
            cof[i][j] = (-1) ** (i + j) * linalg.determinant(minor)
    return tuple(tuple(cof[j][i] for j in range(n)) for i in range(n))


@lru_cache(maxsize=None)
def sl_order(n, m):
    """|SL(n, Z_m)|."""
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    total = 1
    for p, e in prime_divisors(m).items():
        base = p ** (n * (n - 1) // 2) * prod(p**i - 1 for i in range(2, n + 1))
        total *= p ** ((e - 1) * (n * n - 1)) * base
    return total


def element_order_exceeds(g, k):
    """True iff ``g**i`` is not the identity for every ``1 <= i <= k``."""
    x = g
    for _ in range(k):
        if x.is_identity():
            return False
        x = x @ g
    return True


def element_order(g, limit):
    """Order of ``g`` if at most ``limit``, else None."""
    x = g
    for i in range(1, limit + 1):
        if x.is_identity():
            return i
        x = x @ g
    return None


class ModularSpan:
    """Row echelon basis over the prime field F_p (same contract as
    :class:`linalg.RationalSpan`)."""

    def __init__(self, dim, p):
        if not is_prime(p):
            raise CompositeModulus(f"{p} is not prime")
        self.dim = dim
        self.p = p
        self.rows = []
        self.pivots = []

    @property
    def dimension(self):
        return len(self.rows)

    def reduce(self, v):
        if len(v) != self.dim:
            raise DimensionMismatch(f"expected length {self.dim}, got {len(v)}")
        p = self.p
        v = [x % p for x in v]
        for row, piv in zip(self.rows, self.pivots):
            c = v[piv]
            if c:
                v = [(a - c * b) % p for a, b in zip(v, row)]
        return v

    def add(self, v):
        v = self.reduce(v)
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            return False
        p = self.p
        inv = pow(v[piv], -1, p)
        v = [x * inv % p for x in v]
        for i, row in enumerate(self.rows):
            c = row[piv]
            if c:
                self.rows[i] = [(a - c * b) % p for a, b in zip(row, v)]
        self.rows.append(v)
        self.pivots.append(piv)
        return True


def nullspace_mod(rows, ncols, p):
    """Basis of the right null space of a matrix over F_p."""
    M = [[x % p for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [x * inv % p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = -M[i][f] % p
        basis.append(v)
    return basis
