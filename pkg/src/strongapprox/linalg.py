"""Exact integer and rational matrix arithmetic.

Matrices are tuples of row tuples of Python ints, so they are immutable and
hashable and entries never overflow.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .errors import DimensionMismatch, NotUnimodular


def as_matrix(rows):
    return tuple(tuple(int(x) for x in row) for row in rows)


@lru_cache(maxsize=None)
def identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zero_matrix(n):
    return tuple((0,) * n for _ in range(n))


def mat_mul(A, B):
    cols = tuple(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in A)


def mat_add(A, B):
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_sub(A, B):
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_scale(c, A):
    return tuple(tuple(c * a for a in row) for row in A)


def transpose(A):
    return tuple(zip(*A))


def trace(A):
    return sum(A[i][i] for i in range(len(A)))


def minus_identity(A):
    n = len(A)
    return tuple(tuple(A[i][j] - (i == j) for j in range(n)) for i in range(n))


def mat_pow(A, e):
    """``A**e`` for ``e >= 0`` by repeated squaring."""
    if e < 0:
        raise ValueError("use unimodular_inverse for negative powers")
    result = identity(len(A))
    base = A
    while e:
        if e & 1:
            result = mat_mul(result, base)
        e >>= 1
        if e:
            base = mat_mul(base, base)
    return result


def vectorize(A):
    return tuple(x for row in A for x in row)


def determinant(A):
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(row) for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]) // prev
        prev = pivot
    return sign * M[n - 1][n - 1]


def unimodular_inverse(A):
    """Integer inverse of a matrix with determinant +-1.

    Raises NotUnimodular otherwise.
    """
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise NotUnimodular("matrix is singular")
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        if pv != 1:
            M[col] = [x / pv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    inv = []
    for row in M:
        out = []
        for x in row[n:]:
            if x.denominator != 1:
                raise NotUnimodular("inverse has non-integer entries")
            out.append(x.numerator)
        inv.append(tuple(out))
    inv = tuple(inv)
    # an integral inverse forces det = +-1
    return inv


def char_poly(A):
    """Characteristic polynomial coefficients ``[1, c_{n-1}, ..., c_0]``.

    Faddeev-LeVerrier; every division is exact over Z.
    """
    n = len(A)
    coeffs = [1]
    M = zero_matrix(n)
    I = identity(n)
    for k in range(1, n + 1):
        M = mat_add(mat_mul(A, M), mat_scale(coeffs[-1], I))
        t = trace(mat_mul(A, M))
        c, r = divmod(-t, k)
        assert r == 0
        coeffs.append(c)
    return coeffs


def _totient(m):
    result, k, x = m, 2, m
    while k * k <= x:
        if x % k == 0:
            while x % k == 0:
                x //= k
            result -= result // k
        k += 1
    if x > 1:
        result -= result // x
    return result


@lru_cache(maxsize=None)
def torsion_exponent(n):
    """lcm of all m with phi(m) <= n; every finite-order element of GL(n,Z)
    has order dividing it."""
    # phi(m) >= sqrt(m/2), so m <= 2 n^2
    return lcm(*[m for m in range(1, 2 * n * n + 3) if _totient(m) <= n])


def _divisors(x):
    small, large = [], []
    d = 1
    while d * d <= x:
        if x % d == 0:
            small.append(d)
            if d * d != x:
                large.append(x // d)
        d += 1
    return small + large[::-1]


def finite_order_test(A):
    """Exact order of ``A`` if finite, else ``None`` (infinite order)."""
    n = len(A)
    L = torsion_exponent(n)
    I = identity(n)
    if mat_pow(A, L) != I:
        return None
    for m in _divisors(L):
        if mat_pow(A, m) == I:
            return m
    raise AssertionError("unreachable")


def gcd_nonzero_entries(A):
    """gcd of the nonzero entries; 0 for the zero matrix."""
    g = 0
    for row in A:
        for x in row:
            if x:
                g = gcd(g, x)
    return g


def is_transvection(t):
    """True iff ``t - 1`` has rank one and squares to zero."""
    N = minus_identity(t)
    if not any(any(row) for row in N):
        return False
    if any(any(row) for row in mat_mul(N, N)):
        return False
    return rank(N) == 1


def rank(A):
    span = RationalSpan(len(A[0]) if A else 0)
    for row in A:
        span.add(row)
    return span.dimension


class RationalSpan:
    """Incrementally maintained reduced row echelon basis over Q.

    ``pivots[i]`` is the pivot column of ``rows[i]``; each row is scaled so its
    pivot is 1 and every other row vanishes in that column.
    """

    def __init__(self, dim):
        self.dim = dim
        self.rows = []
        self.pivots = []

    @property
    def dimension(self):
        return len(self.rows)

    def reduce(self, v):
        if len(v) != self.dim:
            raise DimensionMismatch(f"expected length {self.dim}, got {len(v)}")
        v = [Fraction(x) for x in v]
        for row, piv in zip(self.rows, self.pivots):
            c = v[piv]
            if c:
                v = [a - c * b for a, b in zip(v, row)]
        return v

    def contains(self, v):
        return not any(self.reduce(v))

    def add(self, v):
        """Insert ``v``; return False if it was already in the span."""
        v = self.reduce(v)
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            return False
        lead = v[piv]
        v = [x / lead for x in v]
        for i, row in enumerate(self.rows):
            c = row[piv]
            if c:
                self.rows[i] = [a - c * b for a, b in zip(row, v)]
        self.rows.append(v)
        self.pivots.append(piv)
        return True

    def copy(self):
        other = RationalSpan(self.dim)
        other.rows = [list(r) for r in self.rows]
        other.pivots = list(self.pivots)
        return other


def rational_span_insert(basis, v):
    """Functional form of :meth:`RationalSpan.add`.

    Returns a new span containing ``v`` or ``None`` when ``v`` is dependent.
    """
    new = basis.copy()
    return new if new.add(v) else None
