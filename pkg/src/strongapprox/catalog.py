"""Integral representations used as test groups.

Entries are stored as polynomial expressions in the parameter and substituted
exactly (with rational arithmetic), so every parameter value is produced from
one transcription.

* ``rho_Gamma(k)`` / ``rho_F(k)``: representations of the figure-eight knot
  group <x, y, z> in SL(3, Z), and of its free subgroup F = <x, y>.
* ``h1(t)``, ``h2(t)``: representations of the triangle groups
  Delta(3,3,4) and Delta(3,4,4) in SL(3, Z) (``h2`` needs even ``t``).
* ``h3(k)``: representations of Delta(3,3,4) in SL(5, Z).
* ``sl(n)``: elementary generators of SL(n, Z); ``sp(2m)``: generators of
  Sp(2m, Z) for the form [[0, I], [-I, 0]].
"""

from fractions import Fraction

from . import linalg
from .errors import ParityError, UnknownName
from .groups import GenSet

RHO_X = (
    ("1", "-2", "3"),
    ("0", "k", "-1-2*k"),
    ("0", "1", "-2"),
)
RHO_Y = (
    ("-2-k", "-1", "1"),
    ("-2-k", "-2", "3"),
    ("-1", "-1", "2"),
)
RHO_Z = (
    ("0", "0", "1"),
    ("1", "0", "-k"),
    ("0", "1", "-1-k"),
)

A1 = (
    ("0", "0", "1"),
    ("1", "0", "0"),
    ("0", "1", "0"),
)
B1 = (
    ("1", "2-t+t**2", "3+t**2"),
    ("0", "-2+2*t-t**2", "-1+t-t**2"),
    ("0", "3-3*t+t**2", "(-1+t)**2"),
)

A2 = (
    ("1", "4+3*t**2/4", "3*(6-t+t**2)/2"),
    ("0", "-(4+t+t**2)/2", "-3-t**2"),
    ("0", "(4+2*t+t**2)/4", "(2+t+t**2)/2"),
)
B2 = (
    ("0", "0", "1"),
    ("1", "0", "-1"),
    ("0", "1", "1"),
)

A3 = (
    ("1", "0", "-3-2*k-8*k**2", "-1+10*k+32*k**3", "-5-16*k**2"),
    ("0", "4*(-1+k)", "-13-4*k", "3+16*(1+k)**2", "-4+16*k"),
    ("0", "1-k+4*k**2", "3-2*k+8*k**2", "-2*(1+3*k+16*k**3)", "3+16*k**2"),
    ("0", "k", "2*k", "1-2*k-8*k**2", "1+4*k"),
    ("0", "0", "3*k", "3*(-1+k-4*k**2)", "-2"),
)
B3 = (
    ("0", "0", "-3-2*k-8*k**2", "-1+10*k+32*k**3", "-5-16*k**2"),
    ("0", "1", "3+4*k", "-13-8*k-16*k**2", "4-16*k"),
    ("0", "0", "-2*(1+k+4*k**2)", "6*k+32*k**3", "-3-16*k**2"),
    ("1", "0", "-2*(1+k)", "-1+2*k+8*k**2", "-1-4*k"),
    ("2*k", "0", "1-2*k", "-4*k", "1"),
)

NAMES = ("rho_Gamma", "rho_F", "h1", "h2", "h3", "sl", "sp")


def substitute(template, var, value):
    """Evaluate a matrix of expressions at ``var = value``; entries must be
    integers."""
    env = {"__builtins__": {}}
    scope = {var: Fraction(value)}
    rows = []
    for row in template:
        out = []
        for expr in row:
            x = Fraction(eval(expr, env, scope))
            if x.denominator != 1:
                raise ParityError(f"entry {expr} is not integral at {var}={value}")
            out.append(x.numerator)
        rows.append(tuple(out))
    return tuple(rows)


def elementary(n, i, j, c=1):
    M = [list(r) for r in linalg.identity(n)]
    M[i][j] += c
    return linalg.as_matrix(M)


def sl_generators(n):
    return tuple(elementary(n, i, j) for i in range(n) for j in range(n) if i != j)


def sp_generators(two_m):
    if two_m % 2:
        raise ParityError("symplectic degree must be even")
    m = two_m // 2
    gens = []

    def block(A, B, C, D):
        top = [list(a) + list(b) for a, b in zip(A, B)]
        bottom = [list(c) + list(d) for c, d in zip(C, D)]
        return linalg.as_matrix(top + bottom)

    I, Z = linalg.identity(m), linalg.zero_matrix(m)
    for i in range(m):
        for j in range(i, m):
            S = [[0] * m for _ in range(m)]
            S[i][j] = S[j][i] = 1
            gens.append(block(I, S, Z, I))
            gens.append(block(I, Z, S, I))
    for i in range(m):
        for j in range(m):
            if i != j:
                A = elementary(m, i, j)
                gens.append(block(A, Z, Z, linalg.transpose(linalg.unimodular_inverse(A))))
    return tuple(gens)


def catalog(name, parameter):
    """Generating set of a catalog group; see the module docstring."""
    if name in ("rho_Gamma", "rho_F"):
        mats = [substitute(T, "k", parameter) for T in (RHO_X, RHO_Y, RHO_Z)]
        if name == "rho_F":
            mats = mats[:2]
        return GenSet(3, tuple(mats), f"{name}({parameter})")
    if name == "h1":
        return GenSet(3, (substitute(A1, "t", 0), substitute(B1, "t", parameter)), f"h1({parameter})")
    if name == "h2":
        if parameter % 2:
            raise ParityError(f"h2(t) needs even t, got {parameter}")
        return GenSet(3, (substitute(A2, "t", parameter), substitute(B2, "t", 0)), f"h2({parameter})")
    if name == "h3":
        return GenSet(5, (substitute(A3, "k", parameter), substitute(B3, "k", parameter)), f"h3({parameter})")
    if name == "sl":
        return GenSet(parameter, sl_generators(parameter), f"sl({parameter})")
    if name == "sp":
        return GenSet(parameter, sp_generators(parameter), f"sp({parameter})")
    raise UnknownName(f"unknown catalog group {name!r}; known: {', '.join(NAMES)}")


def parse_spec(text):
    """``"rho_F:7"`` -> ``("rho_F", 7)``."""
    name, sep, param = text.partition(":")
    if not sep:
        raise UnknownName(f"expected NAME:PARAMETER, got {text!r}")
    try:
        return name, int(param)
    except ValueError:
        raise UnknownName(f"parameter must be an integer in {text!r}") from None
