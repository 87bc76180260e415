import sympy
from sympy import GF
from sympy.polys.matrices import DomainMatrix
from hypothesis import given, strategies as st

from strongapprox import linalg
from strongapprox.errors import CompositeModulus, NotInvertibleMod
from strongapprox.modular import (ModMatrix, ModularSpan, element_order_exceeds, inverse_mod,
                                  nullspace_mod, sl_order)

from strategies import int_matrices, unimodular


def test_sl_order_known_values():
    assert sl_order(2, 2) == 6
    assert sl_order(2, 5) == 120
    assert sl_order(3, 2) == 168
    assert sl_order(3, 3) == 5616
    assert sl_order(2, 4) == 48
    # |SL(3, Z_8)| = 168 * 2^16
    assert sl_order(3, 8) == 168 * 2**16


@given(st.integers(2, 3), st.integers(2, 60), st.integers(2, 60))
def test_sl_order_multiplicative_on_coprime(n, a, b):
    if sympy.gcd(a, b) == 1:
        assert sl_order(n, a * b) == sl_order(n, a) * sl_order(n, b)


@given(unimodular(3), st.integers(2, 40))
def test_inverse_mod(A, m):
    M = ModMatrix.reduce(A, m)
    assert (M @ inverse_mod(M)).is_identity()
    assert (inverse_mod(M) @ M).is_identity()


def test_inverse_mod_rejects_singular():
    try:
        inverse_mod(ModMatrix.reduce(((2, 0), (0, 1)), 4))
    except NotInvertibleMod:
        return
    raise AssertionError("expected NotInvertibleMod")


@given(unimodular(3), st.integers(-5, 5), st.sampled_from([5, 7, 12]))
def test_power_matches_exact(A, e, m):
    M = ModMatrix.reduce(A, m)
    exact = linalg.mat_pow(A, e) if e >= 0 else linalg.mat_pow(linalg.unimodular_inverse(A), -e)
    assert M**e == ModMatrix.reduce(exact, m)


def test_element_order_exceeds():
    t = ModMatrix.reduce(((1, 1), (0, 1)), 7)
    assert element_order_exceeds(t, 6)
    assert not element_order_exceeds(t, 7)


@given(st.lists(st.tuples(*[st.integers(0, 10)] * 4), max_size=6), st.sampled_from([2, 3, 5, 7]))
def test_modular_span_rank(rows, p):
    span = ModularSpan(4, p)
    for r in rows:
        span.add(r)
    expected = 0
    if rows:
        expected = DomainMatrix([[GF(p)(x) for x in r] for r in rows], (len(rows), 4), GF(p)).rank()
    assert span.dimension == expected


@given(int_matrices(3, 0, 6), st.sampled_from([2, 3, 5, 7]))
def test_nullspace_mod(A, p):
    basis = nullspace_mod(A, 3, p)
    for v in basis:
        assert all(sum(a * x for a, x in zip(row, v)) % p == 0 for row in A)
    span = ModularSpan(3, p)
    for row in A:
        span.add(row)
    assert len(basis) == 3 - span.dimension


def test_modular_span_needs_prime():
    try:
        ModularSpan(3, 6)
    except CompositeModulus:
        return
    raise AssertionError("expected CompositeModulus")
