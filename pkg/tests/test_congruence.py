from math import gcd

import pytest
from hypothesis import given, strategies as st

from strongapprox.catalog import catalog
from strongapprox.congruence import (decompose_modulus, image_order_mod, ladder_exponents,
                                     level_primes, predicted_order, prime_power_ladder)
from strongapprox.errors import DegreeTwoComposite, OrderOracleUnavailable
from strongapprox.factor import prime_divisors
from strongapprox.modular import sl_order


@given(st.integers(2, 10**6), st.integers(1, 10**6))
def test_decomposition_invariants(k, M):
    s = decompose_modulus(k, M)
    assert s.a * s.b * s.c == k
    assert s.a == gcd(k, M)
    assert gcd(s.c, s.a) == 1
    assert set(prime_divisors(s.b)) <= set(prime_divisors(s.a)) if s.b > 1 else True


def test_decomposition_example():
    s = decompose_modulus(24 * 5, 8)
    assert (s.a, s.b, s.c) == (8, 1, 15)
    s = decompose_modulus(72, 6)
    assert (s.a, s.b, s.c) == (6, 12, 1)


def test_degree_two_needs_prime_modulus():
    with pytest.raises(DegreeTwoComposite):
        decompose_modulus(12, 6, degree=2)
    assert decompose_modulus(7, 6, degree=2).c == 7


def test_splitting_prediction_h1():
    G = catalog("h1", 2)
    s = decompose_modulus(24, 8)
    order_ab = image_order_mod(G, s.ab)
    assert order_ab == 12288
    assert predicted_order(G, s, order_ab) == image_order_mod(G, 24) == 12288 * 5616


def test_ladder_and_exponents():
    ladder = prime_power_ladder(catalog("rho_F", 7), 3, 3)
    assert ladder == [9, 243, 6561]
    assert ladder_exponents(ladder, 3) == [3, 3]
    with pytest.raises(ValueError):
        ladder_exponents([9, 20], 3)
    with pytest.raises(ValueError):
        ladder_exponents([9, 18], 3)
    with pytest.raises(ValueError):
        prime_power_ladder(catalog("rho_F", 7), 4, 2)


def test_full_group_ladder():
    # SL(3, Z_{p^e}) grows by p^8 per step
    assert ladder_exponents(prime_power_ladder(catalog("sl", 3), 2, 3), 2) == [8, 8]


def test_level_primes_and_caps():
    assert level_primes(3**4 * 5 * 19) == [3, 5, 19]
    assert level_primes(1) == []
    with pytest.raises(OrderOracleUnavailable):
        image_order_mod(catalog("sl", 3), 97, bfs_cap=10, orbit_cap=10)
    assert sl_order(3, 24) == sl_order(3, 8) * sl_order(3, 3)
