import numpy as np
import pytest
from hypothesis import given, strategies as st

from strongapprox.catalog import catalog
from strongapprox.errors import OrbitTooLarge
from strongapprox.groups import evaluate_word
from strongapprox.modular import sl_order
from strongapprox.stabchain import StabChain, bfs_order, enumerate_group

from strategies import gensets, words


@given(gensets(3), st.sampled_from([2, 3, 4, 5, 6]))
def test_chain_order_matches_bfs(G, m):
    assert StabChain(list(G.generators), m).order() == bfs_order(G.generators, m, 10**7)


@given(gensets(2, 3), st.sampled_from([5, 7, 8, 9, 12]))
def test_chain_order_matches_bfs_degree_two(G, m):
    assert StabChain(list(G.generators), m).order() == bfs_order(G.generators, m, 10**7)


@pytest.mark.parametrize("n,m", [(2, 7), (3, 2), (3, 3), (3, 4), (3, 6), (3, 12), (4, 2)])
def test_full_special_linear_orders(n, m):
    G = catalog("sl", n)
    assert StabChain(list(G.generators), m).order() == sl_order(n, m)


def test_worked_example_ladder_top():
    G = catalog("rho_F", 7)
    assert StabChain(list(G.generators), 81).order() == 531441


@given(words(2, 8))
def test_membership_of_group_elements(w):
    G = catalog("rho_F", 7)
    chain = StabChain(list(G.generators), 27)
    assert chain.contains(evaluate_word(G, w))


def test_non_member_rejected():
    G = catalog("rho_F", 7)
    chain = StabChain(list(G.generators), 3)
    # the image mod 3 has order 9, so most of SL(3,3) is outside it
    outside = [g for g in catalog("sl", 3).generators if not chain.contains(g)]
    assert outside


def test_orbit_cap():
    G = catalog("sl", 3)
    with pytest.raises(OrbitTooLarge):
        StabChain(list(G.generators), 13, orbit_cap=100)


def test_enumeration_and_cap():
    G = catalog("sl", 2)
    e = enumerate_group(G.generators, 5, 1000)
    assert e.order == 120
    assert np.eye(2, dtype=np.int64) in e
    assert enumerate_group(G.generators, 5, 100) is None
    assert bfs_order(G.generators, 5, 119) is None


def test_large_modulus_bfs_matches_vectorized():
    from strongapprox.stabchain import _bfs_order_exact
    G = catalog("rho_F", 7)
    assert _bfs_order_exact(G.generators, 19, 10**5) == bfs_order(G.generators, 19, 10**5) == 3420
    assert bfs_order(G.generators, 2**31 - 1, 30) is None
