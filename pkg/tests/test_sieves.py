import pytest

from strongapprox import linalg
from strongapprox.catalog import catalog
from strongapprox.errors import (DegreeSkip, NoInfiniteOrderElement, NotAbsolutelyIrreducible)
from strongapprox.groups import GenSet, Word, evaluate_word
from strongapprox.params import SieveParams
from strongapprox.recognition import image_order
from strongapprox.sieves import (IN, OUT, primes_for_abs_irreducible, primes_for_isometry,
                                 primes_for_monomial, primes_for_order, primes_for_similarity,
                                 primes_for_solvable)
from strongapprox.witness import check_claim

RHO7 = catalog("rho_F", 7)
PARAMS3 = SieveParams.for_degree(3)


def test_order_sieve_on_sl2_with_unipotent_witness():
    G = catalog("sl", 2)
    r = primes_for_order(G, params=SieveParams.for_degree(2), h=Word.letter(0))
    # T^i - 1 has gcd i, so d = lcm(1..10)
    assert r.d == 2520
    assert r.candidates == {2, 3, 5, 7}
    assert r.in_set() == {2}
    assert r.refined[2] == (IN, {"order": 6})


def test_order_sieve_rejects_finite_witness():
    G = catalog("h1", 5)
    with pytest.raises(NoInfiniteOrderElement):
        primes_for_order(G, params=PARAMS3, h=Word.letter(0))


def test_no_infinite_order_element_in_finite_group():
    perm = ((0, 1, 0), (0, 0, 1), (1, 0, 0))
    with pytest.raises(NoInfiniteOrderElement):
        primes_for_order(GenSet(3, (perm,)), params=PARAMS3)


def test_order_sieve_candidates_cover_tiny_images():
    r = primes_for_order(RHO7, params=PARAMS3)
    assert check_claim(RHO7, r.witness["h"].to_json(), {"kind": "infinite_order"})
    for p, (v, cert) in r.refined.items():
        if v == IN:
            assert image_order(RHO7, p).order <= PARAMS3.order_bound


def test_abs_irreducible_sieve():
    r = primes_for_abs_irreducible(RHO7, params=PARAMS3)
    assert {3, 5} <= r.in_set()
    assert r.d % 15 == 0
    for p in r.candidates - r.in_set():
        assert r.refined[p][0] == OUT


def test_abs_irreducible_sieve_rejects_reducible():
    upper = ((1, 1, 0), (0, 1, 0), (0, 0, 1))
    lower = ((1, 0, 0), (1, 1, 0), (0, 0, 1))
    with pytest.raises(NotAbsolutelyIrreducible):
        primes_for_abs_irreducible(GenSet(3, (upper, lower)), params=PARAMS3)


def test_solvable_sieve_catches_abelian_image():
    r = primes_for_solvable(RHO7, params=PARAMS3)
    assert 3 in r.candidates
    assert r.refined[3][0] == IN
    assert r.refined[3][1]["derived_series_orders"] == [9, 1]


def test_similarity_sieve_catches_form():
    r = primes_for_similarity(RHO7, params=PARAMS3)
    assert 19 in r.in_set()
    for w in r.witness["words"]:
        assert check_claim(RHO7, w.to_json(), {"kind": "trace_asymmetric"})


def test_isometry_sieve_witness_words():
    r = primes_for_isometry(RHO7, params=PARAMS3)
    assert r.candidates
    for w in r.witness["words"]:
        gap = linalg.trace(evaluate_word(RHO7, w)) - linalg.trace(evaluate_word(RHO7, w.inverse()))
        assert all(gap % p == 0 for p in r.candidates)


def test_degree_skips():
    with pytest.raises(DegreeSkip):
        primes_for_monomial(RHO7, params=PARAMS3)
    with pytest.raises(DegreeSkip):
        primes_for_similarity(catalog("sl", 2), params=SieveParams.for_degree(2))


def test_monomial_sieve_degree_five():
    G = catalog("h3", 0)
    r = primes_for_monomial(G, params=SieveParams.for_degree(5))
    assert r.witness["pairs"]
    for pair in r.witness["pairs"]:
        assert pair["k"] == 60


def test_sieve_reports_serialize():
    import json
    r = primes_for_abs_irreducible(RHO7, params=PARAMS3)
    doc = json.loads(json.dumps(r.to_json()))
    assert doc["sieve"] == "abs_irreducible"
    assert sorted(doc["candidates"]) == sorted(r.candidates)
