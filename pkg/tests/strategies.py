"""Shared hypothesis strategies."""

from hypothesis import strategies as st

from strongapprox.groups import GenSet, Word, random_unimodular


def int_matrices(n, lo=-6, hi=6):
    row = st.tuples(*[st.integers(lo, hi)] * n)
    return st.tuples(*[row] * n)


def unimodular(n, max_steps=8):
    return st.builds(lambda seed, steps: random_unimodular(n, seed, steps),
                     st.integers(0, 10**6), st.integers(1, max_steps))


def gensets(n, ngens=2, max_steps=8):
    return st.lists(unimodular(n, max_steps), min_size=ngens, max_size=ngens).map(
        lambda gs: GenSet(n, tuple(gs)))


def words(ngens, max_len=6):
    letter = st.tuples(st.integers(0, ngens - 1), st.integers(-2, 2))
    return st.lists(letter, max_size=max_len).map(lambda xs: Word(tuple(xs)))


small_primes = st.sampled_from([2, 3, 5, 7, 11, 13])
