"""Degree-dependent constants and search budgets."""

from dataclasses import dataclass
from math import lcm

# Upper bounds on element orders in the small exceptional subgroups of
# SL(n, p) (extraspecial normalizers and almost simple groups), by degree.
ELEMENT_ORDER_BOUNDS = {2: 10, 3: 21, 5: 60, 7: 84, 11: 253}

BFS_CAP = 2 * 10**7
ORBIT_CAP = 2 * 10**7


def sym_exponent(n):
    """Exponent of Sym(n)."""
    return lcm(*range(1, n + 1))


def default_delta(n):
    """Bound on the derived length of the solvable images that matter."""
    return {2: 4, 3: 5}.get(n, 6)


@dataclass
class SieveParams:
    degree: int
    sym_exponent: int
    delta: int
    order_bound: int
    seed: int = 0
    word_length: int = 5
    word_budget: int = 2000
    leaf_budget: int = 20000
    bfs_cap: int = BFS_CAP
    orbit_cap: int = ORBIT_CAP
    probe_cap: int = 200_000

    @classmethod
    def for_degree(cls, n, seed=0, order_bound=None, delta=None, **kw):
        if order_bound is None:
            if n not in ELEMENT_ORDER_BOUNDS:
                raise ValueError(f"no built-in element-order bound for degree {n}; pass order_bound")
            order_bound = ELEMENT_ORDER_BOUNDS[n]
        return cls(n, sym_exponent(n), delta if delta is not None else default_delta(n),
                   order_bound, seed, **kw)
