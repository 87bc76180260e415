"""Exact orders of matrix groups over Z_m.

Two oracles:

* :func:`enumerate_group` -- breadth-first closure of the generated group,
  vectorized with numpy; exact, memory bound by the element cap.
* :class:`StabChain` -- Schreier-Sims for the permutation action on the vectors
  of (Z_m)^n with base e_1, ..., e_n.  Random sifting builds the chain; when
  the product of basic orbit lengths (always a lower bound for the order)
  reaches a known upper bound the order is proved, otherwise the chain is
  completed by sifting every Schreier generator.
"""

import random

import numpy as np

from .errors import OrbitTooLarge
from .modular import ModMatrix, inverse_mod

INT64_LIMIT = 2**63
# int64 products of residues overflow beyond this modulus.
VECTOR_MODULUS_LIMIT = 2**30


# ------------------------------------------------------------ enumeration

class Enumeration:
    """All elements of a finite matrix group over Z_m."""

    def __init__(self, elements, m):
        self.elements = elements  # (order, n, n) int64
        self.m = m
        self._index = None

    @property
    def order(self):
        return len(self.elements)

    def keys(self):
        return _keys(self.elements, self.m)

    def index(self):
        if self._index is None:
            self._index = {k: i for i, k in enumerate(self.keys())}
        return self._index

    def __contains__(self, A):
        A = np.asarray(A, dtype=np.int64)[None] % self.m
        return _keys(A, self.m)[0] in self.index()


def _keys(elements, m):
    """Exact hashable keys: int64 codes when they fit, bytes otherwise."""
    k = elements.shape[-1] ** 2
    flat = elements.reshape(len(elements), k)
    if m**k < INT64_LIMIT:
        weights = np.array([m**i for i in range(k - 1, -1, -1)], dtype=np.int64)
        return flat @ weights
    return [row.tobytes() for row in np.ascontiguousarray(flat)]


def enumerate_group(gens, m, cap, keep=True, chunk=200_000):
    """Breadth-first closure of ``<gens>`` in GL(n, Z_m).

    ``gens`` are integer matrices (already reduced or not).  Returns an
    :class:`Enumeration` or None when more than ``cap`` elements exist.
    With ``keep=False`` only the order is tracked (as an Enumeration whose
    ``elements`` is None and whose order is given by ``count``).
    """
    gens = [np.asarray(g, dtype=np.int64) % m for g in gens]
    n = gens[0].shape[0]
    if m >= VECTOR_MODULUS_LIMIT:
        raise OverflowError("modulus too large for vectorized enumeration")
    ident = np.eye(n, dtype=np.int64)[None]
    int_keys = m ** (n * n) < INT64_LIMIT
    if int_keys:
        seen = _keys(ident, m)
    else:
        seen = set(_keys(ident, m))
    kept = [ident] if keep else None
    count = 1
    frontier = ident
    while len(frontier):
        next_parts = []
        for start in range(0, len(frontier), chunk):
            block = frontier[start:start + chunk]
            cand = np.concatenate([(block @ g) % m for g in gens])
            keys = _keys(cand, m)
            if int_keys:
                uniq, first = np.unique(keys, return_index=True)
                pos = np.searchsorted(seen, uniq)
                clipped = np.minimum(pos, len(seen) - 1)
                fresh = seen[clipped] != uniq
                seen = np.insert(seen, pos[fresh], uniq[fresh])
                new = cand[first[fresh]]
            else:
                picked = []
                for i, key in enumerate(keys):
                    if key not in seen:
                        seen.add(key)
                        picked.append(i)
                new = cand[picked]
            count += len(new)
            if count > cap:
                return None
            if len(new):
                next_parts.append(new)
                if keep:
                    kept.append(new)
        frontier = np.concatenate(next_parts) if next_parts else np.empty((0, n, n), np.int64)
    if keep:
        return Enumeration(np.concatenate(kept), m)
    result = Enumeration(None, m)
    result.count = count
    return result


def bfs_order(gens, m, cap):
    """Group order by enumeration, or None if it exceeds ``cap``."""
    if m >= VECTOR_MODULUS_LIMIT:
        return _bfs_order_exact(gens, m, cap)
    e = enumerate_group(gens, m, cap, keep=False)
    return None if e is None else e.count


def _bfs_order_exact(gens, m, cap):
    """Python-integer BFS for moduli too large for int64 products (small caps)."""
    gens = [ModMatrix.reduce(g, m) for g in gens]
    start = ModMatrix.identity(len(gens[0].rows), m)
    seen = {start}
    frontier = [start]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = x @ g
                if y not in seen:
                    if len(seen) >= cap:
                        return None
                    seen.add(y)
                    new.append(y)
        frontier = new
    return len(seen)


# ------------------------------------------------------------ stabilizer chain

def encode_vectors(V, m):
    n = V.shape[-1]
    weights = np.array([m**i for i in range(n - 1, -1, -1)], dtype=np.int64)
    return V @ weights


def _reduced(A, m):
    return np.asarray(A, dtype=np.int64) % m


class _Level:
    """Orbit of the base vector e_i under the stabilizer of e_0..e_{i-1}.

    Orbit points are kept as sorted codes; ``U[j]`` maps e_i to the point
    with code ``codes[j]`` and ``Uinv[j]`` is its inverse.
    """

    def __init__(self, i, n, m):
        self.i = i
        self.gens = []
        e = np.zeros((1, n), dtype=np.int64)
        e[0, i] = 1
        self.codes = encode_vectors(e, m)
        ident = np.eye(n, dtype=np.int64)[None]
        self.U = ident.copy()
        self.Uinv = ident.copy()

    def __len__(self):
        return len(self.codes)

    def lookup(self, codes):
        pos = np.searchsorted(self.codes, codes)
        clipped = np.minimum(pos, len(self.codes) - 1)
        hit = self.codes[clipped] == codes
        return np.where(hit, clipped, -1)


class StabChain:
    """Schreier-Sims for a matrix group acting on the vectors of (Z_m)^n.

    The base is e_1, ..., e_n, so a group element that fixes every base
    vector is the identity and elements can be carried as matrices.  Sifting
    and the final Schreier-generator check are batched numpy products.

    ``order_bound``, if given, must be a multiple of the true order (for
    subgroups of SL(n, Z_m) use |SL(n, Z_m)|); reaching it ends construction
    early with a proved order.
    """

    def __init__(self, matrices, m, order_bound=None, seed=0, orbit_cap=2 * 10**7,
                 sift_streak=12, chunk=50_000):
        n = len(matrices[0])
        if m**n > orbit_cap:
            raise OrbitTooLarge(f"{m}^{n} points exceed the orbit cap {orbit_cap}")
        self.n, self.m = n, m
        self.chunk = chunk
        self.gens = []
        self.levels = [_Level(i, n, m) for i in range(n)]
        self.rng = random.Random(seed)
        self.order_bound = order_bound
        self.proved_by_bound = False
        self.identity = np.eye(n, dtype=np.int64)
        originals = [_reduced(A, m) for A in matrices]
        for A in originals:
            h, level = self.sift(A)
            if level < n:
                self._add_generator(h, level)
        if originals and not self._bound_reached():
            self._random_phase(originals, sift_streak)
        if not self.proved_by_bound:
            self._complete()

    # -- orbits
    def _add_generator(self, h, level):
        self.gens.append((h, self._inverse(h)))
        k = len(self.gens) - 1
        for lvl in self.levels[: level + 1]:
            lvl.gens.append(k)
            self._extend_orbit(lvl)

    def _inverse(self, h):
        inv = inverse_mod(ModMatrix(tuple(tuple(int(x) for x in row) for row in h), self.m))
        return np.array(inv.rows, dtype=np.int64)

    def _extend_orbit(self, lvl):
        m = self.m
        i = lvl.i
        # breadth-first from every known point with the full generator list
        frontier = np.arange(len(lvl.codes))
        U, Uinv, codes = lvl.U, lvl.Uinv, lvl.codes
        seen_codes = codes  # sorted on entry, kept sorted below
        while len(frontier):
            new_U, new_Uinv, new_codes = [], [], []
            for k in lvl.gens:
                s, sinv = self.gens[k]
                for start in range(0, len(frontier), self.chunk):
                    idx = frontier[start:start + self.chunk]
                    images = (U[idx] @ s) % m
                    c = encode_vectors(images[:, i, :], m)
                    c, first = np.unique(c, return_index=True)
                    pos = np.searchsorted(seen_codes, c)
                    clipped = np.minimum(pos, len(seen_codes) - 1)
                    fresh = seen_codes[clipped] != c
                    if not fresh.any():
                        continue
                    sel = first[fresh]
                    new_codes.append(c[fresh])
                    new_U.append(images[sel])
                    new_Uinv.append((sinv @ Uinv[idx[sel]]) % m)
                    seen_codes = np.insert(seen_codes, pos[fresh], c[fresh])
            if not new_codes:
                break
            base = len(codes)
            codes = np.concatenate([codes] + new_codes)
            U = np.concatenate([U] + new_U)
            Uinv = np.concatenate([Uinv] + new_Uinv)
            frontier = np.arange(base, len(codes))
        order = np.argsort(codes, kind="stable")
        lvl.codes, lvl.U, lvl.Uinv = codes[order], U[order], Uinv[order]

    def order(self):
        total = 1
        for lvl in self.levels:
            total *= len(lvl)
        return total

    def orbit_lengths(self):
        return [len(lvl) for lvl in self.levels]

    # -- sifting
    def sift_batch(self, M, start=0):
        """Sift matrices ``M`` (B, n, n) from level ``start``.

        Returns None if all sift through, else ``(residue, level)`` for the
        first failing element.
        """
        m = self.m
        for i in range(start, self.n):
            lvl = self.levels[i]
            idx = lvl.lookup(encode_vectors(M[:, i, :], m))
            bad = np.flatnonzero(idx < 0)
            if len(bad):
                return M[bad[0]], i
            M = (M @ lvl.Uinv[idx]) % m
        return None

    def sift(self, A, start=0):
        res = self.sift_batch(_reduced(A, self.m)[None], start)
        return (self.identity, self.n) if res is None else res

    def contains(self, A):
        return self.sift(A)[1] == self.n

    # -- construction
    def _bound_reached(self):
        if self.order_bound is not None and self.order() == self.order_bound:
            self.proved_by_bound = True
        return self.proved_by_bound

    def _random_phase(self, originals, streak):
        m, rng = self.m, self.rng
        slots = list(originals)
        while len(slots) < 10:
            slots.extend(originals)
        acc = self.identity

        def step():
            nonlocal acc
            i, j = rng.sample(range(len(slots)), 2)
            other = slots[j]
            if rng.random() < 0.5:
                other = self._inverse(other)
            slots[i] = (slots[i] @ other) % m
            acc = (acc @ slots[i]) % m
            return acc

        for _ in range(40):
            step()
        quiet = 0
        while quiet < streak:
            h, level = self.sift(step())
            if level < self.n:
                self._add_generator(h, level)
                quiet = 0
                if self._bound_reached():
                    return
            else:
                quiet += 1

    def _complete(self):
        """Sift every Schreier generator; Schreier's lemma then proves the
        chain describes the whole group."""
        while True:
            failure = self._failing_schreier_generator()
            if failure is None:
                return
            self._add_generator(*failure)
            if self._bound_reached():
                return

    def _failing_schreier_generator(self):
        m = self.m
        for lvl in reversed(self.levels):
            i = lvl.i
            for k in lvl.gens:
                s = self.gens[k][0]
                for start in range(0, len(lvl), self.chunk):
                    T = (lvl.U[start:start + self.chunk] @ s) % m
                    idx = lvl.lookup(encode_vectors(T[:, i, :], m))
                    T = (T @ lvl.Uinv[idx]) % m
                    res = self.sift_batch(T, i + 1)
                    if res is not None:
                        return res
        return None

    def proof(self):
        return "upper bound reached" if self.proved_by_bound else "schreier generators sifted"
