"""Overlap spaces W_n: the intersection of every placement of R in V^{(x)n}."""

from itertools import product

from .core import AlgebraTable, CapacityError, all_words, word_key
from .linalg import Subspace


def zeta(n, N):
    """Tensor degree used at homological level n: N*m for n=2m, N*m+1 for n=2m+1."""
    m, odd = divmod(n, 2)
    return N * m + odd


def placement(pres, i, n):
    """V^{(x)i} (x) R (x) V^{(x)(n-N-i)} as a subspace of V^{(x)n}."""
    N, g = pres.N, pres.ngens
    rows = []
    for u in product(range(g), repeat=i):
        for v in product(range(g), repeat=n - N - i):
            for r in pres.R.rows:
                rows.append({u + w + v: c for w, c in r.items()})
    return Subspace(rows, key=word_key, ambient_degree=n)


def full_space(pres, n):
    return Subspace([{w: 1} for w in all_words(pres.ngens, n)],
                    key=word_key, ambient_degree=n)


def w_space(pres, n, order=None):
    """W_n; ``order`` permutes the placements (the result does not depend on it)."""
    if n > pres.degree_cap:
        raise CapacityError(f"degree {n} exceeds cap {pres.degree_cap}")
    if n < pres.N:
        return full_space(pres, n)
    shifts = list(range(n - pres.N + 1))
    if order is not None:
        shifts = [shifts[i] for i in order]
    acc = placement(pres, shifts[0], n)
    for i in shifts[1:]:
        acc = acc.intersect(placement(pres, i, n))
    return acc


class OverlapTable:
    """Lazily computed W_n, cached per n."""

    def __init__(self, pres):
        self.pres = pres
        self._w = {}

    @classmethod
    def for_presentation(cls, pres):
        tbl = pres.__dict__.get("_overlaps")
        if tbl is None:
            tbl = cls(pres)
            pres._overlaps = tbl
        return tbl

    def w(self, n):
        sub = self._w.get(n)
        if sub is None:
            sub = w_space(self.pres, n)
            self._w[n] = sub
        return sub

    def w_level(self, level):
        return self.w(zeta(level, self.pres.N))

    @property
    def algebra(self):
        return AlgebraTable.for_presentation(self.pres)
