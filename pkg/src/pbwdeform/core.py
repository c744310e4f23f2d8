"""Words, free tensor elements and degree-truncated normal forms in TV/<R>.

A word is a tuple of generator indices; the empty tuple is the unit.  Words
are ordered by (length, letters), and a subspace of V^{(x)d} is kept in
reduced echelon form whose pivots are the smallest words.  The non-pivot
words then form the monomial basis of A_d.
"""

from fractions import Fraction
from itertools import product

from .linalg import Subspace, add_scaled


class CapacityError(Exception):
    """Raised when a computation would need degrees above the configured cap."""


def word_key(w):
    return (len(w), w)


def all_words(ngens, d):
    return [tuple(w) for w in product(range(ngens), repeat=d)]


class FreeElement(dict):
    """Finite rational combination of words, with zero terms dropped."""

    def __init__(self, terms=None):
        super().__init__()
        if terms:
            for w, c in dict(terms).items():
                if c:
                    self[tuple(w)] = Fraction(c)

    @classmethod
    def word(cls, w, c=1):
        return cls({tuple(w): c})

    @classmethod
    def one(cls):
        return cls({(): 1})

    def items_sorted(self):
        return sorted(self.items(), key=lambda kv: word_key(kv[0]))

    def degrees(self):
        return sorted({len(w) for w in self})

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def component(self, d):
        return FreeElement({w: c for w, c in self.items() if len(w) == d})

    def __add__(self, other):
        out = FreeElement(self)
        add_scaled(out, other, 1)
        return out

    def __sub__(self, other):
        out = FreeElement(self)
        add_scaled(out, other, -1)
        return out

    def __neg__(self):
        return FreeElement({w: -c for w, c in self.items()})

    def scale(self, c):
        return FreeElement({w: c * v for w, v in self.items()})

    def __mul__(self, other):
        if not isinstance(other, dict):
            return self.scale(other)
        out = FreeElement()
        for u, a in self.items():
            for v, b in other.items():
                add_scaled(out, {u + v: a * b}, 1)
        return out

    def __rmul__(self, c):
        return self.scale(c)

    def __hash__(self):
        return hash(tuple(self.items_sorted()))

    def format(self, names):
        if not self:
            return "0"
        parts = []
        for w, c in self.items_sorted():
            mono = "*".join(_power_runs(w, names))
            if not mono:
                body = _fmt_q(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{_fmt_q(abs(c))}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def _fmt_q(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"({q.numerator}/{q.denominator})"


def _power_runs(w, names):
    out = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        n = j - i
        out.append(names[w[i]] if n == 1 else f"{names[w[i]]}^{n}")
        i = j
    return out


class Presentation:
    """Generators, relation degree N, relation space R and a degree cap."""

    def __init__(self, generators, N, relations, degree_cap):
        if N < 2:
            raise ValueError("relation degree must be at least 2")
        if len(set(generators)) != len(generators):
            raise ValueError("generator names must be unique")
        self.generators = list(generators)
        self.N = N
        self.degree_cap = degree_cap
        self.relations = [FreeElement(r) for r in relations]
        for r in self.relations:
            if any(len(w) != N for w in r):
                raise ValueError(f"relation is not homogeneous of degree {N}")
            if any(x >= self.ngens or x < 0 for w in r for x in w):
                raise ValueError("relation uses an unknown generator")
        self.R = Subspace(self.relations, key=word_key, ambient_degree=N)

    @property
    def ngens(self):
        return len(self.generators)

    def with_cap(self, degree_cap):
        return Presentation(self.generators, self.N, self.relations, degree_cap)

    def __repr__(self):
        return (f"Presentation(gens={self.generators}, N={self.N}, "
                f"rank R={self.R.rank}, cap={self.degree_cap})")


def relation_space(pres, d):
    """The degree-d piece of the two-sided ideal generated by R."""
    return AlgebraTable.for_presentation(pres).ideal(d)


class AlgebraTable:
    """Normal-form data for A = TV/<R> in degrees 0..degree_cap."""

    def __init__(self, pres):
        self.pres = pres
        self.N = pres.N
        self.ngens = pres.ngens
        self.cap = pres.degree_cap
        self._ideal = []
        self._basis = []
        self._nf_cache = {}
        for d in range(self.cap + 1):
            if d < self.N:
                sub = Subspace(key=word_key, ambient_degree=d)
            elif d == self.N:
                sub = pres.R.copy()
            else:
                prev = self._ideal[d - 1]
                gens = []
                for row in prev.rows:
                    for v in range(self.ngens):
                        gens.append({(v,) + w: c for w, c in row.items()})
                        gens.append({w + (v,): c for w, c in row.items()})
                sub = Subspace(gens, key=word_key, ambient_degree=d)
            self._ideal.append(sub)
            piv = set(sub.pivots)
            self._basis.append([w for w in all_words(self.ngens, d) if w not in piv])

    @classmethod
    def for_presentation(cls, pres):
        tbl = pres.__dict__.get("_table")
        if tbl is None:
            tbl = cls(pres)
            pres._table = tbl
        return tbl

    def _check(self, d):
        if d > self.cap:
            raise CapacityError(f"degree {d} exceeds cap {self.cap}")

    def ideal(self, d):
        self._check(d)
        return self._ideal[d]

    def basis(self, d):
        """Monomial basis of A_d (non-pivot words, ascending)."""
        self._check(d)
        return self._basis[d]

    def positive_basis(self, max_degree):
        out = []
        for d in range(1, max_degree + 1):
            out.extend(self.basis(d))
        return out

    def dim(self, d):
        self._check(d)
        return len(self._basis[d])

    def is_basis_word(self, w):
        self._check(len(w))
        return w not in self._ideal[len(w)]._rows

    def nf_word(self, w):
        """Normal form of a single word as a plain dict (cached)."""
        hit = self._nf_cache.get(w)
        if hit is None:
            self._check(len(w))
            hit = self._ideal[len(w)].reduce({w: Fraction(1)})
            self._nf_cache[w] = hit
        return hit

    def normal_form(self, e):
        out = FreeElement()
        for w, c in e.items():
            add_scaled(out, self.nf_word(tuple(w)), c)
        return out

    def multiply(self, a, b):
        out = FreeElement()
        for u, x in a.items():
            for v, y in b.items():
                add_scaled(out, self.nf_word(u + v), x * y)
        return out

    def mul_words(self, u, v):
        return self.nf_word(u + v)


def normal_form(tbl, e):
    return tbl.normal_form(FreeElement(e))


def multiply(tbl, a, b):
    return tbl.multiply(FreeElement(a), FreeElement(b))


def dim_A(tbl, d):
    return tbl.dim(d)
