"""Elements of A (x) M (x) A style bimodules, stored as {slot tuple: Fraction}.

Every key is a tuple of words.  In bar elements every slot is an A-basis
word and interior slots have positive degree.  In Koszul elements the key is
(u, m, v): outer A-basis words around a raw tensor word m.
"""

from fractions import Fraction

from .linalg import add_scaled


def expand(slots, coeff=1):
    """Multilinear expansion of a sequence of slot elements (word dicts)."""
    out = {(): Fraction(coeff)}
    for s in slots:
        nxt = {}
        for k, c in out.items():
            for w, d in s.items():
                key = k + (w,)
                nxt[key] = nxt.get(key, 0) + c * d
        out = nxt
    return {k: c for k, c in out.items() if c}


def bar_term(tbl, words, coeff=1):
    """Normal-formed bar element from raw words; zero if an interior slot is empty."""
    if any(len(w) == 0 for w in words[1:-1]):
        return {}
    return expand([tbl.nf_word(tuple(w)) for w in words], coeff)


def act(tbl, elem, left=(), right=()):
    """left . elem . right, acting on the outer slots."""
    if not left and not right:
        return dict(elem)
    out = {}
    for key, c in elem.items():
        lhs = tbl.nf_word(left + key[0])
        rhs = tbl.nf_word(key[-1] + right)
        for a, x in lhs.items():
            for b, y in rhs.items():
                add_scaled(out, {(a,) + key[1:-1] + (b,): c * x * y}, 1)
    return out


def weight(key):
    return sum(len(w) for w in key)


def combine(*pairs):
    """Sum of c * elem over (c, elem) pairs."""
    out = {}
    for c, e in pairs:
        add_scaled(out, e, c)
    return out


class BimoduleMap:
    """A-bimodule map given by its values on generators 1|m|1.

    ``on_generator`` receives the interior tuple of a key and returns an
    element; values are cached.  Applying the map to a general key multiplies
    the generator value by the outer slots.
    """

    def __init__(self, tbl, on_generator, name=""):
        self.tbl = tbl
        self._f = on_generator
        self._cache = {}
        self.name = name

    def generator(self, mid):
        hit = self._cache.get(mid)
        if hit is None:
            hit = self._f(mid)
            self._cache[mid] = hit
        return hit

    def set_generator(self, mid, value):
        self._cache[mid] = value

    def __call__(self, elem):
        out = {}
        for key, c in elem.items():
            val = self.generator(key[1:-1])
            if val:
                add_scaled(out, act(self.tbl, val, key[0], key[-1]), c)
        return out

    def block(self, keys):
        """Matrix columns {key: image} on an explicit list of source keys."""
        return {k: self({k: Fraction(1)}) for k in keys}


def zero_map(tbl, name=""):
    return BimoduleMap(tbl, lambda mid: {}, name)
