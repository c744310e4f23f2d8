"""Weak PBW conditions, the cochain recursion producing a graded deformation,
associativity checks, recovery of phi from cochains, and gauge normalization."""

from fractions import Fraction
from itertools import product
from math import factorial

from .comparison import Comparison, left_factors, right_factors
from .core import AlgebraTable, CapacityError, FreeElement
from .koszul import compositions, tor3_concentration
from .linalg import LinearSolver, add_scaled, nullspace
from .overlaps import OverlapTable
from .tensors import combine


class PreconditionError(Exception):
    """The input does not satisfy what a construction requires."""


class InternalError(RuntimeError):
    """An invariant guaranteed by the theory failed; indicates a bug."""


# -- phi ----------------------------------------------------------------------

class PhiMap:
    """phi: R -> F^{N-1}, stored as its values on the echelon rows of R."""

    def __init__(self, pres, row_values):
        self.pres = pres
        self.row_values = [FreeElement(v) for v in row_values]
        if len(self.row_values) != pres.R.rank:
            raise ValueError("need one value per echelon row of R")
        for v in self.row_values:
            if any(len(w) >= pres.N for w in v):
                raise ValueError("phi values must have degree below N")

    @classmethod
    def zero(cls, pres):
        return cls(pres, [FreeElement() for _ in range(pres.R.rank)])

    @classmethod
    def from_relations(cls, pres, pairs):
        """Build phi from (relation, value) pairs spanning R."""
        cols = {i: dict(r) for i, (r, _) in enumerate(pairs)}
        solver = LinearSolver(cols)
        for combo in nullspace(cols):
            total = FreeElement()
            for i, c in combo.items():
                total = total + pairs[i][1].scale(c)
            if total:
                raise ValueError("phi is inconsistent on linearly dependent relations")
        values = []
        for row in pres.R.rows:
            sol = solver.solve(row)
            if sol is None:
                raise ValueError("the given relations do not span R")
            val = FreeElement()
            for i, c in sol.items():
                val = val + FreeElement(pairs[i][1]).scale(c)
            values.append(val)
        return cls(pres, values)

    def __call__(self, vec, j=None):
        """phi (or its degree-j component) on a vector of R."""
        out = FreeElement()
        for c, val in zip(self.pres.R.coordinates(vec), self.row_values):
            if c:
                part = val if j is None else val.component(j)
                add_scaled(out, part, c)
        return out

    def component(self, j):
        return [v.component(j) for v in self.row_values]

    def __eq__(self, other):
        return (isinstance(other, PhiMap) and self.pres.R == other.pres.R
                and self.row_values == other.row_values)

    def relation_element(self, vec):
        """r - phi(r) in the filtered tensor algebra."""
        return FreeElement(vec) - self(vec)


def _phi_tensor_one(phi, w, j):
    """(phi_j (x) 1 - 1 (x) phi_j)(w) for w in W_{N+1}."""
    out = FreeElement()
    for u, r in right_factors(w).items():
        add_scaled(out, phi(r, j) * FreeElement.word((u,)), 1)
    for v, s in left_factors(w).items():
        add_scaled(out, FreeElement.word((v,)) * phi(s, j), -1)
    return out


def check_weak_pbw(pres, phi):
    """Evaluate the three families of weak PBW conditions on a basis of R_{N+1}.

    Returns {"passed": bool, "conditions": [...], "failures": [...]} where each
    failure carries the condition id, the basis vector and the residual.
    """
    N = pres.N
    W = OverlapTable.for_presentation(pres).w(N + 1)
    results = []
    failures = []

    def record(cid, w, residual):
        ok = not residual
        results.append({"condition": cid, "passed": ok})
        if not ok:
            failures.append({"condition": cid, "witness": FreeElement(w),
                             "residual": FreeElement(residual)})

    for w in W.rows:
        X = _phi_tensor_one(phi, w, N - 1)
        outside = pres.R.reduce(X)
        record("pbwfi1", w, outside)
        if outside:
            continue
        record("pbwfi3", w, phi(X, 0))
        for j in range(1, N):
            record(f"pbwfi2(j={j})", w, phi(X, j) + _phi_tensor_one(phi, w, j - 1))
    summary = {}
    for r in results:
        summary[r["condition"]] = summary.get(r["condition"], True) and r["passed"]
    return {"passed": not failures, "conditions": summary, "failures": failures,
            "basisSize": W.rank}


# -- cochains ----------------------------------------------------------------

class Cochain:
    """A reduced 2-cochain of degree -level, stored on pairs of basis words."""

    def __init__(self, alg, level, values=None, weight_cap=None):
        self.alg = alg
        self.level = level
        self.weight_cap = alg.cap if weight_cap is None else weight_cap
        self.values = {}
        for (a, b), v in (values or {}).items():
            if not a or not b:
                raise PreconditionError("cochains are defined on positive-degree words only")
            v = {w: Fraction(c) for w, c in v.items() if c}
            if any(len(w) != len(a) + len(b) - level for w in v):
                raise ValueError(f"value at {(a, b)} is not of degree -{level}")
            if v:
                self.values[(a, b)] = v

    def __call__(self, a, b):
        if not a or not b:
            return {}
        if len(a) + len(b) > self.weight_cap:
            raise CapacityError(f"pair weight exceeds cap {self.weight_cap}")
        return self.values.get((a, b), {})

    def bilinear(self, x, y):
        """Extend to A-elements; degree-0 parts are killed (reduced cochain)."""
        out = {}
        for a, c in x.items():
            if not a:
                continue
            for b, d in y.items():
                if b:
                    add_scaled(out, self(a, b), c * d)
        return out

    def tilde(self, elem):
        """Bimodule extension on reduced bar 2-chains {(a0, a, b, a3): c}."""
        out = {}
        for (a0, a, b, a3), c in elem.items():
            for w, d in self(a, b).items():
                add_scaled(out, self.alg.nf_word(a0 + w + a3), c * d)
        return out

    def is_normalized(self, N):
        return all(len(a) + len(b) >= N for (a, b) in self.values)

    def __eq__(self, other):
        return self.level == other.level and self.values == other.values


def coboundary(cochain, a, b, c):
    """(d psi)(a, b, c) = a psi(b,c) - psi(ab,c) + psi(a,bc) - psi(a,b) c."""
    alg = cochain.alg
    out = {}
    add_scaled(out, alg.multiply({a: 1}, cochain(b, c)), 1)
    add_scaled(out, cochain.bilinear(alg.nf_word(a + b), {c: 1}), -1)
    add_scaled(out, cochain.bilinear({a: 1}, alg.nf_word(b + c)), 1)
    add_scaled(out, alg.multiply(cochain(a, b), {c: 1}), -1)
    return out


def sq(cochains, a, b, c):
    """sum_{i=1..j} psi_i(a, psi_{j+1-i}(b,c)) - psi_i(psi_{j+1-i}(a,b), c).

    ``cochains`` is [psi_1, ..., psi_j]; inner values are normal forms in A.
    """
    j = len(cochains)
    out = {}
    for i in range(1, j + 1):
        outer, inner = cochains[i - 1], cochains[j - i]
        add_scaled(out, outer.bilinear({a: 1}, inner(b, c)), 1)
        add_scaled(out, outer.bilinear(inner(a, b), {c: 1}), -1)
    return out


def positive_pairs(alg, weight_cap):
    out = []
    for w in range(2, weight_cap + 1):
        for degs in compositions(w, 2):
            out.extend(product(*[alg.basis(d) for d in degs]))
    return out


def positive_triples(alg, weight_cap):
    out = []
    for w in range(3, weight_cap + 1):
        for degs in compositions(w, 3):
            out.extend(product(*[alg.basis(d) for d in degs]))
    return out


class DeformationSeries:
    """psi_1..psi_L defining a x b = ab + sum_h psi_h(a,b) t^h mod t^{L+1}."""

    def __init__(self, pres, cochains, weight_cap, meta=None):
        self.pres = pres
        self.alg = AlgebraTable.for_presentation(pres)
        self.cochains = list(cochains)
        self.weight_cap = weight_cap
        self.meta = dict(meta or {})

    @property
    def level_cap(self):
        return len(self.cochains)

    def psi(self, h):
        return self.cochains[h - 1]

    def value(self, h, a, b):
        """psi_h(a, b) with psi_0 the product of A."""
        if h == 0:
            return self.alg.mul_words(a, b)
        if h > self.level_cap:
            raise CapacityError(f"level {h} exceeds level cap {self.level_cap}")
        return self.psi(h)(a, b)

    def product(self, x, y, level=None):
        """Deformed product of A[t]-elements {(word, power): c}, truncated at t^{L+1}."""
        L = self.level_cap if level is None else level
        out = {}
        for (a, i), c in x.items():
            for (b, j), d in y.items():
                for h in range(0, L + 1 - i - j):
                    if h and (not a or not b):
                        break
                    if h > len(a) + len(b):
                        break
                    for w, e in self.value(h, a, b).items():
                        add_scaled(out, {(w, i + j + h): c * d * e}, 1)
        return out

    def fiber_product(self, x, y):
        """a x_1 b = ab + sum_h psi_h(a,b) on plain A-elements {word: c}."""
        out = {}
        for (w, _), c in self.product({(a, 0): v for a, v in x.items()},
                                      {(b, 0): v for b, v in y.items()}).items():
            add_scaled(out, {w: c}, 1)
        return out


# -- synthesis -------------------------------------------------------------

def _phi_tilde_on_koszul2(cmp, phi, j, elem):
    """phi_j extended as a bimodule map on A (x) R (x) A (free representation)."""
    coords = cmp.K.coordinates(2, elem)
    if coords is None:
        raise InternalError("tau2 value left A (x) R (x) A")
    out = {}
    comp = phi.component(j)
    for (u, k, v), c in coords.items():
        for w, d in comp[k].items():
            add_scaled(out, cmp.alg.nf_word(u + w + v), c * d)
    return out


def relation_decompositions(pres):
    """Basis of {sum c_(a,b) a (x) b : weight N, a, b nonempty, concatenation in R}."""
    N, g = pres.N, pres.ngens
    cols = {}
    for i in range(1, N):
        for a in product(range(g), repeat=i):
            for b in product(range(g), repeat=N - i):
                cols[(a, b)] = pres.R.reduce({a + b: Fraction(1)})
    return nullspace(cols)


def synthesize_cochains(pres, phi, level_cap, weight_cap, waive_tor3=False, cmp=None):
    """Build normalized psi_1..psi_L from a weak PBW phi.

    Refuses when the weak PBW conditions fail, or when Tor_3 is not
    concentrated in weight N+1 up to the weight cap unless ``waive_tor3``.
    """
    if weight_cap > pres.degree_cap:
        raise CapacityError("weight cap exceeds the algebra degree cap")
    pbw = check_weak_pbw(pres, phi)
    if not pbw["passed"]:
        raise PreconditionError(f"weak PBW conditions fail: {pbw['failures'][0]['condition']}")
    tor = tor3_concentration(pres, weight_cap)
    if not tor["concentrated"] and not waive_tor3:
        raise PreconditionError(
            f"Tor_3 not concentrated in weight {pres.N + 1}: {tor['violatingWeights']}")
    cmp = cmp or Comparison(pres, weight_cap)
    alg = cmp.alg
    N = pres.N
    pairs = positive_pairs(alg, weight_cap)
    rel_decomps = relation_decompositions(pres)

    def primed(j):
        vals = {}
        if j <= N:
            for a, b in pairs:
                t = cmp.tau[2]({((), a, b, ()): Fraction(1)})
                v = _phi_tilde_on_koszul2(cmp, phi, N - j, t) if t else {}
                if v:
                    vals[(a, b)] = v
        return Cochain(alg, j, vals, weight_cap)

    psi = [primed(1)]
    etas = []
    for j in range(1, level_cap):
        nxt = primed(j + 1)
        cache = {}

        def obstruction(key):
            # [d psi'_{j+1} + sq(psi_1..psi_j)] on a bar 3-chain key
            a0, a, b, c, a4 = key
            inner = cache.get((a, b, c))
            if inner is None:
                inner = combine((1, coboundary(nxt, a, b, c)), (1, sq(psi, a, b, c)))
                cache[(a, b, c)] = inner
            out = {}
            for w, d in inner.items():
                add_scaled(out, alg.nf_word(a0 + w + a4), d)
            return out

        eta_vals = {}
        for a, b in pairs:
            val = {}
            for key, c in cmp.s[2]({((), a, b, ()): Fraction(1)}).items():
                add_scaled(val, obstruction(key), c)
            if val:
                eta_vals[(a, b)] = val
        eta = Cochain(alg, j + 1, eta_vals, weight_cap)
        _assert_extranormalized(eta, N, rel_decomps, j + 1)
        new_vals = {}
        for ab in set(nxt.values) | set(eta.values):
            v = combine((1, nxt.values.get(ab, {})), (-1, eta.values.get(ab, {})))
            if v:
                new_vals[ab] = v
        step = Cochain(alg, j + 1, new_vals, weight_cap)
        if not step.is_normalized(N):
            raise InternalError(f"psi_{j + 1} is not normalized")
        psi.append(step)
        etas.append(eta)
    meta = {"tor3": tor, "tor3Waived": bool(waive_tor3 and not tor["concentrated"]),
            "exact": level_cap >= weight_cap}
    series = DeformationSeries(pres, psi, weight_cap, meta)
    series.etas = etas
    return series


def _assert_extranormalized(eta, N, rel_decomps, level):
    for (a, b) in eta.values:
        if len(a) + len(b) < N:
            raise InternalError(f"eta_{level} does not vanish below weight N at {(a, b)}")
    for combo in rel_decomps:
        total = {}
        for (a, b), c in combo.items():
            add_scaled(total, eta(a, b), c)
        if total:
            raise InternalError(f"eta_{level} does not vanish on a relation decomposition")


# -- verification -------------------------------------------------------------

def verify_associativity(series, weight_cap=None):
    """Check the deformation equations and the direct associativity expansion."""
    cap = series.weight_cap if weight_cap is None else weight_cap
    alg = series.alg
    L = series.level_cap
    triples = positive_triples(alg, cap)
    equations = None
    for a, b, c in triples:
        if L >= 1 and coboundary(series.psi(1), a, b, c):
            equations = {"level": 1, "triple": (a, b, c)}
            break
        for j in range(1, L):
            lhs = coboundary(series.psi(j + 1), a, b, c)
            rhs = sq(series.cochains[:j], a, b, c)
            if combine((1, lhs), (1, rhs)):
                equations = {"level": j + 1, "triple": (a, b, c)}
                break
        if equations:
            break
    direct = None
    for a, b, c in triples:
        x, y, z = {(a, 0): 1}, {(b, 0): 1}, {(c, 0): 1}
        diff = combine((1, series.product(series.product(x, y), z)),
                       (-1, series.product(x, series.product(y, z))))
        if diff:
            level = min(p for (_, p) in diff)
            direct = {"level": level, "triple": (a, b, c)}
            break
    return {"passed": equations is None and direct is None,
            "equations": equations, "direct": direct, "triples": len(triples),
            "levelCap": L, "weightCap": cap}


def extract_phi(series, cmp=None):
    """phi_{N-j}(r) = psi_j applied to sigma2(1|r|1), for each echelon row of R."""
    pres = series.pres
    N = pres.N
    if series.level_cap < N:
        raise CapacityError(f"need psi_1..psi_{N} to recover phi")
    cmp = cmp or Comparison(pres, min(series.weight_cap, pres.degree_cap))
    values = []
    for row in pres.R.rows:
        chain = {}
        for m, c in row.items():
            add_scaled(chain, cmp.sigma[2]({((), m, ()): Fraction(1)}), c)
        val = FreeElement()
        for j in range(1, N + 1):
            add_scaled(val, series.psi(j).tilde(chain), 1)
        values.append(val)
    return PhiMap(pres, values)


# -- gauge normalization -----------------------------------------------------

def _apply_exp(series, alpha, m, x, sign):
    """exp(sign * t^m * alpha) on an A[t]-element, truncated at t^{L+1}."""
    L = series.level_cap
    out = dict(x)
    term = dict(x)
    k = 0
    while True:
        k += 1
        nxt = {}
        for (w, p), c in term.items():
            if p + m > L or not w:
                continue
            for v, d in alpha.get(w, {}).items():
                add_scaled(nxt, {(v, p + m): c * d}, 1)
        if not nxt:
            break
        term = nxt
        add_scaled(out, term, Fraction(sign ** k, factorial(k)))
    return out


def gauge_transform(series, alpha, m):
    """The series for a x' b = g^{-1}(g(a) x g(b)) with g = exp(t^m alpha)."""
    alg = series.alg
    L = series.level_cap
    cap = series.weight_cap
    vals = [dict() for _ in range(L)]
    for a, b in positive_pairs(alg, cap):
        ga = _apply_exp(series, alpha, m, {(a, 0): Fraction(1)}, 1)
        gb = _apply_exp(series, alpha, m, {(b, 0): Fraction(1)}, 1)
        prod = _apply_exp(series, alpha, m, series.product(ga, gb), -1)
        for (w, p), c in prod.items():
            if 1 <= p <= L:
                add_scaled(vals[p - 1].setdefault((a, b), {}), {w: c}, 1)
    cochains = [Cochain(alg, h + 1, {k: v for k, v in vals[h].items() if v}, cap)
                for h in range(L)]
    return DeformationSeries(series.pres, cochains, cap, series.meta)


def normalize_gauge(series, cmp=None):
    """Replace a deformation by an equivalent one given by normalized cochains.

    Returns (normalized series, [alpha_1, ...]) where alpha_m = psi_m o s_1 is
    taken from the series at step m; the step applies exp(-t^m alpha_m).
    """
    check = verify_associativity(series)
    if not check["passed"]:
        raise PreconditionError("input cochains do not define an associative product")
    pres = series.pres
    cmp = cmp or Comparison(pres, series.weight_cap)
    alg = series.alg
    gauges = []
    current = series
    for m in range(1, min(pres.N, current.level_cap) + 1):
        psi = current.psi(m)
        alpha = {}
        for d in range(1, current.weight_cap + 1):
            for a in alg.basis(d):
                val = psi.tilde(cmp.s[1]({((), a, ()): Fraction(1)}))
                if val:
                    alpha[a] = val
        gauges.append(alpha)
        if alpha:
            neg = {a: {w: -c for w, c in v.items()} for a, v in alpha.items()}
            current = gauge_transform(current, neg, m)
    for h in range(1, current.level_cap + 1):
        if not current.psi(h).is_normalized(pres.N):
            raise InternalError(f"gauge step left psi_{h} unnormalized")
    return current, gauges


def check_normalized_cocycle_symmetry(series, N=None):
    """psi_j(gamma_(1) bar, gamma_(2)) = psi_j(gamma_(1), gamma_(2) bar) on words of length N."""
    pres = series.pres
    N = pres.N if N is None else N
    count = 0
    for j in range(1, series.level_cap + 1):
        psi = series.psi(j)
        for g in product(range(pres.ngens), repeat=N):
            lhs = psi.bilinear({g[:1]: 1}, series.alg.nf_word(g[1:]))
            rhs = psi.bilinear(series.alg.nf_word(g[:-1]), {g[-1:]: 1})
            count += 1
            if combine((1, lhs), (-1, rhs)):
                return {"passed": False, "level": j, "witness": g, "count": count}
    return {"passed": True, "count": count}


def check_primed_overlap_identity(series_phi, cmp, j):
    """d psi'_{j+1} o sigma3 on 1|w|1 equals (1 (x) phi_{N-j-1} - phi_{N-j-1} (x) 1)(w)."""
    pres, phi = cmp.pres, series_phi
    N = pres.N
    alg = cmp.alg
    vals = {}
    for a, b in positive_pairs(alg, N + 1):
        t = cmp.tau[2]({((), a, b, ()): Fraction(1)})
        v = _phi_tilde_on_koszul2(cmp, phi, N - j - 1, t) if t else {}
        if v:
            vals[(a, b)] = v
    primed = Cochain(alg, j + 1, vals, N + 1)
    W = cmp.K.w(3)
    for k, w in enumerate(W.rows):
        chain = cmp.sigma[3](cmp.K.generator(3, k))
        lhs = {}
        for (a0, a, b, c, a4), x in chain.items():
            for word, d in coboundary(primed, a, b, c).items():
                add_scaled(lhs, alg.nf_word(a0 + word + a4), x * d)
        rhs = FreeElement(_phi_tensor_one(phi, w, N - j - 1)).scale(-1)
        if combine((1, lhs), (-1, alg.normal_form(rhs))):
            return {"passed": False, "witness": w}
    return {"passed": True, "count": W.rank}
