"""Sparse exact linear algebra over the rationals.

Vectors are plain dicts mapping a hashable column label to a nonzero
:class:`~fractions.Fraction`.  Column order is supplied as a sort key, so the
same machinery serves word bases in a single tensor degree and the mixed-degree
bases used for filtered algebras.
"""

from fractions import Fraction


def add_scaled(target, vec, c):
    """target += c * vec, in place, dropping zeros."""
    if not c:
        return target
    for k, v in vec.items():
        nv = target.get(k, 0) + c * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)
    return target


def clean(vec):
    return {k: Fraction(v) for k, v in vec.items() if v}


class Subspace:
    """A subspace in reduced row-echelon form.

    The pivot of each row is its smallest column under ``key``; every other
    row vanishes at that column.  Given the subspace and the key, the rows are
    unique, so two Subspaces built from different spanning sets of the same
    space compare equal row for row.
    """

    def __init__(self, vectors=(), key=None, ambient_degree=None):
        self.key = key if key is not None else _default_key
        self.ambient_degree = ambient_degree
        self._rows = {}          # pivot column -> row
        for v in vectors:
            self.add(v)

    def copy(self):
        other = Subspace(key=self.key, ambient_degree=self.ambient_degree)
        other._rows = {p: dict(r) for p, r in self._rows.items()}
        return other

    # -- construction -----------------------------------------------------

    def reduce(self, vec):
        """Return the residue of ``vec`` modulo the subspace (a new dict)."""
        out = {k: v for k, v in vec.items() if v}
        for col in [c for c in out if c in self._rows]:
            c = out.get(col)
            if c:
                add_scaled(out, self._rows[col], -c)
        return out

    def add(self, vec):
        """Insert ``vec``; return True when the rank grew."""
        res = self.reduce(vec)
        if not res:
            return False
        piv = min(res, key=self.key)
        inv = 1 / Fraction(res[piv])
        row = {k: v * inv for k, v in res.items()}
        for p, r in self._rows.items():
            c = r.get(piv)
            if c:
                add_scaled(r, row, -c)
        self._rows[piv] = row
        return True

    # -- queries ------------------------------------------------------------

    @property
    def rank(self):
        return len(self._rows)

    def __len__(self):
        return len(self._rows)

    @property
    def pivots(self):
        return sorted(self._rows, key=self.key)

    @property
    def rows(self):
        """Rows sorted by pivot."""
        return [self._rows[p] for p in self.pivots]

    def row(self, pivot):
        return self._rows[pivot]

    def contains(self, vec):
        return not self.reduce(vec)

    def coordinates(self, vec):
        """Coefficients of ``vec`` on ``self.rows``; ValueError if outside."""
        if self.reduce(vec):
            raise ValueError("vector is not in the subspace")
        return [Fraction(vec.get(p, 0)) for p in self.pivots]

    def is_subspace_of(self, other):
        return all(other.contains(r) for r in self._rows.values())

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.pivots == other.pivots and all(
            self._rows[p] == other._rows[p] for p in self._rows)

    def __repr__(self):
        return f"Subspace(rank={self.rank}, degree={self.ambient_degree})"

    def intersect(self, other):
        """Exact intersection, via the left kernel of the residues mod other."""
        tag = "__combo__"
        work = Subspace(key=_combo_key(self.key))
        basis = self.rows
        result = Subspace(key=self.key, ambient_degree=self.ambient_degree)
        for i, b in enumerate(basis):
            vec = {(0, k): v for k, v in other.reduce(b).items()}
            vec[(1, (tag, i))] = Fraction(1)
            work.add(vec)
        for row in work.rows:
            if any(k[0] == 0 for k in row):
                continue
            combo = {}
            for (_, (_, i)), c in row.items():
                add_scaled(combo, basis[i], c)
            result.add(combo)
        return result


def _default_key(col):
    return col


def _combo_key(key):
    def k(col):
        side, label = col
        if side == 0:
            return (0, key(label))
        return (1, label[1])
    return k


def rank(rows, key=None):
    """Rank of a list of sparse row dicts (plain echelon, no back-reduction)."""
    key = key if key is not None else _default_key
    pivots = {}
    r = 0
    for vec in rows:
        cur = {k: v for k, v in vec.items() if v}
        while cur:
            col = min(cur, key=key)
            prow = pivots.get(col)
            if prow is None:
                inv = 1 / Fraction(cur[col])
                pivots[col] = {k: v * inv for k, v in cur.items()}
                r += 1
                break
            add_scaled(cur, prow, -cur[col])
    return r


class LinearSolver:
    """Particular solutions of ``M x = b`` for a fixed sparse matrix ``M``.

    ``columns`` maps each unknown to its image vector.  Unknowns are scanned
    in ``key`` order and kept only when their image is independent of the ones
    already kept; every other unknown is set to zero in the returned solution.
    """

    def __init__(self, columns, key=None):
        key = key if key is not None else _default_key
        self.unknowns = sorted(columns, key=key)
        self._image = Subspace(key=_solver_key)
        self.pivot_unknowns = []
        for idx, u in enumerate(self.unknowns):
            vec = {(0, k): v for k, v in columns[u].items() if v}
            vec[(1, idx)] = Fraction(1)
            res = self._image.reduce(vec)
            if any(k[0] == 0 for k in res):
                self._image.add(vec)
                self.pivot_unknowns.append(u)

    @property
    def rank(self):
        return len(self.pivot_unknowns)

    def solve(self, rhs):
        """Return {unknown: value}, or None when ``rhs`` is not in the image."""
        res = self._image.reduce({(0, k): v for k, v in rhs.items() if v})
        if any(k[0] == 0 for k in res):
            return None
        # each kept row is (image combo, tag combo); what is left of the tags
        # is minus the solution
        return {self.unknowns[k[1]]: -v for k, v in res.items()}


def _solver_key(col):
    return col


def nullspace(columns, key=None):
    """Basis of {x : sum x_u columns[u] = 0} as dicts over the unknowns."""
    key = key if key is not None else _default_key
    unknowns = sorted(columns, key=key)
    work = Subspace(key=_solver_key)
    for idx, u in enumerate(unknowns):
        vec = {(0, k): v for k, v in columns[u].items() if v}
        vec[(1, idx)] = Fraction(1)
        work.add(vec)
    out = []
    for row in work.rows:
        if any(k[0] == 0 for k in row):
            continue
        out.append({unknowns[k[1]]: v for k, v in row.items()})
    return out
