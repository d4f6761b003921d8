"""Exact linear algebra over Q, backed by sympy's rational matrices.

Vectors are lists of Fractions; a matrix is given by its list of columns.
"""

from fractions import Fraction

import sympy


def _to_sym(c):
    return sympy.Rational(c.numerator, c.denominator)


def _from_sym(r):
    r = sympy.Rational(r)
    return Fraction(int(r.p), int(r.q))


def matrix(columns, nrows):
    if not columns:
        return sympy.zeros(nrows, 0)
    return sympy.Matrix(nrows, len(columns), lambda i, j: _to_sym(columns[j][i]))


def rank(columns, nrows):
    if not columns:
        return 0
    return matrix(columns, nrows).rank()


def nullspace(columns, nrows):
    """Basis of {z : sum_j z_j columns[j] = 0}."""
    ncols = len(columns)
    if ncols == 0:
        return []
    if nrows == 0:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    return [[_from_sym(v) for v in vec] for vec in matrix(columns, nrows).nullspace()]


def independent_subset(columns, nrows, start=()):
    """Greedily pick columns independent modulo span(start); returns indices."""
    chosen = list(start)
    picked = []
    r = rank(chosen, nrows)
    for j, col in enumerate(columns):
        r2 = rank(chosen + [col], nrows)
        if r2 > r:
            chosen.append(col)
            picked.append(j)
            r = r2
    return picked


def solve(columns, rhs, nrows):
    """A particular solution z of sum_j z_j columns[j] = rhs (free variables 0), or None."""
    ncols = len(columns)
    if ncols == 0:
        return [] if all(v == 0 for v in rhs) else None
    aug = matrix(columns + [rhs], nrows)
    red, pivots = aug.rref()
    if ncols in pivots:
        return None
    z = [Fraction(0)] * ncols
    for row, p in enumerate(pivots):
        z[p] = _from_sym(red[row, ncols])
    return z


class CochainComplex:
    """A finite cochain complex with explicit bases in each degree.

    ``bases[k]`` is a list of basis keys of C^k, ``differential(key)`` returns a
    LinComb in C^{k+1}. Cohomology representatives are chosen among kernel
    vectors greedily, so they are deterministic.
    """

    def __init__(self, bases, differential):
        self.bases = {k: list(v) for k, v in bases.items()}
        self.index = {k: {b: i for i, b in enumerate(v)} for k, v in self.bases.items()}
        self._d = differential
        self._mat = {}
        self._h = {}

    def dim(self, k):
        return len(self.bases.get(k, ()))

    def to_vector(self, comb, k):
        vec = [Fraction(0)] * self.dim(k)
        idx = self.index.get(k, {})
        for key, c in comb.items():
            if key not in idx:
                raise KeyError(f"{key!r} is not a basis element of degree {k}")
            vec[idx[key]] += c
        return vec

    def from_vector(self, vec, k):
        from .linear import LinComb
        return LinComb({b: c for b, c in zip(self.bases.get(k, ()), vec) if c})

    def d_columns(self, k):
        """Columns of d: C^k -> C^{k+1}."""
        if k not in self._mat:
            self._mat[k] = [self.to_vector(self._d(b), k + 1) for b in self.bases.get(k, ())]
        return self._mat[k]

    def cocycles(self, k):
        return nullspace(self.d_columns(k), self.dim(k + 1))

    def cohomology(self, k):
        """Representative cocycles (as vectors) of a basis of H^k."""
        if k not in self._h:
            n = self.dim(k)
            boundaries = self.d_columns(k - 1)
            z = self.cocycles(k)
            picked = independent_subset(z, n, start=boundaries)
            self._h[k] = [z[j] for j in picked]
        return self._h[k]

    def decompose(self, vec, k):
        """Write a cocycle vec = d(y) + sum c_i H_i. Returns (y, c) or None if vec is not a cocycle."""
        if any(v for v in self.apply_d(vec, k)):
            return None
        bnd = self.d_columns(k - 1)
        reps = self.cohomology(k)
        z = solve(bnd + reps, vec, self.dim(k))
        if z is None:
            raise ArithmeticError("cocycle not in span of boundaries and representatives")
        return z[:len(bnd)], z[len(bnd):]

    def apply_d(self, vec, k):
        out = [Fraction(0)] * self.dim(k + 1)
        for c, col in zip(vec, self.d_columns(k)):
            if c:
                for i, v in enumerate(col):
                    if v:
                        out[i] += c * v
        return out
