"""Artin local coefficient rings A = Q + m_A presented by a monomial basis of m_A.

Coefficient keys are strings: the basis monomials of m_A, plus :data:`UNIT`
for the residue field. Rationals are :class:`fractions.Fraction`.
"""

from fractions import Fraction
from itertools import product

from .linalg import rank
from .linear import LinComb

UNIT = "1"


class SchemaError(ValueError):
    """Malformed algebraic input (unknown basis names, bad degrees, ...)."""


class ArtinAlgebra:
    """Finite-dimensional local Q-algebra A with nilpotent maximal ideal m_A.

    ``products`` maps ordered pairs of monomials to linear combinations of
    monomials; pairs not listed multiply to zero, and a pair listed in only
    one order is read commutatively.
    """

    def __init__(self, monomials, products=None, name=""):
        self.monomials = tuple(monomials)
        self.name = name
        if len(set(self.monomials)) != len(self.monomials):
            raise SchemaError("duplicate monomial names")
        if UNIT in self.monomials:
            raise SchemaError(f"{UNIT!r} is reserved for the unit")
        known = set(self.monomials)
        self._table = {}
        for (a, b), value in (products or {}).items():
            if a not in known or b not in known:
                raise SchemaError(f"unknown monomial in product ({a}, {b})")
            value = LinComb(value)
            for m in value:
                if m not in known:
                    raise SchemaError(f"product ({a}, {b}) has unknown monomial {m!r}")
            self._table[(a, b)] = value
        self._mul_cache = {}
        self._powers = None

    def __repr__(self):
        return f"ArtinAlgebra({self.name or list(self.monomials)})"

    def mono_mul(self, a, b):
        """Product of two coefficient keys (UNIT allowed) as a LinComb of keys."""
        if a == UNIT:
            return LinComb.unit(b)
        if b == UNIT:
            return LinComb.unit(a)
        key = (a, b)
        hit = self._mul_cache.get(key)
        if hit is None:
            if key in self._table:
                hit = self._table[key]
            elif (b, a) in self._table:
                hit = self._table[(b, a)]
            else:
                if a not in self.monomials or b not in self.monomials:
                    raise SchemaError(f"unknown monomial in {a!r}*{b!r}")
                hit = LinComb()
            self._mul_cache[key] = hit
        return hit

    # -- filtration ------------------------------------------------------

    def _vec(self, comb):
        return [comb.get(m, Fraction(0)) for m in self.monomials]

    def power_spans(self):
        """Spanning sets of m_A, m_A^2, ... down to and including the first zero power."""
        if self._powers is None:
            n = len(self.monomials)
            spans = [[LinComb.unit(m) for m in self.monomials]]
            while spans[-1]:
                nxt = []
                cols = []
                r = 0
                for v, m in product(spans[-1], self.monomials):
                    w = ideal_mul(v, LinComb.unit(m), self)
                    if not w:
                        continue
                    r2 = rank(cols + [self._vec(w)], n)
                    if r2 > r:
                        cols.append(self._vec(w))
                        nxt.append(w)
                        r = r2
                spans.append(nxt)
                if len(spans) > n + 2:
                    raise SchemaError("maximal ideal is not nilpotent")
            self._powers = spans
        return self._powers

    @property
    def nilpotency_order(self):
        """Smallest k with m_A^k = 0."""
        return len(self.power_spans())

    def in_power(self, comb, k):
        spans = self.power_spans()
        if k <= 0:
            return True
        if k > len(spans) or not spans[k - 1]:
            return not comb
        cols = [self._vec(v) for v in spans[k - 1]]
        return rank(cols + [self._vec(comb)], len(self.monomials)) == len(cols)

    def monomial_degree(self, m):
        return filtration_degree(LinComb.unit(m), self)

    def graded_pieces(self):
        """Monomials grouped by filtration degree; raises unless the basis is adapted."""
        pieces = {}
        for m in self.monomials:
            pieces.setdefault(self.monomial_degree(m), []).append(m)
        # adapted: m_A^k is spanned by the monomials of degree >= k
        for k, span in enumerate(self.power_spans(), start=1):
            count = sum(len(v) for d, v in pieces.items() if d >= k)
            if count != len(span):
                raise SchemaError("monomial basis is not adapted to the m_A-adic filtration")
        return pieces

    def validate(self):
        """List violated ring axioms (associativity, commutativity) on the basis."""
        problems = []
        for a, b in product(self.monomials, repeat=2):
            if (a, b) in self._table and (b, a) in self._table and self._table[(a, b)] != self._table[(b, a)]:
                problems.append(f"noncommutative: {a}*{b} != {b}*{a}")
        for a, b, c in product(self.monomials, repeat=3):
            left = ideal_mul(ideal_mul(LinComb.unit(a), LinComb.unit(b), self), LinComb.unit(c), self)
            right = ideal_mul(LinComb.unit(a), ideal_mul(LinComb.unit(b), LinComb.unit(c), self), self)
            if left != right:
                problems.append(f"nonassociative: ({a}{b}){c} != {a}({b}{c})")
        try:
            self.power_spans()
        except SchemaError as exc:
            problems.append(str(exc))
        return problems


def ideal_mul(x, y, A):
    """Bilinear product of two coefficient combinations in A."""
    out = {}
    for a, ca in x.items():
        for b, cb in y.items():
            for m, c in A.mono_mul(a, b).items():
                v = out.get(m, 0) + ca * cb * c
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
    return LinComb._raw(out)


def filtration_degree(x, A):
    """Largest k with x in m_A^k; ``math.inf`` for x = 0."""
    if not x:
        return float("inf")
    if UNIT in x:
        return 0
    k = 1
    while A.in_power(x, k + 1):
        k += 1
    return k


def truncated_polynomial(order, var="t"):
    """Q[var]/(var^order): monomials var, var^2, ..., var^(order-1)."""
    if order < 2:
        raise SchemaError("order must be at least 2")

    def name(p):
        return var if p == 1 else f"{var}^{p}"

    monos = [name(p) for p in range(1, order)]
    products = {}
    for p in range(1, order):
        for q in range(p, order):
            if p + q < order:
                products[(name(p), name(q))] = {name(p + q): 1}
    return ArtinAlgebra(monos, products, name=f"Q[{var}]/({var}^{order})")


def monomial_quotient(bounds):
    """Q[x_1..x_r]/(x_1^b_1, ..., x_r^b_r) with ``bounds`` a dict var -> b."""
    variables = list(bounds)
    exps = [e for e in product(*[range(bounds[v]) for v in variables]) if any(e)]

    def name(e):
        parts = []
        for v, p in zip(variables, e):
            if p == 1:
                parts.append(v)
            elif p > 1:
                parts.append(f"{v}^{p}")
        return "".join(parts)

    exps.sort(key=lambda e: (sum(e), [-p for p in e]))
    products = {}
    for i, e in enumerate(exps):
        for f in exps[i:]:
            g = tuple(a + b for a, b in zip(e, f))
            if all(p < bounds[v] for p, v in zip(g, variables)):
                products[(name(e), name(f))] = {name(g): 1}
    label = ",".join(f"{v}^{bounds[v]}" for v in variables)
    return ArtinAlgebra([name(e) for e in exps], products, name=f"Q[{','.join(variables)}]/({label})")

