"""Homotopy transfer of the Thom-Whitney bracket to Tot via decorated binary trees.

Everything is in décalage form: on the shift V[1] the differential is q1 = d
and the binary operation is q2(x, y) = (-1)^{|x|+1} [x, y], graded symmetric
of degree +1. Shifted degree is total degree minus one.

The tree sum with 1/|Aut| weights equals a sum over leaf-labelled trees, which
is computed recursively over splittings of the inputs:

    P(x_1..x_n) = sum_{S, T} eps * q2(E_S, E_T),   E_S = E(x) or h P(x_S),

with S running over subsets containing the first input. Then
E_n = h P and q̂_n = I P. :func:`evaluate_tree` is the literal (slow) version.
"""

from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations
from math import comb

from .coefficients import UNIT
from .linear import Accumulator, LinComb
from .scs import map_E, map_h, map_I, tot_differential, tw_bracket, tw_differential


class ArityError(ValueError):
    pass


# -- signs -------------------------------------------------------------------------


def koszul_sign(degrees, order):
    """Sign of rearranging items of the given (shifted) degrees into ``order``."""
    sign = 1
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            i, j = order[a], order[b]
            if i > j and degrees[i] % 2 and degrees[j] % 2:
                sign = -sign
    return sign


def unshuffles(n, first_size):
    """Position subsets S of size first_size; the complement follows in order."""
    for S in combinations(range(n), first_size):
        rest = tuple(i for i in range(n) if i not in S)
        yield S, rest


def splittings(n):
    """Unordered splittings {S, T} of range(n) into nonempty parts, S containing 0."""
    others = range(1, n)
    for r in range(0, n - 1):
        for chosen in combinations(others, r):
            S = (0,) + chosen
            T = tuple(i for i in others if i not in chosen)
            yield S, T


# -- décalage operations on Thom-Whitney elements ----------------------------------------


def tw_q2(G, X, Y, A=None):
    """q2(X, Y) = (-1)^{|x|+1} [x, Y] summed over the homogeneous parts x of X."""
    even = LinComb._raw({k: c for k, c in X.items() if G.tw_degree(k) % 2 == 0})
    odd = LinComb._raw({k: c for k, c in X.items() if G.tw_degree(k) % 2})
    out = LinComb()
    if even:
        out = out - tw_bracket(G, even, Y, A)
    if odd:
        out = out + tw_bracket(G, odd, Y, A)
    return out


# -- the transferred structure ------------------------------------------------------


class TransferredLInfty:
    """q̂_n on Tot and the Taylor coefficients E_n of E_infinity: Tot -> Tot_TW.

    ``homotopy`` replaces the Dupont homotopy (used for negative controls).
    Basis-level results are cached on sorted key tuples.
    """

    def __init__(self, G, max_arity=5, homotopy=None, A=None):
        self.G = G
        self.A = A
        self.max_arity = max_arity
        self.h = homotopy or (lambda X: map_h(G, X))
        self._P = {}
        self._E = {}
        self._q = {}
        degrees = [G.tot_degree(k) for v in G.tot_basis().values() for k in v]
        self.tot_range = (min(degrees), max(degrees)) if degrees else (0, -1)
        tw = [g.degree[x] + form for n, g in enumerate(G.levels) for x in g.names for form in (0, n)]
        self.tw_range = (min(tw), max(tw)) if tw else (0, -1)

    # ordering and degrees of basis keys (level, name)

    def sort_key(self, key):
        return (key[0], self.G.levels[key[0]].position[key[1]])

    def sdeg(self, key):
        return self.G.tot_degree(key) - 1

    def _check_arity(self, n):
        if n < 1:
            raise ArityError("arity must be positive")
        if n > self.max_arity:
            raise ArityError(f"arity {n} exceeds the configured bound {self.max_arity}")

    # basis level

    def _P_basis(self, keys):
        hit = self._P.get(keys)
        if hit is not None:
            return hit
        n = len(keys)
        out_degree = sum(self.G.tot_degree(k) for k in keys) - n + 2
        acc = Accumulator()
        if self.tw_range[0] <= out_degree <= self.tw_range[1]:
            degs = [self.sdeg(k) for k in keys]
            for S, T in splittings(n):
                a = self._E_basis(tuple(keys[i] for i in S))
                if not a:
                    continue
                b = self._E_basis(tuple(keys[i] for i in T))
                if not b:
                    continue
                sign = koszul_sign(degs, S + T)
                acc.add_comb(tw_q2(self.G, a, b), sign)
        hit = acc.result()
        self._P[keys] = hit
        return hit

    def _E_basis(self, keys):
        hit = self._E.get(keys)
        if hit is None:
            if len(keys) == 1:
                k = keys[0]
                hit = map_E(self.G, LinComb.unit((k[0], k[1], UNIT)))
            else:
                P = self._P_basis(keys)
                hit = self.h(P) if P else LinComb()
            self._E[keys] = hit
        return hit

    def _q_basis(self, keys):
        hit = self._q.get(keys)
        if hit is None:
            if len(keys) == 1:
                k = keys[0]
                hit = tot_differential(self.G, LinComb.unit((k[0], k[1], UNIT)))
            else:
                out_degree = sum(self.G.tot_degree(k) for k in keys) - len(keys) + 2
                if self.tot_range[0] <= out_degree <= self.tot_range[1]:
                    hit = map_I(self.G, self._P_basis(keys))
                else:
                    hit = LinComb()
            self._q[keys] = hit
        return hit

    # multilinear extension

    def _multilinear(self, basis_fn, args, tw):
        n = len(args)
        self._check_arity(n)
        acc = Accumulator()
        lists = [list(a.items()) for a in args]

        def rec(i, keys, monos, coeff):
            if i == n:
                order = sorted(range(n), key=lambda j: self.sort_key(keys[j]))
                sorted_keys = tuple(keys[j] for j in order)
                sign = koszul_sign([self.sdeg(k) for k in keys], order)
                value = basis_fn(sorted_keys)
                if not value:
                    return
                mono = self._mono_product(monos)
                if mono is None:
                    return
                for m, cm in mono.items():
                    for key, c in value.items():
                        if tw:
                            new = (key[0], key[1], m) + key[3:]
                        else:
                            new = (key[0], key[1], m)
                        acc.add(new, sign * coeff * cm * c)
                return
            for (lv, name, m), c in lists[i]:
                rec(i + 1, keys + ((lv, name),), monos + (m,), coeff * c)

        rec(0, (), (), 1)
        return acc.result()

    def _mono_product(self, monos):
        out = LinComb.unit(UNIT)
        for m in monos:
            if m == UNIT:
                continue
            nxt = Accumulator()
            for a, ca in out.items():
                for b, cb in self.A.mono_mul(a, m).items():
                    nxt.add(b, ca * cb)
            out = nxt.result()
            if not out:
                return None
        return out

    def bracket(self, n, args):
        """q̂_n(x_1, ..., x_n) for Tot elements (multilinear, graded symmetric)."""
        if len(args) != n:
            raise ArityError(f"q̂_{n} takes {n} arguments, got {len(args)}")
        return self._multilinear(self._q_basis, args, tw=False)

    def einfty(self, n, args):
        """E_n(x_1, ..., x_n) in Tot_TW."""
        if len(args) != n:
            raise ArityError(f"E_{n} takes {n} arguments, got {len(args)}")
        return self._multilinear(self._E_basis, args, tw=True)

    # Maurer-Cartan series for an element of shifted degree 0

    def powers(self, x, upto=None):
        """Lists E_k(x^k) and q̂_k(x^k) for k = 1..upto (x of total degree 1)."""
        if upto is None:
            upto = self.A.nilpotency_order - 1 if self.A is not None else self.max_arity
        Es = [None, map_E(self.G, x)]
        qs = [None, tot_differential(self.G, x)]
        for n in range(2, upto + 1):
            acc = Accumulator()
            for k in range(1, n):
                if Es[k] and Es[n - k]:
                    acc.add_comb(tw_q2(self.G, Es[k], Es[n - k], self.A), comb(n - 1, k - 1))
            P = acc.result()
            Es.append(self.h(P) if P else LinComb())
            qs.append(map_I(self.G, P) if P else LinComb())
        return Es, qs


def transferred_bracket(L, n, inputs):
    return L.bracket(n, list(inputs))


def einfty_component(L, n, inputs):
    return L.einfty(n, list(inputs))


# -- literal tree enumeration and evaluation (oracle) ---------------------------------------


LEAF = ()


def _canon(a, b):
    return (a, b) if repr(a) <= repr(b) else (b, a)


def _trees(n):
    if n == 1:
        return [LEAF]
    out = set()
    for k in range(1, n // 2 + 1):
        for a in _trees(k):
            for b in _trees(n - k):
                out.add(_canon(a, b))
    return sorted(out, key=repr)


def leaves(tree):
    return 1 if tree == LEAF else leaves(tree[0]) + leaves(tree[1])


def automorphism_order(tree):
    if tree == LEAF:
        return 1
    a, b = tree
    return automorphism_order(a) * automorphism_order(b) * (2 if a == b else 1)


def enumerate_trees(n, family="I"):
    """Isomorphism classes of binary rooted trees with n leaves and |Aut|.

    ``family`` only changes the root decoration (h or I) used in evaluation.
    """
    if n < 2:
        raise ArityError("trees need at least two leaves")
    if family not in ("h", "I"):
        raise ValueError("family must be 'h' or 'I'")
    return [(tree, automorphism_order(tree)) for tree in _trees(n)]


def evaluate_tree(G, tree, family, inputs, homotopy=None, A=None):
    """Z_Gamma on inputs: leaves E, vertices q2, internal edges h, root h or I.

    Symmetrized over all assignments of inputs to leaves with Koszul signs;
    inputs must be homogeneous Tot elements.
    """
    n = leaves(tree)
    if len(inputs) != n:
        raise ArityError(f"tree has {n} leaves, got {len(inputs)} inputs")
    h = homotopy or (lambda X: map_h(G, X))
    degs = []
    for x in inputs:
        ds = {G.tot_degree(k) for k in x}
        if len(ds) > 1:
            raise ValueError("inputs must be homogeneous")
        degs.append((ds.pop() - 1) if ds else 0)
    images = [map_E(G, x) for x in inputs]

    def planar(t, it, root=False):
        if t == LEAF:
            return images[next(it)]
        left = planar(t[0], it)
        right = planar(t[1], it)
        if not left or not right:
            return LinComb()
        value = tw_q2(G, left, right, A)
        return value if root else h(value)

    acc = Accumulator()
    for order in permutations(range(n)):
        sign = koszul_sign(degs, order)
        value = planar(tree, iter(order), root=True)
        acc.add_comb(value, sign)
    total = acc.result()
    if not total:
        return total
    if family == "h":
        return h(total)
    return map_I(G, total)


def tree_sum(G, n, family, inputs, homotopy=None, A=None):
    """sum_Gamma Z_Gamma / |Aut Gamma| via literal enumeration."""
    acc = Accumulator()
    for tree, aut in enumerate_trees(n, family):
        acc.add_comb(evaluate_tree(G, tree, family, inputs, homotopy, A), Fraction(1, aut))
    return acc.result()


# -- relation checkers ------------------------------------------------------------


def _basis_keys(L):
    keys = [(k[0], k[1]) for v in L.G.tot_basis().values() for k in v]
    return sorted(keys, key=L.sort_key)


def linfty_relation(L, keys):
    """sum_{i+j=n+1} sum_unshuffles eps q̂_j(q̂_i(x_S), x_rest) on basis keys."""
    n = len(keys)
    degs = [L.sdeg(k) for k in keys]
    units = [LinComb.unit((k[0], k[1], UNIT)) for k in keys]
    acc = Accumulator()
    for i in range(1, n + 1):
        for S, rest in unshuffles(n, i):
            inner = L._q_basis(tuple(keys[s] for s in S))
            if not inner:
                continue
            sign = koszul_sign(degs, S + rest)
            args = [inner] + [units[r] for r in rest]
            acc.add_comb(L.bracket(len(args), args), sign)
    return acc.result()


def check_linfty_relations(L, max_arity=4, keys=None):
    """Report lines for basis multisets on which a generalized Jacobi identity fails."""
    keys = keys or _basis_keys(L)
    lo, hi = L.tot_range
    report = []
    for n in range(1, max_arity + 1):
        for tup in combinations_with_replacement(keys, n):
            out_degree = sum(L.G.tot_degree(k) for k in tup) - n + 3
            if not lo <= out_degree <= hi:
                continue
            value = linfty_relation(L, tup)
            if value:
                report.append(f"arity {n}: relation fails on {list(tup)}")
    return report


def morphism_relation(L, keys):
    """LHS - RHS of the L-infinity morphism identity for E_infinity on basis keys."""
    G = L.G
    n = len(keys)
    degs = [L.sdeg(k) for k in keys]
    units = [LinComb.unit((k[0], k[1], UNIT)) for k in keys]
    acc = Accumulator()
    for i in range(1, n + 1):
        for S, rest in unshuffles(n, i):
            inner = L._q_basis(tuple(keys[s] for s in S))
            if not inner:
                continue
            sign = koszul_sign(degs, S + rest)
            args = [inner] + [units[r] for r in rest]
            acc.add_comb(L.einfty(len(args), args), sign)
    acc.add_comb(tw_differential(G, L._E_basis(tuple(keys))), -1)
    for S, T in splittings(n):
        a = L._E_basis(tuple(keys[i] for i in S))
        b = L._E_basis(tuple(keys[i] for i in T))
        if a and b:
            acc.add_comb(tw_q2(G, a, b), -koszul_sign(degs, S + T))
    return acc.result()


def check_morphism_relations(L, max_arity=3, keys=None):
    keys = keys or _basis_keys(L)
    report = []
    for n in range(1, max_arity + 1):
        for tup in combinations_with_replacement(keys, n):
            if morphism_relation(L, tup):
                report.append(f"arity {n}: morphism identity fails on {list(tup)}")
    return report


def symmetry_defects(L, n, keys):
    """Permutations of basis keys under which q̂_n is not graded symmetric."""
    degs = [L.sdeg(k) for k in keys]
    base = map_I(L.G, L._P_basis(tuple(keys)))
    bad = []
    for order in permutations(range(n)):
        value = map_I(L.G, L._P_basis(tuple(keys[i] for i in order)))
        if value != base.scale(koszul_sign(degs, order)):
            bad.append(order)
    return bad
