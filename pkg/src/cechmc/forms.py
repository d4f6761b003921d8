"""Polynomial differential forms on standard simplices.

Omega_n is stored in canonical coordinates t_1..t_n, dt_1..dt_n; t_0 and dt_0
are eliminated through t_0 = 1 - sum t_i and dt_0 = -sum dt_i. A term key is
``(exps, dts)`` with ``exps`` a length-n exponent tuple and ``dts`` a sorted
tuple of indices in 1..n.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial

from .linear import LinComb


class PolyForm:
    """An element of Omega_n."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = terms if isinstance(terms, LinComb) else LinComb(terms)

    @classmethod
    def const(cls, n, c=1):
        return cls(n, {((0,) * n, ()): c})

    def __add__(self, other):
        _same(self, other)
        return PolyForm(self.n, self.terms + other.terms)

    def __sub__(self, other):
        _same(self, other)
        return PolyForm(self.n, self.terms - other.terms)

    def __neg__(self):
        return PolyForm(self.n, -self.terms)

    def __mul__(self, c):
        return PolyForm(self.n, self.terms.scale(c))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, PolyForm) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, self.terms))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"PolyForm({self.n}, {render(self)})"

    def degrees(self):
        return {len(dts) for _, dts in self.terms}

    def part(self, degree):
        return PolyForm(self.n, self.terms.filter(lambda k: len(k[1]) == degree))


def _same(a, b):
    if a.n != b.n:
        raise ValueError(f"simplex dimension mismatch: {a.n} vs {b.n}")


def render(form):
    if not form.terms:
        return "0"
    out = []
    for (exps, dts), c in sorted(form.terms.items()):
        mono = "*".join(f"t{i+1}^{e}" if e > 1 else f"t{i+1}" for i, e in enumerate(exps) if e)
        diff = "^".join(f"dt{i}" for i in dts)
        body = " ".join(p for p in (mono, diff) if p) or "1"
        out.append(f"{c}*{body}" if c != 1 else body)
    return " + ".join(out)


# -- term-level primitives ----------------------------------------------------


def _merge_dts(a, b):
    """Sorted union of disjoint index tuples and the sign of the shuffle; (None, 0) if they meet."""
    if not a:
        return b, 1
    if not b:
        return a, 1
    if set(a) & set(b):
        return None, 0
    inversions = 0
    for x in a:
        for y in b:
            if x > y:
                inversions += 1
    return tuple(sorted(a + b)), (-1 if inversions % 2 else 1)


def term_wedge(k1, k2):
    dts, sign = _merge_dts(k1[1], k2[1])
    if dts is None:
        return None, 0
    return (tuple(x + y for x, y in zip(k1[0], k2[0])), dts), sign


def wedge(a, b):
    _same(a, b)
    out = {}
    for k1, c1 in a.terms.items():
        for k2, c2 in b.terms.items():
            key, sign = term_wedge(k1, k2)
            if not sign:
                continue
            v = out.get(key, 0) + sign * c1 * c2
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return PolyForm(a.n, LinComb._raw(out))


@lru_cache(maxsize=None)
def _d_term(exps, dts):
    out = {}
    for i, e in enumerate(exps):
        idx = i + 1
        if not e or idx in dts:
            continue
        pos = sum(1 for j in dts if j < idx)
        new_exps = exps[:i] + (e - 1,) + exps[i + 1:]
        new_dts = tuple(sorted(dts + (idx,)))
        out[(new_exps, new_dts)] = Fraction((-1) ** pos * e)
    return LinComb(out)


def dform(a):
    """Exterior derivative."""
    out = LinComb()
    acc = {}
    for key, c in a.terms.items():
        for k, v in _d_term(*key).items():
            w = acc.get(k, 0) + c * v
            if w:
                acc[k] = w
            else:
                acc.pop(k, None)
    out = LinComb._raw(acc)
    return PolyForm(a.n, out)


# -- coordinates ------------------------------------------------------------


def t(n, i):
    """Barycentric coordinate t_i on Delta^n as a 0-form."""
    if not 0 <= i <= n:
        raise ValueError(f"t_{i} undefined on Delta^{n}")
    zero = (0,) * n
    if i == 0:
        terms = {(zero, ()): 1}
        for j in range(n):
            terms[(zero[:j] + (1,) + zero[j + 1:], ())] = -1
        return PolyForm(n, terms)
    return PolyForm(n, {(zero[:i - 1] + (1,) + zero[i:], ()): 1})


def dt(n, i):
    return dform(t(n, i))


# -- pullbacks ----------------------------------------------------------------


def pullback(a, target_n, t_images, dt_images=None):
    """Pull a form back along the map with t_i -> t_images[i-1] (0-forms in Omega_target_n)."""
    if dt_images is None:
        dt_images = [dform(x) for x in t_images]
    one = PolyForm.const(target_n)
    power_cache = {}

    def power(i, e):
        key = (i, e)
        if key not in power_cache:
            power_cache[key] = one if e == 0 else wedge(power(i, e - 1), t_images[i])
        return power_cache[key]

    out = PolyForm(target_n)
    for (exps, dts), c in a.terms.items():
        piece = one
        for i, e in enumerate(exps):
            if e:
                piece = wedge(piece, power(i, e))
        for j in dts:
            piece = wedge(piece, dt_images[j - 1])
        out = out + piece * c
    return out


@lru_cache(maxsize=None)
def _face_images(n, k):
    m = n - 1
    images = []
    for j in range(1, n + 1):
        if j == k:
            images.append(PolyForm(m))
        elif j < k:
            images.append(t(m, j))
        else:
            images.append(t(m, j - 1))
    return tuple(images)


def face_map(a, k):
    """delta^{k,n}: restrict to the face t_k = 0 and relabel vertices in order."""
    n = a.n
    if n < 1 or not 0 <= k <= n:
        raise ValueError(f"face {k} undefined on Delta^{n}")
    return _face_cached(a.n, a.terms, k)


@lru_cache(maxsize=200000)
def _face_cached(n, terms, k):
    images = list(_face_images(n, k))
    return pullback(PolyForm(n, terms), n - 1, images)


# -- integration ----------------------------------------------------------------


def integrate_monomial(exps, n):
    """Integral of t_1^e_1...t_n^e_n dt_1...dt_n over Delta^n."""
    num = 1
    for e in exps:
        num *= factorial(e)
    return Fraction(num, factorial(n + sum(exps)))


def integrate_simplex(a):
    """Integral over Delta^n of the top-degree part; dt_1^...^dt_n is positively oriented."""
    top = tuple(range(1, a.n + 1))
    total = Fraction(0)
    for (exps, dts), c in a.terms.items():
        if dts == top:
            total += c * integrate_monomial(exps, a.n)
    return total


# -- Whitney forms and Dupont homotopy -----------------------------------------


def multi_indices(r, n):
    """I(r, n): increasing (r+1)-tuples in 0..n."""
    return list(combinations(range(n + 1), r + 1))


def complement(index, n):
    return tuple(a for a in range(n + 1) if a not in index)


@lru_cache(maxsize=None)
def whitney_form(index, n):
    """omega_I = sum_s (-1)^s t_{a_s} dt_{a_0} ^ ... (omit s) ... ^ dt_{a_i}."""
    index = tuple(index)
    if any(not 0 <= a <= n for a in index) or list(index) != sorted(set(index)):
        raise ValueError(f"invalid multi-index {index} on Delta^{n}")
    out = PolyForm(n)
    for s, a_s in enumerate(index):
        piece = t(n, a_s)
        for j, a in enumerate(index):
            if j != s:
                piece = wedge(piece, dt(n, a))
        out = out + piece * (-1) ** s
    return out


def _poly_u_images(n, a):
    """psi_a^*(t_i) on [0,1] x Delta^n, coordinates t_1..t_n, u = t_{n+1}."""
    m = n + 1
    u = t(m, m)
    one_minus_u = PolyForm.const(m) - u
    images = []
    for i in range(1, n + 1):
        img = wedge(one_minus_u, t(m, i))
        if i == a:
            img = img + u
        images.append(img)
    return images


@lru_cache(maxsize=None)
def _h_a_term(n, key, a):
    m = n + 1
    images = _poly_u_images(n, a)
    pulled = pullback(PolyForm(n, {key: 1}), m, images)
    out = {}
    for (exps, dts), c in pulled.terms.items():
        if not dts or dts[-1] != m:
            continue
        # move du to the front, then integrate the u-polynomial over [0, 1]
        sign = -1 if (len(dts) - 1) % 2 else 1
        k = exps[-1]
        new = (exps[:-1], dts[:-1])
        v = out.get(new, 0) + sign * c / (k + 1)
        if v:
            out[new] = v
        else:
            out.pop(new, None)
    return LinComb._raw(out)


def dupont_h_a(form, a):
    """h_a = (integration over u in [0,1]) o psi_a^*; lowers form degree by one."""
    n = form.n
    if not 0 <= a <= n:
        raise ValueError(f"vertex {a} not in Delta^{n}")
    acc = {}
    for key, c in form.terms.items():
        if not key[1]:
            continue
        for k, v in _h_a_term(n, key, a).items():
            w = acc.get(k, 0) + c * v
            if w:
                acc[k] = w
            else:
                acc.pop(k, None)
    return PolyForm(n, LinComb._raw(acc))


def dupont_h_I(form, index):
    """h_I = h_{a_r} o ... o h_{a_0}."""
    out = form
    for a in index:
        if not out:
            break
        out = dupont_h_a(out, a)
    return out


@lru_cache(maxsize=None)
def _homotopy_term(n, key):
    form = PolyForm(n, {key: 1})
    degree = len(key[1])
    out = PolyForm(n)
    for r in range(0, degree):
        for index in multi_indices(r, n):
            hi = dupont_h_I(form, index)
            if hi:
                out = out + wedge(whitney_form(index, n), hi) * factorial(r)
    return out.terms


def dupont_homotopy(form):
    """sum_{0 <= r < deg} sum_{I in I(r,n)} r! omega_I ^ h_I(form), extended linearly."""
    acc = {}
    for key, c in form.terms.items():
        for k, v in _homotopy_term(form.n, key).items():
            w = acc.get(k, 0) + c * v
            if w:
                acc[k] = w
            else:
                acc.pop(k, None)
    return PolyForm(form.n, LinComb._raw(acc))
