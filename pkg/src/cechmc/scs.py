"""Semicosimplicial DGLAs with their total complex and Thom-Whitney DGLA.

Key conventions:

* Tot elements are LinCombs keyed by ``(level, name, coeff)``; the total
  degree of ``g_i^j`` is ``i + j``.
* Thom-Whitney elements are LinCombs keyed by ``(n, name, coeff, exps, dts)``,
  i.e. a form term on Delta^n tensored with a basis element of g_n.
* d_Tot = sum_k (-1)^k coface_k + (-1)^i d on g_i, which is the sign that
  makes integration a chain map.
"""

from itertools import product
from math import factorial

from . import forms
from .coefficients import UNIT, SchemaError
from .glie import LinearMap, morphism_violations, zero_dgla
from .linear import Accumulator, LinComb


class SemicosimplicialDGLA:
    """A finite tower g_0, ..., g_N with cofaces partial_{k,i}: g_{i-1} -> g_i."""

    def __init__(self, levels, cofaces, name=""):
        self.levels = list(levels)
        self.name = name
        self.cofaces = {}
        for i in range(1, len(self.levels)):
            for k in range(i + 1):
                raw = cofaces.get((k, i))
                if raw is None:
                    raw = {}
                if not isinstance(raw, LinearMap):
                    raw = LinearMap(self.levels[i - 1], self.levels[i], raw)
                if raw.source is not self.levels[i - 1] or raw.target is not self.levels[i]:
                    raise SchemaError(f"coface ({k},{i}) has wrong source/target")
                self.cofaces[(k, i)] = raw
        extra = set(cofaces) - set(self.cofaces)
        if extra:
            raise SchemaError(f"cofaces outside the tower: {sorted(extra)}")
        self._e_cache = {}

    def __repr__(self):
        return f"SemicosimplicialDGLA({self.name or [len(g) for g in self.levels]})"

    @property
    def top(self):
        return len(self.levels) - 1

    def coface(self, k, i, x):
        """Apply partial_{k,i} to a level-(i-1) element keyed by (name, coeff)."""
        if i > self.top:
            return LinComb()
        return self.cofaces[(k, i)](x)

    def tot_basis(self):
        """Basis keys (level, name, UNIT) of Tot over Q, grouped by total degree."""
        out = {}
        for i, g in enumerate(self.levels):
            for name, deg in g.basis:
                out.setdefault(i + deg, []).append((i, name, UNIT))
        return out

    def tot_degree(self, key):
        return key[0] + self.levels[key[0]].degree[key[1]]

    def tw_degree(self, key):
        return len(key[4]) + self.levels[key[0]].degree[key[1]]


def level_part(x, i):
    """The g_i-component of a Tot element, keyed by (name, coeff)."""
    return LinComb._raw({(k[1], k[2]): c for k, c in x.items() if k[0] == i})


def from_level(v, i):
    return LinComb._raw({(i, k[0], k[1]): c for k, c in v.items()})


def validate_scs(G):
    """Violated cosimplicial identities and non-morphism cofaces."""
    report = []
    for (k, i), phi in sorted(G.cofaces.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        for problem in morphism_violations(phi):
            report.append(f"coface ({k},{i}): {problem}")
    for i in range(1, G.top):
        src = G.levels[i - 1]
        for k, l in product(range(i + 1), repeat=2):
            if k < l:
                continue
            for x in src.names:
                v = LinComb.unit((x, UNIT))
                lhs = G.coface(k + 1, i + 1, G.coface(l, i, v))
                rhs = G.coface(l, i + 1, G.coface(k, i, v))
                if lhs != rhs:
                    report.append(f"cosimplicial identity fails for k={k}, l={l}, level {i} on {x}")
    return report


# -- total complex ----------------------------------------------------------------


def tot_differential(G, x):
    acc = Accumulator()
    for (i, name, m), c in x.items():
        g = G.levels[i]
        sign = -c if i % 2 else c
        for z, cz in g.d.get(name, {}).items():
            acc.add((i, z, m), sign * cz)
        if i < G.top:
            for k in range(i + 2):
                ck = -c if k % 2 else c
                for z, cz in G.cofaces[(k, i + 1)].matrix.get(name, {}).items():
                    acc.add((i + 1, z, m), ck * cz)
    return acc.result()


# -- Thom-Whitney DGLA ----------------------------------------------------------


def tw_level(X, n):
    """Level-n component as a map (name, coeff) -> PolyForm."""
    out = {}
    for (lv, name, m, exps, dts), c in X.items():
        if lv != n:
            continue
        out.setdefault((name, m), {})[(exps, dts)] = c
    return {k: forms.PolyForm(n, LinComb._raw(v)) for k, v in out.items()}


def tw_from_forms(n, pieces):
    """Inverse of :func:`tw_level` for one level."""
    acc = Accumulator()
    for (name, m), form in pieces.items():
        for (exps, dts), c in form.terms.items():
            acc.add((n, name, m, exps, dts), c)
    return acc.result()


class IncompatibleElement(ValueError):
    """A Thom-Whitney family violating delta^{k,n} x_n = partial_{k,n} x_{n-1}."""


def require_compatible(G, *elements):
    for X in elements:
        bad = compatibility_violations(G, X)
        if bad:
            raise IncompatibleElement(f"face/coface compatibility fails at (k, n) = {bad[0]}")


def tw_differential(G, X, check=False):
    """(d_Omega (x) 1 + (-1)^p 1 (x) d_g) level-wise."""
    if check:
        require_compatible(G, X)
    acc = Accumulator()
    for (n, name, m, exps, dts), c in X.items():
        for (e2, d2), v in forms._d_term(exps, dts).items():
            acc.add((n, name, m, e2, d2), c * v)
        dg = G.levels[n].d.get(name)
        if dg:
            sc = -c if len(dts) % 2 else c
            for z, cz in dg.items():
                acc.add((n, z, m, exps, dts), sc * cz)
    return acc.result()


def tw_bracket(G, X, Y, A=None, check=False):
    """[alpha x, beta y] = (-1)^{|x||beta|} (alpha ^ beta) [x, y], level-wise."""
    if check:
        require_compatible(G, X, Y)
    by_level = {}
    for key, c in Y.items():
        by_level.setdefault(key[0], []).append((key, c))
    acc = Accumulator()
    for (n, a, ma, e1, d1), c1 in X.items():
        partners = by_level.get(n)
        if not partners:
            continue
        g = G.levels[n]
        deg_a = g.degree[a]
        for (_, b, mb, e2, d2), c2 in partners:
            image = g.table.get((a, b))
            if image is None:
                continue
            dts, sign = forms._merge_dts(d1, d2)
            if not sign:
                continue
            if deg_a % 2 and len(d2) % 2:
                sign = -sign
            exps = tuple(p + q for p, q in zip(e1, e2))
            if ma == UNIT:
                coeffs = ((mb, 1),)
            elif mb == UNIT:
                coeffs = ((ma, 1),)
            else:
                coeffs = tuple(A.mono_mul(ma, mb).items())
            base = sign * c1 * c2
            for m, cm in coeffs:
                for z, cz in image.items():
                    acc.add((n, z, m, exps, dts), base * cm * cz)
    return acc.result()


def scale_by_forms(G, family, X):
    """Multiply X level-wise by a compatible family of scalar forms (family[n] in Omega_n)."""
    acc = Accumulator()
    for (n, name, m, exps, dts), c in X.items():
        for (fe, fd), fc in family[n].terms.items():
            merged, sign = forms._merge_dts(fd, dts)
            if not sign:
                continue
            new_exps = tuple(p + q for p, q in zip(fe, exps))
            acc.add((n, name, m, new_exps, merged), sign * fc * c)
    return acc.result()


def compatibility_violations(G, X):
    """Pairs (k, n) where delta^{k,n} x_n != partial_{k,n} x_{n-1}."""
    bad = []
    levels = {n: tw_level(X, n) for n in range(G.top + 1)}
    for n in range(1, G.top + 1):
        cur, prev = levels[n], levels[n - 1]
        for k in range(n + 1):
            lhs = {}
            for key, form in cur.items():
                f = forms.face_map(form, k)
                if f:
                    lhs[key] = f
            rhs = {}
            for (name, m), form in prev.items():
                img = G.cofaces[(k, n)].matrix.get(name, {})
                for z, cz in img.items():
                    rhs[(z, m)] = rhs.get((z, m), forms.PolyForm(n - 1)) + form * cz
            rhs = {k2: v for k2, v in rhs.items() if v}
            if lhs != rhs:
                bad.append((k, n))
    return bad


def is_compatible(G, X):
    return not compatibility_violations(G, X)


# -- the contraction (E, I, h) ----------------------------------------------------


def iterated_coface(G, comp, i, v):
    """partial^{comp} v = partial_{b_{n-i},n} o ... o partial_{b_1,i+1} v."""
    out = v
    for step, b in enumerate(comp, start=1):
        out = G.coface(b, i + step, out)
        if not out:
            break
    return out


def _E_basis(G, i, name):
    key = (i, name)
    hit = G._e_cache.get(key)
    if hit is None:
        acc = Accumulator()
        v = LinComb.unit((name, UNIT))
        fi = factorial(i)
        for n in range(i, G.top + 1):
            for index in forms.multi_indices(i, n):
                comp = forms.complement(index, n)
                image = iterated_coface(G, comp, i, v)
                if not image:
                    continue
                omega = forms.whitney_form(index, n)
                for (z, _), cz in image.items():
                    for (exps, dts), cw in omega.terms.items():
                        acc.add((n, z, exps, dts), fi * cz * cw)
        hit = acc.result()
        G._e_cache[key] = hit
    return hit


def map_E(G, x):
    """E: Tot -> Tot_TW, E(gamma)_n = i! sum_{I in I(i,n)} omega_I (x) partial^{I-bar} gamma."""
    acc = Accumulator()
    for (i, name, m), c in x.items():
        for (n, z, exps, dts), v in _E_basis(G, i, name).items():
            acc.add((n, z, m, exps, dts), c * v)
    return acc.result()


def map_I(G, X, check=False):
    """Integrate the top-degree part of each level: I(X)_i = int_{Delta^i} x_i."""
    if check:
        require_compatible(G, X)
    acc = Accumulator()
    for (n, name, m, exps, dts), c in X.items():
        if len(dts) == n:
            acc.add((n, name, m), c * forms.integrate_monomial(exps, n))
    return acc.result()


def map_h(G, X, check=False):
    """Dupont homotopy applied level-wise to the form factor."""
    if check:
        require_compatible(G, X)
    acc = Accumulator()
    for (n, name, m, exps, dts), c in X.items():
        if not dts:
            continue
        for (e2, d2), v in forms._homotopy_term(n, (exps, dts)).items():
            acc.add((n, name, m, e2, d2), c * v)
    return acc.result()


# -- constructions ----------------------------------------------------------------


def positive_truncation(G):
    """Replace g_0 by the zero DGLA."""
    levels = [zero_dgla()] + G.levels[1:]
    cofaces = {}
    for (k, i), phi in G.cofaces.items():
        if i == 1:
            continue
        cofaces[(k, i)] = phi
    return SemicosimplicialDGLA(levels, cofaces, name=f"{G.name}>0" if G.name else "")


def constant_tower(g, top, name=""):
    """The constant semicosimplicial object with all cofaces the identity (levels 0..top)."""
    levels = [g] * (top + 1)
    ident = LinearMap.identity(g)
    cofaces = {(k, i): ident for i in range(1, top + 1) for k in range(i + 1)}
    return SemicosimplicialDGLA(levels, cofaces, name=name)


def single_level(g, name=""):
    return SemicosimplicialDGLA([g], {}, name=name or g.name)


class ScsMorphism:
    """Level-wise DGLA maps phi_i: g_i -> h_i commuting with the cofaces."""

    def __init__(self, source, target, maps):
        if len(source.levels) != len(target.levels):
            raise SchemaError("morphism between towers of different length")
        self.source = source
        self.target = target
        self.maps = []
        for i, (g, h) in enumerate(zip(source.levels, target.levels)):
            phi = maps.get(i, {}) if isinstance(maps, dict) else maps[i]
            if not isinstance(phi, LinearMap):
                phi = LinearMap(g, h, phi)
            self.maps.append(phi)

    def violations(self):
        report = []
        for i, phi in enumerate(self.maps):
            for p in morphism_violations(phi):
                report.append(f"level {i}: {p}")
        for (k, i), d in self.source.cofaces.items():
            d2 = self.target.cofaces[(k, i)]
            for x in self.source.levels[i - 1].names:
                v = LinComb.unit((x, UNIT))
                if self.maps[i](d(v)) != d2(self.maps[i - 1](v)):
                    report.append(f"does not commute with coface ({k},{i}) on {x}")
        return report

    def apply_tot(self, x):
        acc = Accumulator()
        for (i, name, m), c in x.items():
            for z, cz in self.maps[i].matrix.get(name, {}).items():
                acc.add((i, z, m), c * cz)
        return acc.result()

    def apply_tw(self, X):
        acc = Accumulator()
        for (n, name, m, exps, dts), c in X.items():
            for z, cz in self.maps[n].matrix.get(name, {}).items():
                acc.add((n, z, m, exps, dts), c * cz)
        return acc.result()

    def apply_level(self, i, v):
        return self.maps[i](v)


def apply_scs_morphism(phi, x):
    problems = phi.violations()
    if problems:
        raise SchemaError("not a morphism of semicosimplicial DGLAs: " + "; ".join(problems[:3]))
    return phi.apply_tot(x)


def identity_morphism(G):
    return ScsMorphism(G, G, {i: LinearMap.identity(g) for i, g in enumerate(G.levels)})


# -- natural scalar forms (used to build random compatible elements) ----------------


def natural_function(G, coeffs):
    """Family f_n = sum_a p(t_a) with p(s) = sum_k coeffs[k] s^(k+1); compatible with faces."""
    fam = []
    for n in range(G.top + 1):
        total = forms.PolyForm(n)
        for a in range(n + 1):
            ta = forms.t(n, a)
            power = ta
            for c in coeffs:
                total = total + power * c
                power = forms.wedge(power, ta)
        fam.append(total)
    return fam


def natural_one_form(G, coeffs):
    """Family f_n = sum_a p(t_a) dt_a, compatible with faces for any polynomial p."""
    fam = []
    for n in range(G.top + 1):
        total = forms.PolyForm(n)
        for a in range(n + 1):
            ta = forms.t(n, a)
            power = forms.PolyForm.const(n)
            p = forms.PolyForm(n)
            for c in coeffs:
                p = p + power * c
                power = forms.wedge(power, ta)
            total = total + forms.wedge(p, forms.dt(n, a))
        fam.append(total)
    return fam


def random_compatible(G, rng, rounds=2, span=3):
    """A random compatible Thom-Whitney element.

    Built by applying compatibility-preserving operations to images of E.
    """
    keys = [k for v in G.tot_basis().values() for k in v]
    if not keys:
        return LinComb()

    def coeffs(n):
        return [rng.randint(-span, span) for _ in range(n)]

    def fresh():
        return map_E(G, LinComb.unit(rng.choice(keys)).scale(rng.randint(1, span)))

    X = fresh()
    for _ in range(rounds):
        move = rng.randrange(4)
        if move == 0:
            X = X + tw_bracket(G, fresh(), X)
        elif move == 1:
            X = X + scale_by_forms(G, natural_function(G, coeffs(2)), fresh())
        elif move == 2:
            X = X + scale_by_forms(G, natural_one_form(G, coeffs(2)), fresh())
        else:
            X = X + tw_differential(G, scale_by_forms(G, natural_function(G, coeffs(2)), fresh()))
    return X


__all__ = [
    "SemicosimplicialDGLA", "validate_scs", "tot_differential", "tw_differential", "tw_bracket",
    "map_E", "map_I", "map_h", "positive_truncation", "apply_scs_morphism", "ScsMorphism",
    "compatibility_violations", "is_compatible", "require_compatible", "IncompatibleElement",
    "constant_tower", "single_level", "iterated_coface", "identity_morphism",
    "level_part", "from_level", "natural_function", "natural_one_form", "scale_by_forms",
    "random_compatible",
]
