"""Differential graded Lie algebras given by structure constants over Q.

Elements of g (or of g tensor A) are LinCombs keyed by ``(basis_name, coeff_key)``
where ``coeff_key`` is :data:`~cechmc.coefficients.UNIT` or a monomial of m_A.
Grading is cohomological: the differential raises degree by one.
"""

from itertools import product

from .coefficients import UNIT, SchemaError
from .linear import LinComb, frac


def _sign(n):
    return -1 if n % 2 else 1


class DGLA:
    """A finite-dimensional DGLA.

    ``bracket`` lists structure constants for ordered pairs ``(x, y)`` with x
    not after y in the basis order; the remaining half is derived by graded
    antisymmetry. ``differential`` maps a basis name to a combination of names.
    """

    def __init__(self, basis, differential=None, bracket=None, name=""):
        self.basis = tuple((str(n), int(d)) for n, d in basis)
        self.name = name
        self.names = tuple(n for n, _ in self.basis)
        if len(set(self.names)) != len(self.names):
            raise SchemaError(f"duplicate basis names in {name or 'DGLA'}")
        self.degree = dict(self.basis)
        self.position = {n: i for i, n in enumerate(self.names)}
        self.d = {}
        for x, image in (differential or {}).items():
            self._check(x)
            image = LinComb(image)
            for y in image:
                self._check(y)
            if image:
                self.d[x] = image
        self.table = {}
        for (x, y), image in (bracket or {}).items():
            self._check(x)
            self._check(y)
            if self.position[x] > self.position[y]:
                raise SchemaError(f"bracket ({x}, {y}) must be given in basis order as ({y}, {x})")
            image = LinComb(image)
            for z in image:
                self._check(z)
            if not image:
                continue
            self.table[(x, y)] = image
            if x != y:
                self.table[(y, x)] = image.scale(-_sign(self.degree[x] * self.degree[y]))

    def _check(self, x):
        if x not in self.degree:
            raise SchemaError(f"unknown basis element {x!r} in {self.name or 'DGLA'}")

    def __repr__(self):
        return f"DGLA({self.name or len(self.basis)})"

    def __len__(self):
        return len(self.basis)

    @property
    def is_abelian(self):
        return not self.table

    def bracket_basis(self, x, y):
        return self.table.get((x, y))

    def element_degree(self, key):
        return self.degree[key[0]]


# -- element arithmetic on g (x) A --------------------------------------------


def bracket(x, y, g, A=None):
    """[x, y] for elements keyed by (name, coeff_key); coefficients multiply in A."""
    out = {}
    table = g.table
    for (a, ma), ca in x.items():
        for (b, mb), cb in y.items():
            image = table.get((a, b))
            if image is None:
                continue
            if ma == UNIT:
                coeff = {mb: ca * cb}
            elif mb == UNIT:
                coeff = {ma: ca * cb}
            else:
                coeff = {m: ca * cb * c for m, c in A.mono_mul(ma, mb).items()}
            for m, cm in coeff.items():
                for z, cz in image.items():
                    key = (z, m)
                    v = out.get(key, 0) + cm * cz
                    if v:
                        out[key] = v
                    else:
                        out.pop(key, None)
    return LinComb._raw(out)


def differential(x, g):
    out = {}
    for (a, m), c in x.items():
        for z, cz in g.d.get(a, {}).items():
            key = (z, m)
            v = out.get(key, 0) + c * cz
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return LinComb._raw(out)


def element(g, coords):
    """Build an element from ``{name: c}`` or ``{(name, mono): c}``."""
    out = {}
    for k, c in coords.items():
        key = k if isinstance(k, tuple) else (k, UNIT)
        g._check(key[0])
        out[key] = frac(c)
    return LinComb(out)


def homogeneous_part(x, g, degree):
    return x.filter(lambda k: g.degree[k[0]] == degree)


def validate_dgla(g):
    """All violated instances of d^2 = 0, degree rules, antisymmetry, Jacobi, Leibniz."""
    report = []
    unit = {n: LinComb.unit((n, UNIT)) for n in g.names}
    deg = g.degree
    for x, image in g.d.items():
        for z in image:
            if deg[z] != deg[x] + 1:
                report.append(f"degree: d({x}) has component {z} of degree {deg[z]}")
    for (x, y), image in g.table.items():
        for z in image:
            if deg[z] != deg[x] + deg[y]:
                report.append(f"degree: [{x},{y}] has component {z} of degree {deg[z]}")
    for x in g.names:
        dd = differential(differential(unit[x], g), g)
        if dd:
            report.append(f"d^2 != 0 on {x}")
    for x in g.names:
        if deg[x] % 2 == 0 and bracket(unit[x], unit[x], g):
            report.append(f"antisymmetry: [{x},{x}] != 0 for even {x}")
    for x, y in product(g.names, repeat=2):
        lhs = differential(bracket(unit[x], unit[y], g), g)
        rhs = bracket(differential(unit[x], g), unit[y], g) + bracket(
            unit[x], differential(unit[y], g), g).scale(_sign(deg[x]))
        if lhs != rhs:
            report.append(f"Leibniz fails on ({x}, {y})")
    for x, y, z in product(g.names, repeat=3):
        lhs = bracket(unit[x], bracket(unit[y], unit[z], g), g)
        rhs = bracket(bracket(unit[x], unit[y], g), unit[z], g) + bracket(
            unit[y], bracket(unit[x], unit[z], g), g).scale(_sign(deg[x] * deg[y]))
        if lhs != rhs:
            report.append(f"Jacobi fails on ({x}, {y}, {z})")
    return report


class LinearMap:
    """Graded linear map between DGLAs (or graded bases) with a degree shift."""

    def __init__(self, source, target, matrix, shift=0):
        self.source = source
        self.target = target
        self.shift = shift
        self.matrix = {}
        for x, image in matrix.items():
            source._check(x)
            image = LinComb(image)
            for y in image:
                target._check(y)
                if target.degree[y] != source.degree[x] + shift:
                    raise SchemaError(f"map does not respect grading on {x} -> {y}")
            if image:
                self.matrix[x] = image

    def __call__(self, x):
        out = {}
        for (a, m), c in x.items():
            for z, cz in self.matrix.get(a, {}).items():
                key = (z, m)
                v = out.get(key, 0) + c * cz
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return LinComb._raw(out)

    def compose(self, other):
        """self after other."""
        if other.target is not self.source:
            raise SchemaError("composition of non-composable maps")
        matrix = {}
        for x, image in other.matrix.items():
            out = self(LinComb({(y, UNIT): c for y, c in image.items()}))
            matrix[x] = {y: c for (y, _), c in out.items()}
        return LinearMap(other.source, self.target, matrix, self.shift + other.shift)

    @classmethod
    def identity(cls, g):
        return cls(g, g, {x: {x: 1} for x in g.names})

    def __eq__(self, other):
        return (isinstance(other, LinearMap) and self.source is other.source
                and self.target is other.target and self.matrix == other.matrix)

    __hash__ = None


def morphism_violations(phi):
    """Ways in which a degree-0 LinearMap fails to be a DGLA morphism."""
    g, h = phi.source, phi.target
    report = []
    if phi.shift:
        report.append("morphism must have degree 0")
    unit = {n: LinComb.unit((n, UNIT)) for n in g.names}
    for x in g.names:
        if phi(differential(unit[x], g)) != differential(phi(unit[x]), h):
            report.append(f"does not commute with d on {x}")
    for x, y in product(g.names, repeat=2):
        if phi(bracket(unit[x], unit[y], g)) != bracket(phi(unit[x]), phi(unit[y]), h):
            report.append(f"does not preserve [{x},{y}]")
    return report


class NilpotentDGLA:
    """The DGLA g (x) m_A: element arithmetic with coefficients truncated in A."""

    def __init__(self, g, A):
        self.g = g
        self.A = A

    @property
    def max_word(self):
        """Longest bracket word that can be nonzero."""
        return self.A.nilpotency_order - 1

    def bracket(self, x, y):
        return bracket(x, y, self.g, self.A)

    def d(self, x):
        return differential(x, self.g)

    def degree_of(self, x):
        degrees = {self.g.degree[k[0]] for k in x}
        if len(degrees) > 1:
            raise ValueError("element is not homogeneous")
        return degrees.pop() if degrees else None


def tensor_nilpotent(g, A):
    return NilpotentDGLA(g, A)


# -- a few standard algebras ---------------------------------------------------


def sl2():
    return DGLA([("e", 0), ("f", 0), ("h", 0)],
                bracket={("e", "f"): {"h": 1}, ("e", "h"): {"e": -2}, ("f", "h"): {"f": 2}},
                name="sl2")


def gl2():
    names = ["e11", "e12", "e21", "e22"]
    brackets = {}
    for a, b in product(range(2), repeat=2):
        for c, d in product(range(2), repeat=2):
            x, y = f"e{a+1}{b+1}", f"e{c+1}{d+1}"
            if names.index(x) > names.index(y):
                continue
            # [E_ab, E_cd] = delta_bc E_ad - delta_da E_cb
            image = {}
            if b == c:
                image[f"e{a+1}{d+1}"] = image.get(f"e{a+1}{d+1}", 0) + 1
            if d == a:
                image[f"e{c+1}{b+1}"] = image.get(f"e{c+1}{b+1}", 0) - 1
            brackets[(x, y)] = image
    return DGLA([(n, 0) for n in names], bracket=brackets, name="gl2")


def abelian(names, degree=0, name="abelian"):
    return DGLA([(n, degree) for n in names], name=name)


def line():
    """The one-dimensional abelian Lie algebra Q."""
    return abelian(["c"], name="Q")


def zero_dgla():
    return DGLA([], name="0")


def semidirect_sl2():
    """sl2 in degree 0 acting on a copy of sl2 in degree 1; zero differential."""
    base = sl2()
    basis = [(n, 0) for n in base.names] + [(f"s{n}", 1) for n in base.names]
    brackets = {}
    for (x, y), image in base.table.items():
        if base.position[x] <= base.position[y]:
            brackets[(x, y)] = dict(image)
        brackets[(x, f"s{y}")] = {f"s{z}": c for z, c in image.items()}
    return DGLA(basis, bracket=brackets, name="sl2 x sl2[-1]")


def sl2_dual_de_rham():
    """sl2 (x) Q[u, du]/(u^2, u du): a DGLA with nonzero differential d(x u) = x du."""
    base = sl2()
    basis = []
    for suffix, deg in (("", 0), ("u", 0), ("du", 1)):
        basis.extend((f"{n}{suffix}", deg) for n in base.names)
    diff = {f"{n}u": {f"{n}du": 1} for n in base.names}
    ring = {("", ""): "", ("", "u"): "u", ("u", ""): "u", ("", "du"): "du", ("du", ""): "du"}
    order = {name: i for i, (name, _) in enumerate(basis)}
    brackets = {}
    for (x, y), image in base.table.items():
        for (a, b), c in ring.items():
            left, right = f"{x}{a}", f"{y}{b}"
            if order[left] > order[right]:
                continue
            brackets[(left, right)] = {f"{z}{c}": v for z, v in image.items()}
    return DGLA(basis, diff, brackets, name="sl2 x Q[u,du]")


def obstructed_toy():
    """x in degree 1, y in degree 2, [x, x] = y: the smallest obstructed MC problem."""
    return DGLA([("x", 1), ("y", 2)], bracket={("x", "x"): {"y": 1}}, name="toy")


BUILTINS = {
    "sl2": sl2,
    "gl2": gl2,
    "line": line,
    "zero": zero_dgla,
    "sl2_semidirect": semidirect_sl2,
    "sl2_de_rham": sl2_dual_de_rham,
    "toy": obstructed_toy,
}
