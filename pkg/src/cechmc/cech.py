"""Čech semicosimplicial Lie algebras of finite covers, and the abelianized complex.

Subsets of opens are sorted tuples of indices. A presheaf gives a DGLA for
each subset (missing subsets are the zero algebra) and restriction maps for
inclusions S ⊂ S' with |S'| = |S| + 1; longer restrictions are composites.
"""

from itertools import combinations

from .coefficients import UNIT, SchemaError
from .glie import DGLA, LinearMap, morphism_violations, zero_dgla
from .linalg import CochainComplex
from .linear import LinComb
from .scs import ScsMorphism, SemicosimplicialDGLA, tot_differential


class CoverNerve:
    """Presheaf of DGLAs on the nerve of a finite cover."""

    def __init__(self, opens, algebras, restrictions=None, max_level=None, name=""):
        self.opens = list(opens)
        self.name = name
        k = len(self.opens)
        if k == 0:
            raise SchemaError("a cover needs at least one open")
        self.top = k - 1 if max_level is None else min(max_level, k - 1)
        self._zero = zero_dgla()
        self.algebras = {}
        for S, g in algebras.items():
            S = self._subset(S)
            if len(S) <= self.top + 1 and len(g):
                self.algebras[S] = g
        self.restrictions = {}
        for (S, T), phi in (restrictions or {}).items():
            S, T = self._subset(S), self._subset(T)
            if not set(S) < set(T) or len(T) != len(S) + 1:
                raise SchemaError(f"restriction {S} -> {T} is not a codimension-one inclusion")
            if len(T) > self.top + 1:
                continue
            src, dst = self.algebra(S), self.algebra(T)
            if not isinstance(phi, LinearMap):
                phi = LinearMap(src, dst, phi)
            self.restrictions[(S, T)] = phi

    def _subset(self, S):
        if isinstance(S, str):
            S = (S,)
        out = []
        for s in S:
            if isinstance(s, str):
                if s not in self.opens:
                    raise SchemaError(f"unknown open {s!r}")
                s = self.opens.index(s)
            out.append(int(s))
        if len(set(out)) != len(out):
            raise SchemaError(f"repeated open in {S}")
        return tuple(sorted(out))

    def subsets(self, size):
        return list(combinations(range(len(self.opens)), size))

    def algebra(self, S):
        return self.algebras.get(S, self._zero)

    def restriction(self, S, T):
        """r_{S ⊂ T} for |T| = |S| + 1 (zero map if undeclared)."""
        phi = self.restrictions.get((S, T))
        if phi is None:
            phi = LinearMap(self.algebra(S), self.algebra(T), {})
        return phi

    def label(self, S):
        return "".join(self.opens[i] for i in S) if all(len(o) == 1 for o in self.opens) else ".".join(
            self.opens[i] for i in S)

    def validate(self):
        """Non-morphism restrictions and failures of functoriality along chains S ⊂ T ⊂ V."""
        report = []
        for (S, T), phi in sorted(self.restrictions.items()):
            for p in morphism_violations(phi):
                report.append(f"restriction {self.label(S)} -> {self.label(T)}: {p}")
        for size in range(1, self.top):
            for V in self.subsets(size + 2):
                for a, b in combinations(V, 2):
                    S = tuple(x for x in V if x not in (a, b))
                    Ta = tuple(sorted(S + (a,)))
                    Tb = tuple(sorted(S + (b,)))
                    p1 = self.restriction(Ta, V).compose(self.restriction(S, Ta))
                    p2 = self.restriction(Tb, V).compose(self.restriction(S, Tb))
                    if p1.matrix != p2.matrix:
                        report.append(f"restrictions {self.label(S)} -> {self.label(V)} depend on the path")
        return report


def constant_presheaf(opens, g, empty=(), max_level=None, name=""):
    """L(S) = g with identity restrictions, except subsets containing an ``empty`` set are 0."""
    probe = CoverNerve(opens, {}, max_level=max_level)
    dead = [probe._subset(E) for E in empty]

    def alive(S):
        return not any(set(E) <= set(S) for E in dead)

    algebras, restrictions = {}, {}
    ident = {x: {x: 1} for x in g.names}
    for size in range(1, probe.top + 2):
        for S in probe.subsets(size):
            if alive(S):
                algebras[S] = g
    for S in list(algebras):
        for j in range(len(opens)):
            if j in S:
                continue
            T = tuple(sorted(S + (j,)))
            if T in algebras:
                restrictions[(S, T)] = ident
    return CoverNerve(opens, algebras, restrictions, max_level=max_level, name=name)


def simplicial_complex_presheaf(vertices, facets, g, name=""):
    """Constant presheaf on the nerve whose nonempty intersections are the faces of ``facets``."""
    faces = set()
    for F in facets:
        F = tuple(sorted(F))
        for r in range(1, len(F) + 1):
            faces.update(combinations(F, r))
    top = max(len(F) for F in facets) - 1
    algebras = {S: g for S in faces}
    ident = {x: {x: 1} for x in g.names}
    restrictions = {}
    for S in faces:
        for T in faces:
            if len(T) == len(S) + 1 and set(S) < set(T):
                restrictions[(S, T)] = ident
    return CoverNerve([str(v) for v in vertices], algebras, restrictions, max_level=top, name=name)


def torus_nerve(g, name="torus"):
    """7-vertex triangulation of the torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    facets = []
    for i in range(7):
        facets.append((i, (i + 1) % 7, (i + 3) % 7))
        facets.append((i, (i + 2) % 7, (i + 3) % 7))
    return simplicial_complex_presheaf(range(7), facets, g, name=name)


# -- the semicosimplicial object ---------------------------------------------------


def _product(C, level):
    """prod over (level+1)-subsets of L(S); basis names x@label."""
    basis, diff, brackets, blocks = [], {}, {}, {}
    for S in C.subsets(level + 1):
        g = C.algebra(S)
        if not len(g):
            continue
        lab = C.label(S)
        rename = {x: f"{x}@{lab}" for x in g.names}
        blocks[S] = rename
        basis.extend((rename[x], d) for x, d in g.basis)
        for x, image in g.d.items():
            diff[rename[x]] = {rename[z]: c for z, c in image.items()}
        for (x, y), image in g.table.items():
            if g.position[x] <= g.position[y]:
                brackets[(rename[x], rename[y])] = {rename[z]: c for z, c in image.items()}
    return DGLA(basis, diff, brackets, name=f"C^{level}"), blocks


def build_cech_scs(C, check=True):
    """Level n = prod_{i_0<...<i_n} L(U_{i_0...i_n}); partial_{k,n} deletes i_k and restricts."""
    if check:
        problems = C.validate()
        if problems:
            raise SchemaError("invalid presheaf: " + "; ".join(problems[:3]))
    levels, blocks = [], []
    for n in range(C.top + 1):
        g, b = _product(C, n)
        levels.append(g)
        blocks.append(b)
    cofaces = {}
    for n in range(1, C.top + 1):
        for k in range(n + 1):
            matrix = {}
            for S in C.subsets(n + 1):
                if S not in blocks[n]:
                    continue
                T = S[:k] + S[k + 1:]
                if T not in blocks[n - 1]:
                    continue
                r = C.restriction(T, S)
                for x, image in r.matrix.items():
                    src = blocks[n - 1][T][x]
                    row = matrix.setdefault(src, {})
                    for z, c in image.items():
                        row[blocks[n][S][z]] = c
            cofaces[(k, n)] = matrix
    G = SemicosimplicialDGLA(levels, cofaces, name=C.name)
    G.blocks = blocks
    G.nerve = C
    return G


def tot_complex(G):
    """(Tot, d_Tot) over Q as a :class:`CochainComplex` on keys (level, name, UNIT); cached on G."""
    cx = getattr(G, "_tot_complex", None)
    if cx is None:
        cx = CochainComplex(G.tot_basis(), lambda key: tot_differential(G, LinComb.unit(key)))
        G._tot_complex = cx
    return cx


def tangent_obstruction_spaces(G):
    """Representatives of bases of H^1 and H^2 of (Tot, d_Tot), as Tot elements."""
    cx = tot_complex(G)
    h1 = [cx.from_vector(v, 1) for v in cx.cohomology(1)]
    h2 = [cx.from_vector(v, 2) for v in cx.cohomology(2)]
    return h1, h2


# -- morphisms of presheaves ----------------------------------------------------------


class LieSheafMorphism:
    """Per-subset morphisms phi_S: L(S) -> L'(S) commuting with restrictions."""

    def __init__(self, source, target, maps):
        if source.opens != target.opens or source.top != target.top:
            raise SchemaError("morphism between presheaves on different covers")
        self.source = source
        self.target = target
        self.maps = {}
        for size in range(1, source.top + 2):
            for S in source.subsets(size):
                raw = maps.get(S, {}) if not callable(maps) else maps(S)
                if not isinstance(raw, LinearMap):
                    raw = LinearMap(source.algebra(S), target.algebra(S), raw)
                self.maps[S] = raw

    def validate(self):
        report = []
        C = self.source
        for S, phi in sorted(self.maps.items()):
            for p in morphism_violations(phi):
                report.append(f"on {C.label(S)}: {p}")
        for (S, T) in sorted(set(C.restrictions) | set(self.target.restrictions)):
            lhs = self.maps[T].compose(C.restriction(S, T))
            rhs = self.target.restriction(S, T).compose(self.maps[S])
            if lhs.matrix != rhs.matrix:
                report.append(f"does not commute with restriction {C.label(S)} -> {C.label(T)}")
        return report

    def on_scs(self, Gs, Gt):
        """The induced level-wise morphism of Čech objects."""
        maps = []
        for n in range(len(Gs.levels)):
            matrix = {}
            for S, rename in Gs.blocks[n].items():
                rt = Gt.blocks[n].get(S, {})
                for x, image in self.maps[S].matrix.items():
                    matrix[rename[x]] = {rt[z]: c for z, c in image.items()}
            maps.append(LinearMap(Gs.levels[n], Gt.levels[n], matrix))
        return ScsMorphism(Gs, Gt, maps)


def constant_morphism(source, target, phi):
    """The morphism induced by a single Lie map on every nonzero stalk."""
    def per_subset(S):
        g, h = source.algebra(S), target.algebra(S)
        if not len(g) or not len(h):
            return LinearMap(g, h, {})
        return LinearMap(g, h, phi.matrix if isinstance(phi, LinearMap) else phi)
    return LieSheafMorphism(source, target, per_subset)


def trace_map(gl, line):
    """Matrix trace gl_2 -> Q as a structure-constant map."""
    return LinearMap(gl, line, {"e11": {"c": 1}, "e22": {"c": 1}})


def h2_pushforward(phi, G_src, G_dst, classes):
    """H^2(phi) applied to a class given by coefficients on the source representatives."""
    _, reps_src = tangent_obstruction_spaces(G_src)
    cx_dst = tot_complex(G_dst)
    image = LinComb()
    for c, rep in zip(classes, reps_src):
        image = image + phi.apply_tot(rep).scale(c)
    vec = cx_dst.to_vector(image, 2)
    dec = cx_dst.decompose(vec, 2)
    return dec[1]


def element_on(G, level, S, coords):
    """Tot element supported on the stalk of subset S at the given level."""
    rename = G.blocks[level][S]
    return LinComb({(level, rename[x], UNIT): c for x, c in coords.items()})
