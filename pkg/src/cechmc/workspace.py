"""JSON workspace files: declarations of algebras, DGLAs, objects, morphisms and jobs.

All rationals are strings "p/q" (integers may be bare). Syntax errors carry
line and column; schema errors carry the JSON path of the offending entry.
"""

import json
from pathlib import Path

from .cech import (CoverNerve, LieSheafMorphism, build_cech_scs, constant_presheaf,
                   torus_nerve)
from .coefficients import ArtinAlgebra, SchemaError, monomial_quotient, truncated_polynomial
from .glie import BUILTINS, DGLA, LinearMap
from .linear import frac
from .scs import SemicosimplicialDGLA


class WorkspaceError(ValueError):
    def __init__(self, message, line=None, column=None, path=None):
        self.line, self.column, self.path = line, column, path
        where = ""
        if line is not None:
            where = f"line {line}, column {column}: "
        elif path:
            where = f"at {path}: "
        super().__init__(where + message)


def _rationals(d, path):
    try:
        return {str(k): frac(v) for k, v in d.items()}
    except (ValueError, TypeError, ZeroDivisionError, AttributeError) as exc:
        raise WorkspaceError(f"bad rational coefficient ({exc})", path=path) from None


def _matrix(d, path):
    if not isinstance(d, dict):
        raise WorkspaceError("expected an object mapping names to combinations", path=path)
    return {str(k): _rationals(v, f"{path}.{k}") for k, v in d.items()}


class Workspace:
    def __init__(self, data, source="<workspace>"):
        if not isinstance(data, dict):
            raise WorkspaceError("top level must be an object", path="$")
        self.source = source
        self.raw = data
        self.algebras = {}
        self.dglas = {}
        self.objects = {}
        self.covers = {}
        self.morphisms = {}
        self.jobs = []
        for name, decl in data.get("algebras", {}).items():
            self.algebras[name] = self._artin(name, decl, f"algebras.{name}")
        for name, decl in data.get("dglas", {}).items():
            self.dglas[name] = self._dgla(name, decl, f"dglas.{name}")
        for name, decl in data.get("objects", {}).items():
            self.objects[name] = self._object(name, decl, f"objects.{name}")
        for name, decl in data.get("morphisms", {}).items():
            self.morphisms[name] = self._morphism(name, decl, f"morphisms.{name}")
        for i, job in enumerate(data.get("jobs", [])):
            path = f"jobs[{i}]"
            if not isinstance(job, dict) or "command" not in job:
                raise WorkspaceError("job needs a 'command'", path=path)
            for ref, table in (("object", self.objects), ("algebra", self.algebras),
                               ("morphism", self.morphisms)):
                if ref in job and job[ref] not in table:
                    raise WorkspaceError(f"unknown {ref} {job[ref]!r}", path=path)
            self.jobs.append(job)

    @classmethod
    def load(cls, path):
        text = Path(path).read_text()
        return cls.parse(text, str(path))

    @classmethod
    def parse(cls, text, source="<workspace>"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise WorkspaceError(exc.msg, line=exc.lineno, column=exc.colno) from None
        try:
            return cls(data, source)
        except SchemaError as exc:
            raise WorkspaceError(str(exc)) from None

    # -- declarations ----------------------------------------------------------

    def _artin(self, name, decl, path):
        try:
            if "truncated" in decl:
                return truncated_polynomial(int(decl["truncated"]), decl.get("variable", "t"))
            if "quotient" in decl:
                return monomial_quotient({str(k): int(v) for k, v in decl["quotient"].items()})
            products = {}
            for i, entry in enumerate(decl.get("products", [])):
                a, b, value = entry
                products[(a, b)] = _rationals(value, f"{path}.products[{i}]")
            return ArtinAlgebra(decl["monomials"], products, name=name)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, WorkspaceError):
                raise
            raise WorkspaceError(f"bad Artin algebra ({exc})", path=path) from None

    def dgla(self, ref, path):
        if ref in self.dglas:
            return self.dglas[ref]
        if ref in BUILTINS:
            g = BUILTINS[ref]()
            self.dglas[ref] = g
            return g
        raise WorkspaceError(f"unknown DGLA {ref!r}", path=path)

    def _dgla(self, name, decl, path):
        if isinstance(decl, str) or "builtin" in decl:
            ref = decl if isinstance(decl, str) else decl["builtin"]
            if ref not in BUILTINS:
                raise WorkspaceError(f"unknown builtin {ref!r}", path=path)
            return BUILTINS[ref]()
        try:
            basis = [(str(n), int(d)) for n, d in decl["basis"]]
            diff = _matrix(decl.get("differential", {}), f"{path}.differential")
            brackets = {}
            for i, (x, y, value) in enumerate(decl.get("bracket", [])):
                brackets[(x, y)] = _rationals(value, f"{path}.bracket[{i}]")
            return DGLA(basis, diff, brackets, name=name)
        except WorkspaceError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise WorkspaceError(f"bad DGLA ({exc})", path=path) from None

    def _cover(self, decl, path):
        if "torus" in decl:
            return torus_nerve(self.dgla(decl["torus"], path))
        opens = decl.get("opens")
        if not opens:
            raise WorkspaceError("cover needs 'opens'", path=path)
        if "constant" in decl:
            return constant_presheaf(opens, self.dgla(decl["constant"], path),
                                     empty=[tuple(e) for e in decl.get("empty", [])])
        algebras = {}
        for i, (subset, ref) in enumerate(decl.get("stalks", [])):
            algebras[tuple(subset)] = self.dgla(ref, f"{path}.stalks[{i}]")
        probe = CoverNerve(opens, algebras)
        restrictions = {}
        for i, (S, T, matrix) in enumerate(decl.get("restrict", [])):
            restrictions[(tuple(S), tuple(T))] = _matrix(matrix, f"{path}.restrict[{i}]")
        del probe
        return CoverNerve(opens, algebras, restrictions)

    def _object(self, name, decl, path):
        try:
            if "cover" in decl:
                C = self._cover(decl["cover"], f"{path}.cover")
                C.name = name
                self.covers[name] = C
                G = build_cech_scs(C, check=False)
                for i, (k, level, rows) in enumerate(decl.get("override_cofaces", [])):
                    phi = G.cofaces[(int(k), int(level))]
                    matrix = dict(phi.matrix)
                    matrix.update(_matrix(rows, f"{path}.override_cofaces[{i}]"))
                    G.cofaces[(int(k), int(level))] = LinearMap(phi.source, phi.target, matrix)
                return G
            levels = [self.dgla(ref, f"{path}.levels[{i}]") for i, ref in enumerate(decl["levels"])]
            cofaces = {}
            for i, (k, level, rows) in enumerate(decl.get("cofaces", [])):
                cofaces[(int(k), int(level))] = _matrix(rows, f"{path}.cofaces[{i}]")
            return SemicosimplicialDGLA(levels, cofaces, name=name)
        except WorkspaceError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise WorkspaceError(f"bad object ({exc})", path=path) from None

    def _morphism(self, name, decl, path):
        for ref in ("source", "target"):
            if decl.get(ref) not in self.covers:
                raise WorkspaceError(f"{ref} must name a cover object", path=path)
        src, dst = self.covers[decl["source"]], self.covers[decl["target"]]
        try:
            if "constant" in decl:
                matrix = _matrix(decl["constant"], f"{path}.constant")

                def per_subset(S):
                    g, h = src.algebra(S), dst.algebra(S)
                    if not len(g) or not len(h):
                        return LinearMap(g, h, {})
                    return LinearMap(g, h, matrix)
                return LieSheafMorphism(src, dst, per_subset)
            maps = {}
            for i, (S, matrix) in enumerate(decl.get("stalks", [])):
                maps[src._subset(tuple(S))] = _matrix(matrix, f"{path}.stalks[{i}]")
            return LieSheafMorphism(src, dst, maps)
        except WorkspaceError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise WorkspaceError(f"bad morphism ({exc})", path=path) from None

    # -- lookups ------------------------------------------------------------------

    def jobs_for(self, command):
        return [j for j in self.jobs if j["command"] == command]

    def default_algebra(self):
        if self.algebras:
            return next(iter(self.algebras.values()))
        return truncated_polynomial(3)
