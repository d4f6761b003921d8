"""Command-line entry point: ``cechmc <command> --workspace FILE [options]``.

Every command prints a report and exits 0 iff the report has no violations
(2 for unreadable workspaces).
"""

import argparse
import random
import sys
from itertools import combinations_with_replacement

from .cech import h2_pushforward, tangent_obstruction_spaces, tot_complex
from .coefficients import UNIT
from .deform import (Obstruction, cocycle_residual, main_theorem_check,
                     mc_residual_linfty, mc_solve_order_by_order, random_first_order,
                     random_lie_element, split_by_mono, twist, with_mono)
from .glie import validate_dgla
from .linear import LinComb, fmt_rational, frac
from .scs import (compatibility_violations, from_level, is_compatible, level_part, map_E, map_h,
                  map_I, random_compatible, tot_differential, tw_differential, validate_scs)
from .transfer import TransferredLInfty, check_linfty_relations
from .workspace import Workspace, WorkspaceError

COMMANDS = ("validate", "side-conditions", "transfer-dump", "linfty-check", "mc-check",
            "cocycle-check", "solve-mc", "main-theorem", "obstruction-naturality")


class Report:
    def __init__(self, command, seed):
        self.command = command
        self.seed = seed
        self.records = []

    def violation(self, target, message):
        self.records.append(("violation", target, message))

    def info(self, target, message):
        self.records.append(("info", target, message))

    @property
    def violations(self):
        return [r for r in self.records if r[0] == "violation"]

    def render(self, fmt):
        lines = []
        if fmt == "machine":
            lines.append(f"command\t{self.command}\trng-seed\t{self.seed}")
            for kind, target, message in self.records:
                lines.append(f"{kind}\t{target}\t{message}")
            lines.append(f"violations\t{len(self.violations)}")
        else:
            lines.append(f"# {self.command} (rng-seed {self.seed})")
            for kind, target, message in self.records:
                tag = "VIOLATION" if kind == "violation" else "  "
                lines.append(f"{tag} [{target}] {message}")
            n = len(self.violations)
            lines.append("clean" if not n else f"{n} violation(s)")
        return "\n".join(lines) + "\n"


def render_element(x):
    if not x:
        return "0"
    parts = []
    for key in sorted(x, key=repr):
        c = fmt_rational(x[key])
        if len(key) == 3:
            lv, name, m = key
            body = f"{name}[{lv}]" + ("" if m == UNIT else f"*{m}")
        else:
            body = repr(key)
        parts.append(f"{c}*{body}")
    return " + ".join(parts)


def parse_element(entries):
    """[[level, name, monomial, "p/q"], ...] -> Tot element."""
    out = {}
    for level, name, mono, c in entries:
        key = (int(level), str(name), str(mono))
        out[key] = out.get(key, 0) + frac(c)
    return LinComb(out)


def _targets(ws, args, command):
    jobs = ws.jobs_for(command)
    if args.object:
        jobs = [j for j in jobs if j.get("object") == args.object]
        if not jobs and command in ("validate", "side-conditions", "transfer-dump", "linfty-check"):
            jobs = [{"command": command, "object": args.object}]
    elif not jobs and command in ("side-conditions", "transfer-dump", "linfty-check"):
        jobs = [{"command": command, "object": name} for name in ws.objects]
    return jobs


def _algebra(ws, job):
    return ws.algebras[job["algebra"]] if "algebra" in job else ws.default_algebra()


def _param(args, job, name, default):
    value = getattr(args, name.replace("-", "_"), None)
    if value is not None:
        return value
    return job.get(name.replace("-", "_"), default)


# -- commands ---------------------------------------------------------------------------


def cmd_validate(ws, args, report):
    for name, A in ws.algebras.items():
        for p in A.validate():
            report.violation(f"algebra {name}", p)
    for name, g in ws.dglas.items():
        for p in validate_dgla(g):
            report.violation(f"dgla {name}", p)
    for name, C in ws.covers.items():
        for p in C.validate():
            report.violation(f"cover {name}", p)
    for name, G in ws.objects.items():
        if args.object and name != args.object:
            continue
        problems = validate_scs(G)
        for p in problems:
            report.violation(name, p)
        if not problems:
            report.info(name, f"levels {[len(g) for g in G.levels]}: valid")
    for name, phi in ws.morphisms.items():
        for p in phi.validate():
            report.violation(f"morphism {name}", p)


def cmd_side_conditions(ws, args, report):
    for job in _targets(ws, args, "side-conditions"):
        name = job["object"]
        G = ws.objects[name]
        rng = random.Random(args.rng_seed)
        instances = _param(args, job, "instances", 50)
        for k in [k for v in G.tot_basis().values() for k in v]:
            x = LinComb.unit(k)
            E = map_E(G, x)
            if map_I(G, E) != x:
                report.violation(name, f"IE != Id on {k[1]}[{k[0]}]")
            if not is_compatible(G, E):
                report.violation(name, f"E({k[1]}[{k[0]}]) is not compatible")
            if tw_differential(G, E) != map_E(G, tot_differential(G, x)):
                report.violation(name, f"E is not a chain map on {k[1]}[{k[0]}]")
            if tot_differential(G, tot_differential(G, x)):
                report.violation(name, f"d_Tot^2 != 0 on {k[1]}[{k[0]}]")
            if map_h(G, E):
                report.info(name, f"h E != 0 on {k[1]}[{k[0]}]")
        hh = 0
        for i in range(instances):
            X = random_compatible(G, rng)
            dX = tw_differential(G, X)
            lhs = map_E(G, map_I(G, X)) - X
            if lhs != map_h(G, dX) + tw_differential(G, map_h(G, X)):
                report.violation(name, f"instance {i}: EI - Id != h d + d h")
            if map_I(G, dX) != tot_differential(G, map_I(G, X)):
                report.violation(name, f"instance {i}: I is not a chain map")
            if compatibility_violations(G, map_h(G, X)):
                report.violation(name, f"instance {i}: h(X) is not compatible")
            if map_h(G, map_h(G, X)):
                hh += 1
        report.info(name, f"{instances} random compatible elements checked; h h != 0 on {hh}")


def _linfty(ws, job, args, A=None):
    return TransferredLInfty(ws.objects[job["object"]], max_arity=max(_param(args, job, "max-arity", 4), 2), A=A)


def cmd_transfer_dump(ws, args, report):
    for job in _targets(ws, args, "transfer-dump"):
        L = _linfty(ws, job, args)
        arity = _param(args, job, "max-arity", 3)
        keys = sorted(((k[0], k[1]) for v in L.G.tot_basis().values() for k in v), key=L.sort_key)
        lo, hi = L.tot_range
        for n in range(2, arity + 1):
            count = 0
            for tup in combinations_with_replacement(keys, n):
                if not lo <= sum(L.G.tot_degree(k) for k in tup) - n + 2 <= hi:
                    continue
                value = L._q_basis(tup)
                if value:
                    count += 1
                    args_txt = ", ".join(f"{k[1]}[{k[0]}]" for k in tup)
                    report.info(job["object"], f"q{n}({args_txt}) = {render_element(value)}")
            report.info(job["object"], f"arity {n}: {count} nonzero structure constants")


def cmd_linfty_check(ws, args, report):
    for job in _targets(ws, args, "linfty-check"):
        L = _linfty(ws, job, args)
        arity = _param(args, job, "max-arity", 4)
        problems = check_linfty_relations(L, arity)
        for p in problems:
            report.violation(job["object"], p)
        report.info(job["object"], f"generalized Jacobi identities through arity {arity}: "
                    f"{len(problems)} failure(s)")


def _elements(job, rng, G, A, instances):
    if "elements" in job:
        return [parse_element(e) for e in job["elements"]]
    out = []
    for _ in range(instances):
        a = random_lie_element(G.levels[0], A, rng)
        out.append(from_level(twist(G, LinComb(), a, A), 1))
    return out


def cmd_mc_check(ws, args, report):
    for job in ws.jobs_for("mc-check"):
        if args.object and job["object"] != args.object:
            continue
        A = _algebra(ws, job)
        L = _linfty(ws, job, args, A)
        rng = random.Random(args.rng_seed)
        expect = job.get("expect", True)
        for i, x in enumerate(_elements(job, rng, L.G, A, _param(args, job, "instances", 10))):
            r = mc_residual_linfty(L, x)
            if bool(r) == bool(expect):
                report.violation(job["object"], f"element {i}: residual {render_element(r)}")
            else:
                report.info(job["object"], f"element {i}: residual {render_element(r)}")


def cmd_cocycle_check(ws, args, report):
    for job in ws.jobs_for("cocycle-check"):
        if args.object and job["object"] != args.object:
            continue
        A = _algebra(ws, job)
        G = ws.objects[job["object"]]
        rng = random.Random(args.rng_seed)
        expect = job.get("expect", True)
        for i, x in enumerate(_elements(job, rng, G, A, _param(args, job, "instances", 10))):
            r = from_level(cocycle_residual(G, level_part(x, 1), A), 2)
            if bool(r) == bool(expect):
                report.violation(job["object"], f"element {i}: residual {render_element(r)}")
            else:
                report.info(job["object"], f"element {i}: residual {render_element(r)}")


def _seed_from_class(G, classes):
    """{monomial: [coefficients on the H^1 representatives]} -> Tot element."""
    h1, _ = tangent_obstruction_spaces(G)
    seed = LinComb()
    for m, coeffs in classes.items():
        if len(coeffs) != len(h1):
            raise WorkspaceError(f"seed class for {m!r} needs {len(h1)} coefficients")
        for c, rep in zip(coeffs, h1):
            seed = seed + with_mono(rep, m).scale(frac(c))
    return seed


def parse_seed_class(text):
    out = {}
    for part in text.split(";"):
        if part.strip():
            m, coeffs = part.split(":")
            out[m.strip()] = [c.strip() for c in coeffs.split(",")]
    return out


def _seed(job, args, G, A, rng):
    if args.seed_class:
        return _seed_from_class(G, parse_seed_class(args.seed_class))
    if "seed_class" in job:
        return _seed_from_class(G, job["seed_class"])
    if "seed" in job:
        return parse_element(job["seed"])
    return random_first_order(G, A, rng)


def _describe(result, G):
    if isinstance(result, Obstruction):
        parts = [f"{m}: [{', '.join(fmt_rational(c) for c in cs)}]" for m, cs in sorted(result.classes.items())]
        return f"obstructed at step {result.step}; class on H^2 basis " + "; ".join(parts)
    return f"solution {render_element(result.x)}"


def cmd_solve_mc(ws, args, report):
    for job in ws.jobs_for("solve-mc"):
        if args.object and job["object"] != args.object:
            continue
        A = _algebra(ws, job)
        L = _linfty(ws, job, args, A)
        rng = random.Random(args.rng_seed)
        try:
            seed = _seed(job, args, L.G, A, rng)
            result = mc_solve_order_by_order(L, seed, rng if job.get("randomize") else None)
        except (ValueError, ArithmeticError) as exc:
            report.violation(job["object"], f"solver error: {exc}")
            continue
        report.info(job["object"], _describe(result, L.G))
        expect = job.get("expect")
        got = "obstructed" if isinstance(result, Obstruction) else "unobstructed"
        if expect and expect != got:
            report.violation(job["object"], f"expected {expect}, got {got}")
        if got == "unobstructed" and mc_residual_linfty(L, result.x):
            report.violation(job["object"], "returned solution has a nonzero residual")


def cmd_main_theorem(ws, args, report):
    for job in ws.jobs_for("main-theorem"):
        if args.object and job["object"] != args.object:
            continue
        name = job["object"]
        G = ws.objects[name]
        A = _algebra(ws, job)
        instances = _param(args, job, "instances", 100)
        for p in validate_scs(G):
            report.violation(name, f"invalid object: {p}")
        L = TransferredLInfty(G, A=A)
        rng = random.Random(args.rng_seed)
        try:
            problems = main_theorem_check(L, rng, instances)
        except (ValueError, ArithmeticError) as exc:
            problems = [f"battery aborted: {exc}"]
        for p in problems:
            report.violation(name, p)
        report.info(name, f"{instances} instances over {A.name}: {len(problems)} violation(s)")


def cmd_obstruction_naturality(ws, args, report):
    for job in ws.jobs_for("obstruction-naturality"):
        phi_s = ws.morphisms[job["morphism"]]
        src = ws.objects[job["source"]] if "source" in job else None
        names = {id(C): n for n, C in ws.covers.items()}
        Gs = src or ws.objects[names[id(phi_s.source)]]
        Gt = ws.objects[job["target"]] if "target" in job else ws.objects[names[id(phi_s.target)]]
        label = job["morphism"]
        A = _algebra(ws, job)
        phi = phi_s.on_scs(Gs, Gt)
        Ls, Lt = TransferredLInfty(Gs, A=A), TransferredLInfty(Gt, A=A)
        rng = random.Random(args.rng_seed)
        report_obstruction_naturality(phi, Ls, Lt, _seed(job, args, Gs, A, rng), report, label)


def report_obstruction_naturality(phi, Ls, Lt, seed, report, label):
    """Compare H^2(phi)(obstruction) with the obstruction of the pushed-forward problem."""
    for p in phi.violations():
        report.violation(label, f"not a morphism: {p}")
        return
    result = mc_solve_order_by_order(Ls, seed)
    report.info(label, "source: " + _describe(result, Ls.G))
    pushed_seed = phi.apply_tot(seed)
    target = mc_solve_order_by_order(Lt, pushed_seed)
    report.info(label, "target: " + _describe(target, Lt.G))
    abelian = all(g.is_abelian for g in Lt.G.levels)
    if abelian and isinstance(target, Obstruction):
        report.violation(label, "abelian target problem is obstructed")
    if not isinstance(result, Obstruction):
        if mc_residual_linfty(Lt, phi.apply_tot(result.x)):
            report.violation(label, "pushed-forward solution is not Maurer-Cartan")
        return
    k = result.step
    pushed = phi.apply_tot(result.partial)
    residual_t = mc_residual_linfty(Lt, pushed)
    if residual_t != phi.apply_tot(result.residual):
        report.violation(label, "residual does not commute with the morphism")
    cx = tot_complex(Lt.G)
    parts = split_by_mono(residual_t)
    for m, classes in sorted(result.classes.items()):
        part = parts.get(m, LinComb())
        dec = cx.decompose(cx.to_vector(part, 2), 2)
        if dec is None:
            report.violation(label, f"pushed residual at {m} is not closed")
            continue
        expected = h2_pushforward(phi, Ls.G, Lt.G, classes)
        if list(dec[1]) != list(expected):
            report.violation(label, f"H^2(phi) of the obstruction at {m} differs from the pushed obstruction")
        in_kernel = not any(expected)
        report.info(label, f"step {k}, {m}: H^2(phi)(class) = [{', '.join(fmt_rational(c) for c in expected)}]"
                    + (" (in the kernel)" if in_kernel else ""))


HANDLERS = {
    "validate": cmd_validate,
    "side-conditions": cmd_side_conditions,
    "transfer-dump": cmd_transfer_dump,
    "linfty-check": cmd_linfty_check,
    "mc-check": cmd_mc_check,
    "cocycle-check": cmd_cocycle_check,
    "solve-mc": cmd_solve_mc,
    "main-theorem": cmd_main_theorem,
    "obstruction-naturality": cmd_obstruction_naturality,
}


def build_parser():
    p = argparse.ArgumentParser(prog="cechmc", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--workspace", required=True, help="JSON workspace file")
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--instances", type=int)
    p.add_argument("--max-arity", type=int)
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("--object", help="restrict to jobs on this object")
    p.add_argument("--seed-class", help="solve-mc seed as 'mono:c1,c2;mono2:...' on the H^1 basis")
    return p


def run(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        ws = Workspace.load(args.workspace)
    except (OSError, WorkspaceError) as exc:
        print(f"error: {args.workspace}: {exc}", file=sys.stderr)
        return 2
    report = Report(args.command, args.rng_seed)
    try:
        HANDLERS[args.command](ws, args, report)
    except WorkspaceError as exc:
        print(f"error: {args.workspace}: {exc}", file=sys.stderr)
        return 2
    out.write(report.render(args.format))
    return 1 if report.violations else 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
