"""Maurer-Cartan theory over Artin rings: BCH, gauge action, cocycles, descent data,
the order-by-order solver with obstruction classes, and the map Phi.

Lie-algebra elements are LinCombs keyed by ``(name, coeff)``; Tot elements by
``(level, name, coeff)`` (see :mod:`cechmc.scs`).
"""

from fractions import Fraction
from math import comb, factorial

from .cech import tot_complex
from .coefficients import UNIT
from .glie import bracket as g_bracket, differential as g_differential
from .linear import Accumulator, LinComb
from .scs import from_level, level_part, tot_differential, tw_level


class DegreeError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


# -- BCH and gauge action ------------------------------------------------------------


def _compositions(total, parts):
    """Sequences of ``parts`` pairs (r, s) with r + s >= 1 and sum r + s = total."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for size in range(1, total - parts + 2):
        for r in range(size + 1):
            for rest in _compositions(total - size, parts - 1):
                yield ((r, size - r),) + rest


def dynkin_terms(max_length):
    """(coefficient, word) pairs of the Dynkin series up to word length max_length; letters 0=x, 1=y."""
    out = {}
    for length in range(1, max_length + 1):
        for parts in range(1, length + 1):
            sign = Fraction((-1) ** (parts - 1), parts)
            for pairs in _compositions(length, parts):
                denom = length
                word = ()
                for r, s in pairs:
                    denom *= factorial(r) * factorial(s)
                    word += (0,) * r + (1,) * s
                # right-nested brackets of words ending in a repeated letter vanish
                if len(word) > 1 and word[-1] == word[-2]:
                    continue
                out[word] = out.get(word, 0) + sign / denom
    return [(c, w) for w, c in sorted(out.items(), key=lambda kv: (len(kv[0]), kv[0])) if c]


def _nested(word, letters, br, cache):
    hit = cache.get(word)
    if hit is None:
        if len(word) == 1:
            hit = letters[word[0]]
        else:
            inner = _nested(word[1:], letters, br, cache)
            hit = br(letters[word[0]], inner) if inner else inner
        cache[word] = hit
    return hit


def bch(x, y, br, max_length):
    """log(e^x e^y) via the Dynkin series, words of length <= max_length."""
    acc = Accumulator()
    cache = {}
    letters = (x, y)
    for c, word in dynkin_terms(max_length):
        v = _nested(word, letters, br, cache)
        if v:
            acc.add_comb(v, c)
    return acc.result(type(x) if isinstance(x, LinComb) else LinComb)


def gauge_action(a, x, br, d, max_length):
    """e^a * x = sum_k ad_a^k x / k! - sum_k ad_a^k(da) / (k+1)!."""
    acc = Accumulator()
    cur = x
    for k in range(0, max_length + 1):
        if not cur:
            break
        acc.add_comb(cur, Fraction(1, factorial(k)))
        cur = br(a, cur)
    cur = d(a)
    for k in range(0, max_length + 1):
        if not cur:
            break
        acc.add_comb(cur, Fraction(-1, factorial(k + 1)))
        cur = br(a, cur)
    return acc.result()


class LieContext:
    """Lie operations on g (x) m_A, truncated at the longest nonzero bracket word."""

    def __init__(self, g, A):
        self.g = g
        self.A = A
        self.max_length = max(A.nilpotency_order - 1, 1)

    def br(self, x, y):
        return g_bracket(x, y, self.g, self.A)

    def d(self, x):
        return g_differential(x, self.g)

    def require_degree(self, x, degree):
        for name, m in x:
            if self.g.degree[name] != degree:
                raise DegreeError(f"{name} has degree {self.g.degree[name]}, expected {degree}")
            if m == UNIT:
                raise DegreeError("coefficients must lie in the maximal ideal")

    def bch(self, x, y):
        self.require_degree(x, 0)
        self.require_degree(y, 0)
        return bch(x, y, self.br, self.max_length)

    def gauge(self, a, x):
        self.require_degree(a, 0)
        self.require_degree(x, 1)
        return gauge_action(a, x, self.br, self.d, self.max_length)

    def mc_residual(self, x):
        return self.d(x) + self.br(x, x).scale(Fraction(1, 2))


def mc_residual_dgla(x, g, A):
    """dx + 1/2 [x, x]."""
    return LieContext(g, A).mc_residual(x)


def mc_residual_linfty(L, x):
    """sum_n q̂_n(x, ..., x) / n!, finite by nilpotency of the coefficients."""
    _, qs = L.powers(x)
    acc = Accumulator()
    for n in range(1, len(qs)):
        if qs[n]:
            acc.add_comb(qs[n], Fraction(1, factorial(n)))
    return acc.result()


def e_infinity(L, x):
    """E_infinity(x) = sum_n E_n(x, ..., x) / n!."""
    Es, _ = L.powers(x)
    acc = Accumulator()
    for n in range(1, len(Es)):
        if Es[n]:
            acc.add_comb(Es[n], Fraction(1, factorial(n)))
    return acc.result()


# -- nonabelian cocycles, bordisms, descent data --------------------------------------------


def _ctx(G, level, A):
    return LieContext(G.levels[level], A)


def cocycle_residual(G, m, A):
    """bch(d0 m, bch(-d1 m, d2 m)) in g_2 (x) m_A for m in g_1 (x) m_A."""
    if G.top < 2:
        return LinComb()
    ctx = _ctx(G, 2, A)
    d0, d1, d2 = (G.coface(k, 2, m) for k in range(3))
    return bch(d0, bch(-d1, d2, ctx.br, ctx.max_length), ctx.br, ctx.max_length)


def twist(G, m, a, A):
    """The cocycle bordant to m by a: bch(-d1 a, bch(m, d0 a))."""
    ctx = _ctx(G, 1, A)
    d0, d1 = G.coface(0, 1, a), G.coface(1, 1, a)
    return bch(-d1, bch(m, d0, ctx.br, ctx.max_length), ctx.br, ctx.max_length)


def bordism_check(G, a, m0, m1, A):
    """True iff e^{-d1 a} e^{m1} e^{d0 a} = e^{m0}."""
    return twist(G, m1, a, A) == m0


def descent_check(G, l, m, A):
    """Violated object conditions of a descent datum (l, m)."""
    report = []
    if l:
        ctx0 = _ctx(G, 0, A)
        if ctx0.mc_residual(l):
            report.append("l is not Maurer-Cartan in g_0")
    if G.top >= 1:
        ctx1 = _ctx(G, 1, A)
        lhs = ctx1.gauge(m, G.coface(0, 1, l)) if (m or l) else LinComb()
        if lhs != G.coface(1, 1, l):
            report.append("e^m * d0 l != d1 l")
        if cocycle_residual(G, m, A):
            report.append("triple-product condition fails")
    return report


def descent_morphism_check(G, a, source, target, A):
    """Violated conditions for a: (l1, m1) -> (l0, m0), i.e. l0 = e^{-a} * l1 and the bordism identity."""
    (l0, m0), (l1, m1) = target, source
    report = []
    ctx0 = _ctx(G, 0, A)
    if ctx0.gauge(-a, l1) != l0:
        report.append("l0 != e^{-a} * l1")
    ctx1 = _ctx(G, 1, A)
    lhs = bch(-m0, twist(G, m1, a, A), ctx1.br, ctx1.max_length)
    if lhs:
        report.append("e^{-m0} e^{-d1 a} e^{m1} e^{d0 a} != 1")
    return report


def gauge_descent_datum(G, a, A):
    """(e^{-a} * 0, bch(-d1 a, d0 a)): a valid datum, bordant to (0, 0) via a."""
    ctx0 = _ctx(G, 0, A)
    l = ctx0.gauge(-a, LinComb())
    return l, twist(G, LinComb(), a, A)


# -- order-by-order solving ----------------------------------------------------------------


class Obstruction:
    """First nonzero obstruction: the step where it occurs and its class coefficients per monomial."""

    def __init__(self, step, classes, partial, residual):
        self.step = step
        self.classes = classes
        self.partial = partial
        self.residual = residual

    def __bool__(self):
        return True

    def __repr__(self):
        return f"Obstruction(step={self.step}, classes={self.classes})"


class Solution:
    def __init__(self, x, steps):
        self.x = x
        self.steps = steps

    def __repr__(self):
        return f"Solution({self.x!r})"


def split_by_mono(x):
    """{coeff monomial: Tot element with UNIT coefficients}."""
    out = {}
    for (lv, name, m), c in x.items():
        out.setdefault(m, {})[(lv, name, UNIT)] = c
    return {m: LinComb._raw(v) for m, v in out.items()}


def with_mono(x, m):
    return LinComb._raw({(k[0], k[1], m): c for k, c in x.items()})


def solve_order_by_order(G, A, residual, seed, rng=None, complex_=None, degree=1):
    """Lift ``seed`` through m_A^k / m_A^{k+1} for a residual whose linear part is d_Tot.

    Returns a :class:`Solution`, or the first :class:`Obstruction` (a nonzero
    class in H^{degree+1} for some monomial of the current step).
    """
    pieces = A.graded_pieces()
    cx = complex_ or tot_complex(G)
    first = split_by_mono(seed)
    for m, part in first.items():
        if m == UNIT or A.monomial_degree(m) != 1:
            raise PreconditionError(f"seed coefficient {m!r} is not a first-order monomial")
        if tot_differential(G, part):
            raise PreconditionError(f"seed is not closed (coefficient {m!r})")
        if any(G.tot_degree(k) != degree for k in part):
            raise PreconditionError("seed has the wrong degree")
    x = seed
    top = A.nilpotency_order
    z_basis = cx.cocycles(degree) if rng is not None else None
    steps = []
    for k in range(2, top):
        R = split_by_mono(residual(x))
        low = [m for m in R if A.monomial_degree(m) < k]
        if low:
            raise ArithmeticError(f"residual has terms below step {k}: {low}")
        correction = LinComb()
        classes = {}
        for m in pieces.get(k, []):
            part = R.get(m)
            if not part:
                continue
            dec = cx.decompose(cx.to_vector(part, degree + 1), degree + 1)
            if dec is None:
                raise ArithmeticError("residual component is not a cocycle")
            y, c = dec
            if any(c):
                classes[m] = c
                continue
            correction = correction - with_mono(cx.from_vector(y, degree), m)
        if classes:
            return Obstruction(k, classes, x, residual(x))
        if rng is not None and z_basis:
            for m in pieces.get(k, []):
                coeffs = [rng.randint(-3, 3) for _ in z_basis]
                vec = [sum(c * v[i] for c, v in zip(coeffs, z_basis)) for i in range(cx.dim(degree))]
                correction = correction + with_mono(cx.from_vector(vec, degree), m)
        x = x + correction
        steps.append(k)
    if residual(x):
        raise ArithmeticError("solver finished with a nonzero residual")
    return Solution(x, steps)


def mc_solve_order_by_order(L, seed, rng=None):
    """Solve sum_n q̂_n(x^n)/n! = 0 starting from a closed first-order seed."""
    return solve_order_by_order(L.G, L.A, lambda x: mc_residual_linfty(L, x), seed, rng)


def cocycle_solve_order_by_order(G, A, seed, rng=None):
    """Solve the nonabelian cocycle condition, viewed in Tot degree 2."""
    def residual(x):
        return from_level(cocycle_residual(G, level_part(x, 1), A), 2)
    return solve_order_by_order(G, A, residual, seed, rng)


def random_first_order(G, A, rng, degree=1, span=3):
    """Random closed degree-1 Tot element with coefficients in the degree-one monomials."""
    cx = tot_complex(G)
    z = cx.cocycles(degree)
    out = LinComb()
    if not z:
        return out
    for m in A.graded_pieces().get(1, []):
        coeffs = [rng.randint(-span, span) for _ in z]
        vec = [sum(c * v[i] for c, v in zip(coeffs, z)) for i in range(cx.dim(degree))]
        out = out + with_mono(cx.from_vector(vec, degree), m)
    return out


def random_lie_element(g, A, rng, degree=0, span=3, denominators=(1, 2, 3)):
    """Random element of g^degree (x) m_A with small rational coefficients."""
    out = {}
    for name in g.names:
        if g.degree[name] != degree:
            continue
        for m in A.monomials:
            num = rng.randint(-span, span)
            if num:
                out[(name, m)] = Fraction(num, rng.choice(denominators))
    return LinComb(out)


# -- Phi ------------------------------------------------------------------------------------


def _poly_add(p, q, c=1):
    out = dict(p)
    for e, v in q.items():
        w = out.get(e, LinComb()) + v.scale(c)
        if w:
            out[e] = w
        else:
            out.pop(e, None)
    return out


def _poly_bracket(p, q, ctx):
    out = {}
    for e1, v1 in p.items():
        for e2, v2 in q.items():
            b = ctx.br(v1, v2)
            if b:
                out = _poly_add(out, {e1 + e2: b})
    return out


def _binomial_expand(c, e):
    """c * (1 - t)^e as {power: coefficient}."""
    return {j: c * comb(e, j) * (-1) ** j for j in range(e + 1)}


def phi_map(G, X, A):
    """Phi of an MC element of Tot_TW: solve x_1 = e^{p(t)} * 0 with p(0) = 0, return p(1).

    Uses t = t_0 on Delta^1, so that dt = -dt_1.
    """
    if G.top < 1:
        return LinComb()
    ctx = _ctx(G, 1, A)
    a = {}
    for (name, m), form in tw_level(X, 1).items():
        for (exps, dts), c in form.terms.items():
            if not dts:
                raise PreconditionError("level-1 component has a 0-form part")
            for j, cj in _binomial_expand(-c, exps[0]).items():
                if cj:
                    a = _poly_add(a, {j: LinComb.unit((name, m))}, cj)
    # -sum_k ad_p^k(p') / (k+1)! = a, solved by fixed-point iteration (terminates by nilpotency)
    dp = {e: -v for e, v in a.items()}
    for _ in range(ctx.max_length + 1):
        p = {e + 1: v.scale(Fraction(1, e + 1)) for e, v in dp.items()}
        acc = {e: -v for e, v in a.items()}
        cur = dp
        for k in range(1, ctx.max_length + 1):
            cur = _poly_bracket(p, cur, ctx)
            if not cur:
                break
            acc = _poly_add(acc, cur, Fraction(-1, factorial(k + 1)))
        if acc == dp:
            break
        dp = acc
    else:
        raise AssertionError("gauge path iteration did not stabilize")
    p = {e + 1: v.scale(Fraction(1, e + 1)) for e, v in dp.items()}
    total = LinComb()
    for v in p.values():
        total = total + v
    return total


def gauge_path_form(G, p, A):
    """x_1 = e^{p(t)} * 0 as a level-1 form: -sum_k ad_p^k(p')/(k+1)! dt, with t = t_0."""
    ctx = _ctx(G, 1, A)
    dp = {e - 1: v.scale(e) for e, v in p.items() if e}
    acc = {}
    cur = dp
    for k in range(0, ctx.max_length + 1):
        if not cur:
            break
        acc = _poly_add(acc, cur, Fraction(-1, factorial(k + 1)))
        cur = _poly_bracket(p, cur, ctx)
    out = Accumulator()
    # t = 1 - t_1 and dt = -dt_1
    for e, v in acc.items():
        for j, cj in _binomial_expand(Fraction(-1), e).items():
            for (name, m), c in v.items():
                out.add((1, name, m, (j,), (1,)), c * cj)
    return out.result()


# -- the comparison battery -------------------------------------------------------------


def main_theorem_check(L, rng, instances=100):
    """Cocycles vs MC elements of the transferred structure, and Phi(E_infinity(x)) = x."""
    G, A = L.G, L.A
    report = []
    g0 = G.levels[0]
    for i in range(instances):
        a = random_lie_element(g0, A, rng)
        twisted = twist(G, LinComb(), a, A)
        kinds = [("twist", twisted)]
        seed = random_first_order(G, A, rng)
        sol = cocycle_solve_order_by_order(G, A, seed, rng)
        if isinstance(sol, Obstruction):
            report.append(f"instance {i}: cocycle solver obstructed at step {sol.step}")
        else:
            kinds.append(("cocycle-solver", level_part(sol.x, 1)))
        for label, m in kinds:
            x = from_level(m, 1)
            if cocycle_residual(G, m, A):
                report.append(f"instance {i}: {label} element is not a cocycle")
            if mc_residual_linfty(L, x):
                report.append(f"instance {i}: {label} cocycle has nonzero MC residual")
        seed = random_first_order(G, A, rng)
        sol = mc_solve_order_by_order(L, seed, rng)
        if isinstance(sol, Obstruction):
            report.append(f"instance {i}: MC solver obstructed at step {sol.step}")
            continue
        x = sol.x
        if any(k[0] != 1 for k in x):
            report.append(f"instance {i}: MC solution has components outside g_1")
        if cocycle_residual(G, level_part(x, 1), A):
            report.append(f"instance {i}: MC solution has nonzero cocycle residual")
        for label, y in (("MC solution", x), ("twist", from_level(twisted, 1))):
            if phi_map(G, e_infinity(L, y), A) != level_part(y, 1):
                report.append(f"instance {i}: Phi(E_infinity(x)) != x for the {label}")
    return report


# -- discreteness of the positive truncation ---------------------------------------------------


def discreteness_check(L_plus, path_degree=3):
    """Polynomial 1-simplices x(t) + y(t) dt of the positive truncation solving MC are constant.

    Tot^0 of the truncation vanishes, so y = 0 and the dt-component of the MC
    equation is x'(t); its solutions are the constant paths.
    """
    import sympy
    G = L_plus.G
    report = []
    zero_deg = G.tot_basis().get(0, [])
    if zero_deg:
        report.append(f"truncation has {len(zero_deg)} elements of total degree 0")
        return report
    basis = G.tot_basis().get(1, [])
    t = sympy.Symbol("t")
    coeffs = [[sympy.Symbol(f"c_{j}_{b}") for b in range(len(basis))] for j in range(path_degree + 1)]
    path = [sum(coeffs[j][b] * t ** j for j in range(path_degree + 1)) for b in range(len(basis))]
    dt_part = [sympy.diff(p, t) for p in path]
    equations = []
    for p in dt_part:
        equations.extend(sympy.Poly(p, t).all_coeffs() if p != 0 else [])
    unknowns = [c for row in coeffs[1:] for c in row]
    sol = sympy.solve(equations, unknowns, dict=True) if equations else [{}]
    if not sol or any(sol[0].get(c, c) != 0 for c in unknowns):
        report.append("non-constant MC paths exist")
    return report
