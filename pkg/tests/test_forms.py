import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from cechmc import forms
from cechmc.forms import (PolyForm, dform, dt, dupont_h_a, dupont_homotopy, face_map,
                          integrate_monomial, integrate_simplex, multi_indices, t, wedge,
                          whitney_form)
from oracles import simplex_quadrature


def random_form(n, degree, rng, terms=4, max_exp=3):
    out = {}
    for _ in range(terms):
        exps = tuple(rng.randint(0, max_exp) for _ in range(n))
        dts = tuple(sorted(rng.sample(range(1, n + 1), degree)))
        out[(exps, dts)] = out.get((exps, dts), 0) + rng.randint(-4, 4)
    return PolyForm(n, out)


@st.composite
def forms_on(draw, n, degree=None):
    if degree is None:
        degree = draw(st.integers(0, n))
    seed = draw(st.integers(0, 10 ** 6))
    return random_form(n, degree, random.Random(seed))


def test_whitney_normalization():
    for i in range(5):
        assert integrate_simplex(whitney_form(tuple(range(i + 1)), i) * factorial(i)) == 1


def test_whitney_form_on_triangle_edge():
    expected = dt(2, 1) - wedge(t(2, 2), dt(2, 1)) + wedge(t(2, 1), dt(2, 2))
    assert whitney_form((0, 1), 2) == expected


def test_homotopy_at_vertex_zero():
    assert dupont_h_a(dt(1, 1), 0) == -t(1, 1)


def test_dirichlet_integrals_match_quadrature():
    rng = random.Random(11)
    for _ in range(20):
        n = rng.randint(1, 4)
        exps = tuple(rng.randint(0, 4) for _ in range(n))
        exact = integrate_monomial(exps, n)
        assert abs(float(exact) - simplex_quadrature(exps)) < 1e-9


def test_dirichlet_closed_form():
    # int t1^2 t2 over the triangle = 2! 1! / 5!
    assert integrate_monomial((2, 1), 2) == Fraction(1, 60)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_stokes(n):
    rng = random.Random(n)
    for _ in range(15):
        alpha = random_form(n, n - 1, rng)
        boundary = sum(((-1) ** k * integrate_simplex(face_map(alpha, k)) for k in range(n + 1)), Fraction(0))
        assert integrate_simplex(dform(alpha)) == boundary


@pytest.mark.parametrize("n", [1, 2, 3])
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_d_squared_and_leibniz(n, data):
    a = data.draw(forms_on(n))
    b = data.draw(forms_on(n))
    assert not dform(dform(a))
    p = min(a.degrees() or {0})
    a = a.part(p)
    sign = -1 if p % 2 else 1
    assert dform(wedge(a, b)) == wedge(dform(a), b) + wedge(a, dform(b)) * sign


@settings(max_examples=25, deadline=None)
@given(forms_on(3), forms_on(3))
def test_graded_commutativity(a, b):
    p, q = max(a.degrees() or {0}), max(b.degrees() or {0})
    a, b = a.part(p), b.part(q)
    assert wedge(a, b) == wedge(b, a) * (-1) ** (p * q)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_face_maps_are_cosimplicial_algebra_maps(n, data):
    a, b = data.draw(forms_on(n)), data.draw(forms_on(n))
    for k in range(n + 1):
        assert face_map(dform(a), k) == dform(face_map(a, k))
        assert face_map(wedge(a, b), k) == wedge(face_map(a, k), face_map(b, k))
    if n >= 2:
        k = data.draw(st.integers(1, n))
        j = data.draw(st.integers(0, k - 1))
        # delta^j delta^k = delta^{k-1} delta^j for j < k, read on forms
        assert face_map(face_map(a, k), j) == face_map(face_map(a, j), k - 1)


def whitney_projection(a):
    """sum over faces I of r! omega_I times the integral of a over the face Delta_I."""
    n = a.n
    out = PolyForm(n)
    for r in a.degrees():
        for index in multi_indices(r, n):
            face = a.part(r)
            for v in reversed(forms.complement(index, n)):
                face = face_map(face, v)
            c = integrate_simplex(face)
            if c:
                out = out + whitney_form(index, n) * (factorial(r) * c)
    return out


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dupont_homotopy_identity(n):
    rng = random.Random(100 + n)
    for _ in range(10):
        a = random_form(n, rng.randint(0, n), rng, max_exp=2)
        lhs = dform(dupont_homotopy(a)) + dupont_homotopy(dform(a))
        # projection minus identity, matching EI - Id = hd + dh level-wise
        assert lhs == whitney_projection(a) - a


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dupont_side_conditions(n):
    rng = random.Random(200 + n)
    for _ in range(8):
        a = random_form(n, rng.randint(1, n), rng, max_exp=2)
        assert not dupont_homotopy(dupont_homotopy(a))
    for r in range(n + 1):
        for index in multi_indices(r, n):
            assert not dupont_homotopy(whitney_form(index, n))


def test_coordinates_are_validated():
    with pytest.raises(ValueError):
        t(2, 3)
    with pytest.raises(ValueError):
        whitney_form((1, 0), 2)
    with pytest.raises(ValueError):
        face_map(PolyForm.const(1), 2)
    with pytest.raises(ValueError):
        t(1, 1) + t(2, 1)
