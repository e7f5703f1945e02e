from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbquad.errors import DomainError, PreconditionError
from hilbquad.forms import BinaryForm, MobiusMap, evaluate_form, homogenize_split, odd_model
from hilbquad.polynomial import Polynomial


def test_homogenize_even_degree():
    F, R = homogenize_split(Polynomial([-2, 0, 1]), MobiusMap.identity())
    assert F.coeffs == (-2, 0, 1)
    assert (R.lin_x, R.lin_y, R.power, R.scale) == (0, 1, 1, 1)


def test_homogenize_odd_degree_gets_extra_factor():
    F, R = homogenize_split(Polynomial([1, 0, 0, 1]), MobiusMap.identity())
    assert F.coeffs == (1, 0, 0, 1, 0)  # X^3 Y + Y^4
    assert R.power == 2


def test_homogenize_with_moebius_map():
    F, R = homogenize_split(Polynomial([1, 0, 0, 1]), MobiusMap(-1, 1, 1, 1))
    assert F.coeffs == (2, 2, 6, 6, 0)
    assert (R.lin_x, R.lin_y, R.power) == (1, 1, 2)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(-9, 9), min_size=2, max_size=6).filter(lambda c: c[-1] != 0),
    st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)).filter(
        lambda m: m[0] * m[3] - m[1] * m[2] != 0
    ),
)
def test_homogenize_identity_holds(coeffs, mat):
    f = Polynomial(coeffs)
    if not f.is_squarefree():
        return
    tau = MobiusMap(*mat)
    F, R = homogenize_split(f, tau, samples=8)
    assert F.degree % 2 == 0 and F.is_squarefree()
    for X, Y in [(3, 7), (-2, 5), (11, -4)]:
        if tau.c * X + tau.d * Y == 0:
            continue
        assert f(tau(Fraction(X, Y))) == F(X, Y) * R(X, Y) ** 2


def test_homogenize_rejects_non_squarefree():
    with pytest.raises(PreconditionError):
        homogenize_split(Polynomial([0, 0, 1]), MobiusMap.identity())


@pytest.mark.parametrize(
    "f, h, lead",
    [
        ([4, 0, -5, 0, 1], [36, -24, 1, 1], -6),
        ([4, 0, 0, -5, 0, 0, 1], [6561, -4374, 1215, -135, 0, 1], -9),
        ([-1, 0, 1], [1, 1], 2),
    ],
)
def test_odd_model_examples(f, h, lead):
    f = Polynomial(f)
    got, cert = odd_model(f, 1)
    assert got == Polynomial(h)
    assert cert.lead == lead
    assert cert.verify(f, got)


def test_odd_model_roots_are_images_of_other_roots():
    f = Polynomial([4, 0, 0, -5, 0, 0, 1])
    h, cert = odd_model(f, 1)
    fr = np.roots([float(c) for c in reversed(f.coeffs)])
    want = sorted((cert.lead / (s - 1) for s in fr if abs(s - 1) > 1e-9), key=lambda z: (z.real, z.imag))
    got = sorted(np.roots([float(c) for c in reversed(h.coeffs)]), key=lambda z: (z.real, z.imag))
    assert np.allclose(want, got, atol=1e-9 * max(1, max(abs(np.array(want)))))


def test_odd_model_requires_a_root():
    with pytest.raises(PreconditionError):
        odd_model(Polynomial([4, 0, -5, 0, 1]), 3)


def test_evaluate_form_orders_agree():
    F = BinaryForm((3, -1, 4, 1, -5))
    for a, b in [(2, 3), (-7, 5), (0, 1), (10**6, -3)]:
        assert evaluate_form(F, a, b, "x") == evaluate_form(F, a, b, "y")


def test_moebius_inverse_and_poles():
    m = MobiusMap(2, 1, 1, 1)
    assert m.compose(m.inverse()).is_identity()
    assert m.inverse()(m(Fraction(5, 7))) == Fraction(5, 7)
    with pytest.raises(DomainError):
        m(-1)
    with pytest.raises(PreconditionError):
        MobiusMap(1, 2, 2, 4)


def test_form_str():
    assert str(BinaryForm((1, 0, 0, 1, 0))) == "X^3*Y + Y^4"
