from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbquad.polynomial import Polynomial

x = sympy.symbols("x")


def to_sympy(p: Polynomial):
    return sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(p.coeffs))


def test_arithmetic_and_division():
    f = Polynomial([36, -24, 1, 1])
    g = Polynomial([-2, 1])
    q, r = divmod(f, g)
    assert r.is_zero() and q * g == f
    assert f(2) == 0 and f(-6) == 0 and f(3) == 0


def test_real_roots_cubic():
    f = Polynomial([36, -24, 1, 1])
    assert [round(r, 9) for r in f.real_roots()] == [-6.0, 2.0, 3.0]


def test_gcd_and_squarefree():
    f = Polynomial([0, 0, 0, 1])
    assert not f.is_squarefree()
    assert Polynomial([-1, 0, 1]).is_squarefree()


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=2, max_size=7).filter(lambda c: c[-1] != 0))
def test_sturm_count_matches_sympy(coeffs):
    p = Polynomial(coeffs)
    want = len(sympy.Poly(to_sympy(p), x).real_roots(multiple=True))
    distinct = len(set(sympy.Poly(to_sympy(p), x).real_roots()))
    assert p.count_real_roots() == distinct
    assert len(p.isolate_real_roots()) == distinct
    assert want >= distinct


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=2, max_size=8).filter(lambda c: c[-1] != 0))
def test_discriminant_matches_sympy(coeffs):
    p = Polynomial(coeffs)
    assert p.discriminant() == sympy.discriminant(to_sympy(p), x)


def test_compose_and_strings():
    f = Polynomial.from_strings(["1", "0", "1/2"])
    assert f.to_strings() == ["1", "0", "1/2"]
    g = f.compose(Polynomial([1, 1]))
    assert g(Fraction(1, 3)) == f(Fraction(4, 3))
