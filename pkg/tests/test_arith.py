import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbquad import arith
from hilbquad.arith import (
    Factorization,
    divisors,
    factor,
    iroot,
    is_prime,
    is_squarefree,
    kfree_part,
    omega,
    squarefree_core,
    valuation,
)
from hilbquad.errors import CapacityError, DomainError, PreconditionError


@pytest.mark.parametrize(
    "n, sign, factors",
    [
        (1, 1, ()),
        (-12, -1, ((2, 2), (3, 1))),
        (11398625, 1, ((5, 3), (7, 2), (1861, 1))),
        (2**61 - 1, 1, ((2**61 - 1, 1),)),
        (-140910, -1, ((2, 1), (3, 1), (5, 1), (7, 1), (11, 1), (61, 1))),
    ],
)
def test_factor_known_values(n, sign, factors):
    fac = factor(n)
    assert fac == Factorization(sign, factors)
    assert fac.value() == n


def test_factor_zero_is_domain_error():
    with pytest.raises(DomainError):
        factor(0)


def test_factor_semiprimes_with_large_factors():
    n = 7 * (10**11 + 3) * (10**11 + 19)
    assert factor(n).factors == ((7, 1), (10**11 + 3, 1), (10**11 + 19, 1))
    p = 1000003
    assert factor(p**4 * 999983**2).factors == ((999983, 2), (p, 4))


def test_factor_matches_sympy_on_random_inputs():
    rng = random.Random(12345)
    for _ in range(300):
        n = rng.randrange(2, 10**16) * rng.choice([1, -1])
        want = sorted(sympy.factorint(abs(n)).items())
        assert list(factor(n).factors) == want


def test_factor_is_deterministic():
    n = (10**9 + 7) * (10**9 + 9) * (10**6 + 3)
    assert factor(n) == factor(n)


def test_rho_budget_raises_capacity_error(monkeypatch):
    monkeypatch.setattr(arith, "RHO_BUDGET", 1000)
    with pytest.raises(CapacityError):
        factor((10**18 + 3) * (10**18 + 9))


@pytest.mark.parametrize(
    "n, k, t, z",
    [(360, 3, 45, 2), (-50, 2, -2, 5), (12, 2, 3, 2), (1, 2, 1, 1), (-1, 2, -1, 1), (11398625, 2, 9305, 35)],
)
def test_kfree_part_examples(n, k, t, z):
    d = kfree_part(n, k)
    assert (d.t, d.z, d.k) == (t, z, k)


def test_kfree_part_rejects_small_k():
    with pytest.raises(PreconditionError):
        kfree_part(10, 1)


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=-(10**15), max_value=10**15).filter(bool), st.integers(min_value=2, max_value=5))
def test_kfree_recombines_and_is_kfree(n, k):
    d = kfree_part(n, k)
    assert d.t * d.z**k == n
    assert d.z > 0
    assert all(e < k for _, e in factor(d.t).factors)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=1, max_value=10**12))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


def test_is_prime_strong_pseudoprimes():
    # strong pseudoprimes to several small bases
    for n in (2047, 1373653, 25326001, 3215031751, 2152302898747, 3474749660383, 341550071728321):
        assert not is_prime(n)
    assert is_prime(2**89 - 1)


def test_small_helpers():
    assert squarefree_core(-72) == -2
    assert is_squarefree(30) and not is_squarefree(12) and not is_squarefree(0)
    assert omega(-140910) == 6
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert valuation(48, 2) == 4
    assert iroot(10**6, 4) == 31 and iroot(16, 4) == 2 and iroot(15, 4) == 1
    assert iroot(10**40, 3) == 21544346900318


def test_factorization_check_rejects_bad_payloads():
    with pytest.raises(ValueError):
        Factorization(1, ((4, 1),)).check(4)
    with pytest.raises(ValueError):
        Factorization(1, ((3, 1),)).check(5)
