"""Places of Q and a Moebius-map gadget that pins specializations close to
zero at a finite set of places.

Given places S and a tolerance eps, `build_gadget` returns psi, tau = psi^-1
and congruence data (M, A, B) such that every t = tau(a/b) with positive
a = A, b = B (mod M) satisfies |t|_v < eps for all v in S.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .arith import is_prime
from .errors import DomainError, PreconditionError
from .forms import MobiusMap

__all__ = [
    "PlaceSet",
    "MobiusGadget",
    "ord_p",
    "padic_abs",
    "abs_at",
    "height",
    "build_gadget",
    "pullback",
]

INF = "inf"


def ord_p(q, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    q = Fraction(q)
    if q == 0:
        raise DomainError("ord_p(0) is infinite")
    v = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def padic_abs(q, p: int) -> Fraction:
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    q = Fraction(q)
    if q == 0:
        return Fraction(0)
    return Fraction(p) ** -ord_p(q, p)


def abs_at(q, place) -> Fraction:
    if place == INF:
        return abs(Fraction(q))
    return padic_abs(q, place)


def height(q) -> int:
    q = Fraction(q)
    return max(abs(q.numerator), q.denominator)


@dataclass(frozen=True)
class PlaceSet:
    finite_primes: frozenset = frozenset()
    includes_archimedean: bool = False

    def __post_init__(self):
        primes = frozenset(int(p) for p in self.finite_primes)
        for p in primes:
            if not is_prime(p):
                raise PreconditionError(f"{p} is not prime")
        object.__setattr__(self, "finite_primes", primes)

    @classmethod
    def parse(cls, items: Iterable | str) -> "PlaceSet":
        if isinstance(items, str):
            items = [s for s in items.replace(" ", "").split(",") if s]
        arch = False
        primes = set()
        for it in items:
            if str(it).lower() in ("inf", "infinity", "oo"):
                arch = True
            else:
                primes.add(int(it))
        return cls(frozenset(primes), arch)

    def places(self) -> list:
        out: list = [INF] if self.includes_archimedean else []
        return out + sorted(self.finite_primes)

    def __iter__(self):
        return iter(self.places())

    def __len__(self):
        return len(self.finite_primes) + self.includes_archimedean


@dataclass(frozen=True)
class MobiusGadget:
    psi: MobiusMap
    tau: MobiusMap
    M: int
    A: int
    B: int
    S: PlaceSet
    epsilon: Fraction
    N: int | None = None
    exponents: dict = field(default_factory=dict)

    def admits(self, a: int, b: int) -> bool:
        return a > 0 and b > 0 and (a - self.A) % self.M == 0 and (b - self.B) % self.M == 0

    def guarantee_holds(self, t) -> bool:
        return all(abs_at(t, v) < self.epsilon for v in self.S)

    def summary(self) -> dict:
        return {
            "places": [str(v) for v in self.S.places()],
            "epsilon": str(self.epsilon),
            "psi": self.psi.matrix(),
            "tau": self.tau.matrix(),
            "N": self.N,
            "M": self.M,
            "A": self.A,
            "B": self.B,
            "exponents": {str(p): e for p, e in sorted(self.exponents.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True)


def _least_exponent(p: int, shift: int, eps: Fraction, floor: int) -> int:
    """Least e >= floor with p**-(e - shift) < eps."""
    e = floor
    while Fraction(1, p ** (e - shift)) >= eps:
        e += 1
    return e


def build_gadget(S: PlaceSet, epsilon) -> MobiusGadget:
    eps = Fraction(epsilon)
    if eps <= 0:
        raise PreconditionError("epsilon must be positive")
    if not isinstance(S, PlaceSet):
        S = PlaceSet.parse(S)
    primes = sorted(S.finite_primes)
    exps: dict[int, int] = {}
    if S.includes_archimedean:
        # psi(t) = (1 - N t)/(1 + N t); tau(u) = (1 - u)/(N (1 + u)).
        # a = b = 1 (mod p^e) gives ord_p(b - a) >= e and ord_p(a + b) = ord_p(2).
        N = int(1 / eps) + 1
        while any(N % p == 0 for p in primes):
            N += 1
        psi = MobiusMap(-N, 1, N, 1)
        tau = MobiusMap(-1, 1, N, N)
        for p in primes:
            two = 1 if p == 2 else 0
            exps[p] = _least_exponent(p, two, eps, 2 if p == 2 else 1)
        A = B = 1
    else:
        # identity: t = a/b with a = 0 (mod p^e), b a unit
        N = None
        psi = tau = MobiusMap.identity()
        for p in primes:
            exps[p] = _least_exponent(p, 0, eps, 1)
        A, B = (0, 1) if primes else (1, 1)
    M = 1
    for p, e in exps.items():
        M *= p**e
    return MobiusGadget(psi, tau, M, A % M if M > 1 else A, B % M if M > 1 else B, S, eps, N, exps)


def pullback(g: MobiusGadget, a: int, b: int) -> Fraction:
    """t = tau(a/b), checked against the local guarantee."""
    if not g.admits(a, b):
        raise PreconditionError(f"({a}, {b}) is not positive in the classes ({g.A}, {g.B}) mod {g.M}")
    try:
        t = g.tau.apply_ratio(a, b)
    except DomainError as exc:
        raise DomainError(str(exc)) from None
    if not g.guarantee_holds(t):
        raise AssertionError(f"gadget guarantee violated at t = {t}")
    return t
