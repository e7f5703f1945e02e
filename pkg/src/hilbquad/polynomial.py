"""Univariate polynomials over Q with exact arithmetic and Sturm sequences."""

from __future__ import annotations

from fractions import Fraction
from math import lcm, gcd
from typing import Iterable, Sequence

from .errors import DomainError, PreconditionError

__all__ = ["Polynomial", "parse_rational"]


def parse_rational(s) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(str(s).strip())


def _strip(coeffs: Iterable) -> tuple[Fraction, ...]:
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


class Polynomial:
    """Immutable polynomial, coefficients stored constant term first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _strip(coeffs)

    @classmethod
    def x(cls) -> "Polynomial":
        return cls((0, 1))

    @classmethod
    def from_strings(cls, items: Sequence[str]) -> "Polynomial":
        return cls(parse_rational(s) for s in items)

    def to_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs] or ["0"]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise PreconditionError("polynomial has non-integer coefficients")
        return [int(c) for c in self.coeffs]

    def __repr__(self):
        return f"Polynomial({self.to_strings()})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{'*' + mono if mono else ''}"
            terms.append(("- " if c < 0 else "+ ") + body)
        out = " ".join(terms)
        return out[2:] if out.startswith("+ ") else "-" + out[1:]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial((other,))
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __add__(self, other):
        other = _lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Polynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = Polynomial((1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        other = _lift(other)
        if other.is_zero():
            raise DomainError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        lead = other.leading
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] / lead
            if c:
                quot[i - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self * (1 / self.leading)

    def derivative(self) -> "Polynomial":
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def gcd(self, other: "Polynomial") -> "Polynomial":
        a, b = self, _lift(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def is_squarefree(self) -> bool:
        if self.is_zero():
            return False
        return self.gcd(self.derivative()).degree == 0

    def compose(self, other: "Polynomial") -> "Polynomial":
        acc = Polynomial()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def primitive_integer(self) -> tuple[Fraction, list[int]]:
        """Return (q, P) with self = q * P, P integral with coprime entries, q > 0."""
        if self.is_zero():
            raise PreconditionError("zero polynomial has no content")
        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        return Fraction(g, den), [v // g for v in ints]

    def resultant(self, other: "Polynomial") -> Fraction:
        """Res(self, other) by the Euclidean recurrence."""
        f, g = self, _lift(other)
        if f.is_zero() or g.is_zero():
            return Fraction(0)
        acc = Fraction(1)
        while True:
            m, n = f.degree, g.degree
            if n == 0:
                return acc * g.leading**m
            r = f % g
            if r.is_zero():
                return Fraction(0)
            k = r.degree
            if (m * n) % 2:
                acc = -acc
            acc *= g.leading ** (m - k)
            f, g = g, r

    def discriminant(self) -> Fraction:
        n = self.degree
        if n < 1:
            raise PreconditionError("discriminant of a constant")
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        return sign * self.resultant(self.derivative()) / self.leading

    # real roots ---------------------------------------------------------

    def sturm_sequence(self) -> list["Polynomial"]:
        seq = [self, self.derivative()]
        while not seq[-1].is_zero():
            r = seq[-2] % seq[-1]
            seq.append(-r)
        return seq[:-1]

    @staticmethod
    def _sign_changes(values) -> int:
        signs = [v > 0 for v in values if v != 0]
        return sum(1 for x, y in zip(signs, signs[1:]) if x != y)

    def count_real_roots(self, lo=None, hi=None, seq=None) -> int:
        """Distinct real roots in (lo, hi]; None means an infinite endpoint."""
        seq = seq if seq is not None else self.sturm_sequence()

        def changes(x, side):
            if x is None:
                vals = [p.leading * (side if p.degree % 2 else 1) for p in seq]
            else:
                vals = [p(x) for p in seq]
            return self._sign_changes(vals)

        return changes(lo, -1) - changes(hi, 1)

    def root_bound(self) -> Fraction:
        """Cauchy bound: every complex root has modulus below this."""
        lead = abs(self.leading)
        return 1 + max((abs(c) / lead for c in self.coeffs[:-1]), default=Fraction(0))

    def isolate_real_roots(self, width=Fraction(1, 2**20)) -> list[tuple[Fraction, Fraction]]:
        """Disjoint intervals (lo, hi], one per distinct real root, ordered."""
        if self.degree < 1:
            return []
        f = self if self.is_squarefree() else self // self.gcd(self.derivative())
        seq = f.sturm_sequence()
        bound = f.root_bound()
        out = []
        stack = [(-bound, bound)]
        width = Fraction(width)
        while stack:
            lo, hi = stack.pop()
            n = f.count_real_roots(lo, hi, seq)
            if n == 0:
                continue
            if n == 1 and hi - lo <= width:
                out.append((lo, hi))
                continue
            mid = (lo + hi) / 2
            stack.append((mid, hi))
            stack.append((lo, mid))
        return sorted(out)

    def real_roots(self, width=Fraction(1, 2**40)) -> list[float]:
        return [float((lo + hi) / 2) for lo, hi in self.isolate_real_roots(width)]


def _lift(obj) -> Polynomial:
    if isinstance(obj, Polynomial):
        return obj
    return Polynomial((obj,))
