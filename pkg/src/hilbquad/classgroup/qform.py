"""Binary quadratic forms (a, b, c) = a x^2 + b x y + c y^2.

Forms travel as plain tuples inside hot loops; `QForm` is the public
named-tuple view.  Composition follows the classical Dirichlet/Shanks
formulas and is valid for primitive forms with a > 0 of any nonsquare
discriminant; reduction here is the positive-definite one.
"""

from __future__ import annotations

from functools import lru_cache
from math import isqrt
from typing import Iterator, NamedTuple

import numpy as np

from ..arith import is_squarefree, primes_up_to
from ..errors import PreconditionError

__all__ = [
    "QForm",
    "is_fundamental",
    "fundamental_discriminant",
    "kronecker",
    "sqrt_mod_prime",
    "reduce_form",
    "compose",
    "identity_form",
    "inverse_form",
    "form_pow",
    "prime_form",
    "prime_forms",
    "reduced_forms",
    "class_number",
]


class QForm(NamedTuple):
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __str__(self):
        return f"({self.a}, {self.b}, {self.c})"


def is_fundamental(d: int) -> bool:
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def fundamental_discriminant(t: int) -> int:
    """Discriminant of Q(sqrt(t)) for squarefree t != 0, 1."""
    if t in (0, 1) or not is_squarefree(t):
        raise PreconditionError(f"{t} is not a squarefree integer other than 0, 1")
    return t if t % 4 == 1 else 4 * t


def kronecker(d: int, p: int) -> int:
    """Kronecker symbol (d/p) for a prime p."""
    if p == 2:
        if d % 2 == 0:
            return 0
        return 1 if d % 8 in (1, 7) else -1
    r = pow(d % p, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


def sqrt_mod_prime(n: int, p: int) -> int:
    """Some x with x^2 = n (mod p); n must be a square mod p."""
    n %= p
    if n == 0 or p == 2:
        return n
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def reduce_form(f) -> tuple[int, int, int]:
    """Reduced representative of a positive definite form."""
    a, b, c = f
    if not (-a < b <= a):
        r = (a - b) // (2 * a)
        b, c = b + 2 * r * a, a * r * r + b * r + c
    while a > c or (a == c and b < 0):
        s = (c + b) // (2 * c)
        a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
    return (a, b, c)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def compose_raw(f1, f2) -> tuple[int, int, int]:
    """Unreduced composite of two primitive forms with a1, a2 > 0."""
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1 = 0
        d = a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, v = _xgcd(s, d)
        y2 = -v
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return (a3, b3, c3)


def compose(f1, f2) -> tuple[int, int, int]:
    """Reduced product of two positive definite forms of equal discriminant."""
    return reduce_form(compose_raw(f1, f2))


def compose_checked(f1, f2) -> QForm:
    d1 = f1[1] * f1[1] - 4 * f1[0] * f1[2]
    d2 = f2[1] * f2[1] - 4 * f2[0] * f2[2]
    if d1 != d2:
        raise PreconditionError(f"discriminants differ: {d1} != {d2}")
    return QForm(*compose(f1, f2))


def identity_form(d: int) -> tuple[int, int, int]:
    b = d & 1
    return reduce_form((1, b, (b * b - d) // 4)) if d < 0 else (1, b, (b * b - d) // 4)


def inverse_form(f) -> tuple[int, int, int]:
    a, b, c = f
    return reduce_form((a, -b, c))


def form_pow(f, n: int, d: int | None = None) -> tuple[int, int, int]:
    if d is None:
        d = f[1] * f[1] - 4 * f[0] * f[2]
    if n < 0:
        f, n = inverse_form(f), -n
    result = identity_form(d)
    base = f
    while n:
        if n & 1:
            result = compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def prime_form(d: int, p: int) -> tuple[int, int, int] | None:
    """The form (p, b, c) with 0 <= b <= p, or None when p is inert."""
    if kronecker(d, p) == -1:
        return None
    if p == 2:
        if d % 2:
            b = 1
        else:
            b = 0 if d % 8 == 0 else 2
    else:
        b = sqrt_mod_prime(d, p)
        if (b - d) % 2:
            b = p - b
    return (p, b, (b * b - d) // (4 * p))


def prime_forms(d: int, count: int = 40, start: int = 2) -> Iterator[tuple[int, int, int]]:
    """Prime forms for the `count` smallest non-inert primes (reduced when d < 0)."""
    found = 0
    limit = 512
    last = start - 1
    while found < count:
        for p in primes_up_to(limit):
            if p <= last:
                continue
            last = p
            f = prime_form(d, p)
            if f is None:
                continue
            yield reduce_form(f) if d < 0 else f
            found += 1
            if found >= count:
                return
        limit *= 2


@lru_cache(maxsize=4)
def _grid(A: int):
    a = np.repeat(np.arange(1, A + 1, dtype=np.int64), 2 * np.arange(1, A + 1))
    starts = np.cumsum(np.r_[0, 2 * np.arange(1, A + 1)])[:-1]
    offs = np.arange(len(a), dtype=np.int64) - np.repeat(starts, 2 * np.arange(1, A + 1))
    b = offs - a + 1  # b runs over (-a, a]
    return a, b


_GRID_LIMIT = 700


def reduced_forms(d: int) -> set[QForm]:
    """All reduced primitive forms of fundamental discriminant d < 0."""
    if d >= 0 or not is_fundamental(d):
        raise PreconditionError(f"{d} is not a negative fundamental discriminant")
    A = isqrt(-d // 3)
    out: set[QForm] = set()
    if A <= _GRID_LIMIT:
        a, b = _grid(_GRID_LIMIT)
        stop = A * (A + 1)  # first index with a > A
        a, b = a[:stop], b[:stop]
        _collect(a, b, d, out)
    else:
        for av in range(1, A + 1):
            b = np.arange(-av + 1, av + 1, dtype=np.int64)
            _collect(np.full(b.shape, av, dtype=np.int64), b, d, out)
    return out


def _collect(a, b, d, out):
    keep = (b - d) % 2 == 0
    a, b = a[keep], b[keep]
    num = b * b - d
    four_a = 4 * a
    keep = num % four_a == 0
    a, b, num, four_a = a[keep], b[keep], num[keep], four_a[keep]
    c = num // four_a
    keep = (c >= a) & ~((c == a) & (b < 0))
    for av, bv, cv in zip(a[keep].tolist(), b[keep].tolist(), c[keep].tolist()):
        out.add(QForm(av, bv, cv))


def class_number(d: int) -> int:
    return len(reduced_forms(d))
