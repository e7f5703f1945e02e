"""Integer factorization and k-free decomposition.

Every other module funnels its integer arithmetic through here: squarefree
cores of form values, discriminants, group orders.  Inputs up to ~1e15 are
the supported range; larger inputs work but may be slow.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd, isqrt

from .errors import CapacityError, DomainError, PreconditionError

__all__ = [
    "Factorization",
    "KFreeDecomposition",
    "factor",
    "kfree_part",
    "is_prime",
    "is_squarefree",
    "squarefree_core",
    "omega",
    "divisors",
    "iroot",
    "valuation",
    "primes_up_to",
    "set_cache",
    "get_cache",
]

TRIAL_BOUND = 1000

# Deterministic Miller-Rabin for n < 3.3e24 with these bases.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3317044064679887385961981
_EXTRA_BASES = (43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


_SMALL_PRIMES = primes_up_to(TRIAL_BOUND)
_SMALL_SET = frozenset(_SMALL_PRIMES)


def is_prime(n: int) -> bool:
    """Miller-Rabin; a proof below 3.3e24, a strong probable-prime test above."""
    if n < 2:
        return False
    if n <= TRIAL_BOUND:
        return n in _SMALL_SET
    for p in _SMALL_PRIMES[:25]:
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES if n < _MR_LIMIT else _MR_BASES + _EXTRA_BASES
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        last = 0
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factor list {self.factors}")
            last = p

    def value(self) -> int:
        n = self.sign
        for p, e in self.factors:
            n *= p**e
        return n

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def check(self, n: int | None = None) -> None:
        """Raise ValueError unless the invariants hold (and the product is n)."""
        if n is not None and self.value() != n:
            raise ValueError(f"factorization does not multiply back to {n}")
        for p, _ in self.factors:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")

    def to_json(self):
        return {"sign": self.sign, "factors": [list(pe) for pe in self.factors]}

    @classmethod
    def from_json(cls, obj) -> "Factorization":
        return cls(int(obj["sign"]), tuple((int(p), int(e)) for p, e in obj["factors"]))


@dataclass(frozen=True)
class KFreeDecomposition:
    """n = t * z**k with t k-free and z > 0."""

    t: int
    z: int
    k: int

    def value(self) -> int:
        return self.t * self.z**self.k


_cache = None
# rho iterations allowed per factor() call (roughly ten seconds of work;
# enough to split off any prime factor below about 10**13)
RHO_BUDGET = 2_000_000
# only inputs this large are worth a cache lookup
CACHE_MIN = 10**12


def set_cache(cache) -> None:
    """Install a factorization cache (anything with get(n) and put(n, fac))."""
    global _cache
    _cache = cache


def get_cache():
    return _cache


def _brent(n: int, rng: random.Random, budget: list[int]) -> int:
    """Return a nontrivial factor of the odd composite n.

    budget[0] is the number of iterations still allowed for this factor()
    call; running out raises CapacityError.
    """
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 64
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            budget[0] -= 2 * r
            if budget[0] < 0:
                raise CapacityError(f"rho iteration budget exhausted on a {n.bit_length()}-bit cofactor")
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict[int, int], rng: random.Random) -> None:
    budget = [RHO_BUDGET]
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = isqrt(m)
        if r * r == m:
            stack.extend((r, r))
            continue
        f = _brent(m, rng, budget)
        stack.extend((f, m // f))


def factor(n: int) -> Factorization:
    """Factor a nonzero integer into a signed prime-power product.

    Trial division below TRIAL_BOUND, then Brent's rho seeded from n so the
    result never depends on global random state.

    >>> factor(-12)
    Factorization(sign=-1, factors=((2, 2), (3, 1)))
    """
    n = int(n)
    if n == 0:
        raise DomainError("cannot factor 0")
    use_cache = _cache is not None and abs(n) >= CACHE_MIN
    if use_cache:
        hit = _cache.get(n)
        if hit is not None:
            return hit
    sign = 1 if n > 0 else -1
    m = abs(n)
    out: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out[p] = e
    if m > 1:
        if m <= TRIAL_BOUND * TRIAL_BOUND:
            out[m] = out.get(m, 0) + 1
        else:
            _split(m, out, random.Random(m))
    fac = Factorization(sign, tuple(sorted(out.items())))
    if use_cache:
        _cache.put(n, fac)
    return fac


def kfree_part(n: int, k: int) -> KFreeDecomposition:
    """Write n = t * z**k with t k-free, z > 0 (so sign(t) = sign(n))."""
    if k < 2:
        raise PreconditionError("k must be at least 2")
    fac = factor(n)
    t, z = fac.sign, 1
    for p, e in fac.factors:
        q, r = divmod(e, k)
        t *= p**r
        z *= p**q
    return KFreeDecomposition(t, z, k)


def squarefree_core(n: int) -> int:
    return kfree_part(n, 2).t


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for _, e in factor(n).factors)


def omega(n: int) -> int:
    """Number of distinct prime divisors."""
    return len(factor(n).factors)


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factor(n).factors:
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise DomainError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def iroot(n: int, r: int) -> int:
    """Largest x >= 0 with x**r <= n."""
    if n < 0 or r < 1:
        raise PreconditionError("iroot needs n >= 0 and r >= 1")
    if n < 2 or r == 1:
        return n
    x = 1 << -(-n.bit_length() // r)
    while True:
        y = ((r - 1) * x + n // x ** (r - 1)) // r
        if y >= x:
            break
        x = y
    while x**r > n:
        x -= 1
    while (x + 1) ** r <= n:
        x += 1
    return x
