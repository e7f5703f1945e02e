"""Finite abelian groups given by a multiplication on hashable elements.

Nothing here knows about quadratic forms: the imaginary and narrow class
group code both hand a `GroupOps` to these routines.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import isqrt
from typing import Callable, Hashable, Iterable

from ..arith import factor
from ..errors import CapacityError

__all__ = [
    "AbelianGroupStructure",
    "GroupOps",
    "closure",
    "p_invariants",
    "combine_invariants",
    "bsgs_exponent",
    "order_from_multiple",
    "dlog_p_group",
    "sylow_from_generators",
]

CLOSURE_CAP = 2_000_000


@dataclass(frozen=True)
class AbelianGroupStructure:
    """Invariant factors d1 | d2 | ... | dr with every di > 1."""

    divisors: tuple[int, ...]

    def __post_init__(self):
        ds = tuple(int(x) for x in self.divisors)
        for i, x in enumerate(ds):
            if x < 2:
                raise ValueError(f"invariant factor {x} < 2")
            if i and x % ds[i - 1]:
                raise ValueError(f"invariant factors {ds} do not form a divisor chain")
        object.__setattr__(self, "divisors", ds)

    @property
    def order(self) -> int:
        h = 1
        for x in self.divisors:
            h *= x
        return h

    def m_rank(self, m: int) -> int:
        """Dimension of G/G^m when m is prime; in general the least, over
        prime powers p^e exactly dividing m, of #{i : p^e | d_i}."""
        if m < 2:
            raise ValueError("m must be at least 2")
        return min(sum(1 for x in self.divisors if x % (p**e) == 0) for p, e in factor(m).factors)

    def p_rank(self, p: int) -> int:
        return sum(1 for x in self.divisors if x % p == 0)

    def to_dict(self) -> dict:
        return {"order": self.order, "divisors": list(self.divisors)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def __str__(self):
        if not self.divisors:
            return "trivial"
        return " x ".join(f"Z/{x}" for x in self.divisors)


@dataclass
class GroupOps:
    mul: Callable
    identity: Hashable
    inverse: Callable

    def pow(self, x, n: int):
        if n < 0:
            x, n = self.inverse(x), -n
        result = self.identity
        while n:
            if n & 1:
                result = self.mul(result, x)
            n >>= 1
            if n:
                x = self.mul(x, x)
        return result


def closure(gens: Iterable, ops: GroupOps, cap: int = CLOSURE_CAP, start: set | None = None) -> set:
    """Subgroup generated by gens (and the subgroup `start`), coset by coset."""
    H = set(start) if start else {ops.identity}
    for g in gens:
        if g in H:
            continue
        cosets = [H]
        y = g
        while y not in H:
            cosets.append({ops.mul(h, y) for h in H})
            y = ops.mul(y, g)
            if len(cosets) * len(H) > cap:
                raise CapacityError(f"subgroup closure exceeds {cap} elements")
        H = set().union(*cosets)
    return H


def _ilog(n: int, p: int) -> int:
    e = 0
    while n > 1:
        if n % p:
            raise ValueError(f"{n} is not a power of {p}")
        n //= p
        e += 1
    return e


def p_invariants(elements: set, p: int, ops: GroupOps) -> list[int]:
    """Exponents e1 >= e2 >= ... of a finite abelian p-group given as a set."""
    sizes = [_ilog(len(elements), p)]
    cur = elements
    while len(cur) > 1:
        cur = {ops.pow(x, p) for x in cur}
        sizes.append(_ilog(len(cur), p))
    # c[j] = #{i : e_i > j}
    c = [sizes[j] - sizes[j + 1] for j in range(len(sizes) - 1)]
    exps: list[int] = []
    for j in range(len(c)):
        nxt = c[j + 1] if j + 1 < len(c) else 0
        exps.extend([j + 1] * (c[j] - nxt))
    return sorted(exps, reverse=True)


def combine_invariants(parts: dict[int, list[int]]) -> AbelianGroupStructure:
    """Assemble invariant factors from per-prime exponent lists."""
    rank = max((len(v) for v in parts.values()), default=0)
    ds = []
    for i in range(rank):
        x = 1
        for p, es in parts.items():
            if i < len(es):
                x *= p ** es[i]
        ds.append(x)
    return AbelianGroupStructure(tuple(sorted(ds)))


def bsgs_exponent(g, lo: int, hi: int, ops: GroupOps) -> int | None:
    """Least n in [lo, hi] with g^n = 1, or None."""
    lo = max(lo, 1)
    if hi < lo:
        return None
    m = isqrt(hi - lo + 1) + 1
    baby: dict = {}
    x = ops.identity
    for j in range(m):
        baby.setdefault(x, j)
        x = ops.mul(x, g)
    giant = ops.inverse(x)
    y = ops.inverse(ops.pow(g, lo))
    best = None
    for i in range(m + 1):
        j = baby.get(y)
        if j is not None:
            n = lo + i * m + j
            if n <= hi:
                best = n
            break
        y = ops.mul(y, giant)
    return best


def order_from_multiple(g, n: int, ops: GroupOps) -> int:
    for p, _ in factor(n).factors:
        while n % p == 0 and ops.pow(g, n // p) == ops.identity:
            n //= p
    return n


def _p_order_exponent(y, p: int, ops: GroupOps, bound: int) -> int:
    e = 0
    while y != ops.identity:
        y = ops.pow(y, p)
        e += 1
        if e > bound:
            raise AssertionError("element order exceeds the stated bound")
    return e


def dlog_p_group(y, g, p: int, e: int, ops: GroupOps) -> int | None:
    """x with g^x = y where g has order p^e, or None if y is not in <g>."""
    if e == 0:
        return 0 if y == ops.identity else None
    gamma = ops.pow(g, p ** (e - 1))
    m = isqrt(p) + 1
    baby = {}
    z = ops.identity
    for j in range(m):
        baby.setdefault(z, j)
        z = ops.mul(z, gamma)
    giant = ops.inverse(z)

    def small_log(h):
        for i in range(m + 1):
            j = baby.get(h)
            if j is not None:
                return i * m + j
            h = ops.mul(h, giant)
        return None

    x = 0
    pk = 1
    for k in range(e):
        h = ops.mul(ops.inverse(ops.pow(g, x)), y)
        h = ops.pow(h, p ** (e - 1 - k))
        dk = small_log(h)
        if dk is None or dk >= p:
            return None
        x += dk * pk
        pk *= p
    return x if ops.pow(g, x) == y else None


def sylow_from_generators(
    gens: Iterable,
    p: int,
    v: int,
    cofactor: int,
    ops: GroupOps,
    target: int | None = None,
    cyclic_forced: bool = False,
) -> list[int] | None:
    """Invariants of the p-part of <gens>.

    Every generator order divides p^v * cofactor with p coprime to cofactor.
    With `target` (the known p-part order) generators are consumed lazily
    until it is reached; None means the generators fall short.  Without a
    target all generators are used, and `cyclic_forced` says the caller knows
    the p-part is cyclic once its exponent is found.
    """
    if target is not None:
        H = {ops.identity}
        for g in gens:
            y = ops.pow(g, cofactor)
            if y in H:
                continue
            e = _p_order_exponent(y, p, ops, v)
            if p**e == target:
                return [e]
            H = closure([y], ops, start=H)
            if len(H) == target:
                return p_invariants(H, p, ops)
        return None if target > 1 else []
    ys = []
    e_max, y_max = 0, ops.identity
    for g in gens:
        y = ops.pow(g, cofactor)
        if y == ops.identity:
            continue
        e = _p_order_exponent(y, p, ops, v)
        ys.append(y)
        if e > e_max:
            e_max, y_max = e, y
    if not ys:
        return []
    if cyclic_forced or all(dlog_p_group(y, y_max, p, e_max, ops) is not None for y in ys):
        return [e_max]
    return p_invariants(closure(ys, ops), p, ops)
