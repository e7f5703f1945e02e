"""Narrow class groups of real quadratic fields via cycles of reduced
indefinite forms.

A form (a, b, c) of discriminant D > 0 is reduced when 0 < b < sqrt(D) and
sqrt(D) - b < 2|a| < sqrt(D) + b.  The reduction operator rho permutes the
reduced forms in cycles, one cycle per proper equivalence class, so the
narrow class number is the number of cycles.
"""

from __future__ import annotations

from math import isqrt

from ..arith import divisors, factor, omega
from ..errors import CapacityError, PreconditionError
from .qform import compose_raw, is_fundamental, prime_forms
from .structure import (
    AbelianGroupStructure,
    GroupOps,
    closure,
    combine_invariants,
    p_invariants,
    sylow_from_generators,
)

__all__ = [
    "NARROW_MAX_DISC",
    "is_reduced_indefinite",
    "rho",
    "reduce_indefinite",
    "cycle",
    "reduced_indefinite_forms",
    "narrow_group_structure",
    "narrow_structure_by_closure",
]

NARROW_MAX_DISC = 10**8


def _sqrt_floor(D: int) -> int:
    return isqrt(D)


def is_reduced_indefinite(f, D: int | None = None) -> bool:
    a, b, c = f
    if D is None:
        D = b * b - 4 * a * c
    s = _sqrt_floor(D)
    # exact comparisons with sqrt(D) irrational (D is not a square)
    if not (0 < b <= s):
        return False
    two_a = 2 * abs(a)
    return two_a + b > s and two_a - b <= s


def rho(f, D: int | None = None) -> tuple[int, int, int]:
    """(a, b, c) -> (c, b', a') with b' = -b (mod 2c) chosen in the
    reduction range."""
    a, b, c = f
    if D is None:
        D = b * b - 4 * a * c
    s = _sqrt_floor(D)
    ac = abs(c)
    two_c = 2 * ac
    if ac > s:
        # -|c| < b' <= |c|
        b2 = (-b) % two_c
        if b2 > ac:
            b2 -= two_c
    else:
        # sqrt(D) - 2|c| < b' < sqrt(D)
        b2 = (-b) % two_c
        b2 += ((s - b2) // two_c) * two_c
    return (c, b2, (b2 * b2 - D) // (4 * c))


def reduce_indefinite(f) -> tuple[int, int, int]:
    a, b, c = f
    D = b * b - 4 * a * c
    for _ in range(10_000):
        if is_reduced_indefinite(f, D):
            return tuple(f)
        f = rho(f, D)
    raise AssertionError(f"reduction of {f} did not terminate")


def cycle(f) -> list[tuple[int, int, int]]:
    f = reduce_indefinite(f)
    D = f[1] * f[1] - 4 * f[0] * f[2]
    out = [f]
    g = rho(f, D)
    while g != f:
        out.append(g)
        g = rho(g, D)
        if len(out) > 4 * D:
            raise AssertionError("rho cycle did not close")
    return out


def reduced_indefinite_forms(D: int) -> list[tuple[int, int, int]]:
    s = _sqrt_floor(D)
    out = []
    for b in range(2 - D % 2, s + 1, 2):
        N = (D - b * b) // 4
        for a in divisors(N):
            if 2 * a + b > s and 2 * a - b <= s:
                out.append((a, b, -N // a))
                out.append((-a, b, N // a))
    return sorted(out)


def _canonical(cyc) -> tuple[int, int, int]:
    return min(f for f in cyc if f[0] > 0)


def _validate(D: int, max_disc: int) -> None:
    if D <= 0 or not is_fundamental(D):
        raise PreconditionError(f"{D} is not a positive fundamental discriminant")
    if D > max_disc:
        raise CapacityError(f"D = {D} exceeds the supported bound {max_disc}")


class _CycleTable:
    def __init__(self, D: int):
        self.D = D
        self.rep: dict = {}
        self.reps: list = []
        for f in reduced_indefinite_forms(D):
            if f in self.rep:
                continue
            cyc = cycle(f)
            r = _canonical(cyc)
            self.reps.append(r)
            for g in cyc:
                self.rep[g] = r

    def canon(self, f):
        return self.rep[reduce_indefinite(f)]

    def ops(self) -> GroupOps:
        D = self.D
        ident = self.canon((1, D % 2, (D % 2 - D) // 4))

        def mul(x, y):
            return self.canon(compose_raw(x, y))

        def inv(x):
            a, b, c = x
            return self.canon((a, -b, c)) if a > 0 else self.canon((-a, b, -c))

        return GroupOps(mul, ident, inv)


def narrow_group_structure(D: int, max_disc: int = NARROW_MAX_DISC) -> AbelianGroupStructure:
    """Narrow class group of Q(sqrt(D)) for a fundamental D > 0."""
    _validate(D, max_disc)
    table = _CycleTable(D)
    h = len(table.reps)
    ops = table.ops()
    gens = [ops.mul(f, ops.identity) for f in prime_forms(D, 40)]
    parts = {}
    for p, v in factor(h).factors if h > 1 else ():
        pool = gens + table.reps
        inv = sylow_from_generators(pool, p, v, h // p**v, ops, target=p**v)
        if inv is None:
            raise AssertionError("cycle representatives failed to generate the group")
        parts[p] = inv
    res = combine_invariants(parts)
    if res.m_rank(2) != omega(D) - 1:
        raise AssertionError(f"narrow 2-rank of {D} contradicts genus theory")
    return res


def narrow_structure_by_closure(D: int, max_disc: int = NARROW_MAX_DISC) -> AbelianGroupStructure:
    """Independent route: close up the prime forms, identifying classes by
    walking their rho cycles, then read invariants off the whole group."""
    _validate(D, max_disc)

    def canon(f):
        return _canonical(cycle(f))

    ident = canon((1, D % 2, (D % 2 - D) // 4))

    def mul(x, y):
        return canon(compose_raw(x, y))

    def inv(x):
        a, b, c = x
        return canon((a, -b, c))

    ops = GroupOps(mul, ident, inv)
    G = closure([canon(f) for f in prime_forms(D, 40)], ops)
    h = len(G)
    parts = {}
    for p, v in factor(h).factors if h > 1 else ():
        cof = h // p**v
        parts[p] = p_invariants({ops.pow(x, cof) for x in G}, p, ops)
    return combine_invariants(parts)
