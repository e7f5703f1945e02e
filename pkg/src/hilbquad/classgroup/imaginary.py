"""Class group structure of imaginary quadratic fields.

Small discriminants (|d| <= SMALL_LIMIT) enumerate reduced forms for the
exact class number and then split each Sylow subgroup from projections of
prime forms.  Larger ones bound h by a truncated Euler product for
L(1, chi_d), find element orders by baby-step giant-step inside that
window, and accept the result only when the generated subgroup's order
lands in the window.
"""

from __future__ import annotations

import math
import threading
from functools import lru_cache
from itertools import chain

from ..arith import factor, primes_up_to
from ..errors import CapacityError, PreconditionError
from .qform import (
    compose,
    identity_form,
    inverse_form,
    is_fundamental,
    kronecker,
    prime_forms,
    reduced_forms,
)
from .structure import (
    AbelianGroupStructure,
    GroupOps,
    bsgs_exponent,
    combine_invariants,
    order_from_multiple,
    sylow_from_generators,
)

__all__ = [
    "DEFAULT_MAX_DISC",
    "SMALL_LIMIT",
    "group_ops",
    "group_structure",
    "class_number_window",
    "m_rank",
    "set_structure_cache",
]

DEFAULT_MAX_DISC = 10**13
SMALL_LIMIT = 10**6
POOL_SIZE = 40
EULER_PRIME_BOUND = 1 << 17

_memo: dict[int, AbelianGroupStructure] = {}
_memo_lock = threading.Lock()
_store = None


def set_structure_cache(store) -> None:
    """Attach a persistent store with get(d) / put(d, structure), or None."""
    global _store
    _store = store


def group_ops(d: int) -> GroupOps:
    return GroupOps(compose, identity_form(d), inverse_form)


@lru_cache(maxsize=1)
def _euler_primes():
    return primes_up_to(EULER_PRIME_BOUND)


def class_number_window(d: int, delta: float = 0.1) -> tuple[int, int]:
    """Integer window [lo, hi] expected to contain h(d), from a truncated
    Euler product with relative slack `delta`."""
    logL = 0.0
    for p in _euler_primes():
        k = kronecker(d, p)
        if k:
            logL -= math.log1p(-k / p)
    w = 6 if d == -3 else 4 if d == -4 else 2
    est = w / 2 * math.sqrt(-d) / math.pi * math.exp(logL)
    lo = max(1, math.floor(est * (1 - delta)))
    hi = math.ceil(est * (1 + delta)) + 1
    return lo, hi


def _validate(d: int, max_disc: int) -> None:
    if d >= 0 or not is_fundamental(d):
        raise PreconditionError(f"{d} is not a negative fundamental discriminant")
    if -d > max_disc:
        raise CapacityError(f"|d| = {-d} exceeds the supported bound {max_disc}")


def group_structure(d: int, max_disc: int = DEFAULT_MAX_DISC, method: str | None = None) -> AbelianGroupStructure:
    """Invariant factors of Cl(d) for a fundamental discriminant d < 0.

    `method` forces "enumerate" or "bsgs"; by default the size of |d| decides.
    """
    _validate(d, max_disc)
    key = d if method is None else None
    if key is not None:
        hit = _memo.get(key)
        if _store is not None:
            if hit is None:
                hit = _store.get(d)
            elif _store.get(d) is None:
                _store.put(d, hit)
        if hit is not None:
            return hit
    if method == "enumerate" or (method is None and -d <= SMALL_LIMIT):
        res = _structure_enumerated(d)
    elif method in (None, "bsgs"):
        res = _structure_bsgs(d)
    else:
        raise PreconditionError(f"unknown method {method!r}")
    if key is not None:
        with _memo_lock:
            _memo[key] = res
            if _store is not None:
                _store.put(d, res)
    return res


def _structure_enumerated(d: int) -> AbelianGroupStructure:
    forms = reduced_forms(d)
    h = len(forms)
    ops = group_ops(d)
    parts = {}
    for p, v in factor(h).factors if h > 1 else ():
        cof = h // p**v
        # prime forms first; the full list of reduced forms always suffices
        pool = chain(prime_forms(d, POOL_SIZE), sorted(tuple(f) for f in forms))
        inv = sylow_from_generators(pool, p, v, cof, ops, target=p**v)
        if inv is None:
            raise AssertionError(f"reduced forms failed to generate the {p}-part of Cl({d})")
        parts[p] = inv
    res = combine_invariants(parts)
    if res.order != h:
        raise AssertionError(f"structure {res} disagrees with h = {h}")
    return res


class _WindowMiss(Exception):
    pass


def _structure_bsgs(d: int) -> AbelianGroupStructure:
    ops = group_ops(d)
    delta = 0.1
    for _ in range(4):
        lo, hi = class_number_window(d, delta)
        pool_size = POOL_SIZE
        try:
            while pool_size <= 8 * POOL_SIZE:
                pool = list(prime_forms(d, pool_size))
                res = _bsgs_attempt(pool, lo, hi, ops)
                if lo <= res.order <= hi and 2 * res.order > hi:
                    return res
                pool_size *= 2
        except _WindowMiss:
            pass
        delta *= 2
    raise CapacityError(f"could not certify the class group of {d} within the analytic window")


def _bsgs_attempt(pool, lo: int, hi: int, ops: GroupOps) -> AbelianGroupStructure:
    E = 1
    for g in pool:
        z = ops.pow(g, E)
        if z == ops.identity:
            continue
        n = bsgs_exponent(z, -(-lo // E), hi // E, ops)
        if n is None:
            raise _WindowMiss
        E *= order_from_multiple(z, n, ops)
    parts = {}
    for p, v in factor(E).factors if E > 1 else ():
        cof = E // p**v
        parts[p] = sylow_from_generators(pool, p, v, cof, ops, cyclic_forced=E * p > hi)
    return combine_invariants(parts)


def m_rank(d: int, m: int, max_disc: int = DEFAULT_MAX_DISC) -> int:
    return group_structure(d, max_disc).m_rank(m)
