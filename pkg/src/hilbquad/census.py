"""Counting harnesses: k-free values of binary forms over a box, field
counts from specializations, and log-log growth fits."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .arith import iroot, kfree_part
from .classgroup import genus_two_rank
from .classgroup.imaginary import DEFAULT_MAX_DISC
from .errors import PreconditionError
from .forms import BinaryForm
from .specialize import CurveSpec, SpecializationRecord, enumerate_specializations, verify_record

__all__ = [
    "CensusSeries",
    "GrowthFit",
    "FieldCensus",
    "check_census_form",
    "box_side",
    "shard_cores",
    "merge_shards",
    "s_k_series",
    "s_k_count",
    "field_census",
    "growth_fit",
    "decade_checkpoints",
]


@dataclass(frozen=True)
class CensusSeries:
    checkpoints: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pts = tuple((int(x), int(c)) for x, c in self.checkpoints)
        for (x0, c0), (x1, c1) in zip(pts, pts[1:]):
            if x1 <= x0:
                raise ValueError("checkpoints must be increasing")
            if c1 < c0:
                raise ValueError("counts must be nondecreasing")
        object.__setattr__(self, "checkpoints", pts)

    @property
    def xs(self) -> list[int]:
        return [x for x, _ in self.checkpoints]

    @property
    def counts(self) -> list[int]:
        return [c for _, c in self.checkpoints]

    @property
    def final(self) -> int:
        return self.checkpoints[-1][1] if self.checkpoints else 0


@dataclass(frozen=True)
class GrowthFit:
    slope: float | None
    constant: float | None
    points: int
    status: str = "ok"


def decade_checkpoints(lo: int, hi: int, per_decade: int = 1) -> list[int]:
    """Logarithmically spaced integers from lo to hi inclusive."""
    if lo < 1 or hi < lo:
        raise PreconditionError("need 1 <= lo <= hi")
    n = max(1, round(per_decade * math.log10(hi / lo)))
    pts = sorted({round(lo * (hi / lo) ** (i / n)) for i in range(n + 1)})
    return [p for p in pts if lo <= p <= hi]


def check_census_form(F: BinaryForm) -> None:
    if F.degree < 2 or F.is_power_of_linear():
        raise PreconditionError("form must not be a constant times a power of a linear form")
    if not F.is_squarefree():
        raise PreconditionError("form must be squarefree")


def box_side(x: int, r: int) -> int:
    return iroot(x, r)


def _first(v: int, M: int, A: int) -> int:
    """Least positive integer congruent to A mod M."""
    f = A % M
    return f if f > 0 else M


def shard_cores(
    F: BinaryForm, xs: Sequence[int], k: int, M: int, A: int, B: int, shard: int, shards: int
) -> dict[int, int]:
    """For the a-values of one shard (every `shards`-th admissible a), map
    each k-free core t to the index of the first checkpoint reaching it."""
    r = F.degree
    sides = [box_side(x, r) for x in xs]
    side = sides[-1]
    out: dict[int, int] = {}
    a_all = list(range(_first(0, M, A), side + 1, M))
    b_all = list(range(_first(0, M, B), side + 1, M))
    for a in a_all[shard::shards]:
        for b in b_all:
            v = F(a, b)
            if v == 0:
                continue
            t = kfree_part(v, k).t
            at = abs(t)
            m = max(a, b)
            for j, x in enumerate(xs):
                if sides[j] >= m and at <= x:
                    if out.get(t, len(xs)) > j:
                        out[t] = j
                    break
    return out


def merge_shards(parts: Iterable[dict[int, int]], n: int) -> list[int]:
    best: dict[int, int] = {}
    for part in parts:
        for t, j in part.items():
            if best.get(t, n) > j:
                best[t] = j
    hist = [0] * n
    for j in best.values():
        hist[j] += 1
    return list(np.cumsum(hist).tolist()) if n else []


def s_k_series(
    F: BinaryForm,
    xs: Sequence[int],
    k: int = 2,
    M: int = 1,
    A: int = 0,
    B: int = 0,
    shards: int = 1,
    workers: int = 1,
) -> CensusSeries:
    """S_k at each x in xs: distinct k-free cores t with |t| <= x of F(a, b)
    over positive a, b <= x^(1/r) with a = A, b = B (mod M)."""
    if not isinstance(F, BinaryForm):
        F = BinaryForm(tuple(F))
    check_census_form(F)
    if k < 2 or M < 1:
        raise PreconditionError("need k >= 2 and M >= 1")
    xs = sorted(set(int(x) for x in xs))
    if not xs or xs[0] < 1:
        raise PreconditionError("checkpoints must be positive")
    args = [(F, xs, k, M, A, B, i, shards) for i in range(shards)]
    if workers > 1 and shards > 1:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_shard_star, args))
    else:
        parts = [shard_cores(*a) for a in args]
    return CensusSeries(tuple(zip(xs, merge_shards(parts, len(xs)))))


def _shard_star(args):
    return shard_cores(*args)


def s_k_count(F: BinaryForm, x: int, k: int = 2, M: int = 1, A: int = 0, B: int = 0) -> int:
    return s_k_series(F, [x], k, M, A, B).final


def growth_fit(series: CensusSeries, exponent: float = 0.5, log_power: int = 2) -> GrowthFit:
    """Least-squares slope of log(count) on log(x) over checkpoints with
    positive counts, and the least c with count >= c x^e / (log x)^p."""
    pts = [(x, c) for x, c in series.checkpoints if c > 0 and x > 1]
    if len(pts) < 4:
        return GrowthFit(None, None, len(pts), "insufficient")
    lx = np.log([float(x) for x, _ in pts])
    lc = np.log([float(c) for _, c in pts])
    slope = float(np.polyfit(lx, lc, 1)[0])
    consts = [
        c * math.log(x) ** log_power / float(x) ** exponent for x, c in series.checkpoints if x > 1
    ]
    return GrowthFit(slope, min(consts), len(pts))


@dataclass
class FieldCensus:
    series: CensusSeries
    records: list[SpecializationRecord]
    refuted_fraction: float
    rank_target: int
    m: int
    summary: dict = field(default_factory=dict)

    @property
    def counted(self) -> list[SpecializationRecord]:
        return [r for r in self.records if r.verified_rank is not None and r.verified_rank >= self.rank_target]


def field_census(
    C: CurveSpec,
    sign: int,
    X: int,
    m: int,
    r: int,
    height_bound: int,
    S=None,
    checkpoints: Sequence[int] | None = None,
    max_disc: int = DEFAULT_MAX_DISC,
    max_records: int | None = None,
) -> FieldCensus:
    """Fields from specializations of height <= height_bound with |d| <= X
    whose class group has m-rank >= r, counted at each checkpoint X' <= X.

    The refuted fraction is over all verified records with |d| <= X.
    """
    if checkpoints is None:
        checkpoints = decade_checkpoints(min(10**4, X), X)
    xs = sorted(set(int(x) for x in checkpoints if x <= X))
    stream = enumerate_specializations(C, S, sign, height_bound)
    records = []
    for rec in stream:
        if abs(rec.d_field) > X:
            continue
        rec = verify_record(rec, m, max_disc)
        if m == 2 and rec.d_field < 0 and rec.verified_rank != genus_two_rank(rec.d_field):
            raise AssertionError(f"2-rank of {rec.d_field} disagrees with genus theory")
        records.append(rec)
        if max_records is not None and len(records) >= max_records:
            break
    ds = sorted(abs(rec.d_field) for rec in records if rec.verified_rank >= r)
    counts = [int(np.searchsorted(ds, x, side="right")) for x in xs]
    refuted = sum(1 for rec in records if rec.status == "refuted")
    frac = refuted / len(records) if records else 0.0
    return FieldCensus(CensusSeries(tuple(zip(xs, counts))), records, frac, r, m, stream.summary())
