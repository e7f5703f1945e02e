import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbquad.arith import kfree_part, omega
from hilbquad.census import (
    CensusSeries,
    decade_checkpoints,
    field_census,
    growth_fit,
    merge_shards,
    s_k_count,
    s_k_series,
    shard_cores,
)
from hilbquad.errors import PreconditionError
from hilbquad.forms import BinaryForm
from hilbquad.specialize import catalog_curve

F = BinaryForm((1, 0, 0, 1, 0))  # X^3 Y + Y^4


def brute_count(F, x, k, M=1, A=0, B=0):
    side = 0
    while (side + 1) ** F.degree <= x:
        side += 1
    cores = set()
    for a in range(1, side + 1):
        for b in range(1, side + 1):
            if (a - A) % M or (b - B) % M:
                continue
            v = F(a, b)
            if v:
                t = kfree_part(v, k).t
                if abs(t) <= x:
                    cores.add(t)
    return len(cores)


def test_examples():
    assert s_k_count(F, 16, 2) == 2
    assert s_k_count(F, 1, 2) == 0
    assert s_k_count(BinaryForm((0, 1, 0)), 4, 2) == 2


def test_rejects_powers_of_linear_forms():
    with pytest.raises(PreconditionError):
        s_k_count(BinaryForm((1, 2, 1)), 100, 2)
    with pytest.raises(PreconditionError):
        s_k_count(BinaryForm((3, 0, 0, 0)), 100, 2)
    with pytest.raises(PreconditionError):
        s_k_count(F, 100, 1)


@pytest.mark.parametrize(
    "coeffs, x, k, M, A, B",
    [
        ((1, 0, 0, 1, 0), 10**4, 2, 1, 0, 0),
        ((1, 0, 0, 1, 0), 10**4, 3, 1, 0, 0),
        ((1, 0, -2), 2000, 2, 1, 0, 0),
        ((1, 1, 1), 3000, 2, 3, 1, 2),
        ((2, 0, 0, -5, 7), 5 * 10**4, 2, 2, 1, 0),
    ],
)
def test_matches_brute_force(coeffs, x, k, M, A, B):
    G = BinaryForm(coeffs)
    assert s_k_count(G, x, k, M, A, B) == brute_count(G, x, k, M, A, B)


def test_series_matches_pointwise_counts_and_is_monotone():
    xs = [10, 100, 1000, 10**4, 10**5]
    series = s_k_series(F, xs, 2)
    assert series.xs == xs
    assert series.counts == [s_k_count(F, x, 2) for x in xs]
    assert series.counts == sorted(series.counts)


def test_square_scaling_invariance():
    xs = [10**3, 10**4, 10**5]
    G = BinaryForm(tuple(4 * c for c in F.coeffs))
    assert s_k_series(F, xs, 2) == s_k_series(G, xs, 2)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(0, 5), st.integers(0, 5), st.integers(50, 5000))
def test_congruence_restriction_is_a_subset(M, A, B, x):
    assert s_k_count(F, x, 2, M, A, B) <= s_k_count(F, x, 2)


@pytest.mark.parametrize("shards", [2, 3, 7])
def test_sharding_does_not_change_counts(shards):
    xs = [10**3, 10**4, 10**5]
    assert s_k_series(F, xs, 2, shards=shards) == s_k_series(F, xs, 2)


def test_merge_order_is_irrelevant():
    xs = [10**3, 10**4]
    parts = [shard_cores(F, xs, 2, 1, 0, 0, i, 4) for i in range(4)]
    assert merge_shards(parts, 2) == merge_shards(parts[::-1], 2)


def test_parallel_workers_agree():
    xs = [10**3, 10**4, 10**5]
    assert s_k_series(F, xs, 2, shards=4, workers=2) == s_k_series(F, xs, 2)


def test_series_validation():
    with pytest.raises(ValueError):
        CensusSeries(((10, 3), (5, 4)))
    with pytest.raises(ValueError):
        CensusSeries(((10, 3), (100, 2)))


def test_decade_checkpoints():
    assert decade_checkpoints(10**3, 10**6) == [10**3, 10**4, 10**5, 10**6]
    assert decade_checkpoints(10, 1000, 2) == [10, 32, 100, 316, 1000]


def test_growth_fit_synthetic():
    xs = [10**j for j in range(1, 7)]
    fit = growth_fit(CensusSeries(tuple((x, x * x) for x in xs)), 2, 0)
    assert fit.slope == pytest.approx(2.0)
    assert fit.constant == pytest.approx(1.0)
    xs = [10**2, 10**3, 10**4, 10**5]
    pts = tuple((x, math.floor(x * x / math.log(x) ** 2)) for x in xs)
    fit = growth_fit(CensusSeries(pts), 2, 2)
    # local slope is 2 - 2/log x, so the fit sits well below 2
    lx = [math.log(x) for x, _ in pts]
    ly = [math.log(c) for _, c in pts]
    mx, my = sum(lx) / 4, sum(ly) / 4
    ols = sum((u - mx) * (v - my) for u, v in zip(lx, ly)) / sum((u - mx) ** 2 for u in lx)
    assert fit.slope == pytest.approx(ols)
    assert fit.slope == pytest.approx(1.7364, abs=1e-4)
    assert 2 - 2 / math.log(10**2) < fit.slope < 2 - 2 / math.log(10**5)
    assert fit.status == "ok" and fit.points == 4


def test_growth_fit_insufficient():
    fit = growth_fit(CensusSeries(((10, 0), (100, 1), (1000, 2), (10**4, 3))))
    assert fit.status == "insufficient" and fit.slope is None
    assert growth_fit(CensusSeries(())).status == "insufficient"


def test_growth_fit_constant_is_minimal():
    series = s_k_series(F, [10**3, 10**4, 10**5, 10**6], 2)
    fit = growth_fit(series, 0.5, 2)
    ratios = [c * math.log(x) ** 2 / math.sqrt(x) for x, c in series.checkpoints]
    assert fit.constant == pytest.approx(min(ratios)) and fit.constant > 0


def test_field_census_small():
    C = catalog_curve("chyp2", m=2)
    fc = field_census(C, -1, 10**6, 2, 2, 43 * 600, S=[2, 3], checkpoints=[10**4, 10**5, 10**6])
    assert fc.series.final >= 1
    assert fc.series.counts == sorted(fc.series.counts)
    ts = [rec.t for rec in fc.records]
    assert len(ts) == len(set(ts))
    for rec in fc.counted:
        assert abs(rec.d_field) <= 10**6
        assert rec.verified_rank == omega(-rec.d_field) - 1 >= 2


def test_field_census_empty():
    C = catalog_curve("chyp2", m=2)
    fc = field_census(C, -1, 10**6, 2, 2, 10, S=[2, 3], checkpoints=[10**4, 10**6])
    assert fc.series.counts == [0, 0]
    assert fc.records == [] and fc.refuted_fraction == 0.0
