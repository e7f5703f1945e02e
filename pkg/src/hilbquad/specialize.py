"""Quadratic fields from specializations of hyperelliptic curves.

For y^2 = f(x) with f monic of odd degree d, a rational x0 = a/b gives the
field Q(sqrt(b^(d+1) f(a/b))).  Taking x0 within distance < 1 of a shifted
point +-N/M, and p-adically close to it for every p | M, makes f(x0) have a
fixed sign and makes every p in S ramify in the resulting field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd
from typing import Iterator

from .arith import factor, kfree_part
from .classgroup import fundamental_discriminant, group_structure, narrow_group_structure
from .classgroup.imaginary import DEFAULT_MAX_DISC
from .errors import CapacityError, PreconditionError
from .forms import BinaryForm, odd_model
from .localize import height
from .polynomial import Polynomial

__all__ = [
    "CurveSpec",
    "SpecializationRecord",
    "SpecializationStream",
    "catalog_curve",
    "curve_from_json",
    "choose_shift",
    "default_bad_primes",
    "enumerate_specializations",
    "height_for_candidates",
    "parse_curve",
    "verify_record",
]

LSW_COEFFS = (11764900, 0, 0, -369249, 0, 0, 2973, 0, 0, 1)


@dataclass(frozen=True)
class CurveSpec:
    f: Polynomial
    genus: int
    m: int
    claimed_torsion_rank: int
    provenance: str
    pre_model: Polynomial | None = None

    def __post_init__(self):
        f = self.f
        if not f.is_integral() or f.leading != 1:
            raise PreconditionError("f must be monic with integer coefficients")
        if f.degree % 2 == 0 or f.degree != 2 * self.genus + 1:
            raise PreconditionError(f"degree {f.degree} is not 2g+1 for g = {self.genus}")
        if not f.is_squarefree():
            raise PreconditionError("f must be squarefree")

    @property
    def degree(self) -> int:
        return self.f.degree

    def homogenized(self) -> BinaryForm:
        """b^(d+1) f(a/b) as a binary form of degree d+1."""
        return BinaryForm(tuple(self.f.int_coeffs()) + (0,))

    def to_dict(self) -> dict:
        return {
            "f": self.f.to_strings(),
            "genus": self.genus,
            "m": self.m,
            "claimed_torsion_rank": self.claimed_torsion_rank,
            "provenance": self.provenance,
        }


def _family_polynomial(m: int, c: Fraction) -> Polynomial:
    # x^(2m) - (1 + c^2) x^m + c^2 = (x^m - 1)(x^m - c^2)
    coeffs = [Fraction(0)] * (2 * m + 1)
    coeffs[0] = c * c
    coeffs[m] = -(1 + c * c)
    coeffs[2 * m] = Fraction(1)
    return Polynomial(coeffs)


def catalog_curve(name: str, **params) -> CurveSpec:
    """Named curves.

    "chyp2" (params m > 1, c not in {0, 1, -1}; default c = 2) is
    y^2 = x^(2m) - (1 + c^2) x^m + c^2 moved to an odd model at x = 1; its
    Jacobian carries rational m-torsion of rank >= 2.  "lsw-genus4" is the
    genus 4 curve y^2 = t^9 + 2973 t^6 - 369249 t^3 + 11764900 whose Jacobian
    has rational 3-torsion of rank >= 3.
    """
    if name == "lsw-genus4":
        return CurveSpec(Polynomial(LSW_COEFFS), 4, 3, 3, "lsw-genus4")
    if name == "chyp2":
        m = int(params.get("m", 2))
        c = Fraction(params.get("c", 2))
        if m < 2:
            raise PreconditionError("the family needs m > 1")
        if c in (0, 1, -1):
            raise PreconditionError("c must avoid 0 and +-1")
        pre = _family_polynomial(m, c)
        h, _ = odd_model(pre, 1)
        return CurveSpec(h, m - 1, m, 2, f"chyp2(m={m}, c={c})", pre)
    raise PreconditionError(f"unknown curve {name!r}")


def parse_curve(text: str) -> CurveSpec:
    """'lsw-genus4', 'chyp2', 'chyp2:m=3', 'chyp2:m=2,c=3' or a JSON file path."""
    name, _, rest = text.partition(":")
    if name in ("lsw-genus4", "chyp2"):
        params = dict(kv.split("=", 1) for kv in rest.split(",") if kv)
        return catalog_curve(name, **params)
    with open(text) as fh:
        return curve_from_json(json.load(fh))


def curve_from_json(obj: dict) -> CurveSpec:
    return CurveSpec(
        Polynomial.from_strings([str(c) for c in obj["f"]]),
        int(obj["genus"]),
        int(obj["m"]),
        int(obj["claimed_torsion_rank"]),
        str(obj.get("provenance", "file")),
    )


def _check_odd_monic(f: Polynomial) -> None:
    if f.degree < 1 or f.degree % 2 == 0 or f.leading != 1:
        raise PreconditionError("f must be monic of odd degree")
    if not f.is_squarefree():
        raise PreconditionError("f must be squarefree")


def choose_shift(f: Polynomial, M: int, sign: int) -> int:
    """Least N >= 1 coprime to M such that the open interval of radius 1
    about sign*N/M lies beyond every real root of f (above them for sign +1,
    below for sign -1).  There f has the sign of `sign`."""
    if not isinstance(f, Polynomial):
        f = Polynomial(f)
    _check_odd_monic(f)
    if M < 1 or sign not in (1, -1):
        raise PreconditionError("need M >= 1 and sign = +-1")
    # p(x) = sign * f(sign * x) is monic of odd degree and reduces to sign +1
    p = Polynomial([sign * c * sign**i for i, c in enumerate(f.coeffs)])
    seq = p.sturm_sequence()

    def clear(N: int) -> bool:
        # no root in (N/M - 1, oo); a root at the edge itself is allowed
        return p.count_real_roots(Fraction(N, M) - 1, None, seq) == 0

    hi = 1
    while not clear(hi):
        hi *= 2
    lo = 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if clear(mid):
            hi = mid
        else:
            lo = mid
    N = hi
    while gcd(N, M) != 1:
        N += 1
    return N


def default_bad_primes(f: Polynomial) -> list[int]:
    disc = f.discriminant()
    return sorted(factor(int(disc)).primes()) if abs(disc) > 1 else []


@dataclass(frozen=True)
class SpecializationRecord:
    x0: Fraction
    raw_value: int
    t: int
    d_field: int
    predicted_rank: int
    verified_rank: int | None = None
    status: str = "pending"
    z: int = 1
    flags: tuple[str, ...] = ()

    @property
    def height(self) -> int:
        return height(self.x0)

    def to_dict(self) -> dict:
        return {
            "x0": str(self.x0),
            "height": self.height,
            "raw_value": self.raw_value,
            "t": self.t,
            "z": self.z,
            "d_field": self.d_field,
            "predicted_rank": self.predicted_rank,
            "verified_rank": self.verified_rank,
            "status": self.status,
            "flags": list(self.flags),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, obj: dict) -> "SpecializationRecord":
        return cls(
            Fraction(obj["x0"]),
            int(obj["raw_value"]),
            int(obj["t"]),
            int(obj["d_field"]),
            int(obj["predicted_rank"]),
            None if obj.get("verified_rank") is None else int(obj["verified_rank"]),
            obj.get("status", "pending"),
            int(obj.get("z", 1)),
            tuple(obj.get("flags", ())),
        )


def _candidates(N: int, M: int, sign: int, B: int) -> list[tuple[int, Fraction, int, int]]:
    """(height, x0, a, b) for x0 = sign*N/M + r*M/s, |r| M < s, gcd(s, M) = 1,
    gcd(r, s) = 1, with height <= B, sorted by height then x0."""
    out = []
    s = 1
    while M * s <= B:
        if gcd(s, M) == 1:
            b = M * s
            base = sign * N * s
            rmax = (s - 1) // M
            for r in range(-rmax, rmax + 1):
                if gcd(r, s) != 1:
                    continue
                a = base + r * M * M
                h = max(abs(a), b)
                if h <= B:
                    out.append((h, Fraction(a, b), a, b))
        s += 1
    out.sort(key=lambda c: (c[0], c[1]))
    return out


class SpecializationStream:
    """Iterable of deduplicated records in order of height, then x0.

    Values are computed lazily, so taking the first few records from a large
    height bound is cheap.  `duplicates` counts suppressed repeats of t and
    `notes` collects run-level remarks.
    """

    def __init__(self, C: CurveSpec, S, sign: int, B: int, skip_unfactorable: bool = False):
        if sign not in (1, -1):
            raise PreconditionError("sign must be +1 or -1")
        if B < 1:
            raise PreconditionError("height bound must be >= 1")
        self.curve = C
        self.S = sorted(set(int(p) for p in S))
        self.sign = sign
        self.B = B
        self.M = 1
        for p in self.S:
            self.M *= p
        self.N = choose_shift(C.f, self.M, sign)
        self.height_constant = 1
        self.form = C.homogenized()
        self.disc_constant = 4 * sum(abs(c) for c in self.form.coeffs)
        self.predicted = C.claimed_torsion_rank - (0 if sign == -1 else 1)
        self.duplicates = 0
        self.skipped_squares = 0
        self.unfactored = 0
        self.skip_unfactorable = skip_unfactorable
        self.notes: list[str] = []
        self.flags: tuple[str, ...] = ()
        if not self.S:
            self.flags = ("no-forced-ramification",)
            self.notes.append("S is empty: ramification is not forced, predicted_rank is metadata only")
        self._cands = _candidates(self.N, self.M, sign, B)
        if not self._cands:
            self.notes.append(f"no admissible x0 of height <= {B} (smallest needs about {self.N * self.M})")
        self._seen: set[int] = set()
        self._emitted: list[SpecializationRecord] = []
        self._pos = 0

    def __len__(self):
        return len(self._cands)

    def _make(self, a: int, b: int, x0: Fraction) -> SpecializationRecord | None:
        raw = self.form(a, b)
        try:
            k = kfree_part(raw, 2)
        except CapacityError:
            if not self.skip_unfactorable:
                raise
            self.unfactored += 1
            return None
        if k.t == 1:
            self.skipped_squares += 1
            return None
        if k.t in self._seen:
            self.duplicates += 1
            return None
        self._seen.add(k.t)
        return SpecializationRecord(
            x0, raw, k.t, fundamental_discriminant(k.t), self.predicted, z=k.z, flags=self.flags
        )

    def __iter__(self) -> Iterator[SpecializationRecord]:
        yield from self._emitted
        while self._pos < len(self._cands):
            _, x0, a, b = self._cands[self._pos]
            self._pos += 1
            rec = self._make(a, b, x0)
            if rec is not None:
                self._emitted.append(rec)
                yield rec

    def take(self, n: int) -> list[SpecializationRecord]:
        out = []
        for rec in self:
            if len(out) >= n:
                break
            out.append(rec)
        return out

    def summary(self) -> dict:
        return {
            "curve": self.curve.provenance,
            "S": self.S,
            "sign": "neg" if self.sign < 0 else "pos",
            "N": self.N,
            "M": self.M,
            "height_bound": self.B,
            "candidates": len(self._cands),
            "duplicates": self.duplicates,
            "unfactored": self.unfactored,
            "disc_constant": self.disc_constant,
            "notes": self.notes,
        }


def enumerate_specializations(
    C: CurveSpec, S=None, sign: int = -1, B: int = 100, skip_unfactorable: bool = False
) -> SpecializationStream:
    """Stream of specialization records; S=None means the primes of disc(f).

    With skip_unfactorable, candidates whose value exhausts the factoring
    budget are dropped and counted in `unfactored` instead of raising.
    """
    if S is None:
        S = default_bad_primes(C.f)
    return SpecializationStream(C, S, sign, B, skip_unfactorable)


def height_for_candidates(C: CurveSpec, S, sign: int, count: int) -> int:
    """Least height bound admitting at least `count` candidate x0."""
    M = 1
    for p in set(S):
        M *= p
    N = choose_shift(C.f, M, sign)
    lo, hi = 0, max(N, M)
    while len(_candidates(N, M, sign, hi)) < count:
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if len(_candidates(N, M, sign, mid)) >= count:
            hi = mid
        else:
            lo = mid
    return hi


def verify_record(
    rec: SpecializationRecord, m: int, max_disc: int = DEFAULT_MAX_DISC
) -> SpecializationRecord:
    """Fill in the m-rank of the class group (narrow class group when real)."""
    if rec.d_field < 0:
        G = group_structure(rec.d_field, max_disc)
    else:
        G = narrow_group_structure(rec.d_field)
    r = G.m_rank(m)
    status = "verified" if r >= rec.predicted_rank else "refuted"
    return replace(rec, verified_rank=r, status=status)
