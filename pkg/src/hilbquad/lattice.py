"""Rank-2 integer lattices: max-norm minimal bases and the positivization
step that turns a minimal basis into a nonnegative one at most three times
larger.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .errors import PreconditionError

__all__ = ["Lattice2", "Basis2", "minimal_basis", "positivize", "in_lattice"]

Vec = tuple[int, int]


def _det(u: Vec, v: Vec) -> int:
    return u[0] * v[1] - u[1] * v[0]


def _maxnorm(v: Vec) -> int:
    return max(abs(v[0]), abs(v[1]))


@dataclass(frozen=True)
class Lattice2:
    g0: Vec
    g1: Vec

    def __post_init__(self):
        object.__setattr__(self, "g0", (int(self.g0[0]), int(self.g0[1])))
        object.__setattr__(self, "g1", (int(self.g1[0]), int(self.g1[1])))
        if _det(self.g0, self.g1) == 0:
            raise PreconditionError("lattice generators are linearly dependent")

    @property
    def det(self) -> int:
        return abs(_det(self.g0, self.g1))

    def __contains__(self, v) -> bool:
        return in_lattice(v, self.g0, self.g1)


@dataclass(frozen=True)
class Basis2:
    v0: Vec
    v1: Vec

    @property
    def M(self) -> int:
        return max(_maxnorm(self.v0), _maxnorm(self.v1))

    @property
    def det(self) -> int:
        return _det(self.v0, self.v1)

    def lattice(self) -> Lattice2:
        return Lattice2(self.v0, self.v1)

    def entries(self) -> tuple[int, int, int, int]:
        return (*self.v0, *self.v1)


def in_lattice(v, g0: Vec, g1: Vec) -> bool:
    D = _det(g0, g1)
    return _det(v, g1) % D == 0 and _det(g0, v) % D == 0


def _gauss_reduce(u: Vec, v: Vec) -> tuple[Vec, Vec]:
    """Lagrange-Gauss reduction in the Euclidean norm."""

    def n2(w):
        return w[0] * w[0] + w[1] * w[1]

    if n2(u) > n2(v):
        u, v = v, u
    while True:
        nu = n2(u)
        dot = u[0] * v[0] + u[1] * v[1]
        k = (2 * dot + nu) // (2 * nu)
        v = (v[0] - k * u[0], v[1] - k * u[1])
        if n2(v) >= nu:
            return u, v
        u, v = v, u


def _tiebreak(v: Vec):
    # prefers small |s|, then small |r|, then positive r, then positive s
    return (_maxnorm(v), abs(v[1]), abs(v[0]), -v[0], -v[1])


def _vectors_within(b0: Vec, b1: Vec, R: int):
    """All lattice vectors with max-norm <= R (Gauss-reduced basis)."""
    D = abs(_det(b0, b1))
    # Cramer: |x| = |det(v, b1)|/D <= R(|b1_x|+|b1_y|)/D, likewise y
    xb = (R * (abs(b1[0]) + abs(b1[1]))) // D + 1
    yb = (R * (abs(b0[0]) + abs(b0[1]))) // D + 1
    for x in range(-xb, xb + 1):
        for y in range(-yb, yb + 1):
            v = (x * b0[0] + y * b1[0], x * b0[1] + y * b1[1])
            if _maxnorm(v) <= R:
                yield v


def minimal_basis(L: Lattice2) -> Basis2:
    """Basis (v0, v1) with v0 a shortest nonzero vector in the max-norm and
    v1 the shortest vector completing v0 to a basis.

    Ties are broken by smaller |s|, smaller |r|, then positive r, then positive s.
    """
    if not isinstance(L, Lattice2):
        L = Lattice2(*L)
    b0, b1 = _gauss_reduce(L.g0, L.g1)
    D = L.det
    R0 = _maxnorm(b0)
    v0 = min((v for v in _vectors_within(b0, b1, R0) if v != (0, 0)), key=_tiebreak)
    # a completion of v0 exists with Euclidean length <= sqrt((D/|v0|)^2 + |v0|^2/4)
    n2 = v0[0] ** 2 + v0[1] ** 2
    R1 = isqrt((D * D) // n2 + n2 // 4 + 1) + 1
    cands = [v for v in _vectors_within(b0, b1, R1) if abs(_det(v0, v)) == D]
    v1 = min(cands, key=_tiebreak)
    return Basis2(v0, v1)


def _neg(v: Vec) -> Vec:
    return (-v[0], -v[1])


def _same_sign(v: Vec) -> bool:
    return v[0] * v[1] >= 0


def _positivize_from(v0: Vec, v1: Vec) -> tuple[Vec, Vec]:
    """Case where v0 has coordinates of one sign (or a zero coordinate)."""
    if v0[0] < 0 or v0[1] < 0:
        v0 = _neg(v0)
    swap = v0[1] > v0[0]
    if swap:
        v0, v1 = (v0[1], v0[0]), (v1[1], v1[0])
    # now r0 >= s0 >= 0 and r0 > 0
    if v1[0] < 0 or (v1[0] == 0 and v1[1] < 0):
        v1 = _neg(v1)
    if v1[1] < 0:
        r0, s0 = v0
        r1, s1 = v1
        n = -(-r1 // r0)
        v1 = (n * r0 - r1, n * s0 - s1)
    if swap:
        v0, v1 = (v0[1], v0[0]), (v1[1], v1[0])
    return v0, v1


def positivize(B: Basis2) -> Basis2:
    """Nonnegative basis of the same lattice with entries at most 3*B.M."""
    v0, v1 = B.v0, B.v1
    if _det(v0, v1) == 0:
        raise PreconditionError("input vectors do not form a basis")
    if _same_sign(v0):
        w0, w1 = _positivize_from(v0, v1)
        return Basis2(w0, w1)
    if _same_sign(v1):
        w1, w0 = _positivize_from(v1, v0)
        return Basis2(w0, w1)
    raise PreconditionError(
        "both basis vectors have strictly mixed signs; "
        "this cannot happen for a max-norm minimal basis"
    )
