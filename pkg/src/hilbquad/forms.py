"""Binary forms, Moebius maps, homogenization with a square certificate, and
the odd-degree monic model of a hyperelliptic curve with a rational
Weierstrass point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .arith import factor, kfree_part
from .errors import DomainError, PreconditionError
from .polynomial import Polynomial

__all__ = [
    "BinaryForm",
    "MobiusMap",
    "SquareCertificate",
    "OddModelCertificate",
    "homogenize_split",
    "evaluate_form",
    "odd_model",
]


@dataclass(frozen=True)
class BinaryForm:
    """F(X, Y) = sum(coeffs[i] * X**i * Y**(degree - i))."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) < 2:
            raise PreconditionError("a binary form needs degree >= 1")
        if not any(self.coeffs):
            raise PreconditionError("zero binary form")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, a: int, b: int) -> int:
        return evaluate_form(self, a, b)

    def __str__(self):
        r = self.degree
        terms = []
        for i in range(r, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "*".join(
                part
                for part in (
                    "" if i == 0 else ("X" if i == 1 else f"X^{i}"),
                    "" if r - i == 0 else ("Y" if r - i == 1 else f"Y^{r - i}"),
                )
                if part
            )
            body = mono if abs(c) == 1 else f"{abs(c)}*{mono}" if mono else str(abs(c))
            terms.append(("-" if c < 0 else "+", body or "1"))
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sgn, body in terms[1:]:
            out += f" {sgn} {body}"
        return out

    def scaled(self, s: int) -> "BinaryForm":
        return BinaryForm(tuple(s * c for c in self.coeffs))

    def dehomogenize(self) -> Polynomial:
        """F(x, 1)."""
        return Polynomial(self.coeffs)

    def y_multiplicity(self) -> int:
        return self.degree - self.dehomogenize().degree

    def is_squarefree(self) -> bool:
        """No repeated non-constant factor over Q (content is ignored)."""
        f = self.dehomogenize()
        if self.y_multiplicity() > 1:
            return False
        return f.degree < 1 or f.is_squarefree()

    def is_power_of_linear(self) -> bool:
        """True when F = c * L**r for a linear form L."""
        f = self.dehomogenize()
        if f.degree == 0:
            return True
        if f.degree != self.degree:
            return False
        return f.gcd(f.derivative()).degree == f.degree - 1

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g


def evaluate_form(F: BinaryForm, a: int, b: int, order: str = "x") -> int:
    """Exact value of F(a, b); `order` picks Horner in X or in Y."""
    cs = F.coeffs
    r = len(cs) - 1
    if order == "x":
        acc = cs[r]
        bp = 1
        for i in range(r - 1, -1, -1):
            bp *= b
            acc = acc * a + cs[i] * bp
        return acc
    if order == "y":
        acc = cs[0]
        ap = 1
        for i in range(1, r + 1):
            ap *= a
            acc = acc * b + cs[i] * ap
        return acc
    raise PreconditionError(f"unknown evaluation order {order!r}")


@dataclass(frozen=True)
class MobiusMap:
    """t -> (a*t + b) / (c*t + d) with an integer matrix."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det == 0:
            raise PreconditionError("singular Moebius map")

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def matrix(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __call__(self, t):
        t = Fraction(t)
        den = self.c * t + self.d
        if den == 0:
            raise DomainError(f"{t} is a pole of {self}")
        return (self.a * t + self.b) / den

    def apply_ratio(self, num: int, den: int) -> Fraction:
        """Image of num/den, evaluated projectively so den may be zero."""
        top = self.a * num + self.b * den
        bot = self.c * num + self.d * den
        if bot == 0:
            raise DomainError(f"{num}/{den} is a pole of {self}")
        return Fraction(top, bot)

    def inverse(self) -> "MobiusMap":
        g = gcd(gcd(self.a, self.b), gcd(self.c, self.d))
        sgn = -1 if self.d < 0 or (self.d == 0 and self.c > 0) else 1
        return MobiusMap(sgn * self.d // g, -sgn * self.b // g, -sgn * self.c // g, sgn * self.a // g)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self after other."""
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def is_identity(self) -> bool:
        return self.is_scalar()


@dataclass(frozen=True)
class SquareCertificate:
    """R(X, Y) = scale * (lin_x*X + lin_y*Y) ** (-power)."""

    scale: Fraction
    lin_x: int
    lin_y: int
    power: int

    def __call__(self, X, Y) -> Fraction:
        L = self.lin_x * X + self.lin_y * Y
        return Fraction(self.scale) / Fraction(L) ** self.power

    def __str__(self):
        return f"{self.scale} * ({self.lin_x}*X + {self.lin_y}*Y)^(-{self.power})"


def _linear(alpha, beta) -> Polynomial:
    return Polynomial((beta, alpha))


def homogenize_split(f: Polynomial, tau: MobiusMap, samples: int | None = None):
    """Write f(tau(X/Y)) = F(X, Y) * R(X, Y)**2.

    F is a squarefree integral binary form of even degree whose integer
    content is squarefree; R is returned as a SquareCertificate.  The
    identity is checked exactly at sample points before returning.
    """
    if not isinstance(f, Polynomial):
        f = Polynomial(f)
    if f.degree < 1:
        raise PreconditionError("f must be nonconstant")
    if not f.is_squarefree():
        raise PreconditionError("f must be squarefree")
    if not isinstance(tau, MobiusMap):
        tau = MobiusMap(*tau)
    n = f.degree
    num = _linear(tau.a, tau.b)
    den = _linear(tau.c, tau.d)
    G = Polynomial()
    for i, c in enumerate(f.coeffs):
        if c:
            G = G + c * num**i * den ** (n - i)
    e = n
    if n % 2:
        G = G * den
        e = n + 1
    q, prim = G.primitive_integer()
    prim += [0] * (e + 1 - len(prim))
    u, v = q.numerator, q.denominator
    split = kfree_part(u * v, 2)
    F = BinaryForm(tuple(split.t * c for c in prim))
    cert = SquareCertificate(Fraction(split.z, v), tau.c, tau.d, e // 2)
    if F.degree % 2 or F.degree < 2 or not F.is_squarefree():
        raise AssertionError(f"homogenization produced an invalid form {F}")
    _check_split(f, tau, F, cert, samples or F.degree + 1)
    return F, cert


def _check_split(f, tau, F, cert, count):
    checked = 0
    X, Y = 1, 1
    while checked < count:
        if tau.c * X + tau.d * Y != 0:
            lhs = f(tau(Fraction(X, Y)))
            rhs = F(X, Y) * cert(X, Y) ** 2
            if lhs != rhs:
                raise AssertionError(f"square certificate fails at ({X}, {Y})")
            checked += 1
        X += 1
        if X > 2 * Y + 3:
            X, Y = -Y - 1, Y + 1


@dataclass(frozen=True)
class OddModelCertificate:
    """Substitution chain from y^2 = f(x) to v^2 = h(w).

    x = root + lead / w and v = lead**genus * scale * (w / lead)**(genus + 1) * y,
    so h(w) = lead**(2*genus) * scale**2 * q(w / lead) where
    q(u) = u**(2*genus + 2) * f(root + 1/u).
    """

    root: Fraction
    genus: int
    scale: int
    lead: int

    def x_of_w(self, w) -> Fraction:
        return self.root + Fraction(self.lead) / Fraction(w)

    def w_of_x(self, x) -> Fraction:
        return Fraction(self.lead) / (Fraction(x) - self.root)

    def expected_h(self, f: Polynomial) -> Polynomial:
        """Recompute h directly from f by the recorded substitutions."""
        d = 2 * self.genus + 2
        r = self.root
        # q(u) = sum f_i (r*u + 1)^i u^(d-i)
        q = Polynomial()
        ru1 = Polynomial((1, r))
        u = Polynomial.x()
        for i, c in enumerate(f.coeffs):
            if c:
                q = q + c * ru1**i * u ** (d - i)
        w_over_l = Polynomial((0, Fraction(1, self.lead)))
        return (Fraction(self.lead) ** (2 * self.genus) * self.scale**2) * q.compose(w_over_l)

    def verify(self, f: Polynomial, h: Polynomial) -> bool:
        return self.expected_h(f) == h


def _min_square_multiplier(den: int) -> int:
    """Least k > 0 with den | k**2."""
    k = 1
    for p, e in factor(den).factors:
        k *= p ** ((e + 1) // 2)
    return k


def odd_model(f: Polynomial, root) -> tuple[Polynomial, OddModelCertificate]:
    """Move the rational Weierstrass point x = root to infinity.

    f has even degree 2g+2; the result h is monic, integral, squarefree of
    degree 2g+1 and defines a curve birational to y^2 = f(x).
    """
    if not isinstance(f, Polynomial):
        f = Polynomial(f)
    r = Fraction(root)
    if f.degree < 2 or f.degree % 2:
        raise PreconditionError("odd_model needs f of even degree >= 2")
    if f(r) != 0:
        raise PreconditionError(f"f({r}) != 0")
    if not f.is_squarefree():
        raise PreconditionError("f must be squarefree")
    g = (f.degree - 2) // 2
    d = 2 * g + 1
    shifted = f.compose(Polynomial((r, 1)))  # f(r + u)
    # q(u) = u^(d+1) f(r + 1/u) is the reversal of f(r + u); its constant
    # coefficient vanishes so deg q = d.
    q = Polynomial(reversed(shifted.coeffs + (Fraction(0),) * (d + 1 - shifted.degree)))
    den = 1
    for c in q.coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    k = _min_square_multiplier(den)
    q = q * (k * k)
    lead = q.leading
    if lead.denominator != 1:
        raise AssertionError("scaled q is not integral")
    lead = int(lead)
    h = Polynomial(q.coeffs[j] * Fraction(lead) ** (d - 1 - j) for j in range(d + 1))
    if not h.is_integral() or h.leading != 1 or h.degree != d:
        raise AssertionError("monicization failed")
    if not h.is_squarefree():
        raise AssertionError("odd model is not squarefree")
    cert = OddModelCertificate(r, g, k, lead)
    return h, cert
