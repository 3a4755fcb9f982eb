"""Exact rational maps of the Riemann sphere and Moebius transformations.

A RationalMap is a coprime numerator/denominator pair with monic denominator,
so two values represent the same sphere map exactly when their fields match.
Everything here is exact; floating-point dynamics live in ``dynamics``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Union

from .polynomials import Polynomial, poly_gcd
from .rationals import I, ONE, ZERO, GaussianRational, RationalLike, as_gaussian
from .sphere import INFINITY, _Infinity

ExactPoint = Union[GaussianRational, _Infinity]


class Parity(enum.Enum):
    EVEN = "Even"
    ODD = "Odd"
    NEITHER = "Neither"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class RationalMap:
    num: Polynomial
    den: Polynomial

    def __post_init__(self) -> None:
        if self.den.is_zero():
            raise ValueError("rational map denominator is the zero polynomial")
        if not self.den.is_monic():
            raise ValueError("rational map denominator must be monic; use normalize()")

    # -- structure ------------------------------------------------------------

    @property
    def degree(self) -> int:
        """Sphere degree: max of numerator and denominator degrees."""
        return max(self.num.degree, self.den.degree, 0)

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalMap):
            return NotImplemented
        return equals(self, other)

    def __hash__(self) -> int:
        return hash((self.num.coeffs, self.den.coeffs))

    # -- pointwise field arithmetic (value arithmetic, not composition) --------

    def __add__(self, other: "RationalMap") -> "RationalMap":
        return normalize(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RationalMap":
        return normalize(-self.num, self.den)

    def __sub__(self, other: "RationalMap") -> "RationalMap":
        return self + (-other)

    def __mul__(self, other: "RationalMap") -> "RationalMap":
        return normalize(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalMap") -> "RationalMap":
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero map")
        return normalize(self.num * other.den, self.den * other.num)

    def __pow__(self, k: int) -> "RationalMap":
        if k < 0:
            raise ValueError("negative exponent on a rational map expression")
        return normalize(self.num**k, self.den**k)

    def flip_sign(self) -> "RationalMap":
        """The map z -> f(-z)."""
        return normalize(self.num.flip_sign(), self.den.flip_sign())

    def derivative(self) -> "RationalMap":
        return normalize(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def __repr__(self) -> str:
        return f"RationalMap({self.num!r} / {self.den!r})"


def constant_map(value: RationalLike) -> RationalMap:
    return RationalMap(Polynomial.of(as_gaussian(value)), Polynomial.of(1))


def identity_map() -> RationalMap:
    return RationalMap(Polynomial.of(0, 1), Polynomial.of(1))


def normalize(num: Polynomial, den: Polynomial) -> RationalMap:
    """Canonical form: cancel the polynomial GCD, then make den monic."""
    if den.is_zero():
        raise ValueError("denominator is the zero polynomial")
    if num.is_zero():
        return RationalMap(Polynomial(), Polynomial.of(1))
    g = poly_gcd(num, den)
    if g.degree > 0:
        num = num // g
        den = den // g
    lead = den.leading()
    if lead != ONE:
        inv = ONE / lead
        num = num.scale(inv)
        den = den.scale(inv)
    return RationalMap(num, den)


def equals(f: RationalMap, g: RationalMap) -> bool:
    """Exact sphere-map equality: num_f * den_g == num_g * den_f."""
    return f.num * g.den == g.num * f.den


def compose(outer: RationalMap, inner: RationalMap) -> RationalMap:
    """outer composed after inner: z -> outer(inner(z))."""
    n, d = inner.num, inner.den
    deg = max(outer.num.degree, outer.den.degree)
    # Homogenize both parts of outer to the same total degree so the powers
    # of the inner denominator cancel in the quotient.
    num = _homogeneous_substitute(outer.num, n, d, deg)
    den = _homogeneous_substitute(outer.den, n, d, deg)
    return normalize(num, den)


def _homogeneous_substitute(p: Polynomial, n: Polynomial, d: Polynomial, deg: int) -> Polynomial:
    # sum_k p_k n^k d^(deg-k), built with running power tables
    n_pows = [Polynomial.of(1)]
    d_pows = [Polynomial.of(1)]
    for _ in range(deg):
        n_pows.append(n_pows[-1] * n)
        d_pows.append(d_pows[-1] * d)
    acc = Polynomial()
    for k in range(deg + 1):
        c = p.coeff(k)
        if c:
            acc = acc + (n_pows[k] * d_pows[deg - k]).scale(c)
    return acc


def evaluate_exact(f: RationalMap, z: ExactPoint) -> ExactPoint:
    """Projective evaluation over exact arithmetic."""
    if z is INFINITY:
        dn, dd = f.num.degree, f.den.degree
        if dn > dd:
            return INFINITY
        if dn < dd:
            return ZERO
        return f.num.leading() / f.den.leading()
    n = f.num.evaluate(z)
    d = f.den.evaluate(z)
    if not d:
        if not n:
            raise ValueError("numerator and denominator vanish together; map not normalized")
        return INFINITY
    return n / d


def parity(f: RationalMap) -> Parity:
    flipped = f.flip_sign()
    if equals(flipped, f):
        return Parity.EVEN
    if equals(flipped, -f):
        return Parity.ODD
    return Parity.NEITHER


def even_decompose(g: RationalMap) -> RationalMap:
    """For even g, the map h with h(z^2) = g(z) exactly.

    In lowest terms an even map has even numerator and denominator (an odd/odd
    representation would force a common factor of z), so h is obtained by
    halving exponents.  Raises on non-even input; an odd-power coefficient
    surviving normalization indicates a bug and also raises.
    """
    if parity(g) is not Parity.EVEN:
        raise ValueError(f"even_decompose requires an Even map, got {parity(g)}")
    if not (g.num.is_even_poly() and g.den.is_even_poly()):
        raise AssertionError("even map has odd-power coefficients after normalization")
    return normalize(g.num.halve_exponents(), g.den.halve_exponents())


def pointwise_square(f: RationalMap) -> RationalMap:
    """The map z -> f(z)^2 (square of the value, not iteration)."""
    return f * f


# -- Moebius transformations --------------------------------------------------


@dataclass(frozen=True, slots=True)
class MoebiusMap:
    """z -> (a z + b) / (c z + d) with ad - bc != 0.

    Normalized so the first nonzero entry of (a, b, c, d) is 1.
    """

    a: GaussianRational
    b: GaussianRational
    c: GaussianRational
    d: GaussianRational

    def __post_init__(self) -> None:
        entries = (as_gaussian(self.a), as_gaussian(self.b), as_gaussian(self.c), as_gaussian(self.d))
        det = entries[0] * entries[3] - entries[1] * entries[2]
        if not det:
            raise ValueError("Moebius map has zero determinant")
        pivot = next(e for e in entries if e)
        inv = ONE / pivot
        a, b, c, d = (e * inv for e in entries)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @staticmethod
    def of(a: RationalLike, b: RationalLike, c: RationalLike, d: RationalLike) -> "MoebiusMap":
        return MoebiusMap(as_gaussian(a), as_gaussian(b), as_gaussian(c), as_gaussian(d))

    @staticmethod
    def identity() -> "MoebiusMap":
        return MoebiusMap.of(1, 0, 0, 1)

    @staticmethod
    def scaling(factor: RationalLike) -> "MoebiusMap":
        """z -> factor * z."""
        return MoebiusMap.of(factor, 0, 0, 1)

    def is_identity(self) -> bool:
        return self == MoebiusMap.identity()

    def determinant(self) -> GaussianRational:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """Matrix product: self after other."""
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def apply(self, z: ExactPoint) -> ExactPoint:
        if z is INFINITY:
            return self.a / self.c if self.c else INFINITY
        n = self.a * z + self.b
        d = self.c * z + self.d
        if not d:
            return INFINITY
        return n / d

    def as_rational_map(self) -> RationalMap:
        return normalize(Polynomial.of(self.b, self.a), Polynomial.of(self.d, self.c))


def moebius_from_rational_map(f: RationalMap) -> MoebiusMap:
    """Convert a degree-1 normalized map to a MoebiusMap; raises otherwise."""
    if f.degree != 1:
        raise ValueError(f"expected a degree-1 map, got degree {f.degree}")
    return MoebiusMap(f.num.coeff(1), f.num.coeff(0), f.den.coeff(1), f.den.coeff(0))


def moebius_through(sources: tuple[GaussianRational, ...], targets: tuple[GaussianRational, ...]) -> MoebiusMap:
    """The unique Moebius map sending three distinct finite sources to three
    distinct finite targets."""

    def to_standard(z1: GaussianRational, z2: GaussianRational, z3: GaussianRational) -> MoebiusMap:
        # sends z1, z2, z3 to 0, 1, infinity
        return MoebiusMap(z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1))

    s = to_standard(*sources)
    t = to_standard(*targets)
    return t.inverse().compose(s)


def conjugate(f: RationalMap, m: MoebiusMap) -> RationalMap:
    """m o f o m^(-1), normalized."""
    mm = m.as_rational_map()
    return compose(compose(mm, f), m.inverse().as_rational_map())


def _probe_points() -> tuple[GaussianRational, ...]:
    # fixed deterministic list; bounded work by construction
    reals = [as_gaussian(v) for v in (0, 1, -1, 2, -2, 3, -3)]
    complexes = [
        I,
        -I,
        ONE + I,
        ONE - I,
        -ONE + I,
        -ONE - I,
        I + I,
        -(I + I),
    ]
    tail = [as_gaussian(v) for v in (4, -4, 5, -5)] + [as_gaussian(2) + I]
    return tuple(reals + complexes + tail)


#: Deterministic probe points for the commutation search (20 candidates).
_PROBE_POINTS: tuple[GaussianRational, ...] = _probe_points()


def find_commutation_moebius(f: RationalMap, g: RationalMap) -> Optional[MoebiusMap]:
    """Search for a Moebius map phi with f o g = phi o (g o f).

    Interpolates phi from three probe points with distinct images and then
    verifies the full identity exactly; returns None when no such phi exists.
    """
    fg = compose(f, g)
    gf = compose(g, f)
    if equals(fg, gf):
        return MoebiusMap.identity()

    sources: list[GaussianRational] = []
    targets: list[GaussianRational] = []
    for z in _PROBE_POINTS:
        w = evaluate_exact(gf, z)
        t = evaluate_exact(fg, z)
        if w is INFINITY or t is INFINITY:
            continue
        if w in sources or t in targets:
            continue
        sources.append(w)
        targets.append(t)
        if len(sources) == 3:
            break
    if len(sources) < 3:
        return None

    try:
        phi = moebius_through(tuple(sources), tuple(targets))
    except ValueError:
        return None
    if equals(fg, compose(phi.as_rational_map(), gf)):
        return phi
    return None
