"""Dense univariate polynomials over Gaussian rationals.

Coefficients are stored ascending by power of z with the trailing (leading)
coefficient nonzero; the zero polynomial is the empty coefficient tuple and
reports the sentinel degree -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .rationals import ONE, ZERO, GaussianRational, RationalLike, as_gaussian


def _trim(coeffs: Sequence[GaussianRational]) -> tuple[GaussianRational, ...]:
    n = len(coeffs)
    while n > 0 and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


@dataclass(frozen=True, slots=True)
class Polynomial:
    coeffs: tuple[GaussianRational, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _trim([as_gaussian(c) for c in self.coeffs]))

    @staticmethod
    def of(*coeffs: RationalLike) -> "Polynomial":
        """Build from ascending coefficients: of(c0, c1, ...) = c0 + c1 z + ..."""
        return Polynomial(tuple(as_gaussian(c) for c in coeffs))

    @staticmethod
    def monomial(k: int, coeff: RationalLike = 1) -> "Polynomial":
        c = as_gaussian(coeff)
        if not c:
            return Polynomial()
        return Polynomial((ZERO,) * k + (c,))

    # -- structure -----------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 as the zero-polynomial sentinel."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def leading(self) -> GaussianRational:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int) -> GaussianRational:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == ONE

    # -- ring operations ------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(tuple(self.coeff(k) + other.coeff(k) for k in range(n)))

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(tuple(out))

    def scale(self, factor: RationalLike) -> "Polynomial":
        f = as_gaussian(factor)
        return Polynomial(tuple(c * f for c in self.coeffs))

    def monic(self) -> "Polynomial":
        if not self.coeffs:
            raise ValueError("cannot make the zero polynomial monic")
        return self.scale(ONE / self.leading())

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative polynomial power")
        out = Polynomial.of(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- division ------------------------------------------------------------

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        """Exact field division self = q*other + r with deg r < deg other."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.degree < other.degree:
            return Polynomial(), self
        rem = list(self.coeffs)
        dq = self.degree - other.degree
        q = [ZERO] * (dq + 1)
        inv_lead = ONE / other.leading()
        for k in range(dq, -1, -1):
            c = rem[other.degree + k] * inv_lead
            q[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[j + k] = rem[j + k] - c * b
        return Polynomial(tuple(q)), Polynomial(tuple(rem[: other.degree]) if other.degree > 0 else ())

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[1]

    def divides_exactly(self, other: "Polynomial") -> bool:
        return other.divmod(self)[1].is_zero()

    # -- substitution and evaluation ------------------------------------------

    def evaluate(self, z: RationalLike) -> GaussianRational:
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def substitute(self, inner: "Polynomial") -> "Polynomial":
        """Horner substitution of a polynomial for z."""
        acc = Polynomial()
        for c in reversed(self.coeffs):
            acc = acc * inner + Polynomial.of(c)
        return acc

    def flip_sign(self) -> "Polynomial":
        """p(-z): negate odd-index coefficients."""
        return Polynomial(tuple(-c if k % 2 else c for k, c in enumerate(self.coeffs)))

    def derivative(self) -> "Polynomial":
        return Polynomial(tuple(c * k for k, c in enumerate(self.coeffs) if k > 0))

    def is_even_poly(self) -> bool:
        return all(not c for k, c in enumerate(self.coeffs) if k % 2 == 1)

    def is_odd_poly(self) -> bool:
        return all(not c for k, c in enumerate(self.coeffs) if k % 2 == 0)

    def halve_exponents(self) -> "Polynomial":
        """For even p, the h with h(z^2) = p(z)."""
        if not self.is_even_poly():
            raise ValueError("polynomial has odd-power terms; cannot halve exponents")
        return Polynomial(tuple(self.coeffs[k] for k in range(0, len(self.coeffs), 2)))

    def to_complex_coeffs(self) -> list[complex]:
        return [c.to_complex() for c in self.coeffs]

    def real_fraction_coeffs(self) -> list[Fraction]:
        """Coefficients as Fractions; raises if any has an imaginary part."""
        out = []
        for c in self.coeffs:
            if c.im != 0:
                raise ValueError("polynomial has non-real coefficients")
            out.append(c.re)
        return out

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Polynomial(0)"
        terms = [f"({c!r})z^{k}" for k, c in enumerate(self.coeffs) if c]
        return "Polynomial(" + " + ".join(terms) + ")"


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic greatest common divisor via the Euclidean algorithm.

    Raises ValueError when both inputs are zero (gcd undefined).
    """
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd undefined for two zero polynomials")
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def from_roots(roots: Iterable[RationalLike]) -> Polynomial:
    """Monic polynomial with the given exact roots."""
    out = Polynomial.of(1)
    for r in roots:
        out = out * Polynomial.of(-as_gaussian(r), 1)
    return out
