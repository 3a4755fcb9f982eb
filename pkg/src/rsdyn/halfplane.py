"""Odd half-plane-preserving maps, their normal form, and the lift across
the degree-two link map.

A map of the normal form

    f(z) = a z - b/z - sum_j B_j z / (z^2 - A_j),   a, b, A_j, B_j >= 0

is odd and preserves the upper half plane.  Writing f(z) = z h(z^2), the
shape is equivalent to h(w) = a - b/w - sum_j B_j / (w - A_j), which turns
recognition into ordinary partial fractions over the rationals.  The lift
produces the unique map upstairs of the link phi(z) = (z^2-1)/(z^2+1) that
satisfies phi o f = lift(f) o phi, and verifies that identity exactly before
returning.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional

from .maps import (
    Parity,
    RationalMap,
    compose,
    equals,
    even_decompose,
    identity_map,
    normalize,
    parity,
    pointwise_square,
)
from .polynomials import Polynomial
from .rationals import GaussianRational


def phi() -> RationalMap:
    """The link map (z^2 - 1)/(z^2 + 1)."""
    return normalize(Polynomial.of(-1, 0, 1), Polynomial.of(1, 0, 1))


PHI = phi()


@dataclass(frozen=True, slots=True)
class HalfPlaneParams:
    """Coefficients of the odd half-plane normal form.

    pairs holds (A_j, B_j) sorted ascending by A_j with distinct A_j.  A pole
    pair at the origin (A_j = 0) is the same term as b/z, so canonical values
    keep A_j > 0 and fold any origin residue into b.
    """

    a: Fraction
    b: Fraction
    pairs: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        object.__setattr__(
            self, "pairs", tuple((Fraction(aj), Fraction(bj)) for aj, bj in self.pairs)
        )
        if self.a < 0 or self.b < 0:
            raise ValueError("normal-form coefficients must be nonnegative")
        for aj, bj in self.pairs:
            if aj < 0 or bj < 0:
                raise ValueError("normal-form coefficients must be nonnegative")
        a_values = [aj for aj, _ in self.pairs]
        if sorted(a_values) != a_values or len(set(a_values)) != len(a_values):
            raise ValueError("pole locations must be sorted ascending and distinct")


def build_from_params(p: HalfPlaneParams) -> RationalMap:
    """Evaluate the normal form exactly; errors if the degree is below two."""
    z = identity_map()
    f = z * _const(p.a) - _const(p.b) / z
    for aj, bj in p.pairs:
        pole = normalize(Polynomial.of(0, Fraction(bj)), Polynomial.of(-Fraction(aj), 0, 1))
        f = f - pole
    if f.degree < 2:
        raise ValueError("not a semigroup generator: built map has degree < 2")
    return f


def _const(value: Fraction) -> RationalMap:
    return normalize(Polynomial.of(Fraction(value)), Polynomial.of(1))


def recognize_halfplane_form(f: RationalMap) -> Optional[HalfPlaneParams]:
    """Recover normal-form parameters, or None when f is not of the shape.

    Only rational pole data is representable: if z^2 - A divides the
    denominator for an irrational or negative A, recognition returns None.
    """
    if parity(f) is not Parity.ODD:
        return None
    h = even_decompose(f / identity_map())  # f(z) = z * h(z^2)

    q, r = h.num.divmod(h.den)
    if q.degree > 0:
        return None
    a_coeff = q.coeff(0)
    if a_coeff.im != 0 or a_coeff.re < 0:
        return None
    a = a_coeff.re

    try:
        den_coeffs = h.den.real_fraction_coeffs()
    except ValueError:
        return None
    roots = _rational_roots(den_coeffs)
    if roots is None or len(roots) != len(set(roots)):
        return None
    if any(rho < 0 for rho in roots):
        return None

    b = Fraction(0)
    pairs: list[tuple[Fraction, Fraction]] = []
    dden = h.den.derivative()
    for rho in roots:
        residue = h.num.evaluate(Fraction(rho)) / dden.evaluate(Fraction(rho))
        if residue.im != 0 or residue.re > 0:
            return None
        if rho == 0:
            b = -residue.re
        else:
            pairs.append((rho, -residue.re))
    pairs.sort(key=lambda ab: ab[0])

    try:
        params = HalfPlaneParams(a, b, tuple(pairs))
        rebuilt = build_from_params(params)
    except ValueError:
        return None
    if not equals(rebuilt, f):
        return None
    return params


def lift(f: RationalMap) -> RationalMap:
    """The map upstairs of the link: returns g with phi o f = g o phi.

    Exists exactly when f is odd.  Pipeline: square the value of f, pull the
    even square back through w = z^2, substitute w = (1+z)/(1-z), and wrap
    with (t-1)/(t+1).  The defining identity is re-verified exactly before
    returning; a verification failure is a bug, not bad input.
    """
    par = parity(f)
    if par is not Parity.ODD:
        raise ValueError(f"map is {par}, lift requires Odd")
    h = even_decompose(pointwise_square(f))
    cayley = normalize(Polynomial.of(1, 1), Polynomial.of(1, -1))  # (1+z)/(1-z)
    t = compose(h, cayley)
    lifted = normalize(t.num - t.den, t.num + t.den)
    if not verify_semiconjugacy(f, lifted, PHI):
        raise RuntimeError("constructed lift failed exact verification (internal error)")
    return lifted


def verify_semiconjugacy(lower: RationalMap, upper: RationalMap, link: RationalMap) -> bool:
    """True iff link o lower == upper o link as an exact identity."""
    return equals(compose(link, lower), compose(upper, link))


# -- rational root extraction ---------------------------------------------------


def _rational_roots(coeffs: list[Fraction]) -> Optional[list[Fraction]]:
    """All roots of the polynomial (ascending Fraction coefficients), with
    multiplicity, provided every root is rational; None otherwise."""
    if not coeffs:
        return None
    roots: list[Fraction] = []
    current = list(coeffs)
    while len(current) > 1:
        root = _find_one_rational_root(current)
        if root is None:
            return None
        roots.append(root)
        current = _deflate(current, root)
    return sorted(roots)


def _find_one_rational_root(coeffs: list[Fraction]) -> Optional[Fraction]:
    if coeffs[0] == 0:
        return Fraction(0)
    denom_lcm = 1
    for c in coeffs:
        denom_lcm = denom_lcm * c.denominator // _gcd(denom_lcm, c.denominator)
    ints = [int(c * denom_lcm) for c in coeffs]
    content = 0
    for v in ints:
        content = _gcd(content, abs(v))
    ints = [v // content for v in ints]
    for p in _divisors(abs(ints[0])):
        for q in _divisors(abs(ints[-1])):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if _eval_fraction_poly(coeffs, cand) == 0:
                    return cand
    return None


def _eval_fraction_poly(coeffs: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deflate(coeffs: list[Fraction], root: Fraction) -> list[Fraction]:
    # synthetic division by (x - root); remainder is zero by construction
    out = [Fraction(0)] * (len(coeffs) - 1)
    carry = Fraction(0)
    for k in range(len(coeffs) - 1, 0, -1):
        carry = coeffs[k] + carry * root
        out[k - 1] = carry
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a if a else 1


def _divisors(n: int) -> list[int]:
    if n == 0:
        return []
    small, large = [], []
    k = 1
    while k <= isqrt(n):
        if n % k == 0:
            small.append(k)
            if k != n // k:
                large.append(n // k)
        k += 1
    return small + large[::-1]
