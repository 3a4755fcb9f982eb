"""Points of the Riemann sphere and the chordal (spherical) metric.

A sphere point is either a finite ``complex`` or the singleton ``INFINITY``.
Infinity is a tag, never a large float, so downstream code can branch on it
exactly.  The chordal metric is computed through the stereographic embedding
onto the unit sphere in R^3, where it coincides with Euclidean distance; the
same embedding backs the Hausdorff machinery.
"""

from __future__ import annotations

import math
from typing import Union

import numpy as np


class _Infinity:
    """The point at infinity; a unique sentinel."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"


INFINITY = _Infinity()

SpherePoint = Union[complex, _Infinity]


def is_infinity(p: SpherePoint) -> bool:
    return p is INFINITY


def as_sphere_point(value: complex) -> SpherePoint:
    """Map non-finite floats (overflow, nan) to INFINITY, else return the complex."""
    if value is INFINITY:
        return INFINITY
    z = complex(value)
    if math.isfinite(z.real) and math.isfinite(z.imag):
        return z
    return INFINITY


def spherical_dist(p: SpherePoint, q: SpherePoint) -> float:
    """Chordal distance 2|p-q| / sqrt((1+|p|^2)(1+|q|^2)), range [0, 2]."""
    if p is INFINITY and q is INFINITY:
        return 0.0
    if p is INFINITY:
        p, q = q, p
    if q is INFINITY:
        # limit of the chordal formula as |q| -> oo
        return 2.0 / math.sqrt(1.0 + abs(p) ** 2)
    num = 2.0 * abs(p - q)
    if num == 0.0:
        return 0.0
    return num / math.sqrt((1.0 + abs(p) ** 2) * (1.0 + abs(q) ** 2))


def embed_xyz(finite: np.ndarray, n_infinite: int = 0) -> np.ndarray:
    """Stereographic embedding of points onto the unit 2-sphere in R^3.

    Chordal distance between sphere points equals Euclidean distance between
    their embeddings.  INFINITY maps to the north pole (0, 0, 1); one row is
    appended per n_infinite > 0 (multiplicity does not matter for distances).
    """
    z = np.asarray(finite, dtype=np.complex128)
    d = 1.0 + np.abs(z) ** 2
    xyz = np.empty((z.size + (1 if n_infinite > 0 else 0), 3), dtype=np.float64)
    xyz[: z.size, 0] = 2.0 * z.real / d
    xyz[: z.size, 1] = 2.0 * z.imag / d
    xyz[: z.size, 2] = (np.abs(z) ** 2 - 1.0) / d
    if n_infinite > 0:
        xyz[-1] = (0.0, 0.0, 1.0)
    return xyz
