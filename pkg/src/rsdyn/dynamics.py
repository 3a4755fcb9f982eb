"""Floating-point dynamics on the Riemann sphere.

Full preimages via all-roots polynomial solving, chaos-game backward orbits
approximating Julia sets of finitely generated semigroups, repelling fixed
points of composition words, pixel-closure saturation approximating the
completely invariant Julia set, and the spherical Hausdorff metric between
point clouds.

Exact maps come in from the algebra layer; coefficients are converted to
complex doubles once per run and all iteration happens in floating point.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from .maps import RationalMap, compose
from .polynomials import Polynomial
from .raster import RasterGrid, Resolution, Window, point_indices, rasterize_points
from .sphere import INFINITY, SpherePoint, embed_xyz, is_infinity, spherical_dist

#: Default chaos-game start; off the real line and off every paper example's
#: exceptional set.
DEFAULT_START: complex = 0.37 + 0.19j

#: Residual acceptance for the root solver, relative to coefficient size.
_ROOT_RESIDUAL_FACTOR = 1e-10
_MAX_POLISH_ITERATIONS = 500


class RootSolveError(RuntimeError):
    """Raised when polished roots still violate the residual bound."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


@dataclass(slots=True)
class PointCloud:
    """Finite sample of a sphere set: finite points plus an infinity tally."""

    finite: np.ndarray
    n_infinite: int = 0
    label: str = ""

    def __post_init__(self) -> None:
        self.finite = np.asarray(self.finite, dtype=np.complex128).ravel()

    def __len__(self) -> int:
        return self.finite.size + self.n_infinite

    def points(self) -> list[SpherePoint]:
        out: list[SpherePoint] = list(self.finite)
        out.extend([INFINITY] * self.n_infinite)
        return out


@dataclass(frozen=True, slots=True)
class SemigroupSpec:
    """Generators plus every numerical budget a run needs."""

    generators: tuple[RationalMap, ...]
    seed: int = 42
    orbit_length: int = 100_000
    burn_in: int = 100
    word_length_max: int = 4
    window: Window = Window(0.0, 0.0, 5.0, 5.0)
    resolution: Resolution = Resolution(400, 400)

    def __post_init__(self) -> None:
        if not self.generators:
            raise ValueError("semigroup needs at least one generator")
        for g in self.generators:
            if g.degree < 2:
                raise ValueError("semigroup generators must have degree >= 2")
        if self.orbit_length <= 0 or self.burn_in < 0 or self.word_length_max <= 0:
            raise ValueError("budgets must be positive")
        if self.burn_in >= self.orbit_length:
            raise ValueError("burn_in must be smaller than orbit_length")


# -- float compilation of exact maps -------------------------------------------


class _FloatMap:
    """Float-coefficient view of a RationalMap, padded to sphere degree."""

    __slots__ = ("num", "den", "num_pad", "den_pad", "deg", "deg_num", "deg_den")

    def __init__(self, f: RationalMap):
        self.num = np.array(f.num.to_complex_coeffs(), dtype=np.complex128)
        self.den = np.array(f.den.to_complex_coeffs(), dtype=np.complex128)
        self.deg = f.degree
        self.deg_num = f.num.degree
        self.deg_den = f.den.degree
        self.num_pad = np.zeros(self.deg + 1, dtype=np.complex128)
        self.num_pad[: self.num.size] = self.num
        self.den_pad = np.zeros(self.deg + 1, dtype=np.complex128)
        self.den_pad[: self.den.size] = self.den

    def at_infinity(self) -> SpherePoint:
        if self.deg_num > self.deg_den:
            return INFINITY
        if self.deg_num < self.deg_den:
            return 0j
        return complex(self.num[-1] / self.den[-1])

    def apply(self, z: SpherePoint) -> SpherePoint:
        if is_infinity(z):
            return self.at_infinity()
        n = _horner(self.num, z)
        d = _horner(self.den, z)
        if d == 0:
            return INFINITY
        v = n / d
        if cmath.isfinite(v):
            return v
        return INFINITY

    def apply_array(self, z: np.ndarray) -> np.ndarray:
        """Vectorized evaluation; poles and overflow come out non-finite."""
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return _horner_array(self.num, z) / _horner_array(self.den, z)


def _horner(coeffs: np.ndarray, z: complex) -> complex:
    acc = 0j
    for c in coeffs[::-1]:
        acc = acc * z + c
    return complex(acc)


def _horner_array(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(z)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


# -- all-roots solving ----------------------------------------------------------


def _roots_with_polish(coeffs: np.ndarray) -> np.ndarray:
    """All roots of an ascending-coefficient polynomial (degree >= 1 after
    stripping exact-zero leading terms), polished to the residual bound."""
    deg = coeffs.size - 1
    if deg == 1:
        return np.array([-coeffs[0] / coeffs[1]])
    if deg == 2:
        return np.array(_quadratic_roots(coeffs[2], coeffs[1], coeffs[0]))
    roots = np.roots(coeffs[::-1])
    scale = _ROOT_RESIDUAL_FACTOR * np.abs(coeffs).max()
    dcoeffs = coeffs[1:] * np.arange(1, coeffs.size)
    budget = _MAX_POLISH_ITERATIONS
    out = []
    worst = 0.0
    for z in roots:
        z = complex(z)
        for _ in range(budget):
            p = _horner(coeffs, z)
            bound = scale * max(1.0, abs(z)) ** deg
            if abs(p) <= bound:
                break
            dp = _horner(dcoeffs, z)
            if dp == 0:
                break
            z -= p / dp
            budget -= 1
        p = _horner(coeffs, z)
        bound = scale * max(1.0, abs(z)) ** deg
        if abs(p) > bound:
            worst = max(worst, abs(p) / max(bound, 1e-300))
        out.append(z)
    if worst > 0.0:
        raise RootSolveError("root solver failed residual acceptance", worst)
    return np.array(out)


def _quadratic_roots(a: complex, b: complex, c: complex) -> tuple[complex, complex]:
    """Stable closed form for a z^2 + b z + c with a != 0."""
    sq = cmath.sqrt(b * b - 4 * a * c)
    if b.real * sq.real + b.imag * sq.imag >= 0:
        s = sq
    else:
        s = -sq
    q = -(b + s) / 2
    if q == 0:
        return 0j, -b / a
    return q / a, c / q


def _strip_leading_zeros(coeffs: np.ndarray) -> np.ndarray:
    n = coeffs.size
    while n > 0 and coeffs[n - 1] == 0:
        n -= 1
    return coeffs[:n]


def _preimage_points(fm: _FloatMap, w: SpherePoint) -> tuple[np.ndarray, int]:
    """(finite preimages, count at infinity); total equals the sphere degree."""
    if is_infinity(w):
        poly = _strip_leading_zeros(fm.den)
        n_inf = max(fm.deg_num - fm.deg_den, 0)
    else:
        poly = _strip_leading_zeros(fm.num_pad - w * fm.den_pad)
        n_inf = fm.deg + 1 - poly.size
    if poly.size <= 1:
        return np.empty(0, dtype=np.complex128), n_inf
    return _roots_with_polish(poly), n_inf


def preimages(f: RationalMap, w: SpherePoint, tol: float = 1e-9) -> list[SpherePoint]:
    """The full solution set of f(z) = w, with multiplicity (degree many).

    Every finite solution is checked to satisfy spherical_dist(f(z), w) <= tol;
    a violation raises RootSolveError carrying the worst residual.
    """
    if f.degree < 1:
        raise ValueError("preimages requires a map of degree >= 1")
    fm = _FloatMap(f)
    finite, n_inf = _preimage_points(fm, w)
    worst = 0.0
    for z in finite:
        worst = max(worst, spherical_dist(fm.apply(complex(z)), w))
    if worst > tol:
        raise RootSolveError("preimage residual exceeds tolerance", worst)
    out: list[SpherePoint] = [complex(z) for z in finite]
    out.extend([INFINITY] * n_inf)
    return out


# -- chaos game -----------------------------------------------------------------


def _walker_rng(seed: int, walker: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, walker))))


def _is_exceptional_start(gens: list[_FloatMap], z0: SpherePoint) -> bool:
    """True when the full backward orbit of z0 collapses to z0 over 5 steps."""
    current: list[SpherePoint] = [z0]
    for _ in range(5):
        nxt: list[SpherePoint] = []
        for z in current:
            for fm in gens:
                finite, n_inf = _preimage_points(fm, z)
                nxt.extend(complex(v) for v in finite)
                nxt.extend([INFINITY] * min(n_inf, 1))
        for p in nxt:
            if spherical_dist(p, z0) > 1e-12:
                return False
        current = [z0]
    return True


def random_backward_orbit(
    spec: SemigroupSpec, z0: SpherePoint = DEFAULT_START, workers: int = 1
) -> PointCloud:
    """Chaos game: walk random preimage branches, recording after burn-in.

    Each step picks a generator uniformly, then one of its degree-many
    preimages of the current point uniformly with multiplicity.  The result
    is deterministic given (seed, workers): walker k draws from a generator
    seeded by (seed, k) and clouds are concatenated in walker order.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    gens = [_FloatMap(g) for g in spec.generators]
    if _is_exceptional_start(gens, z0):
        raise ValueError("starting point is exceptional for every generator")

    n_record = spec.orbit_length - spec.burn_in
    shares = [n_record // workers + (1 if k < n_record % workers else 0) for k in range(workers)]

    finite_chunks: list[np.ndarray] = []
    n_infinite = 0
    for walker, share in enumerate(shares):
        if share == 0:
            continue
        rng = _walker_rng(spec.seed, walker)
        steps = spec.burn_in + share
        gen_choice = rng.integers(0, len(gens), size=steps)
        branch_u = rng.random(size=steps)
        chunk = np.empty(share, dtype=np.complex128)
        n_chunk = 0
        z: SpherePoint = z0
        for step in range(steps):
            fm = gens[gen_choice[step]]
            finite, n_inf = _preimage_points(fm, z)
            total = finite.size + n_inf
            pick = int(branch_u[step] * total)
            z = complex(finite[pick]) if pick < finite.size else INFINITY
            if step >= spec.burn_in:
                if is_infinity(z):
                    n_infinite += 1
                else:
                    chunk[n_chunk] = z
                    n_chunk += 1
        finite_chunks.append(chunk[:n_chunk])
    cloud = np.concatenate(finite_chunks) if finite_chunks else np.empty(0, dtype=np.complex128)
    return PointCloud(cloud, n_infinite, label=f"backward-orbit seed={spec.seed}")


# -- repelling fixed points -------------------------------------------------------


def _words(n_generators: int, max_length: int):
    for length in range(1, max_length + 1):
        yield from itertools.product(range(n_generators), repeat=length)


def _word_map(spec: SemigroupSpec, word: tuple[int, ...]) -> RationalMap:
    acc = spec.generators[word[0]]
    for j in word[1:]:
        acc = compose(acc, spec.generators[j])
    return acc


def repelling_fixed_points(spec: SemigroupSpec) -> PointCloud:
    """Repelling fixed points of all composition words up to word_length_max.

    Fixed points solve num(z) - z den(z) = 0; multipliers use the exact
    derivative of the composed word evaluated in floating point.  The fixed
    point at infinity is handled in the w = 1/z chart.  Points are deduped
    within spherical distance 1e-8.
    """
    z_poly = Polynomial.of(0, 1)
    kept: list[SpherePoint] = []
    for word in _words(len(spec.generators), spec.word_length_max):
        g = _word_map(spec, word)
        fixed_poly = g.num - z_poly * g.den
        coeffs = _strip_leading_zeros(np.array([c.to_complex() for c in fixed_poly.coeffs] or [0j]))
        dnum = np.array(g.num.derivative().to_complex_coeffs() or [0j])
        dden = np.array(g.den.derivative().to_complex_coeffs() or [0j])
        fm = _FloatMap(g)
        if coeffs.size > 1:
            for z in _roots_with_polish(coeffs):
                z = complex(z)
                d_val = _horner(fm.den, z)
                if d_val == 0:
                    continue  # pole, not a fixed point of the sphere map
                deriv = (_horner(dnum, z) * d_val - _horner(fm.num, z) * _horner(dden, z)) / (d_val * d_val)
                if abs(deriv) > 1.0:
                    kept.append(z)
        if fm.deg_num > fm.deg_den:
            mult_inf = 0.0 if fm.deg_num >= fm.deg_den + 2 else abs(fm.den[-1] / fm.num[-1])
            if mult_inf > 1.0:
                kept.append(INFINITY)

    deduped: list[SpherePoint] = []
    for p in kept:
        if all(spherical_dist(p, q) > 1e-8 for q in deduped):
            deduped.append(p)
    finite = np.array([p for p in deduped if not is_infinity(p)], dtype=np.complex128)
    n_inf = sum(1 for p in deduped if is_infinity(p))
    return PointCloud(finite, n_inf, label=f"repelling-fixed-points L<={spec.word_length_max}")


# -- forward orbits ---------------------------------------------------------------


def forward_orbit(f: RationalMap, z0: SpherePoint, n: int) -> list[SpherePoint]:
    """z0, f(z0), ..., f^n(z0) with projective handling near poles."""
    fm = _FloatMap(f)
    orbit = [z0]
    z = z0
    for _ in range(n):
        z = fm.apply(z)
        orbit.append(z)
    return orbit


# -- E-set saturation -------------------------------------------------------------


@dataclass(slots=True)
class SaturationResult:
    grid: RasterGrid
    rounds_used: int
    reached_fixpoint: bool


def _cell_samples(rows: np.ndarray, cols: np.ndarray, window: Window, resolution: Resolution) -> np.ndarray:
    """Center plus four corners of each cell, as complex points."""
    dx = window.width / resolution.width
    dy = window.height / resolution.height
    x0 = window.x_min + cols * dx
    y0 = window.y_max - rows * dy  # top edge of the cell
    xs = [x0 + dx / 2, x0, x0 + dx, x0, x0 + dx]
    ys = [y0 - dy / 2, y0, y0, y0 - dy, y0 - dy]
    return np.concatenate([x + 1j * y for x, y in zip(xs, ys)])


def _batch_preimages(fm: _FloatMap, w: np.ndarray) -> np.ndarray:
    """Finite preimages of a batch of finite points (infinity dropped)."""
    if fm.deg == 2:
        a = fm.num_pad[2] - w * fm.den_pad[2]
        b = fm.num_pad[1] - w * fm.den_pad[1]
        c = fm.num_pad[0] - w * fm.den_pad[0]
        quad = a != 0
        out = []
        if quad.any():
            aq, bq, cq = a[quad], b[quad], c[quad]
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                sq = np.sqrt(bq * bq - 4 * aq * cq)
                flip = (bq.real * sq.real + bq.imag * sq.imag) < 0
                sq = np.where(flip, -sq, sq)
                q = -(bq + sq) / 2
                r1 = q / aq
                r2 = np.where(q != 0, cq / np.where(q != 0, q, 1), -bq / aq)
            out.extend((r1, r2))
        lin = (~quad) & (b != 0)
        if lin.any():
            out.append(-c[lin] / b[lin])
        if not out:
            return np.empty(0, dtype=np.complex128)
        return np.concatenate(out)
    chunks = []
    for w_scalar in w:
        finite, _ = _preimage_points(fm, complex(w_scalar))
        chunks.append(finite)
    return np.concatenate(chunks) if chunks else np.empty(0, dtype=np.complex128)


def saturate(spec: SemigroupSpec, seed_cloud: PointCloud, rounds: int) -> SaturationResult:
    """Close the pixel-occupancy set of the seed under forward images and full
    preimages of every generator until a fixpoint or the round budget.

    The output approximates the smallest closed set containing the seed that
    is completely invariant under each generator, clipped to the window.
    Occupancy is monotone nondecreasing by construction.
    """
    if len(seed_cloud) == 0:
        raise ValueError("saturation needs a nonempty seed cloud")
    window, resolution = spec.window, spec.resolution
    gens = [_FloatMap(g) for g in spec.generators]

    base = rasterize_points(seed_cloud.finite, seed_cloud.n_infinite, window, resolution)
    occupied = base.occupied()
    frontier = occupied.copy()
    rounds_used = 0
    fixpoint = not frontier.any()
    for _ in range(rounds):
        if not frontier.any():
            fixpoint = True
            break
        rows, cols = np.nonzero(frontier)
        samples = _cell_samples(rows, cols, window, resolution)
        produced = []
        for fm in gens:
            forward = fm.apply_array(samples)
            produced.append(forward[np.isfinite(forward)])
            produced.append(_batch_preimages(fm, samples))
        pts = np.concatenate(produced) if produced else np.empty(0, dtype=np.complex128)
        pts = pts[np.isfinite(pts)]
        r, c, inside = point_indices(pts, window, resolution)
        hit = np.zeros_like(occupied)
        hit[r[inside], c[inside]] = True
        frontier = hit & ~occupied
        occupied |= hit
        rounds_used += 1
    else:
        fixpoint = not frontier.any()

    grid = RasterGrid(window, resolution, occupied.astype(np.int64))
    return SaturationResult(grid, rounds_used, fixpoint)


def e_set_saturation(spec: SemigroupSpec, seed_cloud: PointCloud, rounds: int) -> RasterGrid:
    """Grid approximation of the completely invariant Julia set, from a seed."""
    return saturate(spec, seed_cloud, rounds).grid


# -- metrics and transport ---------------------------------------------------------


def hausdorff(a: PointCloud, b: PointCloud) -> float:
    """Symmetric spherical Hausdorff distance between two nonempty clouds."""
    if len(a) == 0 or len(b) == 0:
        raise ValueError("hausdorff requires nonempty clouds")
    pa = embed_xyz(a.finite, a.n_infinite)
    pb = embed_xyz(b.finite, b.n_infinite)
    if max(pa.shape[0], pb.shape[0]) < 2000:
        d = cdist(pa, pb)
        return float(max(d.min(axis=1).max(), d.min(axis=0).max()))
    d_ab = cKDTree(pb).query(pa, k=1)[0].max()
    d_ba = cKDTree(pa).query(pb, k=1)[0].max()
    return float(max(d_ab, d_ba))


def pushforward(cloud: PointCloud, k: RationalMap) -> PointCloud:
    """Apply k to every point of the cloud (floating, projective)."""
    fm = _FloatMap(k)
    vals = fm.apply_array(cloud.finite)
    den_vals = _horner_array(fm.den, cloud.finite)
    finite_mask = np.isfinite(vals) & (den_vals != 0)
    finite = vals[finite_mask]
    n_inf = int((~finite_mask).sum())
    if cloud.n_infinite:
        v_inf = fm.at_infinity()
        if is_infinity(v_inf):
            n_inf += cloud.n_infinite
        else:
            finite = np.concatenate([finite, np.full(cloud.n_infinite, v_inf, dtype=np.complex128)])
    return PointCloud(finite, n_inf, label=f"{cloud.label}|pushforward")


def rasterize(cloud: PointCloud, window: Window, resolution: Resolution) -> RasterGrid:
    """Occupancy counts of the cloud over the window; see raster module."""
    return rasterize_points(cloud.finite, cloud.n_infinite, window, resolution)


def segment_cloud(lo: float, hi: float, spacing: float = 1e-3, label: str = "") -> PointCloud:
    """Discretization of a real segment, used as a comparison oracle."""
    n = int(round((hi - lo) / spacing)) + 1
    pts = np.linspace(lo, hi, n).astype(np.complex128)
    return PointCloud(pts, 0, label or f"segment[{lo},{hi}]")
