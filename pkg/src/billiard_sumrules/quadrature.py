"""Integration and summation engines.

Tanh-sinh (double exponential) rules carry the logarithmic endpoint
singularities that show up in every regularized trace; composite
Gauss-Legendre covers smooth integrands. Both are driven by level doubling,
and the difference between the last two levels is reported as the error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import NonConvergence


class Rule(Enum):
    GAUSS_LEGENDRE_COMPOSITE = "gauss-legendre"
    TANH_SINH = "tanh-sinh"


@dataclass(frozen=True)
class QuadratureSpec:
    rule: Rule = Rule.TANH_SINH
    target_rel_error: float = 1e-13
    max_subdivisions: int = 9  # maximum refinement level

    def __post_init__(self):
        if self.target_rel_error < 1e-14:
            raise ValueError("target_rel_error must be >= 1e-14")
        if self.max_subdivisions < 2:
            raise ValueError("max_subdivisions must be >= 2")


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    level: int

    def __iter__(self):
        yield self.value
        yield self.error


@dataclass(frozen=True)
class SeriesResult:
    value: object  # float or mpmath.mpf
    terms_used: int
    tail_bound: object


# --------------------------------------------------------------------------
# 1D node generators on [-1, 1]

@lru_cache(maxsize=32)
def tanh_sinh_nodes(level: int) -> tuple[np.ndarray, np.ndarray]:
    """Tanh-sinh abscissae and weights on [-1, 1] with step h = 2**-level.

    Nodes whose distance to +-1 underflows are dropped; callers additionally
    drop nodes that round onto an interval endpoint after affine mapping.
    """
    h = 2.0 ** (-level)
    t_max = 3.3  # 1 - x ~ 1e-24 here; weights are far below double eps
    k = np.arange(-int(t_max / h), int(t_max / h) + 1)
    t = k * h
    u = 0.5 * np.pi * np.sinh(t)
    x = np.tanh(u)
    w = h * 0.5 * np.pi * np.cosh(t) / np.cosh(u) ** 2
    keep = w > 1e-300
    return x[keep], w[keep]


@lru_cache(maxsize=32)
def gauss_legendre_nodes(level: int, points: int = 20) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre on [-1, 1] with 2**level panels."""
    panels = 2 ** level
    s, w = np.polynomial.legendre.leggauss(points)
    edges = np.linspace(-1.0, 1.0, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * s[None, :]).ravel()
    ww = (half[:, None] * w[None, :]).ravel()
    return x, ww


def _rule_nodes(rule: Rule, level: int):
    if rule is Rule.TANH_SINH:
        return tanh_sinh_nodes(level)
    return gauss_legendre_nodes(level)


def mapped_nodes(breaks: Sequence[float], rule: Rule, level: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights over consecutive intervals given by ``breaks``."""
    s, w = _rule_nodes(rule, level)
    xs, ws = [], []
    for a, b in zip(breaks[:-1], breaks[1:]):
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        x = mid + half * s
        inside = (x > a) & (x < b)
        xs.append(x[inside])
        ws.append(half * w[inside])
    return np.concatenate(xs), np.concatenate(ws)


def _start_level(rule: Rule) -> int:
    return 3 if rule is Rule.TANH_SINH else 0


def _converged(value: float, err: float, spec: QuadratureSpec, scale: float) -> bool:
    return err <= spec.target_rel_error * max(abs(value), scale * 1e-3, 1e-300)


def _floor_error(err: float, value: float, scale: float) -> float:
    # roundoff floor: the level difference can be accidentally ~0
    return max(err, 8 * np.finfo(float).eps * max(abs(value), scale))


# --------------------------------------------------------------------------
# 1D and 2D integration

def integrate_1d(f: Callable[[np.ndarray], np.ndarray], breaks: Sequence[float],
                 spec: QuadratureSpec = QuadratureSpec()) -> QuadResult:
    """Integrate a vectorized ``f`` over the union of intervals in ``breaks``.

    Interior breakpoints are where ``f`` may have integrable endpoint
    singularities or kinks.
    """
    prev = None
    for level in range(_start_level(spec.rule), spec.max_subdivisions + 1):
        x, w = mapped_nodes(breaks, spec.rule, level)
        fx = f(x)
        value = float(np.dot(w, fx))
        scale = float(np.dot(w, np.abs(fx)))
        if prev is not None:
            err = abs(value - prev)
            if _converged(value, err, spec, scale):
                return QuadResult(value, _floor_error(err, value, scale), level)
        prev = value
    raise NonConvergence(f"1D quadrature did not reach {spec.target_rel_error:g} "
                         f"(last change {err:.3g})")


def integrate_2d(f: Callable[[np.ndarray, np.ndarray], np.ndarray],
                 region: tuple[Sequence[float], Sequence[float]],
                 spec: QuadratureSpec = QuadratureSpec()) -> QuadResult:
    """Tensor-product integral of ``f(x, y)`` over a box.

    ``region`` is ``(x_breaks, y_breaks)``; singular lines must coincide with
    breakpoints so that the rule clusters nodes toward them. ``f`` is called
    once per level with broadcastable arrays of shapes (nx, 1) and (1, ny).
    """
    xb, yb = region
    prev = None
    err = math.inf
    for level in range(_start_level(spec.rule), spec.max_subdivisions + 1):
        x, wx = mapped_nodes(xb, spec.rule, level)
        y, wy = mapped_nodes(yb, spec.rule, level)
        if x.size * y.size > 2.5e7:
            break
        fxy = np.broadcast_to(f(x[:, None], y[None, :]), (x.size, y.size))
        inner = fxy @ wy
        value = float(np.dot(wx, inner))
        scale = float(np.dot(wx, np.abs(fxy) @ wy))
        if prev is not None:
            err = abs(value - prev)
            if _converged(value, err, spec, scale):
                return QuadResult(value, _floor_error(err, value, scale), level)
        prev = value
    raise NonConvergence(f"2D quadrature did not reach {spec.target_rel_error:g} "
                         f"(last change {err:.3g})")


def integrate_disk(f: Callable[[np.ndarray, np.ndarray], np.ndarray],
                   spec: QuadratureSpec = QuadratureSpec(),
                   even: bool = True) -> QuadResult:
    """Integrate ``f(r, theta)`` over the unit disk with area element r dr dtheta.

    With ``even=True`` the integrand must be even in theta; only [0, pi] is
    sampled. The symmetry axis theta in {0, pi} and the rim r = 1 are always
    interval endpoints, so log singularities there are handled.
    """
    def g(r, t):
        return r * f(r, t)

    if even:
        res = integrate_2d(g, ([0.0, 1.0], [0.0, 0.5 * np.pi, np.pi]), spec)
        return QuadResult(2 * res.value, 2 * res.error, res.level)
    return integrate_2d(g, ([0.0, 1.0], [0.0, 0.5 * np.pi, np.pi, 1.5 * np.pi, 2 * np.pi]), spec)


# --------------------------------------------------------------------------
# 4D double integral against the disk Neumann kernel

def density_fourier_modes(density: Callable[[np.ndarray, np.ndarray], np.ndarray],
                          r: np.ndarray, tol: float = 1e-15,
                          max_points: int = 4096) -> tuple[np.ndarray, float]:
    """Angular Fourier coefficients c_m(r), m = -M..M, of ``density(r, theta)``.

    Returns the coefficient array of shape (2M+1, *r.shape) ordered by m and
    a bound on the discarded coefficients. The angular grid doubles until
    the highest resolved modes are below ``tol`` relative to c_0.
    """
    n = 32
    while True:
        theta = 2 * np.pi * np.arange(n) / n
        vals = density(r[..., None], theta)
        c = np.fft.fft(vals, axis=-1) / n
        mag = np.abs(c).reshape(-1, n).max(axis=0)
        ref = max(mag[0], 1e-300)
        # highest frequencies alias; require them resolved before truncating
        if mag[n // 4: 3 * n // 4 + 1].max() <= tol * ref or n >= max_points:
            break
        n *= 2
    significant = np.nonzero(mag[: n // 2] > tol * ref)[0]
    m_max = int(significant.max()) if significant.size else 0
    neg = np.nonzero(mag[n // 2:] > tol * ref)[0]
    if neg.size:
        m_max = max(m_max, n // 2 - int(neg.min()))
    modes = np.arange(-m_max, m_max + 1)
    coeffs = np.moveaxis(c[..., modes % n], -1, 0)
    dropped = np.delete(mag, modes % n)
    return coeffs, float(dropped.max() if dropped.size else 0.0)


def integrate_4d_neumann_double(density: Callable[[np.ndarray, np.ndarray], np.ndarray],
                                spec: QuadratureSpec = QuadratureSpec()) -> QuadResult:
    """Double integral of density(p1) G_N(p1, p2) density(p2) over the unit disk twice.

    The disk Neumann kernel depends on the angles only through their
    difference, and each of its two logarithms has a known cosine series in
    that difference. Projecting the density onto angular Fourier modes
    turns the 4D integral with a diagonal log singularity into a finite sum
    of smooth 2D radial integrals over the triangle r2 < r1 (doubled by
    symmetry), which tanh-sinh resolves to near machine precision.
    """
    from .greens import disk_neumann_fourier_mode

    prev = None
    err = math.inf
    for level in range(_start_level(Rule.TANH_SINH), spec.max_subdivisions + 1):
        r1, w1 = mapped_nodes([0.0, 1.0], Rule.TANH_SINH, level)
        t, wt = mapped_nodes([0.0, 1.0], Rule.TANH_SINH, level)
        R1 = r1[:, None]
        R2 = R1 * t[None, :]
        c1, drop1 = density_fourier_modes(density, r1)
        c2, drop2 = density_fourier_modes(density, R2)
        m_max = (min(c1.shape[0], c2.shape[0]) - 1) // 2
        c1 = c1[(c1.shape[0] - 1) // 2 - m_max:(c1.shape[0] - 1) // 2 + m_max + 1]
        c2 = c2[(c2.shape[0] - 1) // 2 - m_max:(c2.shape[0] - 1) // 2 + m_max + 1]
        total = np.zeros_like(R2)
        for m in range(0, m_max + 1):
            g = disk_neumann_fourier_mode(m, R1, R2)
            if m == 0:
                prod = (c1[m_max][:, None] * c2[m_max]).real
            else:
                # modes +-m each carry half of the cos(m phi) coefficient
                prod = 0.5 * (c1[m_max - m][:, None] * c2[m_max + m]
                              + c1[m_max + m][:, None] * c2[m_max - m]).real
            total += g * prod
        jac = 2.0 * R1 * R2 * R1  # symmetry doubling, area elements, dr2 = r1 dt
        integrand = (2 * np.pi) ** 2 * jac * total
        value = float(w1 @ integrand @ wt)
        scale = float(w1 @ np.abs(integrand) @ wt)
        if prev is not None:
            err = abs(value - prev)
            if _converged(value, err, spec, scale):
                trunc = 4 * np.pi * max(drop1, drop2) * max(abs(c1).max(), 1e-300)
                return QuadResult(value, _floor_error(err, value, scale) + trunc, level)
        prev = value
    raise NonConvergence(f"4D Neumann double integral did not converge (last change {err:.3g})")


# --------------------------------------------------------------------------
# series summation

class SeriesKind:
    """Namespace for the two supported tail models."""


@dataclass(frozen=True)
class Exponential(SeriesKind):
    pass


@dataclass(frozen=True)
class PowerLaw(SeriesKind):
    p: float

    def __post_init__(self):
        if self.p <= 1:
            raise ValueError("power-law series need p > 1 to converge")


def _eval_terms(term, n: np.ndarray):
    try:
        vals = np.asarray(term(n), dtype=float)
        if vals.shape == n.shape:
            return vals
    except (TypeError, ValueError, IndexError):
        pass
    return np.array([float(term(int(k))) for k in n])


def sum_series(term: Callable, kind: SeriesKind, target: float = 1e-15,
               start: int = 1, max_terms: int = 10 ** 6, min_terms: int = 64) -> SeriesResult:
    """Sum ``term(n)`` for n >= start.

    Exponential: terms are accumulated until |term| < 1e-3 * target * |sum|;
    the tail is then bounded geometrically from the last term ratio. Works
    with mpmath numbers, so extended-precision series keep their precision.

    PowerLaw(p): partial sums at N0, 2 N0, 4 N0, ... are Richardson
    extrapolated assuming S - S_N ~ sum_j a_j N**-(p - 1 + j). The reported
    tail bound is the change produced by the last elimination step.
    """
    if isinstance(kind, Exponential):
        total = 0
        prev = None
        for i in range(max_terms):
            t = term(start + i)
            total = total + t
            if prev is not None and abs(t) < 1e-3 * target * max(abs(total), 1e-300):
                q = abs(t / prev) if prev != 0 else 0
                if q >= 1:
                    raise NonConvergence("series terms are not decreasing")
                bound = abs(t) * q / (1 - q)
                return SeriesResult(total, i + 1, bound)
            prev = t
        raise NonConvergence(f"exponential series not converged after {max_terms} terms")

    if isinstance(kind, PowerLaw):
        n_levels = int(math.floor(math.log2(max_terms / min_terms))) + 1
        if n_levels < 3:
            raise NonConvergence("too few terms for power-law extrapolation")
        n_top = min_terms * 2 ** (n_levels - 1)
        n = np.arange(start, start + n_top)
        vals = _eval_terms(term, n)
        csum = np.cumsum(vals)
        table: list[list[float]] = []
        best, bound = None, math.inf
        for j in range(n_levels):
            big_n = min_terms * 2 ** j
            row = [float(csum[big_n - 1])]
            for k in range(1, j + 1):
                factor = 2.0 ** (kind.p - 1 + (k - 1))
                row.append((factor * row[k - 1] - table[j - 1][k - 1]) / (factor - 1))
            table.append(row)
            if j >= 2:
                est = row[-1]
                change = abs(row[-1] - row[-2])
                if change < bound:
                    best, bound = est, change
                if change <= target * max(abs(est), 1e-300):
                    return SeriesResult(est, big_n, max(change, 4 * np.finfo(float).eps * abs(est)))
        return SeriesResult(best, n_top, max(bound, 4 * np.finfo(float).eps * abs(best)))

    raise TypeError(f"unknown series kind {kind!r}")
