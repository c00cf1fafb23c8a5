"""Eigenvalue spectra computed independently of the sum rules.

Rectangles are enumerated from their lattice of eigenvalues; the disk and
the annulus come from Bessel zeros; the cardioid-like family is solved by
Rayleigh-Ritz in the conformal frame, where the problem reads
-Laplace psi = E Sigma psi on the unit disk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy import linalg, special

from .errors import (BasisTooSmall, EigensolverFailure, ParameterOutOfRange,
                     RootBracketFailure)


class Symmetry(Enum):
    EVEN = "even"
    ODD = "odd"
    NONE = "none"


class BC(Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


def _bc(value) -> BC:
    if isinstance(value, BC):
        return value
    text = str(value).lower()
    if text.startswith("d"):
        return BC.DIRICHLET
    if text.startswith("n"):
        return BC.NEUMANN
    raise ParameterOutOfRange(f"unknown boundary condition {value!r}")


def _symmetry(value) -> Symmetry:
    if value is None:
        return Symmetry.NONE
    return value if isinstance(value, Symmetry) else Symmetry(str(value).lower())


class Entry(NamedTuple):
    index: int
    eigenvalue: float
    symmetry: Symmetry
    bc: BC
    rel_error_estimate: float


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues of one (bc, symmetry) class; the zero mode is never stored."""

    values: np.ndarray
    bc: BC
    symmetry: Symmetry
    rel_error: np.ndarray | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("eigenvalues must form a 1-D array")
        if np.any(values <= 0):
            raise ValueError("spectra hold positive eigenvalues only")
        if np.any(np.diff(values) < 0):
            raise ValueError("eigenvalues must be sorted ascending")
        object.__setattr__(self, "values", values)
        err = np.zeros_like(values) if self.rel_error is None else np.asarray(self.rel_error, float)
        object.__setattr__(self, "rel_error", err)

    def __len__(self) -> int:
        return self.values.size

    @property
    def entries(self) -> list[Entry]:
        return [Entry(i + 1, float(e), self.symmetry, self.bc, float(r))
                for i, (e, r) in enumerate(zip(self.values, self.rel_error))]

    def reciprocal_sums(self) -> np.ndarray:
        """Cumulative sums of 1/E_n."""
        return np.cumsum(1.0 / self.values)

    def counting(self, energy) -> np.ndarray:
        """Number of stored eigenvalues not exceeding ``energy``."""
        return np.searchsorted(self.values, np.asarray(energy, dtype=float), side="right")


def merge(first: Spectrum, second: Spectrum, count: int | None = None) -> Spectrum:
    """Union of two classes as one spectrum without symmetry label."""
    if first.bc is not second.bc:
        raise ValueError("cannot merge spectra with different boundary conditions")
    values = np.concatenate([first.values, second.values])
    errs = np.concatenate([first.rel_error, second.rel_error])
    order = np.argsort(values, kind="stable")[:count]
    return Spectrum(values[order], first.bc, Symmetry.NONE, errs[order])


# --------------------------------------------------------------------------
# Bessel zeros

@dataclass(frozen=True)
class J:
    order: int


@dataclass(frozen=True)
class Jprime:
    order: int


@dataclass(frozen=True)
class CrossProduct:
    order: int
    r0: float


@dataclass(frozen=True)
class BesselZeroTable:
    kind: J | Jprime | CrossProduct
    zeros: np.ndarray


def _functions(kind):
    """Return (f, f', start, spacing, residual scale) for a zero kind.

    The residual scale is |f'(x)| x, so that |f| / scale estimates the
    relative displacement of a computed root.
    """
    n = kind.order
    if n < 0:
        raise ParameterOutOfRange("Bessel order must be non-negative")
    if isinstance(kind, J):
        return (lambda x: special.jv(n, x), lambda x: special.jvp(n, x),
                max(float(n), 0.5), math.pi, lambda x: np.abs(special.jvp(n, x)) * x)
    if isinstance(kind, Jprime):
        def fpp(x):
            return -special.jvp(n, x) / x - (1.0 - (n / x) ** 2) * special.jv(n, x)
        return (lambda x: special.jvp(n, x), fpp, max(float(n), 0.5), math.pi,
                lambda x: np.abs(fpp(x)) * x)
    if isinstance(kind, CrossProduct):
        r0 = kind.r0
        if not 0 < r0 < 1:
            raise ParameterOutOfRange(f"cross-product zeros need 0 < r0 < 1, got {r0}")

        def f(k):
            return special.yv(n, k) * special.jv(n, k / r0) - special.jv(n, k) * special.yv(n, k / r0)

        def fp(k):
            return (special.yvp(n, k) * special.jv(n, k / r0)
                    + special.yv(n, k) * special.jvp(n, k / r0) / r0
                    - special.jvp(n, k) * special.yv(n, k / r0)
                    - special.jv(n, k) * special.yvp(n, k / r0) / r0)

        def scale(k):
            return np.abs(fp(k)) * k

        spacing = math.pi * r0 / (1 - r0)
        # eigenvalues of a partial wave exceed the disk's, so k / r0 > n
        start = r0 * n if n > 0 else 1e-3 * spacing
        return f, fp, start, spacing, scale
    raise TypeError(f"unknown zero kind {kind!r}")


def _polish(f, fp, lo, hi, flo):
    """Vectorised bracketed Newton iteration on [lo, hi] with f(lo) = flo."""
    lo, hi, flo = lo.copy(), hi.copy(), flo.copy()
    x = 0.5 * (lo + hi)
    for _ in range(100):
        fx = f(x)
        exact = fx == 0
        x_new = x - fx / fp(x)
        same = np.sign(fx) == np.sign(flo)
        lo = np.where(same, x, lo)
        flo = np.where(same, fx, flo)
        hi = np.where(same, hi, x)
        outside = ~((x_new > lo) & (x_new < hi)) | ~np.isfinite(x_new)
        x_new = np.where(outside, 0.5 * (lo + hi), x_new)
        x_new = np.where(exact, x, x_new)
        done = np.abs(x_new - x) <= 2 * np.finfo(float).eps * np.abs(x)
        x = x_new
        if np.all(done):
            break
    return x


def _sweep(kind, x_max: float, step_fraction: float = 0.4) -> np.ndarray:
    """All zeros of the given kind in (start, x_max], found by a sign-change sweep."""
    f, fp, start, spacing, scale = _functions(kind)
    step = step_fraction * spacing
    grid = np.arange(start, x_max + step, step)
    with np.errstate(over="ignore", invalid="ignore"):
        values = f(grid)
    if not np.all(np.isfinite(values)):
        raise RootBracketFailure(f"non-finite function values in the sweep for {kind}")
    exact = grid[:-1][values[:-1] == 0]
    idx = np.nonzero(values[:-1] * values[1:] < 0)[0]
    roots = _polish(f, fp, grid[idx], grid[idx + 1], values[idx]) if idx.size else np.empty(0)
    roots = np.sort(np.concatenate([roots, exact]))
    roots = roots[roots <= x_max]
    if roots.size:
        residual = np.abs(f(roots)) / np.maximum(scale(roots), 1e-300)
        if np.any(residual > 1e-12):
            raise RootBracketFailure(f"root polishing did not converge for {kind}")
    _check_gaps(roots, kind)
    return roots


def _check_gaps(roots: np.ndarray, kind) -> None:
    """A skipped zero shows up as a gap about twice as wide as both neighbours."""
    gaps = np.diff(roots)
    if gaps.size < 3:
        return
    inner = gaps[1:-1]
    if np.any(inner > 1.5 * np.maximum(gaps[:-2], gaps[2:])):
        raise RootBracketFailure(f"suspected missed zero in the sweep for {kind}")


def _mcmahon(kind, m: np.ndarray) -> np.ndarray:
    """Large-m zero estimates, used to size the sweep."""
    n = kind.order
    mu = 4.0 * n * n
    if isinstance(kind, J):
        beta = (m + 0.5 * n - 0.25) * math.pi
        return beta - (mu - 1) / (8 * beta)
    if isinstance(kind, Jprime):
        beta = (m + 0.5 * n - 0.75) * math.pi
        # J'_0 has its zero at the origin excluded, shifting the numbering
        if n == 0:
            beta = beta + math.pi
        return beta - (mu + 3) / (8 * beta)
    r0 = kind.r0
    return m * math.pi * r0 / (1 - r0) + n * r0


def bessel_zeros(kind, count: int, step_fraction: float = 0.4) -> BesselZeroTable:
    """The first ``count`` positive zeros of ``J(l)``, ``Jprime(l)`` or ``CrossProduct(l, r0)``.

    The sweep step is a fraction of the asymptotic spacing, so no zero can
    hide between grid points; the sweep is extended until enough zeros are
    found. ``Jprime(0)`` skips the zero at the origin.
    """
    if count < 1:
        raise ParameterOutOfRange("count must be at least 1")
    _, _, _, spacing, _ = _functions(kind)
    x_max = float(_mcmahon(kind, np.array([count + 2]))[0]) + 2 * spacing
    for _ in range(20):
        roots = _sweep(kind, x_max, step_fraction)
        if roots.size >= count:
            return BesselZeroTable(kind, roots[:count])
        x_max += (count - roots.size + 2) * spacing
    raise RootBracketFailure(f"could not locate {count} zeros for {kind}")


def zeros_below(kind, x_max: float) -> np.ndarray:
    """All zeros of the kind up to ``x_max``."""
    _, _, start, _, _ = _functions(kind)
    if x_max <= start:
        return np.empty(0)
    return _sweep(kind, x_max)


# --------------------------------------------------------------------------
# rectangle

def rectangle_spectrum(a: float, b: float, symmetry, count: int,
                       axis: str = "vertical") -> Spectrum:
    """Lowest Dirichlet eigenvalues of one parity class of an a x b rectangle.

    ``axis="vertical"`` classifies modes by parity in x (the axis x = 0),
    so even modes have odd quantum number along x. ``axis="horizontal"``
    uses parity in y instead.
    """
    if count < 1:
        raise ParameterOutOfRange("count must be at least 1")
    if not (a > 0 and b > 0):
        raise ParameterOutOfRange("rectangle sides must be positive")
    sym = _symmetry(symmetry)
    if sym is Symmetry.NONE:
        raise ParameterOutOfRange("rectangle spectra are computed per parity class")
    if axis not in ("vertical", "horizontal"):
        raise ParameterOutOfRange(f"axis must be 'vertical' or 'horizontal', got {axis!r}")
    # the parity direction gets quantum numbers 2j - 1 (even) or 2j (odd)
    p, q = (a, b) if axis == "vertical" else (b, a)
    offset = 1 if sym is Symmetry.EVEN else 0
    # Weyl estimate of the energy holding `count` levels, then enlarge until enough
    e_max = 8 * math.pi * count / (a * b) * 1.1 + 2 * math.pi * (a + b) * math.sqrt(count) / (a * b) + 50
    while True:
        n_par = np.arange(1, int(p * math.sqrt(e_max) / (2 * math.pi)) + 2)
        m_par = (2 * n_par - offset) / p
        m_par = m_par[m_par > 0]
        rest = e_max / math.pi ** 2 - m_par ** 2
        m_par, rest = m_par[rest > 0], rest[rest > 0]
        n_max = np.floor(q * np.sqrt(rest)).astype(int)
        if n_max.sum() >= count:
            break
        e_max *= 1.5
    rows = np.repeat(m_par ** 2, n_max)
    cols = np.concatenate([np.arange(1, k + 1) for k in n_max]) / q
    values = np.sort(math.pi ** 2 * (rows + cols ** 2))[:count]
    return Spectrum(values, BC.DIRICHLET, sym)


# --------------------------------------------------------------------------
# disk and annulus

def _class_orders(sym: Symmetry, n: int) -> bool:
    return sym is not Symmetry.ODD or n > 0


def _multiplicity(sym: Symmetry, n: int) -> int:
    if sym is Symmetry.NONE:
        return 1 if n == 0 else 2
    return 1 if _class_orders(sym, n) else 0


def _partial_wave_modes(kind_for_order, sym: Symmetry, count: int, k_guess: float):
    """Collect (order, k) pairs of the lowest ``count`` modes of a class."""
    k_max = k_guess
    while True:
        orders, ks = [], []
        n = 0
        while True:
            zeros = zeros_below(kind_for_order(n), k_max)
            if zeros.size == 0 and n > 2:
                break
            mult = _multiplicity(sym, n)
            for _ in range(mult):
                orders.append(np.full(zeros.size, n))
                ks.append(zeros)
            n += 1
        orders_arr = np.concatenate(orders) if orders else np.empty(0, int)
        ks_arr = np.concatenate(ks) if ks else np.empty(0)
        if ks_arr.size >= count:
            order = np.argsort(ks_arr, kind="stable")[:count]
            return orders_arr[order], ks_arr[order]
        k_max *= 1.25


def disk_modes(bc, symmetry, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Angular orders and wave numbers of the lowest disk modes of a class."""
    bc, sym = _bc(bc), _symmetry(symmetry)
    factory = J if bc is BC.DIRICHLET else Jprime
    share = 0.5 if sym is not Symmetry.NONE else 1.0
    # Weyl: N(k) ~ share * k^2 / 4 for the unit disk
    k_guess = math.sqrt(4 * count / share) + 2 * math.sqrt(math.sqrt(count)) + 4
    return _partial_wave_modes(factory, sym, count, k_guess)


def disk_spectrum(bc, symmetry, count: int) -> Spectrum:
    """Lowest eigenvalues of the unit disk in one class.

    cos(n theta) modes (including n = 0) are even, sin(n theta) modes odd;
    the Neumann zero mode is excluded.
    """
    if count < 1:
        raise ParameterOutOfRange("count must be at least 1")
    bc, sym = _bc(bc), _symmetry(symmetry)
    _, ks = disk_modes(bc, sym, count)
    return Spectrum(ks ** 2, bc, sym)


def annulus_spectrum(r0: float, symmetry, count: int) -> Spectrum:
    """Lowest Dirichlet eigenvalues of the annulus r0 < r < 1 in one class."""
    if not 0 < r0 < 1:
        raise ParameterOutOfRange(f"annulus needs 0 < r0 < 1, got {r0}")
    if count < 1:
        raise ParameterOutOfRange("count must be at least 1")
    sym = _symmetry(symmetry)
    share = 0.5 if sym is not Symmetry.NONE else 1.0
    area = math.pi * (1 - r0 * r0)
    e_guess = 4 * math.pi * count / (share * area) * 1.1 + 10
    _, ks = _partial_wave_modes(lambda n: CrossProduct(n, r0), sym, count, r0 * math.sqrt(e_guess))
    return Spectrum((ks / r0) ** 2, BC.DIRICHLET, sym)


# --------------------------------------------------------------------------
# cardioid-like family by Rayleigh-Ritz

def _radial_norm(bc: BC, n: np.ndarray, k: np.ndarray) -> np.ndarray:
    """Integral of J_n(k r)^2 r dr over [0, 1] at a Dirichlet or Neumann zero."""
    if bc is BC.DIRICHLET:
        return 0.5 * special.jv(n + 1, k) ** 2
    out = np.full(k.shape, 0.5)  # the constant mode
    nz = k > 0
    out[nz] = 0.5 * (1 - (n[nz] / k[nz]) ** 2) * special.jv(n[nz], k[nz]) ** 2
    return out


def overlap_matrix(lam: float, bc, symmetry, orders: np.ndarray, ks: np.ndarray) -> np.ndarray:
    """Overlap integrals of normalised disk modes weighted by the density.

    The density is 1 + 4 lam^2 r^2 + 4 lam r cos(theta) up to normalisation,
    so only equal angular orders (r^0 and r^2 terms) and orders differing by
    one (r cos theta term) couple. Radial integrals use Gauss-Legendre nodes
    enough to resolve the fastest oscillation exactly to rounding.
    """
    bc, sym = _bc(bc), _symmetry(symmetry)
    n_nodes = int(ks.max()) + 80
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    r = 0.5 * (x + 1)
    w = 0.5 * w
    phi = special.jv(orders[:, None], ks[:, None] * r[None, :])
    phi /= np.sqrt(_radial_norm(bc, orders, ks))[:, None]
    r0_int = (phi * (w * r)) @ phi.T
    r2_int = (phi * (w * r ** 3)) @ phi.T
    r1_int = (phi * (w * r ** 2)) @ phi.T

    same = orders[:, None] == orders[None, :]
    adjacent = np.abs(orders[:, None] - orders[None, :]) == 1
    n_i, n_j = orders[:, None], orders[None, :]
    ang_norm = np.where(orders == 0, 2 * math.pi, math.pi)
    # angular integral of cos(theta) times the two normalised angular factors
    sign = 1.0 if sym is Symmetry.EVEN else -1.0
    ang = 0.5 * math.pi * (adjacent + sign * ((n_i + n_j) == 1))
    ang = ang / np.sqrt(ang_norm[:, None] * ang_norm[None, :])
    m = np.where(same, r0_int + 4 * lam * lam * r2_int, 0.0) + 4 * lam * ang * r1_int
    m /= 1 + 2 * lam * lam
    return 0.5 * (m + m.T)


def _ritz_values(lam: float, bc: BC, sym: Symmetry, basis_size: int, count: int):
    orders, ks = disk_modes(bc, sym, basis_size - (1 if _has_zero_mode(bc, sym) else 0))
    if _has_zero_mode(bc, sym):
        orders = np.concatenate([[0], orders])
        ks = np.concatenate([[0.0], ks])
    mass = overlap_matrix(lam, bc, sym, orders, ks)
    stiff = np.diag(ks ** 2)
    skip = 1 if _has_zero_mode(bc, sym) else 0
    try:
        values = linalg.eigh(stiff, mass, eigvals_only=True,
                             subset_by_index=[0, count - 1 + skip])
    except (linalg.LinAlgError, ValueError) as exc:
        raise EigensolverFailure(str(exc)) from exc
    return values[skip:]


def _has_zero_mode(bc: BC, sym: Symmetry) -> bool:
    return bc is BC.NEUMANN and sym is not Symmetry.ODD


def cardioid_spectrum(lam: float, bc, symmetry, basis_size: int, count: int,
                      error_estimate: bool = True) -> Spectrum:
    """Lowest eigenvalues of the cardioid-like domain in one class.

    Rayleigh-Ritz in the lowest ``basis_size`` disk modes of the same
    boundary condition and parity. With ``symmetry=None`` both classes are
    solved with ``basis_size`` modes each and merged. The relative error
    estimate compares against a basis of half the size.
    """
    if not 0 <= lam <= 0.5:
        raise ParameterOutOfRange(f"cardioid parameter must satisfy 0 <= lambda <= 1/2, got {lam}")
    if count < 1:
        raise ParameterOutOfRange("count must be at least 1")
    bc, sym = _bc(bc), _symmetry(symmetry)
    if sym is Symmetry.NONE:
        even = cardioid_spectrum(lam, bc, Symmetry.EVEN, basis_size, count, error_estimate)
        odd = cardioid_spectrum(lam, bc, Symmetry.ODD, basis_size, count, error_estimate)
        return merge(even, odd, count)
    extra = 1 if _has_zero_mode(bc, sym) else 0
    if basis_size < 2 * (count + extra):
        raise BasisTooSmall(f"basis_size must be at least {2 * (count + extra)} for {count} eigenvalues")
    values = _ritz_values(lam, bc, sym, basis_size, count)
    rel = None
    if error_estimate:
        coarse = _ritz_values(lam, bc, sym, basis_size // 2, count)
        rel = np.abs(values - coarse) / values
    if np.any(values <= 0):
        raise EigensolverFailure("non-positive Ritz value; the overlap matrix is ill conditioned")
    return Spectrum(np.sort(values), bc, sym, rel)
