"""Two-term Weyl models, tail estimates for truncated sums, sqrt(N) fits.

A model stores the area and perimeter coefficients of one spectrum (or one
symmetry class) and the boundary-condition sign, so that

    N(E) = A E / (4 pi) - s L sqrt(E) / (4 pi),   s = +1 Dirichlet, -1 Neumann.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from scipy.special import digamma, zeta

from .errors import IllConditionedFit, MismatchedLeadingOrder


@dataclass(frozen=True)
class WeylModel:
    """Area and perimeter coefficients of one spectrum or symmetry class.

    ``perimeter`` is an effective boundary length: a class whose boundary
    mixes Dirichlet and Neumann pieces gets their signed combination, so it
    may be smaller than the geometric perimeter.
    """

    area: float
    perimeter: float
    sign: int = 1
    index_offset: float = 0.0  # levels counted by N(E) but absent from the spectrum

    def __post_init__(self):
        if not self.area > 0:
            raise ValueError("Weyl model needs a positive area")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 (Dirichlet) or -1 (Neumann)")

    @property
    def alpha(self) -> float:
        return self.area / (4 * math.pi)

    @property
    def beta(self) -> float:
        """Signed coefficient of -sqrt(E) in the counting function."""
        return self.sign * self.perimeter / (4 * math.pi)


def class_models(domain, bc: str = "dirichlet", axis_length: float | None = None,
                 exclude_zero_mode: bool = True) -> tuple[WeylModel, WeylModel]:
    """Even and odd class models for a domain with one reflection axis.

    Each class lives on the half domain: half the area, half the outer wall,
    plus the axis with a Neumann (even) or Dirichlet (odd) condition. The
    constant Neumann mode is even, so it shifts the even-class index.
    """
    sign = 1 if bc.lower().startswith("d") else -1
    axis = domain.axis_length if axis_length is None else axis_length
    half_a, half_l = domain.area / 2, domain.perimeter / 2
    offset = 1.0 if (sign < 0 and exclude_zero_mode) else 0.0
    even = WeylModel(half_a, half_l - sign * axis, sign, offset)
    odd = WeylModel(half_a, half_l + sign * axis, sign)
    return even, odd


def full_model(domain, bc: str = "dirichlet", exclude_zero_mode: bool = True) -> WeylModel:
    """Model for the whole spectrum; the Neumann zero mode is excluded by default."""
    if bc.lower().startswith("d"):
        return WeylModel(domain.area, domain.perimeter, 1)
    return WeylModel(domain.area, domain.perimeter, -1, 1.0 if exclude_zero_mode else 0.0)


def counting_function(model: WeylModel, energy):
    """Two-term Weyl count N(E)."""
    energy = np.asarray(energy, dtype=float)
    return model.alpha * energy - model.beta * np.sqrt(energy)


def eigenvalue_estimate(model: WeylModel, n):
    """Invert N(E) = n + offset for E (positive root of the quadratic in sqrt E)."""
    nu = np.asarray(n, dtype=float) + model.index_offset
    b = model.beta
    s = (b + np.sqrt(b * b + 4 * model.alpha * nu)) / (2 * model.alpha)
    return s * s


@lru_cache(maxsize=1)
def _inverse_coefficients(order: int = 24) -> tuple[float, ...]:
    # 1/E = (alpha/nu) h(u), u = beta / sqrt(alpha nu), h(u) = exp(-2 asinh(u/2))
    with mpmath.workdps(30):
        coeffs = mpmath.taylor(lambda u: mpmath.exp(-2 * mpmath.asinh(u / 2)), 0, order)
    return tuple(float(c) for c in coeffs)


def _reciprocal_tail(model: WeylModel, n_start: int, skip_k0: bool) -> float:
    """sum_{n >= n_start} 1/E(n) with the k = 0 (divergent) term removed."""
    coeffs = _inverse_coefficients()
    a, b = model.alpha, model.beta
    x = n_start + model.index_offset
    total = 0.0
    for k, h in enumerate(coeffs):
        if k == 0 and skip_k0:
            continue
        if h == 0.0:
            continue
        total += h * b ** k * a ** (1 - k / 2) * zeta(1 + k / 2, x)
    return total


def tail_difference(model_plus: WeylModel, model_minus: WeylModel,
                    e_cut: float | None = None, n_cut: int | None = None) -> float:
    """Weyl estimate of the missing part of sum (1/E_n^+ - 1/E_n^-).

    With ``n_cut`` the partial sum is taken to cover indices n <= n_cut in
    each class; every later level is placed at the inverted two-term Weyl
    count and the reciprocal difference is summed exactly via its expansion
    in powers of n^-1/2 (Hurwitz zeta values). Close to the cut, where that
    expansion converges slowly, terms are summed directly.

    With ``e_cut`` the partial sum is taken to cover all levels below the
    energy cut; the tail is the integral of dN_+ - dN_- weighted by 1/E.
    """
    if (e_cut is None) == (n_cut is None):
        raise ValueError("give exactly one of e_cut or n_cut")
    if not math.isclose(model_plus.alpha, model_minus.alpha, rel_tol=1e-12):
        raise MismatchedLeadingOrder("area coefficients differ; the difference diverges")

    if e_cut is not None:
        if e_cut <= 0:
            raise ValueError("energy cut must be positive")
        return (model_minus.beta - model_plus.beta) / math.sqrt(e_cut)

    if n_cut < 0:
        raise ValueError("n_cut must be non-negative")
    # direct summation until |u| is small enough for a fast series
    u_max = 0.05
    n_series = n_cut + 1
    for m in (model_plus, model_minus):
        need = (m.beta / u_max) ** 2 / m.alpha - m.index_offset
        n_series = max(n_series, int(math.ceil(need)))
    direct = 0.0
    if n_series > n_cut + 1:
        n = np.arange(n_cut + 1, n_series, dtype=float)
        direct = float(np.sum(1.0 / eigenvalue_estimate(model_plus, n)
                              - 1.0 / eigenvalue_estimate(model_minus, n)))
    series = _reciprocal_tail(model_plus, n_series, True) - _reciprocal_tail(model_minus, n_series, True)
    # the k = 0 terms alpha/nu cancel unless the index offsets differ
    shift = model_minus.index_offset - model_plus.index_offset
    if shift:
        a = model_plus.alpha
        series += a * (digamma(n_series + model_minus.index_offset)
                       - digamma(n_series + model_plus.index_offset))
    return direct + series


def midpoint_energy_cut(model_plus: WeylModel, model_minus: WeylModel, n: int) -> float:
    """Energy at which the Weyl count difference N_+ - N_- reaches n + 1/2.

    Used for partial sums cut in energy: the cut is placed halfway between
    the n-th and (n+1)-th levels of the difference spectrum.
    """
    slope = model_minus.beta - model_plus.beta
    if slope <= 0:
        raise ValueError("count difference does not grow with energy")
    return ((n + 0.5) / slope) ** 2


def extrapolate_sqrt(partial_sums) -> tuple[float, float]:
    """Least-squares fit S_N = S_inf - c / sqrt(N); returns (S_inf, c)."""
    data = np.asarray(partial_sums, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] < 100:
        raise IllConditionedFit("need at least 100 (N, S_N) pairs")
    n, s = data[:, 0], data[:, 1]
    if np.any(n <= 0):
        raise IllConditionedFit("N must be positive")
    x = 1.0 / np.sqrt(n)
    # centre the regressor; an uncentred design is badly conditioned for large N
    xm = x.mean()
    centred = np.column_stack([np.ones_like(x), -(x - xm)])
    if np.ptp(x) <= 1e-12 * xm:
        raise IllConditionedFit("N values too close together to separate S_inf and c")
    (intercept, c), *_ = np.linalg.lstsq(centred, s, rcond=None)
    s_inf = intercept + c * xm
    return float(s_inf), float(c)
