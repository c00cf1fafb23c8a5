"""Order-one sum rules: closed forms and Green's-function traces.

Each supported (domain, combination) pair can be evaluated two ways. The
closed form uses exact rationals or 40-digit arithmetic. The trace
integrates a regularized kernel diagonal against the conformal density,
and the Dirichlet-minus-Neumann combination adds a double integral for
the Neumann zero mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import mpmath
import numpy as np

from .domains import DomainSpec, Kind, density_mass
from .errors import UnsupportedCombination
from .greens import Diagonal, rect_sa_trace_factors, regularized_diagonal
from .quadrature import (Exponential, PowerLaw, QuadratureSpec, Rule, integrate_1d,
                         integrate_4d_neumann_double, integrate_disk, sum_series)

EXTENDED_DPS = 40


class Combo(Enum):
    EVEN_MINUS_ODD_D = "even-odd-dirichlet"
    EVEN_MINUS_ODD_N = "even-odd-neumann"
    D_MINUS_N = "d-minus-n"

    @property
    def is_even_odd(self) -> bool:
        return self is not Combo.D_MINUS_N


class Method(Enum):
    CLOSED_FORM = "closed-form"
    TRACE = "trace"
    TRACE_PLUS_ZERO_MODE = "trace+zero-mode"


@dataclass(frozen=True)
class SumRuleTask:
    domain: DomainSpec
    combo: Combo

    def __post_init__(self):
        combo = self.combo if isinstance(self.combo, Combo) else Combo(self.combo)
        object.__setattr__(self, "combo", combo)
        if combo.is_even_odd and not self.domain.symmetry_axis:
            raise UnsupportedCombination("even-odd sum rules need a symmetry axis")


@dataclass(frozen=True)
class SumRuleResult:
    value: float
    method: Method
    error_estimate: float
    exact: Fraction | mpmath.mpf | None = None  # exact or extended-precision value
    metadata: dict = field(default_factory=dict, compare=False)


SUPPORTED = {
    Kind.DISK: {Combo.EVEN_MINUS_ODD_D, Combo.EVEN_MINUS_ODD_N, Combo.D_MINUS_N},
    Kind.RECTANGLE: {Combo.EVEN_MINUS_ODD_D},
    Kind.ANNULUS: {Combo.EVEN_MINUS_ODD_D},
    Kind.CARDIOID: {Combo.EVEN_MINUS_ODD_D, Combo.D_MINUS_N},
}


def _check_supported(task: SumRuleTask) -> None:
    if task.combo not in SUPPORTED[task.domain.kind]:
        raise UnsupportedCombination(
            f"{task.combo.value} is not available for {task.domain.kind.value}")


# --------------------------------------------------------------------------
# closed forms

def rectangle_closed_form(a, b, dps: int = EXTENDED_DPS) -> tuple[mpmath.mpf, int]:
    """a^2/12 + (a b / pi) sum_k log(1 - exp(-(2k+1) b pi / a)); returns (value, terms).

    The log series is the resummed form of -sum_n csch(pi b n / a) / (2 n).
    Sides given as doubles carry their binary rounding into the result
    (about 1e-17 for sqrt 2); pass mpmath numbers made at ``dps`` digits to
    get every digit.
    """
    with mpmath.workdps(dps):
        a, b = mpmath.mpf(a), mpmath.mpf(b)
        q = mpmath.exp(-b * mpmath.pi / a)
        series = sum_series(lambda k: mpmath.log1p(-q ** (2 * k + 1)), Exponential(),
                            target=mpmath.mpf(10) ** (-dps + 5), start=0, max_terms=10 ** 5)
        value = a * a / 12 + a * b / mpmath.pi * series.value
        return +value, series.terms_used


def annulus_closed_form(r0, dps: int = EXTENDED_DPS) -> mpmath.mpf:
    """(1 + r0^2 + (1 - r0^2) / log r0) / 4."""
    with mpmath.workdps(dps):
        r0 = mpmath.mpf(r0)
        return +((1 + r0 * r0 + (1 - r0 * r0) / mpmath.log(r0)) / 4)


def cardioid_even_odd(lam) -> Fraction:
    """(1 + lam^2) / (4 (1 + 2 lam^2)); exact when lam is a Fraction or decimal string."""
    lam = Fraction(lam)
    return (1 + lam * lam) / (4 * (1 + 2 * lam * lam))


def cardioid_first_term(lam) -> Fraction:
    """Density-weighted Dirichlet-minus-Neumann diagonal, -7 (3 + 10 lam^2) / (24 (1 + 2 lam^2))."""
    lam = Fraction(lam)
    return -7 * (3 + 10 * lam * lam) / (24 * (1 + 2 * lam * lam))


def _exact_lambda(lam: float) -> Fraction:
    # recover short decimals such as 0.3 exactly instead of their binary expansion
    return Fraction(repr(float(lam)))


def zero_mode_term(domain: DomainSpec, spec: QuadratureSpec | None = None) -> tuple[float, float]:
    """(1/A) times the double integral of Sigma G_N Sigma; returns (value, error)."""
    spec = spec or QuadratureSpec()
    res = integrate_4d_neumann_double(domain.density, spec)
    mass = density_mass(domain)
    return res.value / mass, res.error / mass


def sumrule_exact(task: SumRuleTask) -> SumRuleResult:
    """Closed-form value of a supported sum rule."""
    _check_supported(task)
    dom, combo = task.domain, task.combo
    if dom.kind is Kind.DISK:
        exact = {Combo.EVEN_MINUS_ODD_D: Fraction(1, 4), Combo.EVEN_MINUS_ODD_N: Fraction(1, 8),
                 Combo.D_MINUS_N: Fraction(-7, 8)}[combo]
        return SumRuleResult(float(exact), Method.CLOSED_FORM, 0.0, exact)
    if dom.kind is Kind.RECTANGLE:
        value, terms = rectangle_closed_form(dom.a, dom.b)
        return SumRuleResult(float(value), Method.CLOSED_FORM, 0.0, value, {"terms": terms})
    if dom.kind is Kind.ANNULUS:
        value = annulus_closed_form(dom.r0)
        return SumRuleResult(float(value), Method.CLOSED_FORM, 0.0, value)
    lam = _exact_lambda(dom.lam)
    if combo is Combo.EVEN_MINUS_ODD_D:
        exact = cardioid_even_odd(lam)
        return SumRuleResult(float(exact), Method.CLOSED_FORM, 0.0, exact)
    first = cardioid_first_term(lam)
    second, err = zero_mode_term(dom)
    return SumRuleResult(float(first) + second, Method.TRACE_PLUS_ZERO_MODE, err, None,
                         {"first": first, "second": second})


# --------------------------------------------------------------------------
# traces

_DIAGONAL = {
    Combo.EVEN_MINUS_ODD_D: Diagonal.SA_DIRICHLET,
    Combo.EVEN_MINUS_ODD_N: Diagonal.SA_NEUMANN,
    Combo.D_MINUS_N: Diagonal.D_MINUS_N,
}


def _rectangle_trace(a: float, b: float, spec: QuadratureSpec) -> tuple[float, float, int]:
    """Sum over n of the quadrature of each trace term, with power-law completion.

    Each term density is a product of an x and a y factor, so its integral
    is the product of two 1D quadratures.
    """
    quad_spec = QuadratureSpec(rule=Rule.GAUSS_LEGENDRE_COMPOSITE,
                               target_rel_error=max(spec.target_rel_error, 1e-14),
                               max_subdivisions=spec.max_subdivisions + 3)
    errors: dict[int, float] = {}

    def term(n: int) -> float:
        fx, fy = rect_sa_trace_factors(a, b, n)
        # one panel per half period in x; the y factor is a cusp at y = 0 of width a / (2 pi n)
        xbreaks = np.linspace(-a / 2, a / 2, n + 1)
        core = min(b / 2, 4 * a / (math.pi * n))
        ybreaks = sorted({-b / 2, -core, 0.0, core, b / 2})
        ix = integrate_1d(fx, xbreaks, quad_spec)
        iy = integrate_1d(fy, ybreaks, quad_spec)
        errors[n] = abs(ix.value) * iy.error + abs(iy.value) * ix.error
        return ix.value * iy.value

    series = sum_series(term, PowerLaw(2), target=max(spec.target_rel_error, 1e-13),
                        min_terms=8, max_terms=512)
    quad_err = sum(errors[n] for n in range(1, series.terms_used + 1))
    return series.value, series.tail_bound + quad_err, series.terms_used


def sumrule_trace(task: SumRuleTask, spec: QuadratureSpec | None = None) -> SumRuleResult:
    """Evaluate a sum rule by integrating the regularized diagonal."""
    _check_supported(task)
    spec = spec or QuadratureSpec()
    dom, combo = task.domain, task.combo
    if dom.kind is Kind.ANNULUS:
        raise UnsupportedCombination("the annulus trace is not implemented; use the closed form")
    if dom.kind is Kind.RECTANGLE:
        value, err, terms = _rectangle_trace(dom.a, dom.b, spec)
        return SumRuleResult(value, Method.TRACE, err, None, {"terms": terms})

    diagonal = _DIAGONAL[combo]
    density = dom.density

    def integrand(r, t):
        return density(r, t) * regularized_diagonal(diagonal, (r, t))

    res = integrate_disk(integrand, spec, even=True)
    if combo is not Combo.D_MINUS_N or dom.kind is Kind.DISK:
        # on the disk the zero-mode term vanishes: G_N integrates to zero
        method = Method.TRACE if combo is not Combo.D_MINUS_N else Method.TRACE_PLUS_ZERO_MODE
        return SumRuleResult(res.value, method, res.error)
    second, err = zero_mode_term(dom, spec)
    return SumRuleResult(res.value + second, Method.TRACE_PLUS_ZERO_MODE, res.error + err, None,
                         {"first": res.value, "second": second})


# --------------------------------------------------------------------------
# partial-wave zeta values at s = 1

def partial_wave_zeta(bc: str, l: int) -> Fraction:
    """Sum over m of 1/k_{lm}^2 for the zeros of J_l (Dirichlet) or J_l' (Neumann).

    Dirichlet: 1 / (4 (l + 1)). Neumann: 1/8 for l = 0 (zero at the origin
    excluded) and (l + 2) / (4 l (l + 1)) for l >= 1; the latter is an
    empirical formula, see :func:`partial_wave_zeta_status`.
    """
    if l < 0 or int(l) != l:
        raise ValueError("l must be a non-negative integer")
    l = int(l)
    if str(bc).lower().startswith("d"):
        return Fraction(1, 4 * (l + 1))
    if str(bc).lower().startswith("n"):
        return Fraction(1, 8) if l == 0 else Fraction(l + 2, 4 * l * (l + 1))
    raise ValueError(f"unknown boundary condition {bc!r}")


def partial_wave_zeta_status(bc: str, l: int) -> str:
    """"proven" or "conjectured" (the Neumann formula for l >= 1 is numerical)."""
    return "conjectured" if str(bc).lower().startswith("n") and l >= 1 else "proven"


def telescoped_d_minus_n(l_max: int | None = None) -> Fraction:
    """Disk D - N sum assembled from partial waves, each l >= 1 counted twice.

    With ``l_max`` the partial sum up to l_max is returned exactly; without it
    the limit, which telescopes to -7/8.
    """
    head = partial_wave_zeta("d", 0) - partial_wave_zeta("n", 0)
    if l_max is None:
        # 1/(4(l+1)) - (l+2)/(4l(l+1)) = -1/(2l(l+1)), summing to -1/2 over l >= 1
        return head + 2 * Fraction(-1, 2)
    return head + 2 * sum((partial_wave_zeta("d", l) - partial_wave_zeta("n", l)
                           for l in range(1, l_max + 1)), Fraction(0))
