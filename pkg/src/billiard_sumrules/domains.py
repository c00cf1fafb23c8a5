"""Supported domains as conformal images of a reference region.

The unit disk uses polar coordinates (r, theta); the reference rectangle is
centred, x in [-a/2, a/2] and y in [-b/2, b/2].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import integrate

from .errors import ParameterOutOfRange, PointOutsideReference
from .quadrature import QuadratureSpec, Rule, integrate_2d, integrate_disk


class Kind(Enum):
    DISK = "disk"
    RECTANGLE = "rectangle"
    ANNULUS = "annulus"
    CARDIOID = "cardioid"


class Reference(Enum):
    UNIT_DISK = "unit-disk"
    RECTANGLE = "rectangle"


@dataclass(frozen=True)
class ConformalDensity:
    """Jacobian |g'|^2 of the map from the reference region, as a callable."""

    kind: Kind
    lam: float = 0.0
    r0: float = 1.0

    def __call__(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        if self.kind is Kind.CARDIOID:
            lam = self.lam
            return (4 * lam * lam * u * u + 4 * lam * u * np.cos(v) + 1) / (2 * lam * lam + 1)
        if self.kind is Kind.ANNULUS:
            return self.r0 * np.exp(2 * u) * np.ones_like(v)
        return np.ones(np.broadcast_shapes(u.shape, v.shape))


@dataclass(frozen=True)
class DomainSpec:
    kind: Kind
    reference: Reference
    area: float
    perimeter: float
    symmetry_axis: bool
    axis_length: float  # length of the reflection axis inside the true domain
    density: ConformalDensity
    a: float | None = None  # rectangle sides (true or reference)
    b: float | None = None
    r0: float | None = None
    lam: float | None = None
    params: dict = field(default_factory=dict, compare=False)

    @property
    def label(self) -> str:
        if self.kind is Kind.RECTANGLE:
            return f"rectangle(a={self.a:g}, b={self.b:g})"
        if self.kind is Kind.ANNULUS:
            return f"annulus(r0={self.r0:g})"
        if self.kind is Kind.CARDIOID:
            return f"cardioid(lambda={self.lam:g})"
        return "disk"


def cardioid_map(z, lam: float):
    """Area-preserving map of the unit disk onto the cardioid-like region."""
    return (z + lam * z * z) / math.sqrt(1 + 2 * lam * lam)


def cardioid_perimeter(lam: float) -> float:
    """Arc length of the image of the unit circle, by adaptive quadrature."""
    scale = 1.0 / math.sqrt(1 + 2 * lam * lam)

    def speed(t):
        return math.sqrt(max(1 + 4 * lam * lam + 4 * lam * math.cos(t), 0.0)) * scale

    half, _ = integrate.quad(speed, 0.0, math.pi, epsabs=0, epsrel=1e-13, limit=200)
    return 2 * half


def make_domain(kind, **params) -> DomainSpec:
    """Build a :class:`DomainSpec`.

    Parameters by kind: rectangle ``a, b > 0``; annulus ``0 < r0 < 1``;
    cardioid ``0 <= lam <= 1/2`` (``lambda_`` is accepted as an alias).
    """
    kind = Kind(kind) if not isinstance(kind, Kind) else kind
    if kind is Kind.DISK:
        return DomainSpec(kind, Reference.UNIT_DISK, math.pi, 2 * math.pi, True, 2.0,
                          ConformalDensity(kind))
    if kind is Kind.RECTANGLE:
        a, b = float(params.get("a", 0)), float(params.get("b", 0))
        if not (a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b)):
            raise ParameterOutOfRange(f"rectangle sides must be positive, got a={a}, b={b}")
        # even/odd classes refer to the horizontal axis, which spans the width a
        return DomainSpec(kind, Reference.RECTANGLE, a * b, 2 * (a + b), True, a,
                          ConformalDensity(kind), a=a, b=b)
    if kind is Kind.ANNULUS:
        r0 = float(params.get("r0", -1))
        if not 0 < r0 < 1:
            raise ParameterOutOfRange(f"annulus radius ratio must satisfy 0 < r0 < 1, got {r0}")
        return DomainSpec(kind, Reference.RECTANGLE, math.pi * (1 - r0 * r0), 2 * math.pi * (1 + r0),
                          True, 2 * (1 - r0), ConformalDensity(kind, r0=r0),
                          a=-math.log(r0), b=2 * math.pi, r0=r0)
    if kind is Kind.CARDIOID:
        lam = float(params.get("lam", params.get("lambda_", -1)))
        if not 0 <= lam <= 0.5:
            raise ParameterOutOfRange(f"cardioid parameter must satisfy 0 <= lambda <= 1/2, got {lam}")
        axis = 2.0 / math.sqrt(1 + 2 * lam * lam)
        return DomainSpec(kind, Reference.UNIT_DISK, math.pi, cardioid_perimeter(lam), True, axis,
                          ConformalDensity(kind, lam=lam), lam=lam)
    raise ParameterOutOfRange(f"unsupported domain kind {kind!r}")


def density_at(domain: DomainSpec, point):
    """Conformal density at a point of the reference region."""
    u, v = (np.asarray(c, dtype=float) for c in point)
    if domain.reference is Reference.UNIT_DISK:
        if np.any(u < 0) or np.any(u > 1):
            raise PointOutsideReference("polar radius must lie in [0, 1]")
    else:
        if np.any(np.abs(u) > domain.a / 2) or np.any(np.abs(v) > domain.b / 2):
            raise PointOutsideReference("point outside the reference rectangle")
    return domain.density(u, v)


def density_mass(domain: DomainSpec) -> float:
    """Integral of the density over the reference region (the true area)."""
    spec = QuadratureSpec(rule=Rule.GAUSS_LEGENDRE_COMPOSITE, target_rel_error=1e-14)
    if domain.reference is Reference.UNIT_DISK:
        return integrate_disk(domain.density, spec).value
    a, b = domain.a, domain.b
    return integrate_2d(domain.density, ([-a / 2, a / 2], [-b / 2, b / 2]), spec).value
