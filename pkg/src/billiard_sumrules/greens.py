"""Closed-form Green's kernels on the reference regions.

Points on the unit disk are ``(r, theta)`` pairs; every function broadcasts
over array-valued coordinates. Kernels are for the negative Laplacian, so
each one behaves like ``-log|p1 - p2| / (2 pi)`` at coincidence.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import CoincidentPoints, OnSymmetryAxis, PointOutsideReference

FOUR_PI = 4.0 * np.pi

# Weight of the image logarithm in the Neumann kernel. 1/(4 pi) is the value
# that satisfies the Neumann condition and reproduces the known diagonal
# limits; a weight of 1/(2 pi) appears in some printed forms of this kernel.
NEUMANN_IMAGE_WEIGHT = 1.0 / FOUR_PI


class Diagonal(Enum):
    D_MINUS_N = "d-minus-n"
    SA_DIRICHLET = "sa-dirichlet"
    SA_NEUMANN = "sa-neumann"


def _coords(p):
    r, t = p
    return np.asarray(r, dtype=float), np.asarray(t, dtype=float)


def _check_inside(r):
    if np.any(r > 1.0 + 1e-15) or np.any(r < 0):
        raise PointOutsideReference("points must lie in the closed unit disk")


def _distances(r1, t1, r2, t2):
    """Squared distance between the points and between p1 and the image of p2.

    Written with sin^2 of the half angle so that both stay accurate when the
    points nearly coincide.
    """
    s2 = np.sin(0.5 * (t1 - t2)) ** 2
    rr = r1 * r2
    d_direct = (r1 - r2) ** 2 + 4.0 * rr * s2
    d_image = (1.0 - rr) ** 2 + 4.0 * rr * s2
    return d_direct, d_image


def disk_green_dirichlet(p1, p2):
    """Dirichlet Green's function of the unit disk."""
    r1, t1 = _coords(p1)
    r2, t2 = _coords(p2)
    _check_inside(r1)
    _check_inside(r2)
    d_direct, d_image = _distances(r1, t1, r2, t2)
    if np.any(d_direct == 0):
        raise CoincidentPoints("the Dirichlet kernel diverges at coincident points")
    return (np.log(d_image) - np.log(d_direct)) / FOUR_PI


def disk_green_neumann(p1, p2, image_weight: float = NEUMANN_IMAGE_WEIGHT):
    """Regularized Neumann Green's function of the unit disk.

    Satisfies -Laplace G = delta - 1/pi with zero normal derivative on the
    rim, and integrates to zero against the constant mode.
    """
    r1, t1 = _coords(p1)
    r2, t2 = _coords(p2)
    _check_inside(r1)
    _check_inside(r2)
    d_direct, d_image = _distances(r1, t1, r2, t2)
    if np.any(d_direct == 0):
        raise CoincidentPoints("the Neumann kernel diverges at coincident points")
    return (-np.log(d_direct) / FOUR_PI - image_weight * np.log(d_image)
            + (r1 ** 2 + r2 ** 2) / FOUR_PI - 3.0 / (8.0 * np.pi))


def reflect(p):
    """Mirror image of a disk point about the horizontal axis."""
    r, t = p
    return r, -np.asarray(t, dtype=float)


def symmetric_part(kernel, p1, p2):
    """Even-class projection (1/4)[G + G(p1*,p2) + G(p1,p2*) + G(p1*,p2*)]."""
    q1, q2 = reflect(p1), reflect(p2)
    return 0.25 * (kernel(p1, p2) + kernel(q1, p2) + kernel(p1, q2) + kernel(q1, q2))


def antisymmetric_part(kernel, p1, p2):
    """Odd-class projection (1/4)[G - G(p1*,p2) - G(p1,p2*) + G(p1*,p2*)]."""
    q1, q2 = reflect(p1), reflect(p2)
    return 0.25 * (kernel(p1, p2) - kernel(q1, p2) - kernel(p1, q2) + kernel(q1, q2))


def sa_difference(kernel, p1, p2):
    """Symmetric minus antisymmetric projection; finite at coincidence."""
    q1, q2 = reflect(p1), reflect(p2)
    return 0.5 * (kernel(q1, p2) + kernel(p1, q2))


def kernel_combination(combo: Diagonal, p1, p2):
    """Two-point kernel combination whose coincident limit is finite."""
    if combo is Diagonal.D_MINUS_N:
        return disk_green_dirichlet(p1, p2) - disk_green_neumann(p1, p2)
    if combo is Diagonal.SA_DIRICHLET:
        return sa_difference(disk_green_dirichlet, p1, p2)
    if combo is Diagonal.SA_NEUMANN:
        return sa_difference(disk_green_neumann, p1, p2)
    raise ValueError(f"unknown combination {combo!r}")


def regularized_diagonal(combo: Diagonal, point):
    """Coincident-point limit of :func:`kernel_combination`.

    The SA combinations carry an integrable log singularity on the symmetry
    axis (sin theta = 0), where they raise OnSymmetryAxis.
    """
    r, t = _coords(point)
    if np.any(r >= 1.0) or np.any(r < 0):
        raise PointOutsideReference("diagonal limits need points strictly inside the disk")
    r2 = r * r
    if combo is Diagonal.D_MINUS_N:
        return 3.0 / (8.0 * np.pi) - r2 / (2.0 * np.pi) + np.log1p(-r2) / np.pi
    axis = 4.0 * r2 * np.sin(t) ** 2
    if np.any(axis == 0):
        raise OnSymmetryAxis("SA diagonal is singular on the symmetry axis")
    # r^4 - 2 r^2 cos(2 theta) + 1 written without cancellation
    image = (1.0 - r2) ** 2 + axis
    if combo is Diagonal.SA_DIRICHLET:
        return (np.log(image) - np.log(axis)) / FOUR_PI
    if combo is Diagonal.SA_NEUMANN:
        return -(np.log(axis) + np.log(image)) / FOUR_PI + r2 / (2.0 * np.pi) - 3.0 / (8.0 * np.pi)
    raise ValueError(f"unknown combination {combo!r}")


def disk_neumann_fourier_mode(m: int, r1, r2):
    """Coefficient g_m of cos(m (theta1 - theta2)) in the Neumann kernel."""
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    big = np.maximum(r1, r2)
    if m == 0:
        return -np.log(big) / (2.0 * np.pi) + (r1 ** 2 + r2 ** 2) / FOUR_PI - 3.0 / (8.0 * np.pi)
    small = np.minimum(r1, r2)
    ratio = np.divide(small, big, out=np.zeros_like(big * small), where=big > 0)
    return (ratio ** m + (r1 * r2) ** m) / (2.0 * np.pi * m)


# --------------------------------------------------------------------------
# rectangle even/odd trace

def rect_sa_trace_factors(a: float, b: float, n: int):
    """The n-th trace term density as a product ``fx(x) * fy(y)``.

    The rectangle is centred, x in [-a/2, a/2], y in [-b/2, b/2]; parity is
    with respect to the horizontal axis y = 0.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    z = np.pi * b * n / a

    def fx(x):
        x = np.asarray(x, dtype=float)
        return np.sin(np.pi * n * (a + 2.0 * x) / (2.0 * a)) ** 2 / (np.pi * n)

    def fy(y):
        w = np.pi * n * (b - 2.0 * np.abs(np.asarray(y, dtype=float))) / a
        # csch(z) (cosh(w) - 1) without overflow, 0 <= w <= z
        return (np.exp(w - z) + np.exp(-w - z) - 2.0 * np.exp(-z)) / (-np.expm1(-2.0 * z))

    return fx, fy


def rect_sa_trace_integrand(a: float, b: float, n: int, x, y):
    """n-th term of the even-minus-odd Dirichlet trace density on the rectangle."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(np.abs(x) > a / 2 * (1 + 1e-15)) or np.any(np.abs(y) > b / 2 * (1 + 1e-15)):
        raise PointOutsideReference("point outside the rectangle")
    fx, fy = rect_sa_trace_factors(a, b, n)
    return fx(x) * fy(y)


def rect_sa_trace_term(a: float, b: float, n: int) -> float:
    """Closed-form x,y integral of :func:`rect_sa_trace_integrand`."""
    z = np.pi * b * n / a
    csch = 2.0 * np.exp(-z) / (-np.expm1(-2.0 * z))
    return a * a / (2.0 * np.pi ** 2 * n * n) - a * b * csch / (2.0 * np.pi * n)
