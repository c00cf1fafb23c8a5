"""Reference computations that do not go through the package's code paths."""

from __future__ import annotations

import math

import numpy as np
import sympy as sp
from scipy import optimize, special


def neumann_kernel_direct(r1, t1, r2, t2, image_weight=1 / (4 * math.pi)):
    """Neumann kernel written straight from the image construction, with cos of the angle."""
    c = np.cos(t1 - t2)
    direct = r1 ** 2 + r2 ** 2 - 2 * r1 * r2 * c
    image = r1 ** 2 * r2 ** 2 + 1 - 2 * r1 * r2 * c
    return (-np.log(direct) / (4 * math.pi) - image_weight * np.log(image)
            + (r1 ** 2 + r2 ** 2) / (4 * math.pi) - 3 / (8 * math.pi))


def cardioid_density(lam, r, t):
    return (4 * lam * lam * r * r + 4 * lam * r * np.cos(t) + 1) / (2 * lam * lam + 1)


def brute_force_zero_mode(lam: float, n: int) -> float:
    """(1/pi) times the double integral of Sigma G_N Sigma on offset tensor grids.

    The two points use Gauss-Legendre rules of different sizes in r and
    interleaved uniform grids in theta, so they never coincide; the error
    is O(1/n^2) from the logarithmic diagonal.
    """
    m = 2 * n
    x1, w1 = np.polynomial.legendre.leggauss(n)
    x2, w2 = np.polynomial.legendre.leggauss(n + 1)
    r1, w1, r2, w2 = (x1 + 1) / 2, w1 / 2, (x2 + 1) / 2, w2 / 2
    t1 = 2 * math.pi * np.arange(m) / m
    t2 = t1 + math.pi / m
    wt = 2 * math.pi / m

    def points(r, w, t):
        rr, tt = np.meshgrid(r, t, indexing="ij")
        ww = np.outer(w * r, np.full(t.size, wt)) * cardioid_density(lam, rr, tt)
        return rr.ravel(), tt.ravel(), ww.ravel()

    ra, ta, wa = points(r1, w1, t1)
    rb, tb, wb = points(r2, w2, t2)
    total = 0.0
    for i in range(0, ra.size, 400):
        k = neumann_kernel_direct(ra[i:i + 400, None], ta[i:i + 400, None], rb[None, :], tb[None, :])
        total += wa[i:i + 400] @ k @ wb
    return total / math.pi


def richardson_zero_mode(lam: float, sizes=(10, 20, 40)) -> float:
    """Two Richardson passes over grid doublings (errors scale as 1/n^2, then 1/n^4)."""
    vals = [brute_force_zero_mode(lam, n) for n in sizes]
    first = [(4 * b - a) / 3 for a, b in zip(vals, vals[1:])]
    if len(first) == 1:
        return first[0]
    return (16 * first[-1] - first[-2]) / 15


def sympy_zero_mode(lam):
    """Exact (1/pi) double integral of Sigma G_N Sigma for rational lam.

    The density has angular modes 0 and 1 only. Averaging the kernel over the
    angle difference gives the standard log expansions: the m = 0 part of
    log|p1 - p2|^2 is 2 log r_>, that of the image log vanishes inside the
    disk, and the cos(phi) parts are -(r_</r_>) and -(r1 r2).
    """
    r1, r2, L = sp.symbols("r1 r2 L", positive=True)
    lam = sp.Rational(lam)
    norm = 1 + 2 * lam ** 2
    s0 = lambda r: (1 + 4 * lam ** 2 * r ** 2) / norm  # noqa: E731
    s1 = lambda r: 4 * lam * r / norm  # noqa: E731

    def pair(f_inner_gt, f_inner_lt):
        # integrate over r2 < r1 and r2 > r1 separately
        lower = sp.integrate(f_inner_gt, (r2, 0, r1))
        upper = sp.integrate(f_inner_lt, (r2, r1, 1))
        return sp.integrate(lower + upper, (r1, 0, 1))

    pi = sp.pi
    # angular mode 0: (2 pi)^2 * s0 s0 * g0
    g0_gt = -sp.log(r1) / (2 * pi) + (r1 ** 2 + r2 ** 2) / (4 * pi) - sp.Rational(3, 8) / pi
    g0_lt = -sp.log(r2) / (2 * pi) + (r1 ** 2 + r2 ** 2) / (4 * pi) - sp.Rational(3, 8) / pi
    w = s0(r1) * s0(r2) * r1 * r2
    mode0 = (2 * pi) ** 2 * pair(w * g0_gt, w * g0_lt)
    # angular mode 1: cos(t1) cos(t2) cos(t1 - t2) integrates to pi^2
    g1_gt = ((r2 / r1) + r1 * r2) / (2 * pi)
    g1_lt = ((r1 / r2) + r1 * r2) / (2 * pi)
    w1 = s1(r1) * s1(r2) * r1 * r2
    mode1 = pi ** 2 * pair(w1 * g1_gt, w1 * g1_lt)
    return sp.nsimplify(sp.simplify((mode0 + mode1) / pi))


def lattice_rectangle(a: float, b: float, parity: str, count: int, axis: str = "vertical"):
    """Lowest eigenvalues of a parity class by an explicit double loop."""
    k = int(math.sqrt(count)) * 4 + 10
    vals = []
    for i in range(1, k):
        for j in range(1, k):
            along, across = (i, j) if axis == "vertical" else (j, i)
            if (along % 2 == 1) != (parity == "even"):
                continue
            p, q = (a, b) if axis == "vertical" else (b, a)
            vals.append(math.pi ** 2 * (along ** 2 / p ** 2 + across ** 2 / q ** 2))
    return np.sort(vals)[:count]


def bisect_j0_first_zero() -> float:
    return optimize.bisect(special.j0, 2.0, 3.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def cardioid_perimeter_ellipe(lam: float) -> float:
    """Perimeter via the complete elliptic integral of the second kind."""
    m = 8 * lam / (1 + 2 * lam) ** 2
    return 4 * (1 + 2 * lam) * special.ellipe(m) / math.sqrt(1 + 2 * lam * lam)


def image_charge_dirichlet(p1, p2):
    """Dirichlet kernel from a source and its inverse image, in complex form."""
    z1 = p1[0] * np.exp(1j * p1[1])
    z2 = p2[0] * np.exp(1j * p2[1])
    return -np.log(np.abs(z1 - z2) / np.abs(1 - z1 * np.conj(z2))) / (2 * math.pi)
