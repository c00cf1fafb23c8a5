import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from billiard_sumrules.domains import (Kind, Reference, cardioid_map, density_at, density_mass,
                                       make_domain)
from billiard_sumrules.errors import ParameterOutOfRange, PointOutsideReference
from oracles import cardioid_perimeter_ellipe


def test_disk_geometry():
    d = make_domain("disk")
    assert d.reference is Reference.UNIT_DISK
    assert d.area == pytest.approx(math.pi, rel=1e-15)
    assert d.perimeter == pytest.approx(2 * math.pi, rel=1e-15)
    assert d.symmetry_axis


def test_square_geometry():
    d = make_domain("rectangle", a=math.sqrt(2), b=math.sqrt(2))
    assert d.area == pytest.approx(2.0, rel=1e-15)
    assert d.perimeter == pytest.approx(4 * math.sqrt(2), rel=1e-15)


def test_annulus_reference_rectangle():
    d = make_domain("annulus", r0=0.5)
    assert d.reference is Reference.RECTANGLE
    assert d.a == pytest.approx(math.log(2))
    assert d.b == pytest.approx(2 * math.pi)
    assert d.area == pytest.approx(0.75 * math.pi)


@pytest.mark.parametrize("kind, params", [
    ("disk", {}), ("rectangle", {"a": 1.3, "b": 0.7}), ("annulus", {"r0": 0.5}),
    ("annulus", {"r0": 2.0 ** -10}), ("cardioid", {"lam": 0.0}), ("cardioid", {"lam": 0.5}),
    ("cardioid", {"lam": 0.27}),
])
def test_density_mass_equals_area(kind, params):
    d = make_domain(kind, **params)
    assert density_mass(d) == pytest.approx(d.area, rel=1e-12)


@pytest.mark.parametrize("lam", [0.0, 0.1, 0.25, 0.4, 0.5])
def test_cardioid_perimeter_against_elliptic_integral(lam):
    assert make_domain("cardioid", lam=lam).perimeter == pytest.approx(
        cardioid_perimeter_ellipe(lam), rel=1e-10)


def test_cardioid_zero_is_disk():
    d = make_domain("cardioid", lam=0.0)
    assert d.perimeter == pytest.approx(2 * math.pi, rel=1e-10)
    r, t = np.meshgrid(np.linspace(0, 1, 7), np.linspace(-3, 3, 5))
    assert np.all(d.density(r, t) == 1.0)


def test_cardioid_map_is_area_preserving_on_average():
    # |g'|^2 equals the density
    lam, r, t = 0.37, 0.6, 1.1
    z = r * np.exp(1j * t)
    h = 1e-6
    deriv = (cardioid_map(z + h, lam) - cardioid_map(z - h, lam)) / (2 * h)
    assert abs(deriv) ** 2 == pytest.approx(make_domain("cardioid", lam=lam).density(r, t), rel=1e-9)


def test_density_examples():
    lam = 0.3
    assert density_at(make_domain("cardioid", lam=lam), (0.0, 1.0)) == pytest.approx(1 / (2 * lam * lam + 1))
    assert density_at(make_domain("annulus", r0=0.25), (0.0, 0.3)) == pytest.approx(0.25)
    assert density_at(make_domain("disk"), (0.4, 2.0)) == 1.0


def test_density_outside_raises():
    with pytest.raises(PointOutsideReference):
        density_at(make_domain("disk"), (1.2, 0.0))
    with pytest.raises(PointOutsideReference):
        density_at(make_domain("rectangle", a=1, b=1), (0.0, 0.7))


@pytest.mark.parametrize("kind, params", [
    ("rectangle", {"a": 0, "b": 1}), ("rectangle", {"a": 1, "b": -2}), ("annulus", {"r0": 1.0}),
    ("annulus", {"r0": 0.0}), ("cardioid", {"lam": 0.51}), ("cardioid", {"lam": -0.1}),
])
def test_out_of_range_parameters(kind, params):
    with pytest.raises(ParameterOutOfRange):
        make_domain(kind, **params)


def test_density_positive_and_even_on_dense_grid():
    # open disk: at lam = 1/2 the density vanishes at the cusp r = 1, theta = pi
    r, t = np.meshgrid(np.linspace(0, 1, 100, endpoint=False), np.linspace(-math.pi, math.pi, 100))
    for lam in np.linspace(0, 0.5, 11):
        dens = make_domain("cardioid", lam=lam).density
        assert np.all(dens(r, t) > 0)
        assert np.array_equal(dens(r, t), dens(r, -t))
    x, y = np.meshgrid(np.linspace(-0.3, 0.3, 100), np.linspace(-math.pi, math.pi, 100))
    dens = make_domain("annulus", r0=0.55).density
    assert np.all(dens(x, y) > 0)
    assert np.array_equal(dens(x, y), dens(x, -y))


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 0.5), st.floats(0, 0.999), st.floats(-math.pi, math.pi))
def test_density_positive_property(lam, r, t):
    assert make_domain(Kind.CARDIOID, lam=lam).density(r, t) > 0
