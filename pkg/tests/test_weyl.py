import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from billiard_sumrules.domains import make_domain
from billiard_sumrules.errors import IllConditionedFit, MismatchedLeadingOrder
from billiard_sumrules.spectrum import CrossProduct, bessel_zeros, rectangle_spectrum
from billiard_sumrules.sumrules import annulus_closed_form, rectangle_closed_form
from billiard_sumrules.weyl import (WeylModel, class_models, counting_function,
                                    eigenvalue_estimate, extrapolate_sqrt, full_model,
                                    midpoint_energy_cut, tail_difference)


def test_disk_counting_example():
    model = full_model(make_domain("disk"), "dirichlet")
    # N(E) = E/4 - sqrt(E)/2 for the unit disk
    assert counting_function(model, 100.0) == pytest.approx(20.0, rel=1e-15)
    neumann = full_model(make_domain("disk"), "neumann")
    assert counting_function(neumann, 100.0) == pytest.approx(30.0, rel=1e-15)


def test_model_validation():
    with pytest.raises(ValueError):
        WeylModel(0.0, 1.0)
    with pytest.raises(ValueError):
        WeylModel(1.0, 1.0, sign=2)


def test_class_models_split_area_and_boundary():
    dom = make_domain("rectangle", a=1.0, b=2.0)
    even, odd = class_models(dom, "dirichlet")
    assert even.area == odd.area == pytest.approx(1.0)
    # the Neumann axis shortens the effective Dirichlet boundary of the even class
    assert even.perimeter == pytest.approx(3.0 - 1.0)
    assert odd.perimeter == pytest.approx(3.0 + 1.0)
    n_even, n_odd = class_models(dom, "neumann")
    assert n_even.index_offset == 1.0 and n_odd.index_offset == 0.0
    assert n_even.perimeter == pytest.approx(4.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=0.1, max_value=10), st.floats(min_value=0.0, max_value=10),
       st.sampled_from([1, -1]), st.integers(min_value=1, max_value=10 ** 6))
def test_estimate_inverts_counting(area, perimeter, sign, n):
    model = WeylModel(area, perimeter, sign)
    e = eigenvalue_estimate(model, n)
    assert counting_function(model, e) == pytest.approx(n, rel=1e-10)


def test_identical_models_have_no_tail():
    m = WeylModel(2.0, 3.0)
    assert tail_difference(m, m, n_cut=100) == 0.0
    assert tail_difference(m, m, e_cut=1e4) == 0.0


def test_mismatched_area_rejected():
    with pytest.raises(MismatchedLeadingOrder):
        tail_difference(WeylModel(1.0, 1.0), WeylModel(1.1, 1.0), n_cut=10)


def test_tail_needs_exactly_one_cut():
    m = WeylModel(1.0, 1.0)
    with pytest.raises(ValueError):
        tail_difference(m, m)
    with pytest.raises(ValueError):
        tail_difference(m, m, e_cut=1.0, n_cut=1)


def test_index_tail_matches_direct_summation():
    plus, minus = WeylModel(1.0, 2.0), WeylModel(1.0, 4.0)
    n_cut, n_big = 500, 4 * 10 ** 6
    n = np.arange(n_cut + 1, n_big + 1, dtype=float)
    direct = np.sum(1 / eigenvalue_estimate(plus, n) - 1 / eigenvalue_estimate(minus, n))
    # beyond n_big the difference behaves like c n^-3/2 + d n^-2
    c = math.sqrt(plus.alpha) * (minus.beta - plus.beta)
    d = 0.5 * (plus.beta ** 2 - minus.beta ** 2)
    remainder = 2 * c / math.sqrt(n_big + 0.5) + d / (n_big + 0.5)
    assert tail_difference(plus, minus, n_cut=n_cut) == pytest.approx(direct + remainder, abs=1e-11)


def test_index_tail_with_zero_mode_offset():
    dom = make_domain("disk")
    even, odd = class_models(dom, "neumann")
    n_cut, n_big = 200, 4 * 10 ** 6
    n = np.arange(n_cut + 1, n_big + 1, dtype=float)
    direct = np.sum(1 / eigenvalue_estimate(even, n) - 1 / eigenvalue_estimate(odd, n))
    # remainder: c n^-3/2 and d n^-2 from the boundary terms, -alpha/n^2 from the index shift
    c = math.sqrt(even.alpha) * (odd.beta - even.beta)
    d = 0.5 * (even.beta ** 2 - odd.beta ** 2) - even.alpha
    remainder = 2 * c / math.sqrt(n_big + 0.5) + d / (n_big + 0.5)
    got = tail_difference(even, odd, n_cut=n_cut)
    assert got == pytest.approx(direct + remainder, abs=1e-10)


def test_tail_shrinks_to_zero():
    even, odd = class_models(make_domain("cardioid", lam=0.3), "dirichlet")
    tails = [tail_difference(even, odd, n_cut=n) for n in (10, 100, 1000, 10000, 100000)]
    assert all(t > 0 for t in tails)
    assert all(b < a for a, b in zip(tails, tails[1:]))
    assert tails[-1] < 2e-3


def test_energy_tail_formula():
    plus, minus = WeylModel(1.0, 2.0), WeylModel(1.0, 5.0)
    assert tail_difference(plus, minus, e_cut=400.0) == pytest.approx(3 / (4 * math.pi) / 20)
    e = midpoint_energy_cut(plus, minus, 10)
    assert counting_function(plus, e) - counting_function(minus, e) == pytest.approx(10.5)
    with pytest.raises(ValueError):
        midpoint_energy_cut(minus, plus, 10)


def test_rectangle_tail_at_ten_thousand():
    a, b, count = 1.0, 1.7, 10 ** 4
    dom = make_domain("rectangle", a=a, b=b)
    even = rectangle_spectrum(a, b, "even", count, axis="horizontal").values
    odd = rectangle_spectrum(a, b, "odd", count, axis="horizontal").values
    partial = float(np.sum(1 / even - 1 / odd))
    m_even, m_odd = class_models(dom, "dirichlet")
    exact = float(rectangle_closed_form(a, b)[0])
    corrected = partial + tail_difference(m_even, m_odd, n_cut=count)
    assert abs(corrected - exact) <= 1e-5
    assert abs(corrected - exact) < abs(partial - exact) / 50


@pytest.mark.parametrize("j", [1, 4, 8])
def test_tail_improves_annulus_rows(j):
    r0, count = 2.0 ** -j, 500
    dom = make_domain("annulus", r0=r0)
    zeros = bessel_zeros(CrossProduct(0, r0), count).zeros
    partial = float(np.sum((r0 / zeros) ** 2))
    even, odd = class_models(dom, "dirichlet")
    tail = tail_difference(even, odd, e_cut=midpoint_energy_cut(even, odd, count))
    exact = float(annulus_closed_form(r0))
    assert abs(partial + tail - exact) < abs(partial - exact) / 10


def test_extrapolation_recovers_synthetic_law():
    n = np.arange(100, 5000, 7, dtype=float)
    s_inf, c = extrapolate_sqrt(np.column_stack([n, 1 - 2 / np.sqrt(n)]))
    assert s_inf == pytest.approx(1.0, abs=1e-12)
    assert c == pytest.approx(2.0, abs=1e-10)


def test_extrapolation_constant_sequence():
    n = np.arange(1, 201, dtype=float)
    s_inf, c = extrapolate_sqrt(np.column_stack([n, np.full(n.size, 0.3)]))
    assert s_inf == pytest.approx(0.3, abs=1e-14)
    assert abs(c) < 1e-12


def test_extrapolation_needs_enough_distinct_points():
    with pytest.raises(IllConditionedFit):
        extrapolate_sqrt(np.column_stack([np.arange(1, 50), np.ones(49)]))
    with pytest.raises(IllConditionedFit):
        extrapolate_sqrt(np.column_stack([np.full(200, 10.0), np.ones(200)]))
    with pytest.raises(IllConditionedFit):
        extrapolate_sqrt(np.column_stack([np.arange(-100, 100), np.ones(200)]))
