import math

import pytest
from hypothesis import given, strategies as st

from bfexact.errors import DomainError, InvalidDesign
from bfexact.params import BfParams, SampleDesign, from_design, swap


def test_from_design_basic():
    p = from_design(SampleDesign(5, 7, 2.0, 3.0))
    assert p.nu1 == 4 and p.nu2 == 6
    assert p.g == pytest.approx(0.4, abs=0)
    assert p.h == pytest.approx(3.0 / 7.0, rel=1e-15)


def test_from_design_minimal():
    p = from_design(SampleDesign(2, 2, 1.0, 1.0))
    assert (p.nu1, p.nu2, p.g, p.h) == (1.0, 1.0, 0.5, 0.5)


@pytest.mark.parametrize("design", [
    (1, 5, 1.0, 1.0),
    (5, 1, 1.0, 1.0),
    (5, 5, 0.0, 1.0),
    (5, 5, 1.0, -2.0),
])
def test_invalid_designs(design):
    with pytest.raises(InvalidDesign):
        from_design(SampleDesign(*design))


def test_invalid_params_direct():
    with pytest.raises(DomainError):
        BfParams(0.0, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        BfParams(1.0, 1.0, math.inf, 1.0)


def test_swap_definition():
    p = BfParams(4, 6, 0.4, 0.5)
    q = swap(p)
    assert (q.nu1, q.nu2, q.g, q.h) == (6, 4, 0.5, 0.4)
    assert swap(q) == p


def test_swap_ratio_inverts():
    p = BfParams(3, 8, 2.0, 1.0)
    assert swap(p).r == pytest.approx(1.0 / p.r, rel=1e-15)


def test_derived_constants():
    p = BfParams(4, 6, 0.4, 0.5)
    assert p.a == 2.0 and p.b == 3.0
    assert p.c == p.a + p.b + 0.5
    assert p.xi1 == pytest.approx(0.4 / (4 * 0.9), rel=1e-15)
    assert p.xi2 == pytest.approx(0.5 / (6 * 0.9), rel=1e-15)
    assert p.xi1 > 0 and p.xi2 > 0


def test_alpha_nonnegative():
    p = BfParams(3, 3, 1.0, 2.0)
    assert p.alpha(0.0) == 0.0
    for t in (0.1, -2.0, 7.5):
        assert p.alpha(t) > 0.0


def test_rho_sign_flips_under_swap():
    p = BfParams(3, 8, 1.0, 0.25)
    q = swap(p)
    for t in (0.0, 0.5, 2.3):
        rp, rq = p.rho(t), q.rho(t)
        assert rp * rq < 0
        # same expression with the roles of the samples exchanged
        expected = (q.nu1 / q.g - q.nu2 / q.h) / (q.nu2 / q.h
                                                  + t * t / (q.g + q.h))
        assert rq == pytest.approx(expected, rel=1e-15)


def test_rho_zero_iff_scaled_collapse():
    # gamma1 == gamma2 (here g/nu1 = h/nu2) kills rho at every t
    p = BfParams(2, 6, 1.0, 3.0)
    for t in (0.0, 1.0, 9.0):
        assert p.rho(t) == 0.0
    assert p.collapse_gap() == 0.0
    q = BfParams(2, 6, 1.0, 1.0)   # g = h but nu1 != nu2: no collapse
    assert q.rho(0.0) != 0.0


@given(nu1=st.floats(0.5, 60), nu2=st.floats(0.5, 60),
       g=st.floats(1e-3, 1e3), h=st.floats(1e-3, 1e3))
def test_swap_involution_property(nu1, nu2, g, h):
    p = BfParams(nu1, nu2, g, h)
    assert swap(swap(p)) == p
    assert swap(p).c == p.c
