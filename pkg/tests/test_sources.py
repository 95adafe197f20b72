"""Source-term splittings: path-sum identities, upwinding, sonic handling."""

import numpy as np
import pytest
from hypothesis import given, settings

from swelab.core import ExtState, PhysConstants, PhysState, SonicInterfaceError
from swelab.sources import (
    SonicRegularization,
    lambda_floor,
    omega_source_split,
    path_source_trapezoid,
    resolved_split_form,
    roe_source_split,
)

from conftest import wet_pairs


def _ext(pair):
    (hl, ql), (hr, qr), Hl, Hr = pair
    return ExtState(PhysState(hl, ql), Hl), ExtState(PhysState(hr, qr), Hr)


def _sum_matches_trapezoid(split, Wl, Wr, c, tol=1e-13):
    s0 = split.minus[0] + split.plus[0]
    s1 = split.minus[1] + split.plus[1]
    t0, t1 = path_source_trapezoid(Wl, Wr, c)
    # the parts may be orders of magnitude larger than their sum (the
    # upwind contributions cancel), so scale by what was actually added
    scale = max(1.0, abs(t1), abs(split.minus[1]), abs(split.plus[1]))
    return abs(s0 - t0) <= tol * scale and abs(s1 - t1) <= tol * scale


@given(wet_pairs())
@settings(max_examples=300)
def test_roe_split_path_sum(pair):
    c = PhysConstants()
    Wl, Wr = _ext(pair)
    split = roe_source_split(Wl, Wr, c, on_sonic="clamp")
    assert _sum_matches_trapezoid(split, Wl, Wr, c)


@given(wet_pairs())
@settings(max_examples=300)
def test_omega_split_path_sum(pair):
    c = PhysConstants()
    Wl, Wr = _ext(pair)
    for omega in (0.0, 0.5, 1.0):
        for reg in (SonicRegularization("star"), SonicRegularization("mu", 1e-6)):
            split = omega_source_split(Wl, Wr, omega, 0.1, 0.01, reg, c, form="half")
            assert _sum_matches_trapezoid(split, Wl, Wr, c)


def test_splits_vanish_without_a_step(c):
    W = ExtState(PhysState(0.4, 0.3), 0.2)
    for split in (
        roe_source_split(W, W, c, on_sonic="clamp"),
        omega_source_split(W, W, 0.5, 0.1, 0.01, SonicRegularization(), c),
    ):
        assert split.minus == (0.0, 0.0) or all(abs(v) == 0.0 for v in split.minus)
        assert all(abs(v) == 0.0 for v in split.plus)


def test_roe_split_supersonic_goes_downstream(c):
    """Both eigenvalues positive: the entire source lands on the right cell."""
    Wl = ExtState(PhysState(0.2, 0.2 * 3.0), 0.1)
    Wr = ExtState(PhysState(0.22, 0.22 * 3.1), 0.3)
    split = roe_source_split(Wl, Wr, c)
    t0, t1 = path_source_trapezoid(Wl, Wr, c)
    assert abs(split.minus[0]) <= 1e-12 and abs(split.minus[1]) <= 1e-12
    assert split.plus[1] == pytest.approx(t1, rel=1e-12)
    # mirrored flow sends it upstream-left instead
    Wl2 = ExtState(PhysState(0.22, -0.22 * 3.1), 0.1)
    Wr2 = ExtState(PhysState(0.2, -0.2 * 3.0), 0.3)
    split2 = roe_source_split(Wl2, Wr2, c)
    assert abs(split2.plus[1]) <= 1e-12
    assert split2.minus[1] == pytest.approx(path_source_trapezoid(Wl2, Wr2, c)[1], rel=1e-12)


def test_roe_split_sonic_policy(c):
    h = 0.3
    q = h * np.sqrt(c.g * h)  # lambda_1 = 0 exactly for equal states
    W = ExtState(PhysState(h, q), 0.0)
    W2 = ExtState(PhysState(h, q), 0.2)
    with pytest.raises(SonicInterfaceError):
        roe_source_split(W, W2, c, on_sonic="error")
    split = roe_source_split(W, W2, c, on_sonic="clamp")
    assert np.all(np.isfinite(split.minus)) and np.all(np.isfinite(split.plus))
    with pytest.raises(ValueError):
        roe_source_split(W, W2, c, on_sonic="ignore")


def test_resolved_split_form_is_half():
    assert resolved_split_form() == "half"


def test_as_printed_form_breaks_path_sum(c):
    """Without the 1/2 the split sums to twice the segment integral."""
    Wl = ExtState(PhysState(0.5, 0.2), 0.1)
    Wr = ExtState(PhysState(0.45, 0.25), 0.3)
    split = omega_source_split(Wl, Wr, 0.5, 0.1, 0.01,
                               SonicRegularization(), c, form="as-printed")
    t1 = path_source_trapezoid(Wl, Wr, c)[1]
    assert split.minus[1] + split.plus[1] == pytest.approx(2.0 * t1, rel=1e-12)


def test_omega_split_form_validation(c):
    Wl = ExtState(PhysState(0.5, 0.2), 0.1)
    with pytest.raises(ValueError):
        omega_source_split(Wl, Wl, 0.5, 0.1, 0.01, SonicRegularization(), c, form="third")
    with pytest.raises(ValueError):
        omega_source_split(Wl, Wl, 0.5, -0.1, 0.01, SonicRegularization(), c)


def test_sonic_regularization_validation():
    with pytest.raises(ValueError):
        SonicRegularization("newton")
    with pytest.raises(ValueError):
        SonicRegularization("mu", eps=0.0)


def test_star_and_mu_regularizations_differ_at_rest(c):
    """The two J^-1 policies are genuinely different splittings."""
    Wl = ExtState(PhysState(0.7, 0.0), 0.1)
    Wr = ExtState(PhysState(0.5, 0.0), 0.3)
    star = omega_source_split(Wl, Wr, 0.0, 0.1, 0.01, SonicRegularization("star"), c)
    mu = omega_source_split(Wl, Wr, 0.0, 0.1, 0.01, SonicRegularization("mu", 1e-6), c)
    assert star.minus[0] != pytest.approx(mu.minus[0])
    # both still honor the path-sum identity (the upwind parts cancel)
    assert _sum_matches_trapezoid(star, Wl, Wr, c)
    assert _sum_matches_trapezoid(mu, Wl, Wr, c)


def test_lambda_floor_scale_relative():
    assert lambda_floor(0.0, 0.5) == pytest.approx(1e-8)
    assert lambda_floor(10.0, 2.0) == pytest.approx(12e-8)
