import math

import numpy as np
import pytest

from entdyn.analytic import (BellKind, ThermalParams, bell_dephasing,
                             bell_infinite_temperature, bell_thermal,
                             bell_zero_temperature,
                             infinite_temperature_separability_time,
                             separability_time, short_time_rate,
                             two_term_dephasing, zero_t_0m_m0, zero_t_00mm)
from entdyn.errors import DomainError

GRID = np.linspace(0.0, 3.0, 61)


def test_all_start_at_one():
    params = ThermalParams(1.0, 0.4)
    for kind in BellKind:
        assert bell_zero_temperature(kind, 0.0, 1.0) == 1.0
        assert bell_thermal(kind, 0.0, params) == pytest.approx(1.0, abs=1e-15)
    assert bell_dephasing(0.0, 1.0) == 1.0
    assert bell_infinite_temperature(0.0, 1.0) == pytest.approx(1.0, abs=1e-15)


def test_thermal_params_validation():
    with pytest.raises(DomainError):
        ThermalParams(0.0, 0.1)
    with pytest.raises(DomainError):
        ThermalParams(1.0, -0.1)


def test_thermal_reduces_to_zero_temperature():
    # at nbar = 0 the thermal forms collapse to the pure-decay exponentials
    params = ThermalParams(1.3, 0.0)
    for kind in BellKind:
        for t in GRID:
            assert bell_thermal(kind, t, params) == pytest.approx(
                bell_zero_temperature(kind, t, 1.3), abs=1e-12)


def test_two_term_dephasing_reduces_to_bell():
    # Bell labels (0,1,1,0) or (0,0,1,1) both give exponent Gamma t
    s = 2 ** -0.5
    for t in GRID:
        assert two_term_dephasing(s, s, 0, 1, 1, 0, t, 1.0) == pytest.approx(
            bell_dephasing(t, 1.0), abs=1e-12)
        assert two_term_dephasing(s, s, 0, 0, 1, 1, t, 1.0) == pytest.approx(
            bell_dephasing(t, 1.0), abs=1e-12)


def test_zero_t_families_reduce_to_bell():
    s = 2 ** -0.5
    for t in GRID:
        assert zero_t_0m_m0(s, s, 1, t, 1.0) == pytest.approx(
            bell_zero_temperature(BellKind.PSI_PLUS, t, 1.0), abs=1e-12)
        assert zero_t_00mm(s, s, 1, t, 1.0) == pytest.approx(
            bell_zero_temperature(BellKind.PHI_PLUS, t, 1.0), abs=1e-12)


def test_short_time_rate_matches_slope():
    # finite-difference slope of ln c at t -> 0
    h = 1e-5
    for nbar in (0.1, 0.5, 1.0):
        params = ThermalParams(1.0, nbar)
        for kind in (BellKind.PSI_PLUS, BellKind.PHI_PLUS):
            slope = -(math.log(bell_thermal(kind, h, params))) / h
            assert slope == pytest.approx(short_time_rate(kind, params), rel=5e-3)


def test_short_time_rate_values():
    # psi: (2 nbar + 1 + 2 sqrt(nbar(nbar+1))) Gamma ; phi: 2(2 nbar + 1) Gamma
    params = ThermalParams(2.0, 0.25)
    assert short_time_rate(BellKind.PSI_MINUS, params) == pytest.approx(
        (1.5 + 2 * math.sqrt(0.25 * 1.25)) * 2.0, abs=1e-14)
    assert short_time_rate(BellKind.PHI_MINUS, params) == pytest.approx(6.0, abs=1e-14)


def test_separability_time_is_a_root():
    for nbar in (0.1, 0.5, 1.0):
        params = ThermalParams(1.0, nbar)
        for kind in (BellKind.PSI_PLUS, BellKind.PHI_PLUS):
            ts = separability_time(kind, params)
            assert bell_thermal(kind, ts, params, clamp=False) == pytest.approx(0.0, abs=1e-10)
            assert bell_thermal(kind, 0.99 * ts, params) > 0.0


def test_no_revival_after_separability():
    params = ThermalParams(1.0, 0.5)
    ts = separability_time(BellKind.PSI_PLUS, params)
    for t in np.linspace(ts, 5 * ts, 50):
        assert bell_thermal(BellKind.PSI_PLUS, t, params, clamp=False) <= 1e-12


def test_separability_time_zero_temperature_infinite():
    assert separability_time(BellKind.PSI_PLUS, ThermalParams(1.0, 0.0)) == math.inf


def test_infinite_temperature_separability_time():
    ts = infinite_temperature_separability_time(1.0)
    assert ts == pytest.approx(math.log(1 + math.sqrt(2)) / 2, abs=1e-15)
    assert bell_infinite_temperature(ts, 1.0, clamp=False) == pytest.approx(0.0, abs=1e-14)


def test_thermal_preclamp_limit():
    # as t -> inf the unclamped thermal value approaches -2 nbar(nbar+1)/(2 nbar+1)^2
    for nbar in (0.2, 1.0):
        params = ThermalParams(1.0, nbar)
        limit = -2 * nbar * (nbar + 1) / (2 * nbar + 1) ** 2
        assert bell_thermal(BellKind.PSI_PLUS, 50.0, params, clamp=False) == pytest.approx(
            limit, abs=1e-10)
        assert bell_thermal(BellKind.PHI_PLUS, 50.0, params, clamp=False) == pytest.approx(
            limit, abs=1e-10)
        assert bell_thermal(BellKind.PSI_PLUS, 50.0, params) == 0.0


def test_zero_t_00mm_large_m_approaches_0m_m0():
    # the correction term (1 - e^{-t})^m |b|^2 vanishes quickly for large m
    a, b = math.sqrt(0.5), math.sqrt(0.5)
    for t in (0.05, 0.1):
        v1 = zero_t_00mm(a, b, 20, t, 1.0)
        v2 = zero_t_0m_m0(a, b, 20, t, 1.0)
        assert abs(v1 - v2) / v2 <= 1e-3


def test_zero_t_00mm_finite_death_time():
    # unbalanced a|00> + b|mm> hits zero at finite time when |b| > |a|
    a, b = 0.5, math.sqrt(3) / 2
    ts = np.linspace(0, 10, 2001)
    vals = [zero_t_00mm(a, b, 2, t, 1.0, clamp=False) for t in ts]
    assert vals[0] > 0
    assert min(vals) < 0  # sign change: separability at finite time
    # root location: solve |ab| = (1 - x)^m |b|^2 with x = e^{-t}
    import scipy.optimize as so
    root = so.brentq(lambda t: zero_t_00mm(a, b, 2, t, 1.0, clamp=False), 0.1, 10)
    assert zero_t_00mm(a, b, 2, root * 1.01, 1.0) == 0.0


def test_monotone_decay_on_grid():
    params = ThermalParams(1.0, 0.3)
    for fn in (lambda t: bell_dephasing(t, 1.0),
               lambda t: bell_thermal(BellKind.PSI_PLUS, t, params),
               lambda t: bell_infinite_temperature(t, 1.0)):
        vals = [fn(t) for t in GRID]
        assert all(x >= y - 1e-12 for x, y in zip(vals, vals[1:]))


def test_beta_scale():
    params = ThermalParams(2.0, 0.5)
    assert params.beta(0.25) == pytest.approx(math.exp(-1.0), abs=1e-15)
