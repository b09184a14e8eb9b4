"""Omnidirectional ISR: lattice constant, harmonic series, closed forms,
low-order windows, baselines, and the cell-mean value.

Tolerances on oracle comparisons were measured once against the lattice-sum
oracles in _oracles.py and then frozen. Two tests document known limits of
the closed form and are expected to fail at their stated tolerances; their
messages carry the achieved numbers.
"""

import math

import numpy as np
import pytest

from _oracles import fourier_mode_direct, omega_brute
from hexisr.hexgeom import Location, NetworkConfig
from hexisr.isr_omni import (
    DEFAULT_KAPPA,
    IsrSeriesParams,
    baseline_fluid,
    baseline_karray,
    h0,
    hn_approx,
    isr_closed,
    isr_closed_polar,
    isr_fourier,
    isr_order2,
    isr_simple,
    misr,
    omega,
)
from hexisr.montecarlo import direct_isr
from hexisr.specfun import ConvergenceError, SeriesControl, gamma

EDGE = 1.0 / math.sqrt(3.0)
TIGHT = SeriesControl(rel_tol=1e-12, max_terms=16)


def rel(a, b):
    return abs(a - b) / abs(b)


# ---------------------------------------------------------------- omega ----


def test_omega_matches_lattice_sum():
    assert rel(omega(2.0), omega_brute(2.0)) < 1e-8


def test_omega_moderate_exponent():
    assert rel(omega(1.5), omega_brute(1.5)) < 1e-6


def test_omega_near_unity_for_large_exponent():
    # only the q=1 sites survive; the next terms are 3^-b and 4^-b
    assert abs(omega(50.0) - 1.0) <= 10.0 * 4.0**-50


def test_omega_monotone_decreasing():
    vals = [omega(b) for b in (1.1, 1.3, 1.7, 2.5, 4.0)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_omega_domain():
    with pytest.raises(ValueError):
        omega(1.0)


# ------------------------------------------------------ harmonic series ----


def test_h0_zero_radius():
    assert h0(0.0, 1.5) == 0.0


def test_h0_small_x_leading_term():
    # h0 ~ 6 omega(b) x^(2b) as x -> 0
    x = 1e-3
    b = 1.5
    assert rel(h0(x, b), 6.0 * omega(b) * x ** (2 * b)) < 1e-4


def test_h0_matches_angle_average():
    # mode-0 projection of the lattice sum is the angular mean
    got = h0(0.5, 1.5)
    ref = fourier_mode_direct(0.5, 1.5, 0)
    assert rel(got, ref) < 1e-3


def test_h0_reports_nonconvergence():
    with pytest.raises(ConvergenceError):
        h0(0.9, 1.5, TIGHT)


def test_h0_domain():
    with pytest.raises(ValueError):
        h0(0.995, 1.5)
    with pytest.raises(ValueError):
        h0(0.5, 1.0)


def test_hn_zero_radius():
    assert hn_approx(1, 0.0, 1.5) == 0.0


def test_hn_gamma_ratio_structure():
    # Hn = 6 gamma(b+6n)/(gamma(b) gamma(1+6n)) x^(2b+6n) / (1-x^2)^b
    b = 1.4
    x = 0.2
    for n in (1, 2):
        want = (
            6.0
            * gamma(b + 6.0 * n)
            / (gamma(b) * gamma(1.0 + 6.0 * n))
            * x ** (2 * b + 6 * n)
            / (1 - x * x) ** b
        )
        assert rel(hn_approx(n, x, b), want) < 1e-10


def test_hn_matches_projected_harmonic():
    got = hn_approx(1, 0.5, 1.5)
    ref = fourier_mode_direct(0.5, 1.5, 1)
    assert rel(got, ref) < 0.10


def test_hn_validation():
    with pytest.raises(ValueError):
        hn_approx(0, 0.5, 1.5)


# -------------------------------------------------------- fourier route ----


def test_fourier_origin():
    cfg = NetworkConfig.outdoor(b=1.5)
    assert isr_fourier(Location(0.0, 0.0), cfg) == 0.0


def test_fourier_angular_period():
    cfg = NetworkConfig.outdoor(b=1.5)
    rng = np.random.default_rng(12345)
    for _ in range(10):
        r = rng.uniform(50.0, 550.0)
        th = rng.uniform(0.0, 2 * math.pi)
        a = isr_fourier(Location(r, th), cfg)
        b = isr_fourier(Location(r, th + math.pi / 3), cfg)
        assert rel(a, b) < 1e-12


def test_fourier_truncation_insensitive():
    cfg = NetworkConfig.outdoor(b=1.5)
    p10 = IsrSeriesParams(fourier_terms=10)
    for x in (0.1, 0.3, 0.5):
        m = Location(x * cfg.delta, 0.2)
        assert rel(isr_fourier(m, cfg), isr_fourier(m, cfg, p10)) < 1e-6


def test_fourier_edge_vs_lattice_sum():
    # Known limit: the truncated harmonic expansion degrades at the cell
    # corner for b = 2. Measured 2.71% against a 1000-ring sum; the 1%
    # target is asserted as stated.
    cfg = NetworkConfig.outdoor(b=2.0)
    m = Location(EDGE * cfg.delta, 0.0)
    got = isr_fourier(m, cfg)
    ref = direct_isr(m, cfg, 1000)
    gap = rel(got, ref)
    assert gap < 0.01, (
        f"corner gap {gap:.4%} vs 1% target (fourier {got:.7g}, "
        f"1000-ring sum {ref:.7g})"
    )


def test_series_params_validation():
    with pytest.raises(ValueError):
        IsrSeriesParams(fourier_terms=-1)


# ---------------------------------------------------------- closed form ----


def test_closed_origin():
    assert isr_closed_polar(0.0, 0.3, 1.5) == 0.0
    cfg = NetworkConfig.outdoor(b=1.5)
    assert isr_closed(Location(0.0, 0.0), cfg) == 0.0


def test_closed_location_wrapper_consistent():
    cfg = NetworkConfig.outdoor(b=1.7)
    m = Location(420.0, 0.9)
    assert rel(isr_closed(m, cfg), isr_closed_polar(0.42, 0.9, 1.7)) < 1e-14


def test_closed_even_and_periodic_in_theta():
    rng = np.random.default_rng(7)
    for _ in range(20):
        x = rng.uniform(0.02, 0.6)
        th = rng.uniform(0.0, 2 * math.pi)
        b = rng.uniform(1.1, 3.0)
        f = isr_closed_polar(x, th, b)
        assert rel(f, isr_closed_polar(x, -th, b)) < 1e-12
        assert rel(f, isr_closed_polar(x, th + math.pi / 3, b)) < 1e-12


def test_closed_monotone_in_x():
    xs = np.linspace(0.01, EDGE, 100)
    vals = [isr_closed_polar(x, 0.3, 1.7) for x in xs]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_closed_matches_lattice_sum_midband():
    cfg = NetworkConfig.outdoor(b=1.4)
    for x in (0.1, 0.3, 0.5):
        m = Location(x * cfg.delta, math.pi / 6)
        gap = rel(isr_closed(m, cfg), direct_isr(m, cfg, 1000))
        assert gap < 0.01, f"x={x}: gap {gap:.4%}"


def test_closed_theta_variation_bounded():
    # the angle-resolved value stays near the angular mean off the corner;
    # frozen from a 3.58% measurement on this exact grid
    worst = 0.0
    for b in (1.25, 1.5, 2.0):
        for x in np.linspace(0.05, 0.4, 8):
            hv = h0(float(x), b)
            for t in np.linspace(0.0, math.pi / 3, 61):
                worst = max(worst, rel(isr_closed_polar(float(x), float(t), b), hv))
    assert worst < 0.04, f"angular deviation from the mean {worst:.4%}"


def test_closed_vs_lattice_sum_random_locations():
    # Known limit: random draws that land near the cell corner at large b
    # exceed the 1% target (measured worst 18.90% over this exact sample).
    cfg_pool = {}
    rng = np.random.default_rng(12345)
    worst = 0.0
    worst_at = None
    fails = 0
    for _ in range(30):
        x = rng.uniform(0.02, EDGE)
        th = rng.uniform(0.0, 2 * math.pi)
        b = rng.uniform(1.0 + 1e-9, 2.5)
        cfg = cfg_pool.setdefault(b, NetworkConfig.outdoor(b=b))
        m = Location(x * cfg.delta, th)
        gap = rel(isr_closed(m, cfg), direct_isr(m, cfg, 1000))
        if gap >= 0.01:
            fails += 1
        if gap > worst:
            worst, worst_at = gap, (x, th, b)
    assert fails == 0, (
        f"{fails}/30 draws above 1%; worst {worst:.4%} at "
        f"(x={worst_at[0]:.4f}, theta={worst_at[1]:.4f}, b={worst_at[2]:.4f})"
    )


# ------------------------------------------------- low-order and simple ----


def test_order2_origin():
    assert isr_order2(0.0, 1.2) == 0.0


def test_order2_accurate_in_window():
    assert rel(isr_order2(0.2, 1.3), h0(0.2, 1.3)) < 0.02


def test_order2_underestimates_at_edge():
    # the quadratic truncation sheds the corner mass at large b
    lo = isr_order2(0.5, 2.0)
    hi = h0(0.5, 2.0)
    assert lo < hi
    assert rel(lo, hi) > 0.05


def test_simple_origin():
    assert isr_simple(0.0, 1.5) == 0.0


def test_simple_edge_accuracy():
    # frozen from a 3.31% measurement
    assert rel(isr_simple(EDGE, 1.4), h0(EDGE, 1.4)) < 0.035


def test_simple_beats_fluid_at_large_b():
    ref = h0(0.4, 2.0)
    assert rel(isr_simple(0.4, 2.0), ref) < rel(baseline_fluid(0.4, 2.0), ref)


# -------------------------------------------------------------- baselines ----


def test_fluid_origin_and_blowup():
    assert baseline_fluid(0.0, 1.5) == 0.0
    # the continuum prefactor 1/(b-1) diverges as b -> 1
    assert baseline_fluid(0.3, 1.01) > baseline_fluid(0.3, 1.5)


def test_fluid_midrange_accuracy():
    # frozen from an 8.03% measurement
    assert rel(baseline_fluid(0.3, 1.2), h0(0.3, 1.2)) < 0.10


def test_karray_origin():
    assert baseline_karray(0.0, 1.5) == 0.0


def test_karray_edge_error_large():
    assert rel(baseline_karray(EDGE, 1.4), h0(EDGE, 1.4)) > 0.20


def test_karray_low_x_accuracy():
    assert rel(baseline_karray(0.1, 1.4), h0(0.1, 1.4)) < 0.10


# -------------------------------------------------------------- cell mean ----


def test_misr_monotone_in_kappa():
    assert misr(1.5, 0.4) < misr(1.5, 0.525) < misr(1.5, 0.6)


def test_misr_small_disk_leading_term():
    # M ~ 6 omega(b) kappa^(2b) / (b+1) for a vanishing disk
    b = 1.5
    kap = 1e-3
    want = 6.0 * omega(b) * kap ** (2 * b) / (b + 1.0)
    assert rel(misr(b, kap), want) < 1e-5


def test_misr_matches_disk_average():
    # one shared stream, b = 1.5 first then b = 2.0, exactly as calibrated
    # (0.009% and 0.223% gaps with 1e5 samples)
    rng = np.random.default_rng(12345)
    for b in (1.5, 2.0):
        xs = DEFAULT_KAPPA * np.sqrt(1.0 - rng.random(100_000))
        ths = 2.0 * math.pi * rng.random(100_000)
        est = math.fsum(
            isr_closed_polar(float(x), float(t), b) for x, t in zip(xs, ths)
        ) / xs.size
        gap = rel(misr(b, DEFAULT_KAPPA), est)
        assert gap < 0.005, f"b={b}: disk-average gap {gap:.4%}"


def test_misr_validation():
    with pytest.raises(ValueError):
        misr(1.0, 0.5)
    with pytest.raises(ValueError):
        misr(1.5, 0.0)
    with pytest.raises(ValueError):
        misr(1.5, 1.0)
