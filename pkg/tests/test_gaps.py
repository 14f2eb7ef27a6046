"""Gap certification: thresholds, overlap bound, low-energy test, consolidated report."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from stripgaps import (
    GapParams,
    PerturbBounds,
    band_table,
    conditions_check,
    critical_constants,
    ell1_threshold,
    ell2_threshold,
    ell_star,
    gap_report,
    gapless_margin,
    low_energy_budget,
    low_spectrum_no_gap,
    overlap_lower_bound,
    resolve_geometry,
)

NO_PERTURBATION = PerturbBounds()


# ---------------------------------------------------------------------------
# parameter containers
# ---------------------------------------------------------------------------

def test_perturb_bounds_defaults_and_oscillation():
    assert NO_PERTURBATION.omega_minus == 0.0
    assert NO_PERTURBATION.omega_plus == 0.0
    assert NO_PERTURBATION.omega_L == 0.0
    b = PerturbBounds(omega_minus=-0.3, omega_plus=0.5)
    assert b.omega_L == pytest.approx(0.8, rel=1e-15)


def test_perturb_bounds_rejects_bad_values():
    with pytest.raises(ValueError):
        PerturbBounds(omega_minus=1.0, omega_plus=0.5)
    with pytest.raises(ValueError):
        PerturbBounds(omega_minus=math.inf, omega_plus=math.inf)


def test_gap_params_validation():
    GapParams(c0=0.7)
    GapParams(c0=0.7, gamma=0.2, ell0=3.0)
    with pytest.raises(ValueError):
        GapParams(c0=0.0)
    with pytest.raises(ValueError):
        GapParams(c0=0.7, gamma=0.25)
    with pytest.raises(ValueError):
        GapParams(c0=0.7, ell0=0.5)


def test_small_ratio_params_match_the_constants():
    cc = critical_constants()
    params = GapParams.from_small_ratio(0.05)
    assert params.c0 == pytest.approx(cc.c0(0.05), rel=1e-15)
    assert params.gamma == 0.0
    assert params.ell0 == 1.0
    with pytest.raises(ValueError):
        GapParams.from_small_ratio(0.2)
    with pytest.raises(ValueError):
        GapParams.from_small_ratio(cc.xi_critical * 1.000001)


# ---------------------------------------------------------------------------
# scalar conditions
# ---------------------------------------------------------------------------

def test_low_energy_budget_reference_value():
    assert low_energy_budget(0.1) == pytest.approx(0.0222512694, abs=1e-9)
    assert low_energy_budget(0.05) > 0.0


def test_gapless_margin_reference_values_and_flip():
    assert gapless_margin(0.03, 1.0, 0.0) == pytest.approx(0.0315138058, abs=1e-9)
    assert gapless_margin(0.1, 1.0, 0.0) == pytest.approx(-0.3787122943, abs=1e-9)
    # linear in the oscillation with slope -T/4
    drop = gapless_margin(0.03, 2.0, 0.0) - gapless_margin(0.03, 2.0, 0.1)
    assert drop == pytest.approx(2.0 * 0.1 / 4.0, rel=1e-12)


def test_conditions_fully_gapless_at_small_ratio():
    verdict = conditions_check(resolve_geometry(T=1.0, xi=0.03), NO_PERTURBATION)
    assert verdict.xi_subcritical
    assert verdict.low_energy_ok
    assert verdict.gapless_ok
    assert verdict.first_band_ok
    assert verdict.all_gapless


def test_conditions_partial_at_larger_ratio():
    verdict = conditions_check(resolve_geometry(T=1.0, xi=0.1), NO_PERTURBATION)
    assert verdict.xi_subcritical and verdict.low_energy_ok
    assert not verdict.gapless_ok
    assert not verdict.all_gapless
    above = conditions_check(resolve_geometry(T=1.0, xi=0.2), NO_PERTURBATION)
    assert not above.xi_subcritical


def test_conditions_scaled_oscillation_bookkeeping():
    geom = resolve_geometry(T=2.0, xi=0.05)
    verdict = conditions_check(geom, PerturbBounds(omega_minus=-0.5, omega_plus=0.5))
    assert verdict.scaled_oscillation == pytest.approx(
        4.0 / math.pi ** 2 * 1.0, rel=1e-14)


# ---------------------------------------------------------------------------
# thresholds
# ---------------------------------------------------------------------------

def test_ell_star_reference_value():
    geom = resolve_geometry(T=1.0, xi=0.1)
    assert ell_star(geom, NO_PERTURBATION) == pytest.approx(
        0.37763465727591716, rel=1e-12)


def test_ell_star_shifts_linearly_with_the_oscillation():
    geom = resolve_geometry(T=1.0, xi=0.1)
    base = ell_star(geom, NO_PERTURBATION)
    w = 0.05
    shifted = ell_star(geom, PerturbBounds(omega_minus=0.0, omega_plus=w))
    assert shifted - base == pytest.approx(w / math.pi ** 2, rel=1e-12)


@given(xi=st.floats(min_value=0.02, max_value=0.101))
@settings(max_examples=200, deadline=None)
def test_ell_star_stays_in_its_sandwich(xi):
    geom = resolve_geometry(T=1.0, xi=xi)
    value = ell_star(geom, NO_PERTURBATION)
    assert 0.25 + xi * xi < value < 2.0 / 3.0


def test_ell2_threshold_reference_value_and_terms():
    geom = resolve_geometry(T=1.0, xi=0.05)
    params = GapParams(c0=0.699118)
    assert ell2_threshold(geom, params) == pytest.approx(
        169.4112405453856, rel=1e-12)
    # the three competing terms, recomputed from scratch
    c0 = 0.699118
    t2 = ((4.0 * math.sqrt(2.0) * math.pi + 6.0) / (3.0 * math.pi * c0)) ** 4
    t3 = (math.sqrt(9.0 + 25.0 / (1024.0 * math.pi ** 2))
          / (8.0 * math.pi ** 2 * 0.05 * c0)) ** 2
    assert t2 == pytest.approx(169.4112405453856, rel=1e-12)
    assert t3 == pytest.approx(1.1817930133445782, rel=1e-12)
    assert ell2_threshold(geom, params) == max(1.0, t2, t3)


def test_ell1_threshold_reference_value():
    geom = resolve_geometry(T=1.0, xi=0.05)
    params = GapParams(c0=0.699118)
    value = ell1_threshold(geom, params, NO_PERTURBATION)
    assert value == pytest.approx(1672.0219252807456, rel=1e-12)
    # the oscillation-free fourth term stays dominated
    c0 = 0.699118
    t4 = (1.0 / (2.0 * c0) + 3.0 * 0.05 / (4.0 * math.pi * c0)) ** 4
    assert t4 == pytest.approx(0.2875165534090492, rel=1e-12)


def test_ell1_threshold_shifts_with_omega_minus():
    geom = resolve_geometry(T=1.0, xi=0.05)
    params = GapParams(c0=0.699118)
    base = ell1_threshold(geom, params, NO_PERTURBATION)
    shifted = ell1_threshold(
        geom, params, PerturbBounds(omega_minus=5.0, omega_plus=5.0))
    assert shifted == pytest.approx(base + 5.0, rel=1e-12)


def test_ell1_threshold_scales_like_inverse_fourth_power_of_c0():
    geom = resolve_geometry(T=1.0, xi=0.05)
    base = ell1_threshold(geom, GapParams(c0=0.699118), NO_PERTURBATION)
    doubled = ell1_threshold(geom, GapParams(c0=2 * 0.699118), NO_PERTURBATION)
    assert doubled / base == pytest.approx(2.0 ** -4, rel=1e-12)


# ---------------------------------------------------------------------------
# overlap lower bound
# ---------------------------------------------------------------------------

def test_overlap_bound_reference_value():
    geom = resolve_geometry(T=1.0, xi=0.05)
    params = GapParams(c0=0.699118)
    assert overlap_lower_bound(geom, params, 1e4) == pytest.approx(
        1.6174871379868092, rel=1e-12)


def test_overlap_bound_is_monotone_in_energy():
    geom = resolve_geometry(T=1.0, xi=0.05)
    params = GapParams(c0=0.699118)
    floor = math.pi ** 2 * ell2_threshold(geom, params)
    values = [overlap_lower_bound(geom, params, floor * s)
              for s in (1.0, 1.5, 2.0, 6.0)]
    assert values == sorted(values)
    assert values[0] == pytest.approx(0.9473321386124387, rel=1e-12)


def test_overlap_bound_rejects_energies_below_threshold():
    geom = resolve_geometry(T=1.0, xi=0.05)
    params = GapParams(c0=0.699118)
    with pytest.raises(ValueError, match="ell2=169.411"):
        overlap_lower_bound(geom, params, 1000.0)


# ---------------------------------------------------------------------------
# low-energy counting test
# ---------------------------------------------------------------------------

def test_low_spectrum_below_the_crossing_threshold():
    geom = resolve_geometry(T=1.0, xi=0.1)
    check = low_spectrum_no_gap(geom, NO_PERTURBATION, 0.30)
    assert check.tau_max == 0.0
    assert check.tau_min == pytest.approx(1.0 - math.sqrt(0.30), rel=1e-15)
    assert (check.shifted_count, check.reference_count) == (5, 3)
    assert check.difference == 2
    assert check.positive


def test_low_spectrum_above_the_crossing_threshold():
    geom = resolve_geometry(T=1.0, xi=0.1)
    check = low_spectrum_no_gap(geom, NO_PERTURBATION, 0.5)
    assert check.tau_max == 0.5
    assert (check.shifted_count, check.reference_count) == (10, 6)
    assert check.difference == 4
    assert check.positive


def test_low_spectrum_rejects_out_of_window_energies():
    geom = resolve_geometry(T=1.0, xi=0.1)
    with pytest.raises(ValueError):
        low_spectrum_no_gap(geom, NO_PERTURBATION, 0.25 + 0.01)  # closed endpoint
    with pytest.raises(ValueError):
        low_spectrum_no_gap(geom, NO_PERTURBATION, 1.0)


def test_low_spectrum_rejects_out_of_regime_ratio():
    geom = resolve_geometry(T=1.0, xi=0.2)
    with pytest.raises(ValueError, match="subcritical"):
        low_spectrum_no_gap(geom, NO_PERTURBATION, 0.5)


@given(
    xi=st.floats(min_value=0.02, max_value=0.1),
    frac=st.floats(min_value=1e-3, max_value=1.0 - 1e-3),
    wfrac=st.floats(min_value=0.0, max_value=0.9),
)
@settings(max_examples=300, deadline=None)
def test_low_spectrum_is_always_positive_in_regime(xi, frac, wfrac):
    geom = resolve_geometry(T=1.0, xi=xi)
    lo = 0.25 + xi * xi
    ell = lo + frac * (1.0 - lo)
    omega_L = wfrac * low_energy_budget(xi) * math.pi ** 2
    check = low_spectrum_no_gap(
        geom, PerturbBounds(omega_minus=0.0, omega_plus=omega_L), ell)
    assert check.positive, check


# ---------------------------------------------------------------------------
# consolidated report
# ---------------------------------------------------------------------------

def test_gap_report_unperturbed_certifies_every_overlapping_pair():
    # with zero oscillation every pair with computed overlap >= 0 certifies;
    # pairs whose bands merely touch can carry the refiner's tiny inward bias
    # and honestly stay undecided (conservative, never unsound)
    geom = resolve_geometry(T=1.0, d=1.0)
    bands = band_table(geom, 12)
    report = gap_report(geom, NO_PERTURBATION, GapParams(c0=0.7), bands,
                        ell_max=8.0, low_spectrum_points=0)
    assert report.candidate_gaps
    for g in report.candidate_gaps:
        if g.unperturbed_overlap >= 0.0:
            assert g.certified_absent
        else:
            assert g.unperturbed_overlap > -1e-8  # touching pair, bias only
    assert sum(g.certified_absent for g in report.candidate_gaps) >= len(
        report.candidate_gaps) - 1
    assert report.undecided == tuple(
        g for g in report.candidate_gaps if not g.certified_absent)
    assert report.bands == tuple(bands)  # zero perturbation leaves enclosures alone
    assert not report.low_spectrum_applicable  # xi = 1 far above the regime


def test_gap_report_enclosures_shift_by_the_perturbation_bounds():
    geom = resolve_geometry(T=1.0, d=1.0)
    bands = band_table(geom, 8)
    bounds = PerturbBounds(omega_minus=-0.25, omega_plus=0.75)
    report = gap_report(geom, bounds, GapParams(c0=0.7), bands,
                        ell_max=4.0, low_spectrum_points=0)
    for enc, b in zip(report.bands, bands):
        assert enc.lo == pytest.approx(b.lo - 0.25, rel=1e-14)
        assert enc.hi == pytest.approx(b.hi + 0.75, rel=1e-14)


def test_gap_report_certifies_exactly_the_wide_overlaps():
    geom = resolve_geometry(T=1.0, d=1.0)
    bands = band_table(geom, 12)
    bounds = PerturbBounds(omega_minus=0.0, omega_plus=2.0)
    report = gap_report(geom, bounds, GapParams(c0=0.7), bands,
                        ell_max=8.0, low_spectrum_points=0)
    for g in report.candidate_gaps:
        below = bands[g.k - 1]
        above = bands[g.k]
        assert g.unperturbed_overlap == pytest.approx(
            below.hi - above.lo, rel=1e-14)
        assert g.certified_absent == (g.unperturbed_overlap >= 2.0)
        assert g.lo == pytest.approx(below.hi + 0.0, rel=1e-14)
        assert g.hi == pytest.approx(above.lo + 2.0, rel=1e-14)
    assert report.undecided == tuple(
        g for g in report.candidate_gaps if not g.certified_absent)


def test_gap_report_runs_the_low_energy_grid_in_regime():
    geom = resolve_geometry(T=1.0, xi=0.1)
    bands = band_table(geom, 40, refine=False)
    report = gap_report(geom, NO_PERTURBATION, GapParams.from_small_ratio(0.1),
                        bands, ell_max=2.0, low_spectrum_points=16)
    assert report.low_spectrum_applicable
    assert len(report.low_spectrum) == 16
    assert all(c.positive for c in report.low_spectrum)
    assert report.ell_star == pytest.approx(0.37763465727591716, rel=1e-12)
    lo = 0.25 + 0.01
    assert all(lo < c.ell < 1.0 for c in report.low_spectrum)


def test_gap_report_validates_the_band_input():
    geom = resolve_geometry(T=1.0, d=1.0)
    bands = band_table(geom, 6)
    params = GapParams(c0=0.7)
    with pytest.raises(ValueError, match="nonempty"):
        gap_report(geom, NO_PERTURBATION, params, [], ell_max=2.0)
    with pytest.raises(ValueError, match="consecutively"):
        gap_report(geom, NO_PERTURBATION, params, bands[1:], ell_max=2.0)
    with pytest.raises(ValueError, match="cover"):
        gap_report(geom, NO_PERTURBATION, params, bands, ell_max=50.0)


def test_gap_report_is_deterministic():
    geom = resolve_geometry(T=1.0, xi=0.1)
    bands = band_table(geom, 30, refine=False)
    args = (geom, NO_PERTURBATION, GapParams.from_small_ratio(0.1), bands)
    a = gap_report(*args, ell_max=1.5, low_spectrum_points=8)
    b = gap_report(*args, ell_max=1.5, low_spectrum_points=8)
    assert a == b
