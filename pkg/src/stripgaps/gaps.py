"""Spectral-gap decision machinery for the perturbed strip operator.

The perturbation is an abstract bounded symmetric cell operator known here
only through its spectral bounds omega_minus <= omega_plus (quadratic-form
infimum and supremum over the periodicity cell) and their difference, the
oscillation omega_L.  By the minimax principle every perturbed band endpoint
lies within [unperturbed + omega_minus, unperturbed + omega_plus], which is
all the certification below ever uses.

Three certified conclusions are available, all one-sided (absence of gaps is
provable, existence never is):

* High energy.  If the oscillatory minorant sup_p |phi_p(ell)| >= c0 ell^(-gamma)
  holds for ell >= ell0 (constants supplied by GapParams; for xi below the
  critical ratio the certified uniform bound provides c0 = c0(xi), gamma = 0,
  ell0 = 1), then consecutive unperturbed bands overlap by at least

      (3 pi xi c0 / T) (T^2 eta0_k / pi^2)^(1/4-gamma) - 3 pi xi / (2T) - 9 xi^2/4

  once eta0_k >= (pi^2/T^2) ell2, and no gap of the perturbed operator can
  survive above the explicit threshold ell1 (a four-term maximum plus
  omega_minus).

* Low energy.  For scaled energies 1/4 + xi^2 < ell < 1, a counting-function
  difference evaluated through the row representation is strictly positive
  whenever the oscillation fits the low-energy budget; positivity certifies
  that no gap opens in that window.

* Band pairs.  Between bands k and k+1 any perturbed gap is confined to the
  open window (theta0_k + omega_minus, eta0_{k+1} + omega_plus); the window is
  empty, and the gap certified absent, exactly when
  theta0_k - eta0_{k+1} >= omega_L.

gap_report consolidates the three into one artifact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .geometry import StripGeometry, validate_ell
from .oscillation import critical_constants
from .spectrum import SpectralBand, counting

__all__ = [
    "PerturbBounds",
    "GapParams",
    "ConditionsVerdict",
    "conditions_check",
    "ell_star",
    "ell1_threshold",
    "ell2_threshold",
    "overlap_lower_bound",
    "LowSpectrumCheck",
    "low_spectrum_no_gap",
    "GapCandidate",
    "GapReport",
    "gap_report",
]


@dataclass(frozen=True)
class PerturbBounds:
    """Spectral bounds of the perturbation over the cell.

    omega_minus (infimum) and omega_plus (supremum) of the perturbation's
    quadratic form; omega_L = omega_plus - omega_minus is the oscillation.
    Everything downstream is monotone in the enclosure, so conservative
    (outer) values stay sound.
    """

    omega_minus: float = 0.0
    omega_plus: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.omega_minus) and math.isfinite(self.omega_plus)):
            raise ValueError("perturbation bounds must be finite")
        if self.omega_minus > self.omega_plus:
            raise ValueError(
                f"omega_minus={self.omega_minus} exceeds omega_plus={self.omega_plus}"
            )

    @property
    def omega_L(self) -> float:
        """Oscillation omega_plus - omega_minus (always >= 0)."""
        return self.omega_plus - self.omega_minus


@dataclass(frozen=True)
class GapParams:
    """Constants (c0, gamma, ell0) of the oscillatory minorant hypothesis.

    The hypothesis reads sup_p |phi_p(ell)| >= c0 ell^(-gamma) for all
    ell >= ell0.  gamma < 1/4 is structural: the overlap gain grows like
    ell^(1/4-gamma) and the threshold exponents 4/(1-4 gamma), 2/(1-2 gamma)
    must stay finite and positive.
    """

    c0: float
    gamma: float = 0.0
    ell0: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.c0) and self.c0 > 0.0):
            raise ValueError(f"c0 must be positive, got {self.c0}")
        if not (math.isfinite(self.gamma) and self.gamma < 0.25):
            raise ValueError(f"gamma must be < 1/4, got {self.gamma}")
        if not (math.isfinite(self.ell0) and self.ell0 >= 1.0):
            raise ValueError(f"ell0 must be >= 1, got {self.ell0}")

    @classmethod
    def from_small_ratio(cls, xi: float) -> "GapParams":
        """Certified minorant constants for xi below the critical ratio.

        c0 = (c1 - 2 zeta(3/2) xi^(3/2)) / (pi xi), gamma = 0, ell0 = 1.
        Valid only for 0 < xi < xi_critical (where c0 > 0).
        """
        cc = critical_constants()
        if not 0.0 < xi < cc.xi_critical:
            raise ValueError(
                f"small-ratio constants require 0 < xi < {cc.xi_critical:.10f}, "
                f"got xi={xi}"
            )
        return cls(c0=cc.c0(xi), gamma=0.0, ell0=1.0)


def _a_ratio(xi: float) -> float:
    """Auxiliary ratio A(xi) = (sqrt(3 + 4 xi^2) + xi) / 3.

    A(xi)^2 is the oscillation-free part of the low-energy crossing root
    ell_star, and A enters the low-energy oscillation budget.
    """
    return (math.sqrt(3.0 + 4.0 * xi * xi) + xi) / 3.0


def low_energy_budget(xi: float) -> float:
    """Upper budget for the scaled oscillation in the low-energy argument.

    Returns ((A(xi) - xi)^2 + 1)^2 / 4 - A(xi)^2 with A as in _a_ratio.  The
    low-energy no-gap test requires (T^2/pi^2) omega_L below this value.
    """
    a = _a_ratio(xi)
    return ((a - xi) ** 2 + 1.0) ** 2 / 4.0 - a * a


@dataclass(frozen=True)
class ConditionsVerdict:
    """Boolean verdicts (with margins) of the gapless-certification conditions.

    xi_subcritical     : xi < xi_critical (small-ratio regime applies).
    low_energy_ok      : scaled oscillation (T^2/pi^2) omega_L is nonnegative
                         and strictly below low_energy_budget(xi).
    gapless_margin/ok  : sign of the scalar small-period margin
                         c1 - 2 zeta(3/2) xi^(3/2) - ((3+2 sqrt 2) pi + 3)/6 xi
                         - (3 pi/4) xi^2 - (xi/(32 pi)) sqrt(9 + 25/(1024 pi^2))
                         - T omega_L / 4;
                         nonnegative margin certifies a completely gapless
                         spectrum (given the other two conditions).
    first_band_ok      : scaled oscillation below the first band height
                         1/4 + xi^2 (implied by low_energy_ok; re-checked).
    """

    xi: float
    scaled_oscillation: float
    xi_subcritical: bool
    low_energy_budget: float
    low_energy_ok: bool
    gapless_margin: float
    gapless_ok: bool
    first_band_ok: bool

    @property
    def all_gapless(self) -> bool:
        """True when the full no-gap certification applies."""
        return self.xi_subcritical and self.low_energy_ok and self.gapless_ok


def gapless_margin(xi: float, T: float, omega_L: float) -> float:
    """Scalar margin of the small-period gapless criterion (see ConditionsVerdict)."""
    cc = critical_constants()
    return (
        cc.c1
        - 2.0 * cc.zeta32 * xi ** 1.5
        - ((3.0 + 2.0 * math.sqrt(2.0)) * math.pi + 3.0) / 6.0 * xi
        - 0.75 * math.pi * xi * xi
        - xi / (32.0 * math.pi) * math.sqrt(9.0 + 25.0 / (1024.0 * math.pi ** 2))
        - T * omega_L / 4.0
    )


def conditions_check(geom: StripGeometry, bounds: PerturbBounds) -> ConditionsVerdict:
    """Evaluate the gapless-certification conditions for (geometry, bounds).

    Internal consistency: whenever the low-energy budget condition holds, the
    first-band condition must hold too (the budget is the smaller quantity);
    a violation would indicate an arithmetic error and raises AssertionError.
    """
    xi = geom.xi
    cc = critical_constants()
    scaled = geom.T ** 2 / math.pi ** 2 * bounds.omega_L
    budget = low_energy_budget(xi)
    low_ok = 0.0 <= scaled < budget
    margin = gapless_margin(xi, geom.T, bounds.omega_L)
    first_ok = 0.0 <= scaled < 0.25 + xi * xi
    assert not low_ok or first_ok, (
        "low-energy budget accepted an oscillation above the first band height: "
        f"xi={xi}, scaled={scaled}, budget={budget}"
    )
    return ConditionsVerdict(
        xi=xi,
        scaled_oscillation=scaled,
        xi_subcritical=xi < cc.xi_critical,
        low_energy_budget=budget,
        low_energy_ok=low_ok,
        gapless_margin=margin,
        gapless_ok=margin >= 0.0,
        first_band_ok=first_ok,
    )


def ell_star(geom: StripGeometry, bounds: PerturbBounds) -> float:
    """Low-energy crossing threshold ell_star = A(xi)^2 + (T^2/pi^2) omega_L.

    ell_star is the positive root of

        2 sqrt(ell - w - 1/4) / xi - 1 = sqrt(ell - w) / xi,
        w = (T^2/pi^2) omega_L,

    the scaled energy at which the two tau strategies of the low-energy test
    exchange roles.  Whenever the first-band and subcritical-ratio conditions
    hold, 1/4 + xi^2 < ell_star < 2/3 must hold as well; a violation indicates
    an internal arithmetic error (AssertionError).
    """
    xi = geom.xi
    value = _a_ratio(xi) ** 2 + geom.T ** 2 / math.pi ** 2 * bounds.omega_L
    verdict = conditions_check(geom, bounds)
    if verdict.first_band_ok and verdict.xi_subcritical:
        assert 0.25 + xi * xi < value < 2.0 / 3.0, (
            f"crossing threshold {value} escaped its sandwich "
            f"({0.25 + xi * xi}, {2/3}) at xi={xi}"
        )
    return value


def ell2_threshold(geom: StripGeometry, params: GapParams) -> float:
    """Scaled energy beyond which the residual bound fits under (c0/2) ell^(1/4-gamma).

    Three-term maximum

        max{ ell0,
             ((4 sqrt(2) pi + 6) / (3 pi c0))^(4/(1-4 gamma)),
             ((1/(8 pi^2 xi c0)) sqrt(9 + 25/(1024 pi^2)))^(2/(1-2 gamma)) }.

    Above it the counting-function extremes clear a0 by (c0/2) ell^(1/4-gamma)
    on each side, which feeds the band-overlap bound.
    """
    xi = geom.xi
    c0, g = params.c0, params.gamma
    t2 = ((4.0 * math.sqrt(2.0) * math.pi + 6.0) / (3.0 * math.pi * c0)) ** (
        4.0 / (1.0 - 4.0 * g)
    )
    t3 = (
        math.sqrt(9.0 + 25.0 / (1024.0 * math.pi ** 2)) / (8.0 * math.pi ** 2 * xi * c0)
    ) ** (2.0 / (1.0 - 2.0 * g))
    return max(params.ell0, t2, t3)


def ell1_threshold(
    geom: StripGeometry, params: GapParams, bounds: PerturbBounds
) -> float:
    """Energy above which the perturbed spectrum certainly has no gaps.

    (pi^2/T^2) max{ ell0,
                    ((4 sqrt(2) pi + 6)/(3 pi c0))^(4/(1-4 gamma)),
                    ((1/(8 pi^2 xi c0)) sqrt(9 + 25/(1024 pi^2)))^(2/(1-2 gamma)),
                    ((T/(4 pi c0 xi)) omega_L + 1/(2 c0)
                     + 3 xi T/(4 pi c0))^(4/(1-4 gamma)) }
    + omega_minus.

    The first three terms are ell2_threshold; the fourth makes the overlap
    bound beat the oscillation omega_L.
    """
    xi = geom.xi
    c0, g = params.c0, params.gamma
    t4 = (
        geom.T / (4.0 * math.pi * c0 * xi) * bounds.omega_L
        + 1.0 / (2.0 * c0)
        + 3.0 * xi * geom.T / (4.0 * math.pi * c0)
    ) ** (4.0 / (1.0 - 4.0 * g))
    base = max(ell2_threshold(geom, params), t4)
    return math.pi ** 2 / geom.T ** 2 * base + bounds.omega_minus


def overlap_lower_bound(
    geom: StripGeometry, params: GapParams, eta0_k: float
) -> float:
    """Certified overlap of consecutive unperturbed bands at height eta0_k.

    Returns (3 pi xi c0 / T) (T^2 eta0_k / pi^2)^(1/4-gamma)
            - 3 pi xi / (2T) - 9 xi^2 / 4,
    a lower bound for theta0_k - eta0_{k+1}, valid once
    eta0_k >= (pi^2/T^2) ell2_threshold (ValueError below that, reporting the
    required threshold).  Monotone increasing in eta0_k for gamma < 1/4.
    """
    xi = geom.xi
    ell2 = ell2_threshold(geom, params)
    floor = math.pi ** 2 / geom.T ** 2 * ell2
    if not eta0_k >= floor:
        raise ValueError(
            f"overlap bound needs eta0_k >= {floor!r} "
            f"(scaled threshold ell2={ell2!r}), got {eta0_k!r}"
        )
    scaled = geom.T ** 2 * eta0_k / math.pi ** 2
    return (
        3.0 * math.pi * xi * params.c0 / geom.T * scaled ** (0.25 - params.gamma)
        - 1.5 * math.pi * xi / geom.T
        - 2.25 * xi * xi
    )


class LowSpectrumCheck(NamedTuple):
    """Outcome of the low-energy counting test at one scaled energy."""

    ell: float
    ell_star: float
    tau_max: float
    tau_min: float
    shifted_count: int
    reference_count: int
    difference: int
    positive: bool


def low_spectrum_no_gap(
    geom: StripGeometry, bounds: PerturbBounds, ell: float
) -> LowSpectrumCheck:
    """Counting-difference test excluding gaps at scaled energy ell < 1.

    Evaluates N0(ell - (T^2/pi^2) omega_L, tau_max) - N0(ell, tau_min) through
    the row representation, with tau_max = 0 for ell <= ell_star and
    tau_max = 1/2 above, and tau_min = 1 - sqrt(ell) in both cases.  A
    strictly positive difference certifies that the perturbed spectrum has no
    gap at energy (pi^2/T^2) ell.

    Preconditions: 1/4 + xi^2 < ell < 1 and the subcritical-ratio plus
    low-energy budget conditions; positivity is then guaranteed, so a
    nonpositive difference is reported (positive=False) rather than raised,
    letting property suites surface it.
    """
    validate_ell(ell)
    xi = geom.xi
    if not 0.25 + xi * xi < ell < 1.0:
        raise ValueError(
            f"low-spectrum test needs 1/4 + xi^2 < ell < 1, got ell={ell} at xi={xi}"
        )
    verdict = conditions_check(geom, bounds)
    if not (verdict.xi_subcritical and verdict.low_energy_ok):
        raise ValueError(
            "low-spectrum test requires the subcritical-ratio and low-energy "
            f"budget conditions; got {verdict}"
        )
    star = ell_star(geom, bounds)
    tau_max = 0.0 if ell <= star else 0.5
    tau_min = 1.0 - math.sqrt(ell)
    shifted = counting(
        geom, ell - verdict.scaled_oscillation, tau_max, representation="rows"
    )
    reference = counting(geom, ell, tau_min, representation="rows")
    diff = shifted - reference
    return LowSpectrumCheck(
        ell=ell,
        ell_star=star,
        tau_max=tau_max,
        tau_min=tau_min,
        shifted_count=shifted,
        reference_count=reference,
        difference=diff,
        positive=diff > 0,
    )


@dataclass(frozen=True)
class GapCandidate:
    """Window between consecutive band enclosures that could host a gap.

    Any perturbed gap between bands k and k+1 lies inside the open interval
    (lo, hi) = (theta0_k + omega_minus, eta0_{k+1} + omega_plus).  The window
    is empty (lo >= hi) exactly when theta0_k - eta0_{k+1} >= omega_L, and
    then the gap is certified absent.
    """

    k: int
    lo: float
    hi: float
    unperturbed_overlap: float
    certified_absent: bool


@dataclass(frozen=True)
class GapReport:
    """Consolidated certification artifact.

    bands holds the outer enclosures [eta0_k + omega_minus, theta0_k +
    omega_plus] of the perturbed bands; candidate_gaps the pairwise windows
    with their certification status; low_spectrum the counting verdicts on a
    grid below the scaled energy 1 (empty when its preconditions fail,
    low_spectrum_applicable records which).
    """

    ell1: float
    ell_star: float
    conditions: ConditionsVerdict
    bands: tuple[SpectralBand, ...]
    candidate_gaps: tuple[GapCandidate, ...]
    low_spectrum: tuple[LowSpectrumCheck, ...]
    low_spectrum_applicable: bool

    @property
    def undecided(self) -> tuple[GapCandidate, ...]:
        """Candidate windows the enclosure argument could not close."""
        return tuple(g for g in self.candidate_gaps if not g.certified_absent)


def gap_report(
    geom: StripGeometry,
    bounds: PerturbBounds,
    params: GapParams,
    bands0: Sequence[SpectralBand],
    ell_max: float,
    low_spectrum_points: int = 128,
) -> GapReport:
    """Consolidate enclosures, pairwise certification, and low-energy verdicts.

    bands0 must be the unperturbed bands, indexed consecutively from k=1, and
    must cover energies up to (pi^2/T^2) ell_max; candidate windows are
    emitted for every consecutive pair whose upper band starts at or below
    that ceiling.  Deterministic: output ordered by k.
    """
    validate_ell(ell_max)
    if not bands0:
        raise ValueError("bands0 must be nonempty")
    ks = [b.k for b in bands0]
    if ks != list(range(1, len(bands0) + 1)):
        raise ValueError(f"bands0 must be indexed consecutively from 1, got {ks}")
    ceiling = math.pi ** 2 / geom.T ** 2 * ell_max
    if bands0[-1].hi < ceiling:
        raise ValueError(
            f"bands0 top {bands0[-1].hi} does not cover the ceiling {ceiling}; "
            "supply more bands"
        )
    verdict = conditions_check(geom, bounds)
    enclosures = tuple(
        SpectralBand(k=b.k, lo=b.lo + bounds.omega_minus, hi=b.hi + bounds.omega_plus)
        for b in bands0
    )
    candidates = []
    for below, above in zip(bands0, bands0[1:]):
        if above.lo > ceiling:
            break
        overlap = below.hi - above.lo
        candidates.append(
            GapCandidate(
                k=below.k,
                lo=below.hi + bounds.omega_minus,
                hi=above.lo + bounds.omega_plus,
                unperturbed_overlap=overlap,
                certified_absent=overlap >= bounds.omega_L,
            )
        )
    low_applicable = verdict.xi_subcritical and verdict.low_energy_ok
    low_checks: list[LowSpectrumCheck] = []
    if low_applicable and low_spectrum_points > 0:
        xi = geom.xi
        lo = 0.25 + xi * xi
        for i in range(low_spectrum_points):
            ell = lo + (1.0 - lo) * (i + 1) / (low_spectrum_points + 1)
            low_checks.append(low_spectrum_no_gap(geom, bounds, ell))
    return GapReport(
        ell1=ell1_threshold(geom, params, bounds),
        ell_star=ell_star(geom, bounds),
        conditions=verdict,
        bands=enclosures,
        candidate_gaps=tuple(candidates),
        low_spectrum=tuple(low_checks),
        low_spectrum_applicable=low_applicable,
    )
