"""Fiber spectrum of the unperturbed strip operator.

Bloch decomposition with respect to the period ``2T`` reduces the Dirichlet
Laplacian on the strip ``0 < x2 < d`` to a family of fiber operators indexed
by the quasimomentum ``tau`` in ``(-1/2, 1/2]``.  The fiber eigenvalues are
explicit separable modes, indexed by ``n`` in Z (longitudinal) and ``m >= 1``
(transverse):

    E_{n,m}(tau) = (pi^2 / T^2) (tau + n)^2 + pi^2 m^2 / d^2.

In dimensionless form (energy = pi^2 ell / T^2, xi = T/d) the level set reads

    e_{n,m}(tau) = (tau + n)^2 + xi^2 m^2 <= ell,

so the rescaled counting function

    N0(ell, tau) = #{(n, m) : n in Z, m >= 1, (tau + n)^2 + xi^2 m^2 <= ell}

counts lattice points inside a half ellipse.  N0 is an even, 1-periodic step
function of tau; this module provides it in two representations (direct
lattice enumeration and row-wise floors), its exact jump structure on the
Brillouin zone (used for exact integration and for sup/inf), and the band
functions E_k(tau) with their extrema (band endpoints).

Floating-point boundary rule: a lattice point whose level differs from ell by
at most ``1e-12 * max(1, ell)`` counts as inside.  Both representations share
one predicate, so they agree exactly even at ties.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import StripGeometry, validate_ell, validate_tau

# Inclusive-boundary tolerances: relative for lattice levels, absolute (in tau
# units) for clamping jump positions onto the Brillouin-zone edges.
BOUNDARY_RTOL = 1e-12
_EDGE_TOL = 1e-12

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Mode:
    """Separable mode label: longitudinal index n (any sign), transverse m >= 1."""

    n: int
    m: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"transverse index m must be >= 1, got {self.m}")


@dataclass(frozen=True)
class SpectralBand:
    """Closed band [lo, hi] of the k-th band function (energy units)."""

    k: int
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"band index must be >= 1, got {self.k}")
        if not self.lo <= self.hi:
            raise ValueError(f"band endpoints out of order: [{self.lo}, {self.hi}]")


def mode_energy(geom: StripGeometry, tau: float, mode: Mode) -> float:
    """Fiber eigenvalue (pi^2/T^2)(tau+n)^2 + pi^2 m^2 / d^2."""
    validate_tau(tau)
    pi2 = math.pi * math.pi
    return pi2 * (tau + mode.n) ** 2 / (geom.T * geom.T) + pi2 * mode.m ** 2 / (geom.d * geom.d)


def scaled_mode_level(xi: float, tau: float, n: int, m: int) -> float:
    """Dimensionless level (tau+n)^2 + xi^2 m^2."""
    return (tau + n) ** 2 + (xi * m) ** 2


def _inclusive_threshold(ell: float) -> float:
    return ell + BOUNDARY_RTOL * max(1.0, ell)


def counting(geom: StripGeometry, ell: float, tau: float,
             representation: str = "lattice") -> int:
    """Rescaled counting function N0(ell, tau).

    representation="lattice" enumerates the admissible (n, m) pairs directly;
    representation="rows" sums, over each longitudinal index n, the number of
    transverse indices in the row (the floor formula).  Both share the same
    inclusive boundary predicate and return identical values.
    """
    validate_ell(ell)
    validate_tau(tau)
    if representation not in ("lattice", "rows"):
        raise ValueError(f"unknown representation {representation!r}")
    xi = geom.xi
    xi2 = xi * xi
    thresh = _inclusive_threshold(ell)
    if xi2 > thresh:
        return 0
    root = math.sqrt(thresh)
    n_lo = math.ceil(-root - tau) - 1
    n_hi = math.floor(root - tau) + 1
    total = 0
    if representation == "lattice":
        for n in range(n_lo, n_hi + 1):
            nt2 = (n + tau) ** 2
            m = 1
            while nt2 + xi2 * m * m <= thresh:
                total += 1
                m += 1
    else:
        for n in range(n_lo, n_hi + 1):
            nt2 = (n + tau) ** 2
            rem = thresh - nt2
            if rem < xi2:
                # fast reject, but re-check with the shared predicate so ties
                # resolve identically in both representations
                if nt2 + xi2 <= thresh:
                    rem = xi2
                else:
                    continue
            m = int(math.sqrt(rem) / xi)
            while nt2 + xi2 * (m + 1) * (m + 1) <= thresh:
                m += 1
            while m >= 1 and nt2 + xi2 * m * m > thresh:
                m -= 1
            total += m
    return total


def row_radii(xi: float, ell: float) -> np.ndarray:
    """Radii r_m = sqrt(ell - xi^2 m^2) for m = 1..floor(sqrt(ell)/xi).

    Row m of the level set is non-empty exactly on |tau + n| <= r_m.  Computed
    from the exact ell (no inclusive inflation): these radii feed closed-form
    sums and exact integrals, where measure-zero boundary ties are irrelevant.
    """
    if ell < xi * xi:
        return np.empty(0)
    m_top = int(math.sqrt(ell) / xi)
    while xi * xi * (m_top + 1) ** 2 <= ell:
        m_top += 1
    while m_top >= 1 and xi * xi * m_top * m_top > ell:
        m_top -= 1
    m = np.arange(1, m_top + 1, dtype=float)
    return np.sqrt(np.maximum(ell - (xi * m) ** 2, 0.0))


def jump_events(xi: float, ell: float, inclusive: bool = False):
    """Jump structure of tau -> N0(ell, tau) on [-1/2, 1/2].

    Each row-m interval |tau + n| <= r_m contributes a closed interval
    [-r_m - n, r_m - n].  Returns (start_count, events) where start_count is
    the number of intervals containing tau = -1/2 and events is a sorted list
    of (tau_b, n_enter, n_leave): n_enter intervals begin at tau_b (the point
    counts at tau_b) and n_leave intervals end at tau_b (the point still
    counts at tau_b, not after).  Jump positions within 1e-12 of the zone
    edges are clamped onto the edge.

    inclusive=True builds the intervals from the same tie-tolerant threshold
    counting uses, so pointwise walks (sup/inf) see exactly the lattice
    points counting sees; the default keeps the exact radii, which is what
    panel integration wants (boundary ties have measure zero there, and the
    exact radii match the closed-form coefficient sums to full precision).
    """
    agg: dict[float, list[int]] = {}
    start = 0
    for r in row_radii(xi, _inclusive_threshold(ell) if inclusive else ell):
        n_lo = math.ceil(-r - 0.5) - 1
        n_hi = math.floor(r + 0.5) + 1
        for n in range(n_lo, n_hi + 1):
            left = -r - n
            right = r - n
            if right < -0.5 or left > 0.5:
                continue
            if left <= -0.5 + _EDGE_TOL:
                start += 1
            else:
                agg.setdefault(left, [0, 0])[0] += 1
            if right <= 0.5 - _EDGE_TOL:
                agg.setdefault(right, [0, 0])[1] += 1
    events = sorted((tau_b, pm[0], pm[1]) for tau_b, pm in agg.items())
    return start, events


def counting_extremes(geom: StripGeometry, ell: float) -> tuple[int, int]:
    """Exact (sup, inf) of N0(ell, .) over the closed zone [-1/2, 1/2].

    Walks the jump structure: the supremum can only occur at a jump position
    (closed intervals gain points there), the infimum only on panel
    interiors.  Uses the inclusive (tie-tolerant) intervals so the result is
    consistent with counting at every tau, including exact boundary ties
    such as band endpoints.
    """
    validate_ell(ell)
    start, events = jump_events(geom.xi, ell, inclusive=True)
    run = start
    sup = inf = start
    for _tau_b, n_enter, n_leave in events:
        sup = max(sup, run + n_enter)
        run += n_enter - n_leave
        sup = max(sup, run)
        inf = min(inf, run)
    return sup, inf


# ---------------------------------------------------------------------------
# band functions and their extrema
# ---------------------------------------------------------------------------

def scaled_levels_below(xi: float, tau: float, ceiling: float) -> np.ndarray:
    """All dimensionless levels (tau+n)^2 + xi^2 m^2 <= ceiling, unsorted."""
    rows = []
    m = 1
    xi2 = xi * xi
    while xi2 * m * m <= ceiling:
        r = math.sqrt(ceiling - xi2 * m * m)
        n = np.arange(math.ceil(-r - tau), math.floor(r - tau) + 1, dtype=float)
        rows.append((n + tau) ** 2 + xi2 * m * m)
        m += 1
    if not rows:
        return np.empty(0)
    return np.concatenate(rows)


def kth_scaled_level(xi: float, k: int, tau: float,
                     max_ceiling: float = 1e12) -> float:
    """k-th smallest dimensionless level at quasimomentum tau.

    Enumerates levels below an adaptive ceiling, doubling it until at least k
    levels are found (the density of levels is ~ pi/(2 xi) per unit ell).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    ceiling = max(1.0, xi * xi + 1.0, 2.6 * xi * k / math.pi)
    while ceiling <= max_ceiling:
        vals = scaled_levels_below(xi, tau, ceiling)
        if vals.size >= k:
            return float(np.partition(vals, k - 1)[k - 1])
        ceiling *= 2.0
    raise ValueError(
        f"k={k} exceeds the number of modes below the search ceiling {max_ceiling}")


def _refine_extremum(f, grid: np.ndarray, j: int, minimize: bool,
                     iters: int = 40) -> float:
    """Golden-section refinement of an extremum bracketed around grid[j].

    Never returns a worse value than the grid scan: the incumbent starts at
    the grid point and only improves.  The refinement is local; the grid must
    be fine enough to place j in the right basin.
    """
    sign = 1.0 if minimize else -1.0
    a = grid[max(j - 1, 0)]
    b = grid[min(j + 1, len(grid) - 1)]
    best_v = sign * f(grid[j])
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc = sign * f(c)
    fd = sign * f(d)
    for _ in range(iters):
        best_v = min(best_v, fc, fd)
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = sign * f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = sign * f(d)
    best_v = min(best_v, fc, fd)
    return sign * best_v


def band_endpoints_unperturbed(geom: StripGeometry, k: int,
                               tau_grid_size: int = 101) -> tuple[float, float]:
    """Endpoints (eta_k, theta_k) of the k-th unperturbed band (energy units).

    Scans E_k over a uniform tau grid on [-1/2, 1/2], then refines the min and
    the max by golden section inside the bracketing grid cell (40 iterations).
    """
    if tau_grid_size < 3:
        raise ValueError(f"tau_grid_size must be >= 3, got {tau_grid_size}")
    xi = geom.xi
    grid = np.linspace(-0.5, 0.5, tau_grid_size)
    vals = np.array([kth_scaled_level(xi, k, t) for t in grid])
    f = lambda t: kth_scaled_level(xi, k, t)
    lo = _refine_extremum(f, grid, int(np.argmin(vals)), minimize=True)
    hi = _refine_extremum(f, grid, int(np.argmax(vals)), minimize=False)
    scale = math.pi * math.pi / (geom.T * geom.T)
    return scale * lo, scale * hi


def band_table(geom: StripGeometry, k_max: int,
               tau_grid_size: int = 101, refine: bool = True) -> list[SpectralBand]:
    """Bands 1..k_max as SpectralBand records (energy units).

    One grid pass computes the k_max smallest levels at every grid tau; each
    band's extrema are then refined like band_endpoints_unperturbed.  With
    refine=False the endpoints are the raw grid extrema: much faster for
    large k_max, with an O(grid step squared) inward bias (minima high, maxima
    low), so band overlaps are understated; conclusions drawn from overlap
    comparisons stay conservative.
    """
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    if tau_grid_size < 3:
        raise ValueError(f"tau_grid_size must be >= 3, got {tau_grid_size}")
    xi = geom.xi
    grid = np.linspace(-0.5, 0.5, tau_grid_size)
    table = np.empty((tau_grid_size, k_max))
    ceiling = max(1.0, xi * xi + 1.0, 2.6 * xi * k_max / math.pi)
    for i, tau in enumerate(grid):
        c = ceiling
        vals = scaled_levels_below(xi, tau, c)
        while vals.size < k_max:
            c *= 2.0
            vals = scaled_levels_below(xi, tau, c)
        part = np.partition(vals, k_max - 1)[:k_max]
        part.sort()
        table[i] = part
    scale = math.pi * math.pi / (geom.T * geom.T)
    bands = []
    for k in range(1, k_max + 1):
        col = table[:, k - 1]
        if refine:
            f = lambda t, _k=k: kth_scaled_level(xi, _k, t)
            lo = _refine_extremum(f, grid, int(np.argmin(col)), minimize=True)
            hi = _refine_extremum(f, grid, int(np.argmax(col)), minimize=False)
        else:
            lo = float(col.min())
            hi = float(col.max())
        bands.append(SpectralBand(k=k, lo=scale * lo, hi=scale * hi))
    return bands
