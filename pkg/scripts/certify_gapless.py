"""End-to-end gapless certification demo for a perturbed Dirichlet strip.

Given an aspect ratio xi in the small-ratio regime and a perturbation band
[-omega_minus, omega_plus], this walks the full certification chain:

  1. check the three smallness conditions (subcritical xi, oscillation below
     the low-energy budget, positive small-period margin);
  2. compute the low-energy onset ell_star and the high-energy threshold ell1;
  3. enclose the unperturbed bands up to the scaled ceiling ell_max and
     certify every consecutive candidate window whose unperturbed overlap
     exceeds the total oscillation omega_minus + omega_plus;
  4. run the counting-difference test on a grid of scaled energies below 1.

Exit status 0 means every candidate window was certified and every low-energy
check came out positive; 2 means at least one verdict was negative.

Usage:
    python3 scripts/certify_gapless.py --xi 0.05 --omega-plus 0.1 \
        --ell-max 6 --format report
"""

import argparse
import math
import sys

from stripgaps import (
    GapParams,
    PerturbBounds,
    band_table,
    gap_report,
    resolve_geometry,
)


def parse_args(argv):
    parser = argparse.ArgumentParser(
        description="certify absence of spectral gaps for a perturbed strip")
    parser.add_argument("--xi", type=float, required=True,
                        help="aspect ratio T/d of period to width")
    parser.add_argument("--T", type=float, default=1.0, help="period length")
    parser.add_argument("--omega-minus", type=float, default=0.0,
                        help="lower perturbation extent (nonnegative)")
    parser.add_argument("--omega-plus", type=float, default=0.0,
                        help="upper perturbation extent (nonnegative)")
    parser.add_argument("--ell-max", type=float, default=6.0,
                        help="scaled energy ceiling for candidate windows")
    parser.add_argument("--low-points", type=int, default=128,
                        help="grid size for the low-energy counting test")
    parser.add_argument("--format", choices=("report", "csv"), default="report")
    return parser.parse_args(argv)


def run(args):
    geom = resolve_geometry(T=args.T, xi=args.xi)
    bounds = PerturbBounds(args.omega_minus, args.omega_plus)
    params = GapParams.from_small_ratio(geom.xi)
    k_max = 1
    bands0 = band_table(geom, k_max)
    ceiling = (math.pi ** 2 / geom.T ** 2) * args.ell_max
    while bands0[-1].hi < ceiling:
        k_max += 4
        bands0 = band_table(geom, k_max)
    report = gap_report(geom, bounds, params, bands0, args.ell_max,
                        low_spectrum_points=args.low_points)
    return geom, bounds, report


def render(geom, bounds, report, fmt):
    meta = [
        "# tool=certify_gapless",
        f"# xi={geom.xi!r}",
        f"# T={geom.T!r}",
        f"# omega_minus={bounds.omega_minus!r}",
        f"# omega_plus={bounds.omega_plus!r}",
        f"# ell_star={report.ell_star!r}",
        f"# ell1={report.ell1!r}",
        f"# conditions_ok={str(report.conditions.all_gapless).lower()}",
        f"# low_spectrum_applicable={str(report.low_spectrum_applicable).lower()}",
    ]
    if fmt == "csv":
        lines = meta + ["k,lo,hi,unperturbed_overlap,certified_absent"]
        for gap in report.candidate_gaps:
            lines.append(
                f"{gap.k},{gap.lo:.12g},{gap.hi:.12g},"
                f"{gap.unperturbed_overlap:.12g},{str(gap.certified_absent).lower()}")
        return lines
    lines = meta + [""]
    for gap in report.candidate_gaps:
        verdict = "certified" if gap.certified_absent else "UNDECIDED"
        lines.append(
            f"bands {gap.k}/{gap.k + 1}: window ({gap.lo:.9g}, {gap.hi:.9g}), "
            f"overlap {gap.unperturbed_overlap:.9g}, {verdict}")
    positives = sum(c.positive for c in report.low_spectrum)
    lines.append("")
    lines.append(
        f"low-energy counting: {positives}/{len(report.low_spectrum)} positive")
    return lines


def main(argv=None):
    args = parse_args(argv)
    geom, bounds, report = run(args)
    print("\n".join(render(geom, bounds, report, args.format)))
    clean = all(g.certified_absent for g in report.candidate_gaps)
    low_ok = (not report.low_spectrum_applicable
              or all(c.positive for c in report.low_spectrum))
    return 0 if clean and low_ok and report.conditions.all_gapless else 2


if __name__ == "__main__":
    sys.exit(main())
