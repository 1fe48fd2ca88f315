#!/usr/bin/env python3
"""What a fair indicator looks like: the hypergeometric distribution of a
cluster's top-10% count, its 90% band, and a calibration run.

Usage: python demos/03_hypergeometric_bands.py
"""

from citefair import HypergeomParams, hypergeom_ci, hypergeom_pmf
from citefair.fairness import calibration

# a 31-journal cluster inside a 3,695-journal set, top set of 369
params = HypergeomParams(population=3695, successes=31, draws=369)
m_lo, m_hi = hypergeom_ci(params, 0.90)

print("count m -> probability that m of the 31 journals are in the top 10%")
for m in params.support:
    p = hypergeom_pmf(m, params)
    if p < 0.001:
        continue
    bar = "#" * round(300 * p)
    marker = " <- 90% band" if m_lo <= m <= m_hi else ""
    print(f"  m={m:>2}  {p:.4f} {bar}{marker}")
print(f"\n90% equal-tail band on counts: [{m_lo}, {m_hi}]"
      f"  (as percentages: [{100 * m_lo / 31:.1f}%, {100 * m_hi / 31:.1f}%])")
print("m = 0 lies outside the band: a cluster with no journals at all in")
print("the top decile fails the fairness test.")

print("\nCalibration: coverage of the band under a fair (i.i.d.) indicator")
sizes = {"small": 31, "medium": 245, "large": 531}
coverage = calibration(sizes, trials=4000, z=10, ci_level=0.90, seed=1)
for name, c in coverage.items():
    print(f"  {name:<7} (N_g={sizes[name]:>3}): empirical coverage {c:.3f}")
print("Discrete counts make the equal-tail band conservative: coverage")
print("sits at or a little above the nominal 0.90.")
