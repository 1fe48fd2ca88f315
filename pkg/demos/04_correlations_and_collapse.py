#!/usr/bin/env python3
"""How rescaling reorders the ranking: decile-wise rank correlations
between raw and rescaled impact factors, and the per-cluster ECDF
collapse measured with KS distances.

Usage: python demos/04_correlations_and_collapse.py
"""

from citefair import (
    IndicatorSpec,
    compute_table,
    decile_correlations,
    ecdf_by_group,
    ks_two_sample,
    pearson,
    rescale,
    spearman,
)
from citefair.synth import ClusterProfile, SynthProfile, generate

profile = SynthProfile(
    clusters=(
        ClusterProfile("1", "Dense", 200, 3.5, 40.0, 0.5),
        ClusterProfile("2", "Middling", 220, 1.5, 20.0, 0.5),
        ClusterProfile("3", "Sparse", 180, 0.5, 9.0, 0.4),
    ),
    items_per_journal=(5, 12),
    years=(2005, 2010),
    seed=2,
)
dataset = generate(profile)
raw = compute_table(dataset, IndicatorSpec("impact_factor", 2, "integer"))
rescaled = rescale(raw, dataset.partition)

shared = sorted(j for j, v in raw.values.items() if v is not None)
xs = [raw.values[j] for j in shared]
ys = [rescaled.values[j] for j in shared]
print(f"whole-set correlations raw vs rescaled over {len(shared)} journals:")
print(f"  Pearson r = {pearson(xs, ys):.3f}   Spearman rho = {spearman(xs, ys):.3f}")

print("\nper-decile Spearman along the raw ranking (bin 1 = top decile):")
rhos = decile_correlations(raw.values, rescaled.values, k=10)
for i, rho in enumerate(rhos, start=1):
    shown = "n/a" if rho is None else f"{rho:+.3f}"
    print(f"  decile {i:>2}: {shown}")
print("High agreement at the top and bottom, weaker in the middle, where")
print("small value differences make rankings sensitive to normalization.")

names = dataset.cluster_names
for label, table in [("raw", raw), ("rescaled", rescaled)]:
    ecdf = ecdf_by_group(table.values, dataset.partition)
    samples: dict[str, list] = {g: [] for g in ecdf}
    for jid, v in table.values.items():
        if v is not None:
            samples[dataset.partition[jid]].append(v)
    groups = sorted(samples)
    medians = {g: next(v for v, frac in ecdf[g] if frac >= 0.5) for g in groups}
    print(f"\n{label}: cluster medians "
          + ", ".join(f"{names[g]} {medians[g]:.3f}" for g in groups))
    print(f"{label}: pairwise KS distance between cluster value distributions")
    for i, g in enumerate(groups):
        for h in groups[i + 1:]:
            d = ks_two_sample(samples[g], samples[h])
            print(f"  {names[g]:<9} vs {names[h]:<9} KS = {d:.3f}")
print("\nRescaling pulls the cluster distributions onto a near-common curve;")
print("the KS distances shrink accordingly.")
