"""
A small seeded sweep
====================

Compare the adjacency and expanded matrices over a grid of anomaly fractions
and intensities. Each seed shares its graph across all cells, so the
comparison is paired.
"""

from specf.sweep import SweepConfig, run_sweep

# %%
cfg = SweepConfig.from_dict(
    {"n": [200], "k": [5], "p_in": 0.3, "mu": [0.1], "an": [0.05, 0.1], "theta": [0.05, 0.2], "seeds": 4}
)
runs, cells = run_sweep(cfg)
print(f"{len(runs)} runs in {len(cells)} cells")

# %%
for c in cells:
    print(
        f"AN={c['an']:.2f} theta={c['theta']:.2f} {c['matrix']:9s} "
        f"auc={c['auc_roc']:.3f}+/-{c['auc_roc_std']:.3f} ap={c['ap']:.3f}"
    )
