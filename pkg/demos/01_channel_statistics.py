"""
Channel statistics and the Gamma fit
====================================

Draw end-to-end channels for the table1 reference geometry and compare them with
the moment-matched Gamma laws.  Run with ``python demos/01_channel_statistics.py``.
"""

from dataclasses import replace

import numpy as np

from dris_noma import (fit_h_indoor, fit_h_outdoor, gamma_cdf, ks_distance, load_preset,
                       simulate_gains)

# A smaller surface keeps the demo quick; everything else is the table1 preset.
cfg = replace(load_preset("table1"), n_total=100)
print(f"N = {cfg.n_total}: N_C = {cfg.n_c} conventional, N_S = {cfg.n_s} STAR elements")

h_i, h_o = simulate_gains(cfg, trials=5000, seed=7)

for name, h, p in (("indoor ", h_i, fit_h_indoor(cfg)), ("outdoor", h_o, fit_h_outdoor(cfg))):
    print(f"{name} |h|: MC mean {h.mean():.5f} var {h.var():.3e}   "
          f"fit k={p.shape:.1f} theta={p.scale:.3e} mean {p.mean:.5f} var {p.variance:.3e}   "
          f"KS {ks_distance(p, h):.4f}")

# The fitted CDF against the empirical one at a few quantiles.
p = fit_h_outdoor(cfg)
for q in (0.05, 0.25, 0.5, 0.75, 0.95):
    x = np.quantile(h_o, q)
    print(f"  outdoor quantile {q:.2f}: x = {x:.5f}, fitted CDF {gamma_cdf(p, x):.3f}")

# Random phases lose the coherent combining gain.
rnd = replace(cfg, phase_design="random")
r_i, r_o = simulate_gains(rnd, trials=5000, seed=7)
print(f"mean |h_I| coherent {h_i.mean():.4f} vs random {r_i.mean():.4f}")
print(f"mean |h_O| coherent {h_o.mean():.4f} vs random {r_o.mean():.4f}")
