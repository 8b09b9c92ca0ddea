"""How much is interference really worth in the 2-user Gaussian channel?

Sweeps the cross-link gain at a fixed transmit power and prints, side by
side, the rates of ignoring interference (TIN), avoiding it (orthogonal
time sharing), and embracing it (simplified Han-Kobayashi splitting or
joint decoding), against the best known outer bound.

Run:  python3 demos/gic_rate_regimes.py
"""

import os

from iflab.gic_regions import (
    GicParams,
    classify_regime,
    outer_bound_symmetric,
    rate_hk_symmetric,
    rate_orthogonal,
    rate_strong_capacity,
    rate_tin,
)
from iflab.harness import emit_csv, emit_svg, load_config, run

P_DB = 20.0
POWER = 10.0 ** (P_DB / 10.0)

print(f"Symmetric 2-user G-IC at P = {P_DB:.0f} dB; rates in bits/channel use\n")
print(f"{'a':>6} {'regime':>12} {'TIN':>7} {'orth':>7} {'HK/strong':>10} {'outer':>7} {'gap':>6}")
for a in (0.01, 0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 1.5, 5.0, POWER + 1.0):
    g = GicParams(POWER, a)
    tin = rate_tin(g)
    orth = rate_orthogonal(g)
    best = rate_hk_symmetric(g) if 0 < a < 1 else rate_strong_capacity(g)
    outer = outer_bound_symmetric(g)
    print(f"{a:>6.2f} {classify_regime(g):>12} {tin:>7.3f} {orth:>7.3f} "
          f"{best:>10.3f} {outer:>7.3f} {outer - best:>6.3f}")

print("\nNote the very strong row: decoding the interference first recovers the")
print("interference-free rate exactly, and the bound closes to zero gap.")

# full grid through the harness, emitted as CSV + SVG
os.makedirs("demos/out", exist_ok=True)
cfg = load_config(overrides={"experiment": "gic"})
result = run(cfg)[0]
emit_csv(result, "demos/out/gic_rates.csv")
emit_svg(result, "demos/out/gic_rates.svg")
print("\nwrote demos/out/gic_rates.csv and .svg (full P x a grid)")
