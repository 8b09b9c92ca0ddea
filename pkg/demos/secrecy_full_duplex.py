"""Jam the eavesdropper yourself: full-duplex receivers for secrecy.

A destination that transmits noise while it listens degrades only the
eavesdropper (its own loop interference is cancelled or nulled), so the
secrecy rate keeps growing where half-duplex operation saturates.  The demo
traces the single-antenna and multi-antenna curves and marks the crossover
and high-SNR ratio.

Run:  python3 demos/secrecy_full_duplex.py
"""

import os

from iflab.channel_model import RngStream
from iflab.harness import emit_csv, emit_svg, load_config, run
from iflab.secrecy import SCHEME_FD_MMSE_EVE, SCHEME_FD_MRC_EVE, SCHEME_HD, secrecy_curve

GRID = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0]
TRIALS = 30000

print("Single-antenna destination and eavesdropper (residual loop fraction 0.15)")
hd = secrecy_curve(SCHEME_HD, "single", GRID, TRIALS, RngStream(1, 0))
fd = secrecy_curve(SCHEME_FD_MRC_EVE, "single", GRID, TRIALS, RngStream(1, 0))
print(f"{'SNR (dB)':>9} {'HD':>7} {'FD':>7} {'FD/HD':>6}")
for snr, a, b in zip(GRID, hd.column("mean_rate").values, fd.column("mean_rate").values):
    print(f"{snr:>9.0f} {a:>7.3f} {b:>7.3f} {b / a:>6.2f}")
print("HD saturates near 1 bpcu; FD roughly doubles it at high SNR.")

print("\n2x2 destination, 4-antenna eavesdropper")
hd_m = secrecy_curve(SCHEME_HD, "multi", GRID, TRIALS, RngStream(2, 0))
mrc = secrecy_curve(SCHEME_FD_MRC_EVE, "multi", GRID, TRIALS, RngStream(2, 0))
mmse = secrecy_curve(SCHEME_FD_MMSE_EVE, "multi", GRID, TRIALS, RngStream(2, 0))
print(f"{'SNR (dB)':>9} {'HD':>7} {'FD(MRC eve)':>12} {'FD(MMSE eve)':>13}")
for i, snr in enumerate(GRID):
    print(f"{snr:>9.0f} {hd_m.column('mean_rate').values[i]:>7.3f} "
          f"{mrc.column('mean_rate').values[i]:>12.3f} "
          f"{mmse.column('mean_rate').values[i]:>13.3f}")
print("Against a naive eavesdropper the FD rate never saturates; even an MMSE")
print("eavesdropper that filters the jamming is held below the growing FD curve.")

os.makedirs("demos/out", exist_ok=True)
cfg = load_config(overrides={"experiment": "secrecy", "trials": TRIALS,
                             "antennas": "single", "seed": 1})
result = run(cfg)[0]
emit_csv(result, "demos/out/secrecy_single.csv")
emit_svg(result, "demos/out/secrecy_single.svg")
print("\nwrote demos/out/secrecy_single.csv and .svg")
