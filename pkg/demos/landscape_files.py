"""Violation landscapes to CSV, analytic and sampled-circuit modes.

Run with: python demos/landscape_files.py  (writes into ./demo-output/)
"""

import os

from chsh_kcbs import cli

OUT_DIR = "demo-output"
os.makedirs(OUT_DIR, exist_ok=True)

# ------------------------------------------------------------------
# 1. A coarse analytic landscape.  The CSV starts with the effective
#    configuration as comment lines, then one row per grid cell.
# ------------------------------------------------------------------
analytic_csv = os.path.join(OUT_DIR, "landscape_analytic.csv")
cli.main(["landscape", "--n", "5", "--theta", "0:180:19", "--phi", "0:360:19",
          "--mode", "analytic", "--out", analytic_csv])
print(f"wrote {analytic_csv}")
with open(analytic_csv) as handle:
    for line in list(handle)[:8]:
        print("  " + line.rstrip())

# ------------------------------------------------------------------
# 2. The same cells re-measured by sampled Fourier tests.  Each cell
#    records the derived seed that generated its counts.
# ------------------------------------------------------------------
circuit_csv = os.path.join(OUT_DIR, "landscape_circuit.csv")
cli.main(["landscape", "--n", "5", "--theta", "30:90:3", "--phi", "0:180:2",
          "--mode", "circuit", "--shots", "20000", "--seed", "7",
          "--out", circuit_csv])
print(f"\nwrote {circuit_csv}")
with open(circuit_csv) as handle:
    for line in list(handle)[:12]:
        print("  " + line.rstrip())

# ------------------------------------------------------------------
# 3. One Fourier-test correlator dumped as JSON, sampled at 50k shots.
# ------------------------------------------------------------------
fourier_json = os.path.join(OUT_DIR, "fourier_test.json")
cli.main(["fourier-test", "--n", "5", "--theta", "49.605", "--phi", "0",
          "--alice", "w0", "--bob", "bmbm1", "--shots", "50000", "--seed", "1",
          "--out", fourier_json])
print(f"\nwrote {fourier_json}")
with open(fourier_json) as handle:
    print(handle.read())
