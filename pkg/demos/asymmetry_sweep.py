"""
Sweeping the conjugate fraction
===============================

For a fixed budget of n = 8 input modes, what share a of them should be
phase conjugates?  With exactly n clones requested the answer is none at
all, but as the number of clones grows the best split drifts toward
half-and-half, where the added noise approaches the measurement limit
1/(2n) instead of the 1/n of an all-signal input.
"""

import csv
import sys

import numpy as np

from pciclone import asymmetry_gain, measurement_noise, minimize_asymmetry

n = 8
clone_counts = [8, 9, 16, 32, 64, 256, 80000]

print(f"n = {n} input modes, best conjugate fraction per clone count M")
print(f"{'M':>6} {'a*':>10} {'n_th at a*':>12} {'n_th at a=0':>12}")
best = {}
for m in clone_counts:
    res = minimize_asymmetry(n, m)
    best[m] = res
    try:
        at_zero = (asymmetry_gain(n, m, 0.0) - 1.0) / m
        zero_txt = f"{at_zero:12.6f}"
    except Exception:
        zero_txt = "  infeasible"
    print(f"{m:>6} {res.a_star:>10.6f} {res.n_th:>12.6f} {zero_txt}")

print(f"\nmeasurement limits: all-signal {measurement_noise(n, 0):.6f}, "
      f"balanced {measurement_noise(n // 2, n // 2):.6f}")

# Dump one full scan as CSV for plotting elsewhere.
out = "asymmetry_n8_m32.csv"
with open(out, "w", newline="") as fh:
    writer = csv.writer(fh)
    writer.writerow(["a", "n_th"])
    for a in np.linspace(0.0, 1.0, 401):
        writer.writerow([f"{a:.6f}", f"{(asymmetry_gain(n, 32, a) - 1) / 32:.9f}"])
print(f"wrote {out}")

# Plot if matplotlib happens to be around; the CSV is the real output.
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit(0)

fig, ax = plt.subplots()
for m in (9, 16, 32, 64):
    a_grid = np.linspace(0.0, 1.0, 401)
    ax.plot(a_grid, [(asymmetry_gain(n, m, a) - 1) / m for a in a_grid],
            label=f"M = {m}")
    ax.plot([best[m].a_star], [best[m].n_th], "k.")
ax.set_xlabel("conjugate fraction a")
ax.set_ylabel("added noise per clone")
ax.legend()
fig.savefig("asymmetry_n8.png", dpi=120)
print("wrote asymmetry_n8.png")
