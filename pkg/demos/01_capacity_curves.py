"""
Capacity curves, peaks and regimes
==================================

Three tuned releases of the same in-memory cache, each summarized by a
(contention, coherency) coefficient pair.  Watching the curve family
shows why tuning that only nudges alpha barely moves the peak: the
coherency term owns the right-hand side of the curve.
"""

import numpy as np

from uslkit import UslParams, classify_regime, peak_concurrency, practical_peak, usl_capacity

releases = {
    "v1": UslParams(0.0255, 0.0210),
    "v2": UslParams(0.0821, 0.0207),
    "v3": UslParams(0.0988, 0.0209),
}

print("release  alpha    beta     peak N    practical  regime")
for name, p in releases.items():
    print(f"{name:7s}  {p.alpha:.4f}  {p.beta:.4f}  {peak_concurrency(p):8.4f}  "
          f"{practical_peak(p):9.0f}  {classify_regime(p).value}")

# the curves themselves, out to twice the peak
ns = np.linspace(1, 14, 200)
curves = {name: usl_capacity(ns, p) for name, p in releases.items()}

# where each release stands at the practical peak of v1
at = practical_peak(releases["v1"])
print(f"\ncapacity at N={at:.0f}:")
for name, p in releases.items():
    print(f"  {name}: {usl_capacity(at, p):.4f} ({usl_capacity(at, p) / at:.1%} efficient)")

# a contention-only system for contrast: no peak, just a ceiling
amdahl = UslParams(0.05, 0.0)
print(f"\ncontention-only (alpha=0.05): peak N = {peak_concurrency(amdahl)}")
print(f"capacity ceiling 1/alpha = {1 / amdahl.alpha:.0f}, "
      f"C(1000) = {usl_capacity(1000, amdahl):.2f}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name, caps in curves.items():
        ax.plot(ns, caps, label=name)
    ax.plot(ns, ns, "k:", lw=0.8, label="linear")
    ax.set_xlabel("concurrency N")
    ax.set_ylabel("capacity C(N)")
    ax.legend()
    fig.tight_layout()
    fig.savefig("capacity_curves.png", dpi=120)
    print("\nwrote capacity_curves.png")
except ImportError:
    print("\n(matplotlib not installed; skipping the plot)")
