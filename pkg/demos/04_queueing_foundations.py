"""
Where the coefficients come from
================================

The capacity model is not a curve someone liked: it is the synchronous
worst case of a closed queue.  N clients cycle between thinking (z) and
a single server (s).  This script solves the queue exactly, shows the
bound underneath it, and reads alpha and beta straight off the queue's
timing parameters.
"""

import numpy as np

from uslkit import (
    QueueParams,
    UslParams,
    fit_usl,
    generate_synthetic,
    mva_solve,
    sync_bound,
    sync_bound_capacity,
    usl_capacity,
)

s, z = 0.05, 0.95  # 50 ms of service per request, ~1 s of client think time

print("   N     exact X    bound X    exact/bound")
for n in (1, 2, 4, 8, 16, 32, 64):
    p = QueueParams(n=n, s=s, z=z)
    exact = mva_solve(p).x
    bound = sync_bound(p)
    print(f"{n:4d}  {exact:10.4f}  {bound:9.4f}  {exact / bound:11.4f}")

# the bound normalized by its N=1 value IS the contention-only model,
# with alpha determined by the timing ratio alone
alpha = s / (s + z)
print(f"\nalpha = s/(s+z) = {alpha}")
cap = sync_bound_capacity(32, QueueParams(n=1, s=s, z=z))
print(f"bound capacity at N=32: {cap.capacity:.4f}")
print(f"model capacity at N=32: {usl_capacity(32, UslParams(alpha, 0.0)):.4f}")

# adding a per-pair penalty c to the service demand brings in the
# second coefficient: beta = c * alpha
c = 0.002
pen = sync_bound_capacity(32, QueueParams(n=1, s=s, z=z, c=c))
print(f"\nwith a pairwise penalty c={c}: beta = c*alpha = {pen.beta:.6f}")
print(f"penalized capacity at N=32: {pen.capacity:.4f}")

# round trip: sample the penalized model with noise, fit, compare
truth = pen.params(x1=1.0 / (s + z))
data = generate_synthetic(truth, [1, 2, 4, 8, 16, 32, 64], noise=0.01, seed=5)
fit = fit_usl(data)
print("\nfit on noisy samples of that queue:")
print(f"  alpha {fit.params.alpha:.5f} (true {truth.alpha:.5f})")
print(f"  beta  {fit.params.beta:.6f} (true {truth.beta:.6f})")
print(f"  peak  N = {fit.peak:.1f} (true {np.sqrt((1 - truth.alpha) / truth.beta):.1f})")
