"""
The pathway penalty and its pairwise proximal map
=================================================

The penalty on one pathway (a, b) is ``|a b| + phi (a^2 + b^2)``.  The product
term alone is not convex; adding the ridge term makes it convex exactly when
phi >= 1/2.  Each ADMM iteration then reduces to many independent
two-variable problems with closed-form solutions.
"""

import numpy as np

from pathlasso.prox import pair_objective, penalty_v, prox_scalar

# Midpoint convexity along the segment from (0, 1) to (1, 0)
for phi in (0.25, 0.49, 0.5, 1.0):
    gap = penalty_v(0.5, 0.5, phi) - 0.5 * (penalty_v(0, 1, phi) + penalty_v(1, 0, phi))
    print(f"phi = {phi:4}: midpoint minus chord = {gap:+.4f}",
          "(not convex)" if gap > 0 else "")

# The pairwise problem: lam |ab| + om (|a| + |b|) + p1 a^2/2 + p2 b^2/2 - m1 a - m2 b
lam, om, p1, p2 = 1.0, 0.1, 3.0, 3.0
print("\n   m1    m2  ->      a       b  branch")
for m1, m2 in [(0.05, 0.05), (2.0, 0.05), (2.0, 2.0), (2.0, -2.0), (-1.0, 3.0)]:
    a, b, cond = prox_scalar(lam, om, p1, p2, m1, m2)
    print(f"{m1:5.2f} {m2:5.2f}  -> {a:7.4f} {b:7.4f}  {cond}")

# Brute-force check of one solution
a, b, _ = prox_scalar(lam, om, p1, p2, 2.0, 2.0)
grid = np.linspace(-2, 2, 801)
ga, gb = np.meshgrid(grid, grid, indexing="ij")
vals = pair_objective(ga, gb, lam, om, p1, p2, 2.0, 2.0)
i, j = np.unravel_index(np.argmin(vals), vals.shape)
print(f"\nclosed form ({a:.4f}, {b:.4f})  vs grid ({grid[i]:.4f}, {grid[j]:.4f})")
