"""The barrier family r_c(t) = exp(exp(ct)/c) and its certificate H <= 0.

For each bundle curvature the family is mean-convex as soon as
c > c0 = 4 tau^2 + 2 tau + 1. The certificate checks every inequality of the
bounding chain on a grid; the last table shows the surfaces flattening onto
the plane {y = 0} as c grows.

Run: python3 demos/barrier_family.py
"""

import numpy as np

from nil3 import barrier as bar
from nil3 import revolution as rev

print("certification on 256 x 256 grids")
for tau, c in [(0.0, 1.5), (0.5, 3.5), (1.0, 7.5)]:
    rep = bar.certify(bar.BarrierParams(c, tau))
    print(f"  tau = {tau:<4g} c = {c:<4g} (c0 = {bar.c0(tau):g})  t in [0, {rep.t_range[1]:.3f}]  "
          f"max H = {rep.max_H:.3e}  chain slack >= {min(rep.margins.values()):.1e}  pass = {rep.passed}")

print("\nbelow c0 the sign of H is not guaranteed")
c, tau = 1.2, 0.5
e = lambda t: np.exp(c * t)
r = lambda t: np.exp(e(t) / c)
m = rev.Meridian(r, lambda t: r(t) * e(t), lambda t: r(t) * e(t) * (e(t) + c), 0.0, 1.0, "below c0")
t, phi = np.meshgrid(np.linspace(0, 1, 128), np.linspace(0, 2 * np.pi, 128, endpoint=False), indexing="ij")
print(f"  tau = {tau} c = {c} (c0 = {bar.c0(tau):g}): max H = {np.max(rev.mean_curvature(m, t, phi, tau)):.3e}")

print("\nheight t*(c, R) at which the barrier reaches radius R = 10")
for c in (2, 4, 8, 16, 64, 256):
    print(f"  c = {c:<4d} boundary radius {bar.boundary_radius(c):.4f}  t* = {bar.profile_height(c, 10.0):.4f}")

print("\nclearance threshold T(eps): beyond T the barrier stays eps away from {y = 0}")
p = bar.BarrierParams(4.0, 0.5)
for eps in (0.1, 0.2, 0.5):
    print(f"  eps = {eps:<4g} T = {bar.clearance_threshold(p, eps):.4f}")
