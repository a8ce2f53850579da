"""Walk through the diag-rotation cocycle: no uniform hyperbolicity, yet every periodic exponent stays large."""
import math

import numpy as np

from cocycle_lab import bunching_check, make_builtin, periodic_exponent
from cocycle_lab.counterexample import (
    determine_k0,
    homoclinic_point,
    inequality_thresholds,
    random_v0_point,
    self_return_point,
    track_orbit,
    verify_cone_step,
)
from cocycle_lab.cocycle import product
from cocycle_lab.lyapunov import gap_scan
from cocycle_lab.symbolic import PeriodicOrbit

spec = make_builtin("diag-rotation")
k0 = determine_k0()
print(f"k0 = {k0}  (first k where each inequality holds for good: {inequality_thresholds()})")

b = bunching_check(spec)
print(f"bunching margin at alpha = {b.alpha}: {b.margin:.6f}  -> bunched: {b.bunched}")

# the excursion through q: A^(2n) collapses back to a rotation
for n in (5, 10, 20):
    x = homoclinic_point(n)
    print(f"n = {n:2d}  ||A^2n(T^-n q)|| = {product(spec, x, 2 * n).norm():.15f}")

scan = gap_scan(spec, 12, 0.5 * math.log(2))
print(f"{len(scan.orbits)} periodic orbits up to period 12, smallest exponent {scan.min_lambda:.6f}"
      f"  (log 2 / 2 = {0.5 * math.log(2):.6f})")

for m in (7, 10, 20):
    orbit = PeriodicOrbit(self_return_point(m).right)
    lam = periodic_exponent(spec, orbit).lambda_plus
    step = verify_cone_step(self_return_point(m))
    print(f"(1 0^{2 * m})^inf: lambda+ = {lam:.6f}, cone margin {step.inclusion_margin:.3e}, "
          f"growth {step.growth:.3e} >= {step.growth_bound:.3e}")

rng = np.random.default_rng(1)
t = track_orbit(random_v0_point(rng), 40)
print(f"tracked {t.returns} returns over {t.total_time} steps: log growth {t.log_growth:.3f}, "
      f"needed {0.5 * t.total_time * math.log(2):.3f}")
