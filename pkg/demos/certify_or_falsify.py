"""Certify a hyperbolic cocycle, falsify a rotation, and run the periodic-shadow transfer on the rotation."""
import math

from cocycle_lab import Mat2, constant_cocycle, one_step
from cocycle_lab.lyapunov import gap_scan, sampled_exponent
from cocycle_lab.sl2 import rotation
from cocycle_lab.symbolic import full_shift
from cocycle_lab.transfer import run_transfer
from cocycle_lab.uh import certify

d = Mat2.diag(3.0, 1 / 3)
hyperbolic = one_step(full_shift(2, 0), {0: d, 1: d @ rotation(0.1)})
elliptic = constant_cocycle(rotation(0.6435011087932844), alpha=0.5)

v = certify(hyperbolic)
cert = v.certificate
print(f"hyperbolic: {v.status}, growth >= {cert.c:.3f} e^({cert.tau:.4f} n), cone words of length "
      f"{cert.unstable.word_length}")
scan = gap_scan(hyperbolic, 10, cert.tau / 2)
print(f"  periodic exponents up to period 10 in [{scan.min_lambda:.5f}, {max(scan.exponents):.5f}]")
print(f"  sampled exponent at n = 2000: {sampled_exponent(hyperbolic, [0.5, 0.5], 2000, 4).lambda_plus:.5f}")

v = certify(elliptic)
print(f"rotation: {v.status}, ||A^{v.witness.n}(x)|| = {v.witness.norm:.3f} at x = {v.witness.x!r}")

slow, shadow, rep = run_transfer(elliptic, 10, eps=0.01)
print(f"transfer: slow point norm {slow.norm:.3f}, shadow period {shadow.period}, "
      f"lambda+(p) = {rep.lambda_p} <= bound {rep.exponent_bound:.3e}")
for name, value in zip(rep.factor_names, rep.factor_norms):
    print(f"  {name:24s} {value:.6f}")
