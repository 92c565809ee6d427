"""How unlikely is an atypical mean radius?

For a large plasma the mean radial displacement Delta_N concentrates at 2/3,
the mean radius of the uniform unit disk. Deviations cost
P(Delta_N ~ x) ~ exp(-beta N^2 Psi(x)). This script tabulates the ingredients:
the tilted equilibrium measure, the cumulant generating function J(s), its
slope x(s), and the rate function Psi obtained by Legendre transform.
"""
import math

from plasma_ldp import analytic as an

print("Tilting by s pushes charge inward (s > 0) or outward (s < 0).")
print(f"{'s':>6} {'support':>22} {'topology':>9} {'x(s)':>10} {'J(s)':>12}")
for s in (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0):
    m = an.support_radii(s)
    print(f"{s:6.2f} [{m.r0:8.5f}, {m.R0:8.5f}] {m.topology:>9} "
          f"{an.mean_displacement(s):10.6f} {an.cumulant_gf(s):12.8f}")

print("\nEvery s < 0 opens a hole of radius -s: the plasma becomes an annulus.")
print("\nThe rate function is zero only at the typical value and grows on both sides:")
print(f"{'x':>6} {'Psi(x)':>14} {'s*(x)':>10} {'duality residual':>18}")
for x in (0.05, 0.2, 0.5, 2 / 3, 0.8, 1.2, 2.0, 4.0):
    psi = an.rate_function(x)
    s = an.tilt_inverse(x)
    res = an.cumulant_gf(s) - psi - s * x
    print(f"{x:6.3f} {psi:14.8f} {s:10.5f} {res:18.2e}")

print("\nNear 2/3 the fluctuations are Gaussian: Psi(x) ~ (x - 2/3)^2.")
for d in (1e-2, 1e-3):
    print(f"  Psi(2/3 + {d:g}) / {d:g}^2 = {an.rate_function(2 / 3 + d) / d ** 2:.5f}")

print("\nFar tails: a squeezed gas (x -> 0) pays a logarithm, a dilated one (x -> inf) a quadratic.")
for x in (1e-2, 1e-3, 1e-4):
    print(f"  x={x:g}: Psi + log(2x)/2 = {an.rate_function(x) + 0.5 * math.log(2 * x):+.6f}  (-> -1/8)")
for x in (10.0, 30.0):
    print(f"  x={x:g}: Psi / x^2 = {an.rate_function(x) / x ** 2:.6f}  (-> 1/2)")
