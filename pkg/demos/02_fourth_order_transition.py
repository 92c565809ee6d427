"""A fourth-order phase transition at s = 0.

J(s) and its first three derivatives are continuous at s = 0, but the fourth
jumps by exactly 1. The jump is the analytic trace of the disk -> annulus
change of topology seen in 01_rate_function.py.
"""
from plasma_ldp import analytic as an

print(f"{'order':>5} {'left of 0':>12} {'right of 0':>12} {'jump':>10}")
for k in (1, 2, 3, 4):
    lo = an.cumulant_gf_derivative(0.0, k, "left")
    hi = an.cumulant_gf_derivative(0.0, k, "right")
    print(f"{k:5d} {lo:12.8f} {hi:12.8f} {lo - hi:10.2e}")

print("\nApproaching zero from each side, the fourth derivative tends to +1/2 and -1/2:")
for s in (1e-1, 1e-2, 1e-3):
    print(f"  J''''(-{s:g}) = {an.cumulant_gf_derivative(-s, 4):+.6f}   J''''(+{s:g}) = "
          f"{an.cumulant_gf_derivative(s, 4):+.6f}")

print("\nA finite-difference stencil of width h straddling 0 sees a blend of both sides:")
for h in (0.2, 0.1, 0.05):
    v = [an.cumulant_gf(k * h) for k in (-2, -1, 0, 1, 2)]
    d4 = (v[0] - 4 * v[1] + 6 * v[2] - 4 * v[3] + v[4]) / h ** 4
    print(f"  h={h:<5g} centred 4th difference = {d4:+.6f}")
print("It vanishes identically: the even part of J is exactly -s^2/4, and the singular")
print("fourth-order piece -|s| s^3 / 48 is odd, so a symmetric stencil cannot see it.")
print("One-sided stencils do:")
for h in (0.02, 0.01):
    right = [an.cumulant_gf(k * h) for k in range(5)]
    left = [an.cumulant_gf(-k * h) for k in range(5)]
    fwd = (right[0] - 4 * right[1] + 6 * right[2] - 4 * right[3] + right[4]) / h ** 4
    bwd = (left[0] - 4 * left[1] + 6 * left[2] - 4 * left[3] + left[4]) / h ** 4
    print(f"  h={h:<5g} backward {bwd:+.4f}   forward {fwd:+.4f}")
