"""Without the logarithmic repulsion there is no transition.

Dropping the pair interaction leaves independent Rayleigh radii. The scaled
log-Laplace transform is then the same analytic function for every N, so
nothing singular can emerge in the large-N limit. Contrast this with the
plasma at beta = 2, where the fourth difference at s = 0 drifts with N: at
fixed N it is near the smooth value -8 N^6 kappa4 (about -0.155 for large N),
and as N grows it moves toward the stencil value of the singular limit.
"""
import math

from plasma_ldp import exact_beta2 as eb
from plasma_ldp import freegas as fg

beta = 2.0
ref = fg.freegas_reference(10, beta)
d = fg.sample_freegas_delta(10, beta, 100_000, eb.make_rng(3))
print(f"mean:     closed form {ref.mean:.6f}, sampled {d.mean():.6f}")
print(f"variance: closed form {ref.variance:.6f}, sampled {d.var(ddof=1):.6f}")

print("\nSingle-particle Laplace transform <exp(-beta s r)>:")
print(f"{'s':>6} {'quadrature':>14} {'Rayleigh MGF':>14} {'printed form':>14}")
for s in (-1.0, -0.5, -0.1, 0.1, 0.5, 1.0):
    vals = [fg.single_particle_laplace(s, beta, m) for m in fg.LAPLACE_METHODS]
    print(f"{s:6.2f} " + " ".join(f"{v:14.10f}" for v in vals))
print("The commonly printed closed form matches only to first order in s.")


def fourth_difference(f, h=0.05):
    v = [f(k * h) for k in (-2, -1, 0, 1, 2)]
    return (v[0] - 4 * v[1] + 6 * v[2] - 4 * v[3] + v[4]) / h ** 4


print("\nCentred fourth difference at s = 0 (h = 0.05), free gas versus plasma at beta = 2:")
for N in (4, 16, 64, 256):
    free = fourth_difference(lambda s: -math.log(fg.freegas_laplace(s, N, beta)) / (beta * N))
    plasma = fourth_difference(lambda s: eb.scaled_log_laplace(N, s))
    smooth = -8 * eb.delta_cumulant_table(N).rescaled[3]
    print(f"  N={N:4d}: free gas {free:+.8f}   plasma {plasma:+.6f}   (-8 N^6 kappa4 = {smooth:+.6f})")
