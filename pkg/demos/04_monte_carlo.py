"""Metropolis sampling of the tilted plasma at any beta.

The limiting slope x(s) = J'(s) does not depend on beta. This script runs
chains at several (beta, s), compares the mean of Delta_N with x(s), and
shows that the residual is a finite-size effect that shrinks like 1/N.
Runtime: about ten seconds.
"""
from plasma_ldp import analytic as an
from plasma_ldp import exact_beta2 as eb
from plasma_ldp import sampler as smp

print("beta = 2 has an exact finite-N answer to check the sampler against:")
for s in (0.0, -0.5, 1.0):
    st = smp.run_chain(smp.PlasmaParams(64, 2.0, s), smp.Schedule(20000), 100)
    exact = eb.tilted_mean_exact(64, s)
    print(f"  s={s:+.1f}: MC {st.mean:.5f} +- {st.std_error:.5f}, exact {exact:.5f}, "
          f"z={(st.mean - exact) / st.std_error:+.2f}, acceptance {st.acceptance_rate:.2f}, "
          f"tau {st.tau_int:.1f}")

print("\nAt s = -0.5 the particles avoid the disk r < 0.5:")
st = smp.run_chain(smp.PlasmaParams(64, 2.0, -0.5), smp.Schedule(20000), 101)
for r in (0.3, 0.4, 0.45, 0.5, 0.6):
    print(f"  fraction with radius < {r}: {st.fraction_below(r):.4f}")

print("\nOther beta: mean of Delta_N minus x(s), times N:")
print(f"{'beta':>5} {'s':>5} " + " ".join(f"{'N=' + str(N):>18}" for N in (16, 32, 64)))
for beta, s in ((1.0, -1.0), (4.0, 1.0)):
    cells = []
    for N in (16, 32, 64):
        cmp = smp.tilted_mean_vs_theory(smp.PlasmaParams(N, beta, s), smp.Schedule(20000), N)
        cells.append(f"{N * (cmp.empirical_mean - cmp.theory_x_of_s):+8.4f} (z={cmp.z_score:+6.1f})")
    print(f"{beta:5.1f} {s:5.1f} " + " ".join(f"{c:>18}" for c in cells))
print("N * (mean - x(s)) stays of order 0.2-0.3 while the offset itself halves with each")
print("doubling of N: it is a 1/N correction, not a beta dependence of the limit. The error")
print("bar at a fixed number of sweeps also scales like 1/N, so the z-score does not fall.")
print(f"For reference x(-1) = {an.mean_displacement(-1.0):.6f}, x(1) = {an.mean_displacement(1.0):.6f}.")
