"""Phase transition of exact sign-support recovery
===================================================

Sweeps the rescaled sample size theta = n / (s * log(p - (2 - kappa) * s))
for two overlap levels and locates the 50% success crossing.  The joint
greedy transition sits near 1 - kappa/2, well below the 2 - kappa constant
reported for the convex split-penalty estimator on the same protocol.

Uses 30 trials per grid point to stay quick; bump TRIALS for smoother curves.
"""

from mtgreedy import SweepConfig, run_sweep, transition_threshold

P = 128
TRIALS = 30
GRID = [round(0.2 * k, 1) for k in range(1, 11)]
CONFIG = SweepConfig(epsilon_c=1e-5, w=1.5, nu=0.5, noise_variance=1e-4)

for kappa in (2.0 / 3.0, 0.8):
    rows = run_sweep(kappa, P, GRID, TRIALS, CONFIG, master_seed=7)
    print(f"kappa = {kappa:.3f}")
    print("  theta   n    success")
    for row in rows:
        bar = "#" * int(20 * row.success_rate)
        print(f"  {row.theta:5.1f} {row.n:4d}   {row.success_rate:5.2f} {bar}")
    crossing = transition_threshold(rows)
    print(f"  50% crossing:        {crossing:.3f}" if crossing is not None
          else "  50% crossing:        none in range")
    print(f"  conjectured value:   {1 - kappa / 2:.3f}")
    print(f"  convex split bound:  {2 - kappa:.3f}")
    print()
