"""A system that looks continuous yet can stick to its switching threshold.

The field is (1, 1) on both sides of x1 = 0, so the jump vanishes and the
classical theory predicts plain crossing.  A hidden quadratic term
2 lam^2 - 1 in the normal component creates two sliding modes inside the
layer, at lam = -+1/sqrt(2); the lower one is attracting and captures
trajectories arriving from below.
"""

import numpy as np

from switchlayer import (
    SigmoidSpec,
    find_sliding_modes,
    integrate_hybrid,
    integrate_regularized,
    make_example2,
)


def main():
    for variant in ("continuous", "nonlinear"):
        roots = find_sliding_modes(make_example2(variant), np.array([0.0]))
        desc = ", ".join(f"lam = {r.lam_s:+.6f} ({r.stability})"
                         for r in roots) or "none: the flow crosses"
        print(f"{variant:>10}: {desc}")

    sys = make_example2("nonlinear")
    traj = integrate_hybrid(sys, np.array([-0.3, 0.0]), (0.0, 1.0))
    print("\nhybrid run from (-0.3, 0):")
    for t, kind in traj.transitions:
        print(f"  t = {t:.4f}: {kind}")
    print(f"  final state {traj.x_final}, regime {traj.segments[-1].regime}")

    # the regularized flow balances at the same hidden root: v/eps -> lam_s
    sig = SigmoidSpec("piecewise_linear", eps=1e-2)
    seg = integrate_regularized(sys, sig, np.array([-0.3, 0.0]), (0.0, 1.0))
    print(f"\nregularized (eps = {sig.eps:g}): final v/eps = "
          f"{seg.x[-1, 0] / sig.eps:+.6f}  vs  -1/sqrt(2) = {-1/np.sqrt(2):+.6f}")


if __name__ == "__main__":
    main()
