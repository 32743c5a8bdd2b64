"""A forced relay whose switching layer hides a nonlinear oscillator.

Off the surface the cubic and linear relay models are identical: both
switch between -1 and +1.  Inside the layer the cubic model obeys a
forced stiff oscillator whose multiplier amplitude follows the cube root
of the forcing, roughly a^(1/3), while the linear model responds with
amplitude a.  The attractor lives entirely inside the layer -- invisible
in the off-surface state space, but exposed by the layer simulation or by
a fast tracker variable riding on the multiplier.

Run time is kept modest here by a shorter window than a converged
amplitude estimate would use.
"""

import numpy as np

from switchlayer import (
    DuffingParams,
    IntegratorConfig,
    integrate_layer_only,
    make_duffing,
)


def amplitude(seg, lo, hi):
    m = (seg.t >= lo) & (seg.t <= hi)
    return 0.5 * (seg.lam[m].max() - seg.lam[m].min())


def main():
    cfg = IntegratorConfig(rel_tol=1e-5, abs_tol=1e-8, max_step=0.05)
    span, window = (0.0, 120.0), (60.0, 120.0)
    a = DuffingParams().a
    print(f"forcing a = {a}: quasi-static targets  "
          f"a^(1/3) = {a ** (1 / 3):.3f} (cubic),  a = {a:.3f} (linear)\n")

    amps = {}
    for variant in ("nonlinear_cubic", "linear"):
        sys = make_duffing(DuffingParams(variant=variant))
        seg = integrate_layer_only(sys, 0.0, np.array([0.0]), span, cfg,
                                   eps_layer=1e-4)
        amps[variant] = amplitude(seg, *window)
        print(f"{variant:>15}: multiplier amplitude {amps[variant]:.3f}")
    print(f"\namplitude ratio: {amps['nonlinear_cubic'] / amps['linear']:.2f}")
    print("the layer stiffness adds a slowly decaying ripple on top of the")
    print("quasi-static value, so amplitudes sit above their targets at")
    print("moderate eps and shrink toward them as eps decreases")


if __name__ == "__main__":
    main()
