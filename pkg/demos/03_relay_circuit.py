"""A DC relay circuit whose switch imperfection moves a hidden saddle.

The relay closes when the capacitor voltage V drops below the supply
level Vb.  An ideal switch gives a saddle inside the switching layer at
(mu, I) = (V0/Vb, Vb/R); a quadratic imperfection sigma in the switch
response p(mu) = mu - sigma (1 - mu) mu shifts the saddle current to
Vb / (R p(V0/Vb)) while leaving the off-surface dynamics untouched.

Which side of the saddle the trajectory lands on decides its fate: with
sigma = 0 it slides to ever-growing current; with sigma = 1/2 the shifted
saddle lets it escape at I = Vb/R = 1.6 and spiral into the closed
circuit's focus at (V0/R, V0).
"""

import numpy as np

from switchlayer import (
    CircuitParams,
    IntegratorConfig,
    circuit_iv_to_state,
    circuit_state_to_iv,
    find_layer_equilibria,
    integrate_hybrid,
    make_circuit,
    mu_of_lambda,
)


def main():
    cfg = IntegratorConfig(max_step=0.05)
    for sigma in (0.0, 0.5):
        p = CircuitParams(sigma=sigma)
        sys = make_circuit(p)
        (eq,) = find_layer_equilibria(sys, [(-1, 1), (0, 30)])
        mu = mu_of_lambda(eq.lam_e)
        print(f"sigma = {sigma}: layer saddle at mu = {mu:.6f}, "
              f"I = {eq.x_rest[0]:.6f}  [{eq.classification}]")

        traj = integrate_hybrid(sys, circuit_iv_to_state(0.0, 0.0, p),
                                (0.0, 60.0), cfg)
        i_entry = None
        for seg in traj.segments:
            if seg.regime == "sliding":
                i_entry = seg.x[0, 1]
        print(f"  transitions: {[(round(t, 3), k) for t, k in traj.transitions]}")
        if i_entry is not None:
            side = "above" if i_entry > eq.x_rest[0] else "below"
            print(f"  slide entered at I = {i_entry:.4f} ({side} the saddle)")
        i_fin, v_fin = circuit_state_to_iv(traj.x_final, p)
        print(f"  state at t = {traj.t_final:g}: I = {i_fin:.4f}, "
              f"V = {v_fin:.4f}")
        print()

    p = CircuitParams()
    print(f"closed-circuit focus: (I, V) = ({p.focus()[0]:.4f}, {p.focus()[1]:.1f})")


if __name__ == "__main__":
    main()
