"""The four reference systems with their published parameters.

All are built in adapted coordinates (the first state component is the
surface function), so every layer operation applies directly.  The relay
circuit keeps its physical (I, V) variables behind a coordinate map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SwitchedField, adapted_surface


def make_example1(variant: str = "nonlinear",
                  surface_tolerance: float = 1e-9) -> SwitchedField:
    """Planar relay with outer fields (1, -1) / (-1, -1).

    The 'nonlinear' variant is (lam, 1 - 2 lam^2): the square of the
    switching term is kept, so the sliding motion on x1 = 0 runs with
    dx2/dt = +1.  The 'filippov' variant drops it and slides with -1.
    """
    if variant not in ("filippov", "nonlinear"):
        raise ValueError(f"unknown example1 variant {variant!r}")

    def f_plus(x, t):
        return np.array([1.0, -1.0])

    def f_minus(x, t):
        return np.array([-1.0, -1.0])

    hidden = None
    if variant == "nonlinear":
        def hidden(x, t, lam):
            return np.array([0.0, -2.0])

    return SwitchedField(
        f_plus=f_plus, f_minus=f_minus,
        surface=adapted_surface(2, surface_tolerance),
        dim=2, hidden_g=hidden, time_dependent=False,
    )


def make_example2(variant: str = "nonlinear",
                  surface_tolerance: float = 1e-9) -> SwitchedField:
    """Apparently-continuous system (1, 1) on both sides.

    The 'nonlinear' variant is (2 lam^2 - 1, 1): two sliding modes at
    lam = -+1/sqrt(2).  The 'continuous' variant has no hidden term and
    simply crosses.
    """
    if variant not in ("continuous", "nonlinear"):
        raise ValueError(f"unknown example2 variant {variant!r}")

    def f_both(x, t):
        return np.array([1.0, 1.0])

    hidden = None
    if variant == "nonlinear":
        def hidden(x, t, lam):
            return np.array([2.0, 0.0])

    return SwitchedField(
        f_plus=f_both, f_minus=f_both,
        surface=adapted_surface(2, surface_tolerance),
        dim=2, hidden_g=hidden, time_dependent=False,
    )


@dataclass(frozen=True)
class CircuitParams:
    """Relay circuit constants; defaults are the published phase-portrait run."""

    L: float = 5.0
    C: float = 2.5 / 3.75  # RC = 5/2 with R = 15/4
    R: float = 3.75
    V0: float = 5.0
    Vb: float = 6.0
    sigma: float = 0.0

    def __post_init__(self):
        for name in ("L", "C", "R", "V0", "Vb"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not abs(self.sigma) < 1:
            raise ValueError("|sigma| must be < 1")

    @property
    def RC(self) -> float:
        return self.R * self.C

    def p_of_mu(self, mu: float) -> float:
        """Switch response p(mu) = mu - sigma (1 - mu) mu; p(0)=0, p(1)=1."""
        return mu - self.sigma * (1.0 - mu) * mu

    def saddle(self) -> tuple[float, float]:
        """Closed-form layer saddle (mu, I) for IR p(mu) = Vb, mu = V0/Vb."""
        mu = self.V0 / self.Vb
        return mu, self.Vb / (self.R * self.p_of_mu(mu))

    def focus(self) -> tuple[float, float]:
        """(I, V) equilibrium of the closed ('on') circuit."""
        return self.V0 / self.R, self.V0


def make_circuit(p: CircuitParams | None = None,
                 surface_tolerance: float = 1e-9) -> SwitchedField:
    """DC relay circuit in adapted coordinates x = (Vb - V, I).

    The switch mu = step(Vb - V) maps to the multiplier by mu = (1+lam)/2,
    so the plus side (x1 > 0, V < Vb) is the closed ('on') branch.  The
    quadratic part of p(mu) becomes a constant-in-lam hidden multiplier.
    """
    p = p or CircuitParams()
    L, R, RC, V0, Vb, sg = p.L, p.R, p.RC, p.V0, p.Vb, p.sigma

    # f = (dx1/dt, dI/dt); x1 = Vb - V, so dx1/dt = -dV/dt
    def f_plus(x, t):  # mu = 1, "on"
        V = Vb - x[0]
        return np.array([(V - x[1] * R) / RC, (V0 - V) / L])

    def f_minus(x, t):  # mu = 0, "off"
        V = Vb - x[0]
        return np.array([V / RC, V0 / L])

    hidden = None
    if sg != 0.0:
        # p((1+lam)/2) has lam^2 coefficient sigma/4; it enters dV/dt
        # through +I R p(mu)/RC, hence dx1/dt with a minus sign
        def hidden(x, t, lam):
            return np.array([-x[1] * R * sg / (4.0 * RC), 0.0])

    return SwitchedField(
        f_plus=f_plus, f_minus=f_minus,
        surface=adapted_surface(2, surface_tolerance),
        dim=2, hidden_g=hidden, time_dependent=False,
    )


def circuit_state_to_iv(x: np.ndarray, p: CircuitParams) -> tuple[float, float]:
    """Map adapted coordinates (x1, x2) back to physical (I, V)."""
    return float(x[1]), float(p.Vb - x[0])


def circuit_iv_to_state(I: float, V: float, p: CircuitParams) -> np.ndarray:
    return np.array([p.Vb - V, I], dtype=float)


def mu_of_lambda(lam) -> float:
    """mu = (1 + lam)/2: the [0, 1] switch variable of the circuit."""
    return 0.5 * (1.0 + np.asarray(lam, dtype=float))


@dataclass(frozen=True)
class DuffingParams:
    """Forced relay oscillator constants; defaults match the published run."""

    a: float = 0.15   # forcing amplitude
    b: float = 0.05   # damping
    c: float = 0.1    # fold coefficient
    variant: str = "nonlinear_cubic"
    tracker_mu: float = 1e-5  # time constant of the optional x3 tracker

    def __post_init__(self):
        if min(self.a, self.b, self.c) <= 0:
            raise ValueError("a, b, c must all be positive")
        if self.variant not in ("nonlinear_cubic", "linear"):
            raise ValueError(f"unknown duffing variant {self.variant!r}")
        if self.tracker_mu <= 0:
            raise ValueError("tracker_mu must be positive")


def make_duffing(p: DuffingParams | None = None, with_tracker: bool = False,
                 surface_tolerance: float = 1e-9) -> SwitchedField:
    """Forced oscillator (x2 - c x1, -lam^k - b x2 + a cos t), k = 3 or 1.

    The cubic uses -lam^3 = -lam - (lam^2 - 1) lam, i.e. hidden multiplier
    (0, -lam).  With the tracker enabled a third state relaxes onto lam
    with time constant tracker_mu, exposing the in-layer oscillation.
    """
    p = p or DuffingParams()
    a, b, c, mu_tr = p.a, p.b, p.c, p.tracker_mu
    cubic = p.variant == "nonlinear_cubic"
    dim = 3 if with_tracker else 2

    def outer(x, t, lam):
        # both variants agree at lam = +-1
        base = [x[1] - c * x[0], -lam - b * x[1] + a * np.cos(t)]
        if with_tracker:
            base.append((lam - x[2]) / mu_tr)
        return np.array(base)

    def f_plus(x, t):
        return outer(x, t, 1.0)

    def f_minus(x, t):
        return outer(x, t, -1.0)

    hidden = None
    if cubic:
        # -lam^3 = -lam - (lam^2 - 1) lam
        def hidden(x, t, lam):
            g = np.zeros(dim)
            g[1] = -lam
            return g

    return SwitchedField(
        f_plus=f_plus, f_minus=f_minus,
        surface=adapted_surface(dim, surface_tolerance),
        dim=dim, hidden_g=hidden, time_dependent=True,
    )
