"""Adaptive integration with switching-surface event detection.

All flows run on an embedded Runge-Kutta 4(5) pair (scipy's RK45) with
event localization on the dense-output interpolant.  Regularized systems
replace the discontinuous multiplier by a sigmoid of the surface function
and are integrated as a single smooth system, with the step size capped
at eps/4 inside the transition band.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .core import SwitchedField, eval_field, fast_field_eval, regime_of, _as_state
from .sigmoids import SigmoidSpec


class IntegrationError(RuntimeError):
    """Integration failed or exceeded the step budget."""


class GrazeWarning(UserWarning):
    """Trajectory touched the surface tolerance band without crossing."""


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_step: float = 1e-2
    event_tol: float = 1e-10
    max_steps: int = 10_000_000

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "max_step", "event_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.event_tol >= self.max_step:
            raise ValueError("event_tol must be smaller than max_step")
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")


@dataclass
class TrajectorySegment:
    """Sampled solution piece with a single dynamical regime label."""

    t: np.ndarray
    x: np.ndarray  # shape (len(t), n)
    regime: str
    lam: np.ndarray | None = None

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.x = np.asarray(self.x, dtype=float)
        if self.x.shape[0] != self.t.size:
            raise ValueError("t and x sample counts differ")
        if self.t.size > 1 and not np.all(np.diff(self.t) > 0):
            raise ValueError("sample times must be strictly increasing")

    @property
    def t_final(self) -> float:
        return float(self.t[-1])

    @property
    def x_final(self) -> np.ndarray:
        return self.x[-1]


def _solve(field, x0, t_span, cfg, events=None, max_step=None):
    def rhs(t, y):
        return field(y, t)

    sol = solve_ivp(
        rhs, t_span, np.asarray(x0, dtype=float),
        method="RK45",
        rtol=cfg.rel_tol, atol=cfg.abs_tol,
        max_step=cfg.max_step if max_step is None else max_step,
        events=events,
    )
    if sol.status == -1:
        raise IntegrationError(f"integration failed: {sol.message}")
    if sol.t.size > cfg.max_steps:
        raise IntegrationError(f"step budget of {cfg.max_steps} exceeded")
    return sol


def integrate_smooth(field, x0, t_span, cfg: IntegratorConfig | None = None,
                     regime: str = "regularized") -> TrajectorySegment:
    """Integrate a single smooth vector field (state, t) -> vector.

    No surface logic is applied; the regime label is purely descriptive.
    """
    cfg = cfg or IntegratorConfig()
    xv, _ = _as_state(x0)
    sol = _solve(field, xv, t_span, cfg)
    out = sol.y.T
    if not np.all(np.isfinite(out)):
        raise IntegrationError("non-finite state encountered")
    return TrajectorySegment(sol.t, out, regime)


def advance_to_surface(sys: SwitchedField, x0, t_span,
                       cfg: IntegratorConfig | None = None
                       ) -> tuple[TrajectorySegment, tuple[float, np.ndarray] | None]:
    """Integrate the active branch until v changes sign or time runs out.

    Returns the free segment and, when the surface is reached, the hit
    (t*, x*) localized on the dense output so |v(x*)| is at rounding level.
    """
    cfg = cfg or IntegratorConfig()
    xv, _ = _as_state(x0)
    regime = regime_of(sys.surface, xv)
    if regime == "on_surface":
        raise ValueError("advance_to_surface requires a strictly off-surface start")
    branch = sys.f_plus if regime == "plus" else sys.f_minus
    sgn = 1.0 if regime == "plus" else -1.0

    def crossing(t, y):
        return sys.surface.value(y)
    crossing.terminal = True
    crossing.direction = -sgn  # leaving the active side

    def graze(t, y):
        # |v| entering the tolerance band from the active side
        return sgn * sys.surface.value(y) - sys.surface.surface_tolerance
    graze.terminal = False
    graze.direction = -1.0

    sol = _solve(branch, xv, t_span, cfg, events=[crossing, graze])
    hit = None
    if sol.t_events[0].size:
        t_star = float(sol.t_events[0][0])
        x_star = np.asarray(sol.y_events[0][0], dtype=float)
        hit = (t_star, x_star)
    elif sol.t_events[1].size:
        warnings.warn(
            f"trajectory grazed the surface tolerance band near t={sol.t_events[1][0]:.6g} "
            "without crossing", GrazeWarning)
    seg = TrajectorySegment(sol.t, sol.y.T, "free_plus" if regime == "plus" else "free_minus")
    return seg, hit


def _lambda_of(sigmoid: SigmoidSpec, v):
    """Map the sigmoid value onto the multiplier range [-1, 1]."""
    val = sigmoid.evaluate(v)
    if sigmoid.range == (0.0, 1.0):
        return 2.0 * np.asarray(val) - 1.0 if np.ndim(val) else 2.0 * val - 1.0
    return val


def integrate_regularized(sys: SwitchedField, sigmoid: SigmoidSpec, x0, t_span,
                          cfg: IntegratorConfig | None = None) -> TrajectorySegment:
    """Integrate dx/dt = f(x; phi_eps(v(x))) as one smooth stiff system.

    Inside the transition band |v| < eps the step size is capped at eps/4;
    outside it the configured max_step applies.  Band entry and exit are
    localized with events so the cap switches at the right times.
    """
    cfg = cfg or IntegratorConfig()
    xv, _ = _as_state(x0)
    sys._check_state(xv)
    eps = sigmoid.eps
    vfun = sys.surface.value
    feval = fast_field_eval(sys)

    phi = sigmoid.scalar_fn()
    shifted = sigmoid.range == (0.0, 1.0)

    def field(x, t):
        lam = phi(vfun(x))
        if shifted:
            lam = 2.0 * lam - 1.0
        return feval(x, t, lam)

    def band_edge_lo(t, y):
        return vfun(y) + eps

    def band_edge_hi(t, y):
        return vfun(y) - eps
    for ev in (band_edge_lo, band_edge_hi):
        ev.terminal = True
        ev.direction = 0.0

    def in_band(x, t):
        v0 = vfun(x)
        if abs(v0) < eps * (1.0 - 1e-12):
            return True
        if abs(v0) > eps * (1.0 + 1e-12):
            return False
        # sitting on the band edge: side of the next instant decided by dv/dt
        vdot = float(sys.surface.gradient(x) @ field(x, t))
        return v0 * vdot < 0

    t_parts, x_parts = [], []
    t_now, t_end = float(t_span[0]), float(t_span[1])
    x_now = xv
    total_steps = 0
    while t_now < t_end:
        cap = min(cfg.max_step, eps / 4.0) if in_band(x_now, t_now) else cfg.max_step
        sol = _solve(field, x_now, (t_now, t_end), cfg,
                     events=[band_edge_lo, band_edge_hi], max_step=cap)
        total_steps += sol.t.size
        if total_steps > cfg.max_steps:
            raise IntegrationError(f"step budget of {cfg.max_steps} exceeded")
        keep = slice(0, None) if not t_parts else slice(1, None)
        t_parts.append(sol.t[keep])
        x_parts.append(sol.y.T[keep])
        t_now = float(sol.t[-1])
        x_now = sol.y.T[-1]
        if sol.status == 0:
            break
        # step just past the localized edge: the solver treats the exact
        # zero of a terminal event at the restart point as a fresh crossing
        fld = field(x_now, t_now)
        vdot = float(sys.surface.gradient(x_now) @ fld)
        if vdot == 0.0 or not np.isfinite(vdot):
            raise IntegrationError("no progress past a transition-band edge")
        h = 64.0 * np.finfo(float).eps * eps / abs(vdot)
        h = min(max(h, 1e-15), cfg.max_step)
        x_now = x_now + h * fld
        t_now = t_now + h

    t_all = np.concatenate(t_parts)
    x_all = np.vstack(x_parts)
    if not np.all(np.isfinite(x_all)):
        raise IntegrationError("non-finite state encountered")
    # drop duplicate times from event stitching
    keep = np.concatenate(([True], np.diff(t_all) > 0))
    t_all, x_all = t_all[keep], x_all[keep]
    lam_all = np.array([float(np.clip(_lambda_of(sigmoid, vfun(xx)), -1, 1)) for xx in x_all])
    return TrajectorySegment(t_all, x_all, "regularized", lam=lam_all)
