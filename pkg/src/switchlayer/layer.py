"""Switching-layer analysis and hybrid trajectory construction.

The switching surface is blown up into a layer lam in [-1, +1] carrying
the fast dynamics d(lam)/dtau = f1(x; lam) on an instantaneous timescale,
while the tangential components evolve on the slow timescale.  Sliding
modes are the layer equilibria of the fast subsystem; hybrid trajectories
alternate free flight, crossing, sliding and layer transit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .core import (
    SwitchedField,
    eval_field,
    fast_field_eval,
    regime_of,
    require_adapted,
    _as_state,
)
from .integrate import (
    IntegratorConfig,
    IntegrationError,
    TrajectorySegment,
    advance_to_surface,
    _solve,
)

ROOT_TOL = 1e-12
DERIV_TOL = 1e-8


class DegenerateInclusionError(ValueError):
    """f1 vanishes identically on a lam-subinterval; the set-valued case."""


@dataclass(frozen=True)
class SlidingSolution:
    """A root lam_s of f1(x; lam) = 0 with its induced sliding motion."""

    lam_s: float
    stability: str  # attracting | repelling | marginal
    sliding_field: np.ndarray  # (dx2/dt, ..., dxn/dt)

    def __post_init__(self):
        object.__setattr__(self, "sliding_field",
                           np.asarray(self.sliding_field, dtype=float))


@dataclass(frozen=True)
class LayerEquilibrium:
    """Rest point of the coupled (lam, x_rest) layer system."""

    lam_e: float
    x_rest: np.ndarray
    eigenvalues: np.ndarray
    classification: str  # saddle | node | focus | nonhyperbolic

    def __post_init__(self):
        object.__setattr__(self, "x_rest", np.asarray(self.x_rest, dtype=float))
        object.__setattr__(self, "eigenvalues", np.asarray(self.eigenvalues))


@dataclass
class HybridTrajectory:
    """Time-ordered segments with the transition events between them."""

    segments: list[TrajectorySegment] = field(default_factory=list)
    transitions: list[tuple[float, str]] = field(default_factory=list)

    @property
    def t_final(self) -> float:
        return self.segments[-1].t_final

    @property
    def x_final(self) -> np.ndarray:
        return self.segments[-1].x_final


def _full_state(x_rest: np.ndarray, dim: int) -> np.ndarray:
    x = np.zeros(dim)
    x[1:] = x_rest
    return x


def layer_field(sys: SwitchedField, x_rest, t: float, lam: float
                ) -> tuple[float, np.ndarray]:
    """(d lam/d tau, d x_rest/dt) of the blown-up system on the surface."""
    x_rest = np.asarray(x_rest, dtype=float)
    x = _full_state(x_rest, sys.dim)
    require_adapted(sys, x)
    f = eval_field(sys, x, lam, t=t)
    return float(f[0]), f[1:]


def _f1(sys: SwitchedField, x_rest: np.ndarray, t: float, lam: float) -> float:
    x = _full_state(np.asarray(x_rest, dtype=float), sys.dim)
    return float(eval_field(sys, x, lam, t=t)[0])


def find_sliding_modes(sys: SwitchedField, x_rest, t: float = 0.0,
                       root_tol: float = ROOT_TOL,
                       deriv_tol: float = DERIV_TOL,
                       grid: int = 512) -> list[SlidingSolution]:
    """All roots of f1(x; lam) = 0 on lam in [-1, 1], tagged with stability.

    Sign changes on a uniform grid are refined by bracketed root-finding.
    An empty list means the flow crosses.  An identically vanishing f1 on
    a subinterval raises DegenerateInclusionError.
    """
    x_rest = np.asarray(x_rest, dtype=float)
    x = _full_state(x_rest, sys.dim)
    require_adapted(sys, x)

    lams = np.linspace(-1.0, 1.0, grid + 1)
    vals = np.array([_f1(sys, x_rest, t, lm) for lm in lams])

    # set-valued degeneracy: a run of exact zeros across grid cells
    tiny = np.abs(vals) < 1e-14
    if tiny.size >= 3:
        run = 0
        for flag in tiny:
            run = run + 1 if flag else 0
            if run >= 3:
                raise DegenerateInclusionError(
                    "f1 vanishes on a lam-subinterval; sliding is set-valued"
                )

    roots: list[float] = []

    def add(r):
        if all(abs(r - q) > 1e-9 for q in roots):
            roots.append(r)

    for i in range(grid):
        a, b = lams[i], lams[i + 1]
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0:
            add(a)
            continue
        if fb == 0.0:
            if i == grid - 1:
                add(b)
            continue
        if fa * fb < 0:
            r = brentq(lambda lm: _f1(sys, x_rest, t, lm), a, b,
                       xtol=root_tol, rtol=4 * np.finfo(float).eps)
            add(float(r))

    out = []
    for r in sorted(roots):
        h = 1e-6
        lo, hi = max(-1.0, r - h), min(1.0, r + h)
        d = (_f1(sys, x_rest, t, hi) - _f1(sys, x_rest, t, lo)) / (hi - lo)
        if abs(d) <= deriv_tol:
            stab = "marginal"
        elif d < 0:
            stab = "attracting"
        else:
            stab = "repelling"
        xf = _full_state(x_rest, sys.dim)
        slide = eval_field(sys, xf, r, t=t)[1:]
        out.append(SlidingSolution(lam_s=r, stability=stab, sliding_field=slide))
    return out


def classify_surface_point(sys: SwitchedField, x_rest, t: float,
                           entry_side: str):
    """Resolve the surface reached from one side: cross, stick, or layer.

    Returns ('cross', None), ('stick', SlidingSolution), or
    ('layer_dynamic', None).  The stuck root is the first one met by the
    fast lam-flow started at the entry boundary; for a one-dimensional
    autonomous flow this is the first root in the direction of travel.
    """
    if entry_side not in ("plus", "minus"):
        raise ValueError("entry_side must be 'plus' or 'minus'")
    if sys.time_dependent:
        return "layer_dynamic", None
    x_rest = np.asarray(x_rest, dtype=float)
    roots = find_sliding_modes(sys, x_rest, t)

    lam0 = -1.0 if entry_side == "minus" else 1.0
    inward = -lam0  # direction the lam-flow must travel to enter the layer
    f10 = _f1(sys, x_rest, t, lam0)

    if f10 * inward > 0:
        path = [r for r in roots if (r.lam_s - lam0) * inward > 1e-12]
        path.sort(key=lambda r: abs(r.lam_s - lam0))
        if path:
            return "stick", path[0]
        return "cross", None

    # the boundary flow points back off the surface: the surface repels
    # this side and is reached only along the layer's invariant sets;
    # report the nearest root (possibly repelling) so the caller can decide
    if roots:
        nearest = min(roots, key=lambda r: abs(r.lam_s - lam0))
        return "stick", nearest
    return "cross", None


def _layer_rhs(sys: SwitchedField, t: float, z: np.ndarray) -> np.ndarray:
    lam = float(np.clip(z[0], -1.0, 1.0))
    x = _full_state(z[1:], sys.dim)
    f = eval_field(sys, x, lam, t=t)
    out = np.empty_like(z)
    out[0] = f[0]
    out[1:] = f[1:]
    return out


def _numeric_jacobian(fun, z: np.ndarray, h: float = 1e-7) -> np.ndarray:
    n = z.size
    J = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        J[:, j] = (fun(z + e) - fun(z - e)) / (2 * h)
    return J


def find_layer_equilibria(sys: SwitchedField, search_box, t: float = 0.0,
                          root_tol: float = ROOT_TOL,
                          grid: int = 8) -> list[LayerEquilibrium]:
    """Rest points of the coupled layer system inside a search box.

    search_box is a sequence of (lo, hi) pairs for (lam, x2, ..., xn).
    Newton iteration is seeded from a coarse grid; duplicates within 1e-6
    are merged and each survivor is classified by the eigenvalues of the
    layer Jacobian.
    """
    if sys.time_dependent:
        raise ValueError("layer equilibria require an autonomous layer")
    box = [(float(lo), float(hi)) for lo, hi in search_box]
    if len(box) != sys.dim:
        raise ValueError(f"search_box must give {sys.dim} (lam, x_rest) intervals")
    require_adapted(sys, _full_state(np.zeros(sys.dim - 1), sys.dim))

    def F(z):
        return _layer_rhs(sys, t, z)

    found: list[np.ndarray] = []
    axes = [np.linspace(lo, hi, grid) for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    seeds = np.stack([m.ravel() for m in mesh], axis=1)
    for seed in seeds:
        z = seed.copy()
        ok = False
        for _ in range(60):
            Fz = F(z)
            if np.linalg.norm(Fz, ord=np.inf) < root_tol:
                ok = True
                break
            J = _numeric_jacobian(F, z)
            try:
                step = np.linalg.solve(J, Fz)
            except np.linalg.LinAlgError:
                break
            if not np.all(np.isfinite(step)) or np.linalg.norm(step) > 1e6:
                break
            z = z - step
        if not ok:
            continue
        if not (-1.0 - 1e-9 <= z[0] <= 1.0 + 1e-9):
            continue
        if any(z[i] < lo - 1e-6 or z[i] > hi + 1e-6
               for i, (lo, hi) in enumerate(box)):
            continue
        if all(np.linalg.norm(z - w) > 1e-6 for w in found):
            found.append(z)

    out = []
    for z in found:
        J = _numeric_jacobian(F, z)
        eigs = np.linalg.eigvals(J)
        re = eigs.real
        if np.any(np.abs(re) <= 1e-8):
            cls = "nonhyperbolic"
        elif np.any(np.abs(eigs.imag) > 1e-8):
            cls = "focus"
        elif re.min() < 0 < re.max():
            cls = "saddle"
        else:
            cls = "node"
        out.append(LayerEquilibrium(
            lam_e=float(np.clip(z[0], -1, 1)), x_rest=z[1:],
            eigenvalues=eigs, classification=cls,
        ))
    out.sort(key=lambda e: (e.lam_e, tuple(e.x_rest)))
    return out


def _f1_extended(sys: SwitchedField, x_rest: np.ndarray, t: float,
                 lam: float) -> float:
    """Normal component continued smoothly past lam = +-1.

    The hidden-form expression is polynomial-like in lam and remains
    defined slightly outside the layer; root continuation needs this so a
    root can be followed up to (and through) the boundary.
    """
    x = _full_state(np.asarray(x_rest, dtype=float), sys.dim)
    fp = sys.f_plus(x, t)
    fm = sys.f_minus(x, t)
    out = 0.5 * (fp[0] + fm[0]) + 0.5 * lam * (fp[0] - fm[0])
    if sys.hidden_g is not None and lam * lam != 1.0:
        out = out + (lam * lam - 1.0) * sys.hidden_g(x, t, lam)[0]
    return float(out)


class _SlidingRootTracker:
    """Continuation of lam_s along a sliding segment, Newton warm-started."""

    def __init__(self, sys: SwitchedField, lam0: float):
        self.sys = sys
        self.lam = float(lam0)

    def solve(self, x_rest: np.ndarray, t: float) -> float:
        sys = self.sys
        lam = self.lam
        h = 1e-7
        for _ in range(50):
            f = _f1_extended(sys, x_rest, t, lam)
            if abs(f) < 10 * ROOT_TOL:
                break
            d = (_f1_extended(sys, x_rest, t, lam + h)
                 - _f1_extended(sys, x_rest, t, lam - h)) / (2 * h)
            if d == 0 or not math.isfinite(d):
                raise IntegrationError("sliding root continuation lost the root")
            lam = lam - f / d
            if not math.isfinite(lam) or abs(lam) > 1.5:
                raise IntegrationError("sliding root left the layer during continuation")
        self.lam = float(lam)
        return self.lam


def _integrate_sliding(sys, x_surface, t_span, cfg, root: SlidingSolution):
    """Slide along the surface, re-solving lam_s continuously.

    Terminates at t_end or when lam_s reaches +-1 (exit through the layer
    boundary; a root fold leaving [-1, 1] exits through the same event).
    """
    tracker = _SlidingRootTracker(sys, root.lam_s)
    dim = sys.dim

    def rhs(x_rest, t):
        lam = tracker.solve(np.asarray(x_rest), t)
        lam = float(np.clip(lam, -1.0, 1.0))
        x = _full_state(np.asarray(x_rest), dim)
        return eval_field(sys, x, lam, t=t)[1:]

    def boundary(t, y):
        lam = tracker.solve(np.asarray(y), t)
        return 1.0 - abs(lam)
    boundary.terminal = True
    boundary.direction = -1.0

    sol = _solve(rhs, x_surface[1:], t_span, cfg, events=[boundary])
    t_arr = sol.t
    xr_arr = sol.y.T
    lam_replay = _SlidingRootTracker(sys, root.lam_s)
    lam_arr = np.array([lam_replay.solve(xr, tt) for tt, xr in zip(t_arr, xr_arr)])
    x_arr = np.zeros((t_arr.size, dim))
    x_arr[:, 1:] = xr_arr
    seg = TrajectorySegment(t_arr, x_arr, "sliding", lam=np.clip(lam_arr, -1, 1))
    exited = sol.status == 1
    return seg, exited


def _integrate_layer(sys, lam0, x_rest0, t_span, cfg, eps_layer):
    """Coupled layer transit: d lam/dt = f1/eps_layer, slow rest dynamics."""
    feval = fast_field_eval(sys)
    dim = sys.dim

    def rhs(z, t):
        x = np.zeros(dim)
        x[1:] = z[1:]
        f = feval(x, t, z[0])
        out = np.empty_like(z)
        out[0] = f[0] / eps_layer
        out[1:] = f[1:]
        return out

    def exit_hi(t, z):
        return z[0] - 1.0

    def exit_lo(t, z):
        return z[0] + 1.0
    exit_hi.terminal = True
    exit_hi.direction = 1.0
    exit_lo.terminal = True
    exit_lo.direction = -1.0

    z0 = np.concatenate(([lam0], x_rest0))
    sol = _solve(rhs, z0, t_span, cfg, events=[exit_hi, exit_lo],
                 max_step=min(cfg.max_step, 1.0))
    if not np.all(np.isfinite(sol.y)):
        raise IntegrationError("non-finite state during layer transit")
    t_arr = sol.t
    lam_arr = sol.y[0]
    x_arr = np.zeros((t_arr.size, sys.dim))
    x_arr[:, 1:] = sol.y[1:].T
    seg = TrajectorySegment(t_arr, x_arr, "layer_transit", lam=lam_arr)
    exited = sol.status == 1
    return seg, exited


def integrate_layer_only(sys: SwitchedField, lam0: float, x_rest0, t_span,
                         cfg: IntegratorConfig | None = None,
                         eps_layer: float = 1e-5) -> TrajectorySegment:
    """Simulate the layer subsystem alone from (lam0, x_rest0) on v = 0."""
    cfg = cfg or IntegratorConfig()
    require_adapted(sys, _full_state(np.asarray(x_rest0, dtype=float), sys.dim))
    seg, _ = _integrate_layer(sys, float(lam0), np.asarray(x_rest0, dtype=float),
                              (float(t_span[0]), float(t_span[1])), cfg, eps_layer)
    return seg


def integrate_hybrid(sys: SwitchedField, x0, t_span,
                     cfg: IntegratorConfig | None = None,
                     eps_layer: float = 1e-5) -> HybridTrajectory:
    """Full piecewise trajectory: free flight, crossing, sliding, layer transit.

    eps_layer sets the t-scale of layer transits (tau = t / eps_layer); it
    only matters for systems whose layer carries slow-time dynamics.
    """
    cfg = cfg or IntegratorConfig()
    if eps_layer <= 0:
        raise ValueError("eps_layer must be positive")
    xv, _ = _as_state(x0)
    xv = sys._check_state(xv.copy())
    require_adapted(sys, xv)
    tol = sys.surface.surface_tolerance
    t_now, t_end = float(t_span[0]), float(t_span[1])
    traj = HybridTrajectory()

    regime = regime_of(sys.surface, xv)
    entry_side = None
    if regime == "on_surface":
        # starting on the surface: take the side whose boundary flow enters
        xv[0] = 0.0
        f1m = _f1(sys, xv[1:], t_now, -1.0)
        f1p = _f1(sys, xv[1:], t_now, 1.0)
        entry_side = "minus" if f1m > 0 else ("plus" if f1p < 0 else "minus")

    while t_now < t_end - 1e-14:
        if entry_side is None:
            seg, hit = advance_to_surface(sys, xv, (t_now, t_end), cfg)
            traj.segments.append(seg)
            if hit is None:
                break
            t_now = hit[0]
            xv = hit[1].copy()
            entry_side = "plus" if seg.regime == "free_plus" else "minus"
            xv[0] = 0.0
            continue

        kind, sliding = classify_surface_point(sys, xv[1:], t_now, entry_side)
        if kind == "cross":
            label = "cross_down" if entry_side == "plus" else "cross_up"
            traj.transitions.append((t_now, label))
            new_side = "minus" if entry_side == "plus" else "plus"
            xv[0] = -2 * tol if new_side == "minus" else 2 * tol
            entry_side = None
        elif kind == "stick":
            traj.transitions.append((t_now, "stick"))
            seg, exited = _integrate_sliding(sys, xv, (t_now, t_end), cfg, sliding)
            traj.segments.append(seg)
            t_now = seg.t_final
            xv = seg.x_final.copy()
            if not exited:
                break
            traj.transitions.append((t_now, "exit_slide"))
            lam_exit = float(seg.lam[-1])
            xv[0] = 2 * tol if lam_exit > 0 else -2 * tol
            entry_side = None
        else:  # layer_dynamic
            traj.transitions.append((t_now, "layer_enter"))
            lam0 = 1.0 if entry_side == "plus" else -1.0
            seg, exited = _integrate_layer(sys, lam0, xv[1:], (t_now, t_end),
                                           cfg, eps_layer)
            traj.segments.append(seg)
            t_now = seg.t_final
            xv = seg.x_final.copy()
            if not exited:
                break
            traj.transitions.append((t_now, "layer_exit"))
            lam_exit = float(seg.lam[-1])
            xv[0] = 2 * tol if lam_exit > 0 else -2 * tol
            entry_side = None

    return traj
