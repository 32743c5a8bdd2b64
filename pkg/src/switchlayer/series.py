"""Power-series representation of a switched field in the multiplier.

f(x; lam) = sum_n alpha_n(x) lam^n.  The n = 0, 1 coefficients carry the
classical convex combination; everything from n = 2 up is hidden
nonlinearity, and folds into the factored hidden multiplier

    g(x, lam) = sum_{n>=1} sum_{j=0}^{n-1} [alpha_2n + lam alpha_2n+1] lam^(2j).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import SwitchedField, adapted_surface, _as_state

# state -> n-vector
CoeffFn = Callable[[np.ndarray], np.ndarray]


class MatchingUndefinedError(ValueError):
    """Asymptotic matching requested with a vanishing leading tail coefficient."""


@dataclass(frozen=True)
class SeriesExpansion:
    """Truncated coefficient list alpha_0..alpha_N of the lam-power series."""

    coefficients: tuple[CoeffFn, ...]

    def __post_init__(self):
        if len(self.coefficients) < 2:
            raise ValueError("an expansion needs at least alpha_0 and alpha_1")
        object.__setattr__(self, "coefficients", tuple(self.coefficients))

    @property
    def truncation_order(self) -> int:
        return len(self.coefficients) - 1


@dataclass(frozen=True)
class AsymptoticData:
    """Measured departure asymptotics near the two outer states.

    g_plus / g_minus are the departure directions, b0_plus / b0_minus the
    leading series coefficients of the departure, c0 the leading tail
    coefficient of the sigmoid, and (kappa, p) the shared decay exponents.
    """

    g_plus: np.ndarray
    g_minus: np.ndarray
    b0_plus: float
    b0_minus: float
    c0: float
    kappa: float = 1.0
    p: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "g_plus", np.asarray(self.g_plus, dtype=float))
        object.__setattr__(self, "g_minus", np.asarray(self.g_minus, dtype=float))
        if self.kappa < 0:
            raise ValueError("kappa must be >= 0")
        if self.p <= 0:
            raise ValueError("p must be > 0")


def expand_from_midpoint(f_plus: CoeffFn, f_minus: CoeffFn, r: CoeffFn,
                         dfdlam0: CoeffFn | None = None) -> SeriesExpansion:
    """Build the expansion from the outer fields and the midpoint value r.

    r is the field value at lam = 0 on the surface.  Without dfdlam0 the
    truncation is N = 2:

        alpha_0 = r,  alpha_1 = (f_+ - f_-)/2,  alpha_2 = (f_+ + f_-)/2 - r.

    Supplying the lam-derivative at 0 extends this to N = 3 with
    alpha_1 = dfdlam0 and alpha_3 = (f_+ - f_-)/2 - dfdlam0.  Both
    truncations satisfy the boundary sums at lam = +-1 exactly by
    construction.
    """

    def a0(x):
        return np.asarray(r(x), dtype=float)

    def a2(x):
        return 0.5 * (np.asarray(f_plus(x), dtype=float)
                      + np.asarray(f_minus(x), dtype=float)) - a0(x)

    def half_diff(x):
        return 0.5 * (np.asarray(f_plus(x), dtype=float)
                      - np.asarray(f_minus(x), dtype=float))

    if dfdlam0 is None:
        return SeriesExpansion((a0, half_diff, a2))

    def a1(x):
        return np.asarray(dfdlam0(x), dtype=float)

    def a3(x):
        return half_diff(x) - a1(x)

    return SeriesExpansion((a0, a1, a2, a3))


def reconstruct(e: SeriesExpansion, x, lam: float) -> np.ndarray:
    """Evaluate sum_n alpha_n(x) lam^n."""
    lam = float(lam)
    if not -1.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [-1, +1], got {lam}")
    xv, _ = _as_state(x)
    out = np.asarray(e.coefficients[0](xv), dtype=float).copy()
    lam_pow = 1.0
    for a in e.coefficients[1:]:
        lam_pow *= lam
        out += lam_pow * np.asarray(a(xv), dtype=float)
    return out


def to_hidden_form(e: SeriesExpansion, surface_tolerance: float = 1e-9,
                   time_dependent: bool = False, dim: int | None = None) -> SwitchedField:
    """Convert an expansion to a SwitchedField in factored hidden form.

    The hidden multiplier comes from factoring lam^2 - 1 out of the
    n >= 2 part of the series; for N <= 1 it is identically zero and the
    result is the plain convex combination.
    """
    coeffs = e.coefficients
    n_top = e.truncation_order

    def pick(i):
        if i <= n_top:
            return coeffs[i]
        return None

    def f_plus(x, t):
        return reconstruct(e, x, +1.0)

    def f_minus(x, t):
        return reconstruct(e, x, -1.0)

    def hidden_g(x, t, lam):
        out = None
        n = 1
        while 2 * n <= n_top:
            a_even = pick(2 * n)
            a_odd = pick(2 * n + 1)
            term = np.asarray(a_even(x), dtype=float).copy()
            if a_odd is not None:
                term += lam * np.asarray(a_odd(x), dtype=float)
            inner = sum(lam ** (2 * j) for j in range(n))
            term *= inner
            out = term if out is None else out + term
            n += 1
        if out is None:
            out = np.zeros_like(np.asarray(coeffs[0](x), dtype=float))
        return out

    def make(d):
        return SwitchedField(
            f_plus=f_plus, f_minus=f_minus,
            surface=adapted_surface(d, surface_tolerance),
            dim=d,
            hidden_g=None if n_top <= 1 else hidden_g,
            time_dependent=time_dependent,
        )

    if dim is not None:
        return make(dim)
    # dimension is not recoverable from the callables alone: probe alpha_0
    # at origins of growing dimension until input and output agree
    for d in range(2, 16):
        try:
            probe = np.asarray(coeffs[0](np.zeros(d)), dtype=float)
        except Exception:
            continue
        if probe.shape == (d,):
            return make(d)
    raise ValueError("could not infer state dimension from alpha_0; pass dim=")


def match_alpha23(f_plus: np.ndarray, f_minus: np.ndarray, a: AsymptoticData,
                  tail_even: np.ndarray | None = None,
                  tail_odd: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Recover alpha_2, alpha_3 at a fixed state from departure asymptotics.

    tail_even / tail_odd are the weighted sums of higher coefficients
    (sum over m >= 2 of m * alpha_2m, resp. m * alpha_2m+1); both vanish
    under truncation and default to zero.
    """
    if a.c0 == 0:
        raise MatchingUndefinedError(
            "leading sigmoid tail coefficient c0 vanishes; matching undefined"
        )
    f_plus = np.asarray(f_plus, dtype=float)
    f_minus = np.asarray(f_minus, dtype=float)
    gp = a.g_plus * a.b0_plus
    gm = a.g_minus * a.b0_minus
    te = np.zeros_like(f_plus) if tail_even is None else np.asarray(tail_even, dtype=float)
    to = np.zeros_like(f_plus) if tail_odd is None else np.asarray(tail_odd, dtype=float)
    alpha2 = (gp + gm) / (4.0 * a.c0) - te
    alpha3 = (gp - gm) / (4.0 * a.c0) - 0.25 * (f_plus - f_minus) - to
    return alpha2, alpha3


def boundary_residuals(e: SeriesExpansion, x) -> tuple[np.ndarray, np.ndarray]:
    """(sum alpha_n - f(+1), sum (-1)^n alpha_n - f(-1)); zero by construction
    for expansions built here, exposed for property checks on hand-built ones."""
    xv, _ = _as_state(x)
    plus = reconstruct(e, xv, 1.0)
    minus = reconstruct(e, xv, -1.0)
    direct_plus = sum(np.asarray(a(xv), dtype=float) for a in e.coefficients)
    direct_minus = sum(((-1.0) ** n) * np.asarray(a(xv), dtype=float)
                       for n, a in enumerate(e.coefficients))
    return direct_plus - plus, direct_minus - minus
