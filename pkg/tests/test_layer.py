"""Layer analysis: sliding roots, equilibria, classification, hybrid runs."""

import numpy as np
import pytest

from switchlayer import (
    DegenerateInclusionError,
    IntegratorConfig,
    SeriesExpansion,
    SwitchedField,
    adapted_surface,
    classify_surface_point,
    find_layer_equilibria,
    find_sliding_modes,
    integrate_hybrid,
    integrate_layer_only,
    layer_field,
    make_duffing,
    make_example2,
    to_hidden_form,
)
from switchlayer.core import CoordinateAdaptationError


def linear_system(fp, fm, dim=2, g=None, tol=1e-9, time_dependent=False):
    fp = np.asarray(fp, dtype=float)
    fm = np.asarray(fm, dtype=float)
    return SwitchedField(
        f_plus=lambda x, t: fp,
        f_minus=lambda x, t: fm,
        surface=adapted_surface(dim, tol),
        dim=dim,
        hidden_g=g,
        time_dependent=time_dependent,
    )


def polynomial_system(coeffs):
    """System whose normal component is the polynomial sum c_n lam^n."""
    funcs = tuple(
        (lambda c: (lambda x: np.array([c, 0.0])))(c) for c in coeffs
    )
    return to_hidden_form(SeriesExpansion(funcs), dim=2)


class TestFindSlidingModes:
    def test_two_hidden_roots(self):
        roots = find_sliding_modes(make_example2("nonlinear"), np.array([0.0]))
        assert len(roots) == 2
        assert roots[0].lam_s == pytest.approx(-1 / np.sqrt(2), abs=1e-10)
        assert roots[1].lam_s == pytest.approx(1 / np.sqrt(2), abs=1e-10)
        assert roots[0].stability == "attracting"
        assert roots[1].stability == "repelling"
        for r in roots:
            np.testing.assert_allclose(r.sliding_field, [1.0])

    def test_continuous_variant_has_no_roots(self):
        assert find_sliding_modes(make_example2("continuous"), np.array([0.0])) == []

    def test_classic_attracting_root(self):
        sys = linear_system([-1.0, 2.0], [3.0, 5.0])
        (root,) = find_sliding_modes(sys, np.array([0.0]))
        # f1 = 1 + (-2) lam = 0 at lam = 1/2
        assert root.lam_s == pytest.approx(0.5, abs=1e-10)
        assert root.stability == "attracting"
        # tangential part at lam = 1/2: 7/2 + (-3/2)(1/2) = 11/4
        np.testing.assert_allclose(root.sliding_field, [2.75], atol=1e-9)

    def test_against_polynomial_root_oracle(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            deg = int(rng.integers(1, 6))
            coeffs = rng.normal(size=deg + 1)
            sys = polynomial_system(coeffs)
            got = find_sliding_modes(sys, np.array([0.0]))
            # oracle: companion-matrix roots of the same polynomial
            all_roots = np.roots(coeffs[::-1])
            real = all_roots[np.abs(all_roots.imag) < 1e-9].real
            expected = np.sort(real[np.abs(real) <= 1.0])
            assert len(got) == len(expected)
            for r, e in zip(got, expected):
                assert r.lam_s == pytest.approx(e, abs=1e-8)
            # stability tags must match the sign of the derivative
            dpoly = np.polyder(np.poly1d(coeffs[::-1]))
            for r in got:
                d = dpoly(r.lam_s)
                if abs(d) > 1e-6:
                    want = "attracting" if d < 0 else "repelling"
                    assert r.stability == want

    def test_filippov_sign_test_on_random_linear_fields(self):
        rng = np.random.default_rng(43)
        for _ in range(100):
            fp = rng.normal(size=2)
            fm = rng.normal(size=2)
            sys = linear_system(fp, fm)
            roots = find_sliding_modes(sys, np.array([0.0]))
            if fp[0] * fm[0] < 0:
                assert len(roots) == 1
                want = "attracting" if fp[0] < 0 else "repelling"
                assert roots[0].stability == want
            else:
                assert len(roots) <= 1  # same-sign boundaries: generic crossing
                if roots:
                    assert abs(roots[0].lam_s) <= 1.0

    def test_degenerate_inclusion_detected(self):
        sys = linear_system([0.0, 1.0], [0.0, -1.0])  # f1 == 0 for all lam
        with pytest.raises(DegenerateInclusionError):
            find_sliding_modes(sys, np.array([0.0]))

    def test_requires_adapted_surface(self):
        surf = adapted_surface(2)
        tilted = SwitchedField(
            f_plus=lambda x, t: np.array([1.0, 0.0]),
            f_minus=lambda x, t: np.array([-1.0, 0.0]),
            surface=type(surf)(v=lambda x: x[0] + x[1],
                               grad_v=lambda x: np.array([1.0, 1.0])),
            dim=2)
        with pytest.raises(CoordinateAdaptationError):
            find_sliding_modes(tilted, np.array([0.0]))


class TestLayerField:
    def test_components(self):
        sys = linear_system([-1.0, 2.0], [3.0, 6.0])
        dlam, rest = layer_field(sys, np.array([0.0]), 0.0, 0.5)
        assert dlam == pytest.approx(1.0 + (-2.0) * 0.5)
        np.testing.assert_allclose(rest, [4.0 + (-2.0) * 0.5])


class TestClassifySurfacePoint:
    def test_attracting_sliding_detected(self):
        sys = linear_system([-1.0, 1.0], [1.0, 1.0])
        kind, sol = classify_surface_point(sys, np.array([0.0]), 0.0, "minus")
        assert kind == "stick"
        assert sol.lam_s == pytest.approx(0.0, abs=1e-10)

    def test_crossing_detected(self):
        sys = linear_system([1.0, 1.0], [1.0, -1.0])
        kind, sol = classify_surface_point(sys, np.array([0.0]), 0.0, "minus")
        assert kind == "cross"
        assert sol is None

    def test_first_root_in_travel_direction_wins(self):
        roots = find_sliding_modes(make_example2("nonlinear"), np.array([0.0]))
        kind, sol = classify_surface_point(make_example2("nonlinear"),
                                           np.array([0.0]), 0.0, "minus")
        assert kind == "stick"
        assert sol.lam_s == pytest.approx(roots[0].lam_s)  # -1/sqrt(2)

    def test_time_dependent_defers_to_layer(self):
        kind, sol = classify_surface_point(make_duffing(), np.array([0.0]),
                                           0.0, "minus")
        assert kind == "layer_dynamic"
        assert sol is None

    def test_entry_side_validated(self):
        with pytest.raises(ValueError):
            classify_surface_point(make_example2(), np.array([0.0]), 0.0, "up")


class TestFindLayerEquilibria:
    def test_linear_oracle(self):
        # f1 = 0.3 - lam, rest relaxing to 2: equilibrium (0.3, 2), eigenvalues -1, -1
        def fp(x, t):
            return np.array([-0.7, 2.0 - x[1]])

        def fm(x, t):
            return np.array([1.3, 2.0 - x[1]])

        sys = SwitchedField(f_plus=fp, f_minus=fm,
                            surface=adapted_surface(2), dim=2)
        eqs = find_layer_equilibria(sys, [(-1, 1), (-5, 5)])
        assert len(eqs) == 1
        eq = eqs[0]
        assert eq.lam_e == pytest.approx(0.3, abs=1e-8)
        assert eq.x_rest[0] == pytest.approx(2.0, abs=1e-8)
        assert eq.classification == "node"
        np.testing.assert_allclose(np.sort(eq.eigenvalues.real), [-1, -1],
                                   atol=1e-5)

    def test_no_equilibrium_outside_box(self):
        def fp(x, t):
            return np.array([-0.7, 1.0])

        def fm(x, t):
            return np.array([1.3, 1.0])

        sys = SwitchedField(f_plus=fp, f_minus=fm,
                            surface=adapted_surface(2), dim=2)
        assert find_layer_equilibria(sys, [(-1, 1), (-5, 5)]) == []

    def test_time_dependent_rejected(self):
        with pytest.raises(ValueError):
            find_layer_equilibria(make_duffing(), [(-1, 1), (-5, 5)])

    def test_box_dimension_validated(self):
        with pytest.raises(ValueError):
            find_layer_equilibria(make_example2(), [(-1, 1)])


class TestIntegrateHybrid:
    def test_free_then_stick(self):
        sys = make_example2("nonlinear")
        traj = integrate_hybrid(sys, np.array([-0.3, 0.0]), (0.0, 1.0))
        assert [kind for _, kind in traj.transitions] == ["stick"]
        assert traj.transitions[0][0] == pytest.approx(0.3, abs=1e-8)
        assert traj.segments[0].regime == "free_minus"
        assert traj.segments[1].regime == "sliding"
        # sliding keeps v = 0 and moves tangentially at unit speed
        assert traj.x_final[0] == 0.0
        assert traj.x_final[1] == pytest.approx(1.0, abs=1e-7)
        lam = traj.segments[1].lam
        np.testing.assert_allclose(lam, -1 / np.sqrt(2), atol=1e-8)

    def test_crossing(self):
        sys = linear_system([1.0, 1.0], [1.0, -1.0])
        traj = integrate_hybrid(sys, np.array([-0.3, 0.0]), (0.0, 1.0))
        assert [kind for _, kind in traj.transitions] == ["cross_up"]
        assert traj.segments[-1].regime == "free_plus"
        assert traj.x_final[0] == pytest.approx(0.7, abs=1e-7)

    def test_slide_until_boundary_exit(self):
        # f1_plus = x2 - 1 drifts the sliding root to the layer boundary
        def fp(x, t):
            return np.array([x[1] - 1.0, 1.0])

        def fm(x, t):
            return np.array([1.0, 1.0])

        sys = SwitchedField(f_plus=fp, f_minus=fm,
                            surface=adapted_surface(2), dim=2)
        traj = integrate_hybrid(sys, np.array([-0.5, 0.0]), (0.0, 2.0))
        kinds = [kind for _, kind in traj.transitions]
        assert kinds[:2] == ["stick", "exit_slide"]
        t_stick, t_exit = traj.transitions[0][0], traj.transitions[1][0]
        assert t_stick == pytest.approx(0.5, abs=1e-7)
        assert t_exit == pytest.approx(1.0, abs=1e-6)  # lam_s = 1 at x2 = 1
        assert traj.segments[-1].regime == "free_plus"

    def test_layer_transit_crossing(self):
        sys = linear_system([1.0, 0.0], [1.0, 0.0], time_dependent=True)
        eps_layer = 1e-4
        traj = integrate_hybrid(sys, np.array([-0.2, 0.0]), (0.0, 1.0),
                                eps_layer=eps_layer)
        kinds = [kind for _, kind in traj.transitions]
        assert kinds[:2] == ["layer_enter", "layer_exit"]
        transit = traj.transitions[1][0] - traj.transitions[0][0]
        assert transit == pytest.approx(2 * eps_layer, rel=1e-3)
        assert traj.segments[-1].regime == "free_plus"

    def test_layer_capture(self):
        # attracting layer with an interior rest point: lam settles at 0
        sys = linear_system([-1.0, 0.5], [1.0, 0.5], time_dependent=True)
        traj = integrate_hybrid(sys, np.array([-0.2, 0.0]), (0.0, 1.0),
                                eps_layer=1e-4)
        assert [kind for _, kind in traj.transitions] == ["layer_enter"]
        seg = traj.segments[-1]
        assert seg.regime == "layer_transit"
        assert seg.lam[-1] == pytest.approx(0.0, abs=1e-6)
        assert seg.t_final == pytest.approx(1.0)

    def test_transition_continuity(self):
        tol = 1e-9
        configs = [
            (make_example2("nonlinear"), np.array([-0.3, 0.0])),
            (linear_system([1.0, 1.0], [1.0, -1.0], tol=tol),
             np.array([-0.3, 0.0])),
        ]
        for sys, x0 in configs:
            traj = integrate_hybrid(sys, x0, (0.0, 1.0))
            for prev, nxt in zip(traj.segments, traj.segments[1:]):
                gap = np.linalg.norm(nxt.x[0] - prev.x_final)
                assert gap <= 10 * tol

    def test_eps_layer_validated(self):
        with pytest.raises(ValueError):
            integrate_hybrid(make_example2(), np.array([-0.3, 0.0]), (0.0, 1.0),
                             eps_layer=0.0)


class TestIntegrateLayerOnly:
    def test_relaxation_inside_layer(self):
        sys = linear_system([-2.0, 0.0], [2.0, 0.0])
        eps_layer = 1e-3
        seg = integrate_layer_only(sys, -0.9, np.array([0.0]), (0.0, 0.1),
                                   eps_layer=eps_layer)
        # d lam/dt = -2 lam / eps_layer: exponential decay toward 0
        assert seg.lam[-1] == pytest.approx(0.0, abs=1e-6)
        assert np.all(np.abs(seg.lam) <= 1.0 + 1e-12)
        assert seg.regime == "layer_transit"
        np.testing.assert_array_equal(seg.x[:, 0], 0.0)

    def test_forced_oscillation_stays_in_layer(self):
        cfg = IntegratorConfig(rel_tol=1e-6, abs_tol=1e-9, max_step=0.05)
        seg = integrate_layer_only(make_duffing(), 0.0, np.array([0.0]),
                                   (0.0, 30.0), cfg, eps_layer=1e-4)
        assert seg.t_final == pytest.approx(30.0)
        assert np.max(np.abs(seg.lam)) > 0.1  # sustained hidden oscillation
        assert np.all(np.abs(seg.lam) <= 1.0 + 1e-9)
