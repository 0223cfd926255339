import numpy as np
import pytest

from semispec import (ActionMap, CircleSymbol, ConfigError, CriticalLevelError,
                      PlaneSymbol, Rectangle, action_integral, invert_action,
                      predict_spectrum, pullback_action_angle, solve_level_set)

COS = {(1, 0): 0.5, (-1, 0): 0.5}


def circle_map(f_coeffs, q_terms, eps, **kw):
    return ActionMap(CircleSymbol(f_coeffs=f_coeffs, q_terms=q_terms)
                     .cylinder_map(eps), **kw)


def oscillator_map(q_coeffs, eps, **kw):
    sym = PlaneSymbol(f_coeffs={(2, 0): 1.0, (0, 2): 1.0},
                      q_coeffs=q_coeffs, epsilon=eps)
    return ActionMap(pullback_action_angle(sym), **kw)


def fig1_map(eps, **kw):
    return circle_map((0.0, 1.0), {**COS, (0, 2): 1.0}, eps, **kw)


SECTION4_MAPS = {
    "cos+I2": lambda eps: fig1_map(eps),
    "cos+I3": lambda eps: circle_map((0.0, 1.0), {**COS, (0, 3): 1.0}, eps),
    "x2": lambda eps: oscillator_map({(2, 0): 1.0}, eps),
    "x2+x3": lambda eps: oscillator_map({(2, 0): 1.0, (3, 0): 1.0}, eps),
    "x4": lambda eps: oscillator_map({(4, 0): 1.0}, eps),
}


class TestLevelSet:
    def test_theta_independent_level(self):
        am = fig1_map(0.0)
        loop = solve_level_set(am, 0.7)
        assert np.abs(loop - 0.7).max() <= 1e-13

    def test_closed_form_cos_level(self):
        # oracle: I + i*eps*cos(theta) = E solves to I = E - i*eps*cos(theta)
        am = circle_map((0.0, 1.0), COS, 0.1)
        loop = solve_level_set(am, 0.7)
        oracle = 0.7 - 0.1j * np.cos(am.thetas())
        assert np.abs(loop - oracle).max() <= 1e-11

    def test_harmonic_level(self):
        am = oscillator_map({}, 0.0)
        loop = solve_level_set(am, 1.0)
        assert np.abs(loop - 0.5).max() <= 1e-13

    def test_residuals_within_tolerance(self):
        am = fig1_map(0.15)
        E = 0.6 + 0.02j
        loop = solve_level_set(am, E)
        vals = np.array([complex(am.cyl.value(t, I))
                         for t, I in zip(am.thetas(), loop)])
        assert np.abs(vals - E).max() <= 1e-12 * (1 + abs(E))

    def test_near_critical_level_error(self):
        am = circle_map((0.0, 0.0, 1.0), {}, 0.0)  # f = I^2, critical at I=0
        with pytest.raises(CriticalLevelError):
            solve_level_set(am, 1e-22)


class TestActionIntegral:
    def test_linear_f(self):
        assert action_integral(fig1_map(0.0), 0.7) == pytest.approx(0.7)

    def test_linear_f_slope_two(self):
        am = circle_map((0.0, 2.0), {**COS, (0, 2): 1.0}, 0.0)
        assert abs(action_integral(am, 0.7) - 0.35) <= 1e-12

    def test_cos_term_averages_out(self):
        am = circle_map((0.0, 1.0), COS, 0.1)
        assert abs(action_integral(am, 0.7) - 0.7) <= 1e-12

    def test_disc_area_action(self):
        assert action_integral(oscillator_map({}, 0.0), 1.0) \
            == pytest.approx(0.5)

    def test_quadrature_convergence_all_section4_symbols(self):
        # analytic periodic integrand: 256 nodes is far past the knee
        for name, factory in SECTION4_MAPS.items():
            for eps in (0.1, 0.2):
                coarse = factory(eps)
                fine_map = factory(eps)
                fine_map.num_nodes = 512
                E = 0.5 if name.startswith("cos") else 1.0
                a = action_integral(coarse, E)
                b = action_integral(fine_map, E)
                assert abs(a - b) <= 1e-11, (name, eps)


class TestInversion:
    def test_identity_at_eps_zero(self):
        assert invert_action(fig1_map(0.0), 0.5) == pytest.approx(0.5)

    def test_line_inverse_is_doubling(self):
        assert invert_action(oscillator_map({}, 0.0), 0.5) == pytest.approx(1.0)

    def test_first_order_shift(self):
        # perturbation oracle: g(I) ~ I + i*eps*qbar(I); the Newton value
        # must agree within O(eps^2)
        g = invert_action(fig1_map(0.1), 0.5)
        assert abs(g - (0.5 + 0.025j)) <= 0.01

    def test_inverse_consistency(self, rng):
        am = fig1_map(0.12)
        for I in rng.uniform(0.2, 0.7, size=10):
            E = invert_action(am, I)
            assert abs(action_integral(am, E) - I) <= 1e-10
        for e_re in rng.uniform(0.2, 0.7, size=10):
            E = complex(e_re, 0.01 * e_re)
            I = action_integral(am, E)
            assert abs(invert_action(am, I) - E) <= 1e-10

    def test_derivative_matches_finite_differences(self):
        am = fig1_map(0.1)
        E = 0.55 + 0.03j
        step = 1e-5
        fd = (action_integral(am, E + step) - action_integral(am, E - step)) \
            / (2 * step)
        d = am.action_derivative(E)
        assert abs(d - fd) <= 1e-6 * abs(d)

    def test_eps_squared_order_of_averaged_shift(self):
        # |g_eps(I) - (I + i eps qbar(I))| = O(eps^2): fitted slope >= 1.9
        eps_values = (0.02, 0.04, 0.08)
        for factory, I in ((fig1_map, 0.5),
                           (lambda e: circle_map((0.0, 1.0),
                                                 {(1, 1): 0.5, (-1, 1): 0.5},
                                                 e), 0.5)):
            gaps = []
            for eps in eps_values:
                am = factory(eps)
                avg = am.averaged_value(I)
                gaps.append(abs(invert_action(am, I) - avg))
            slope = np.polyfit(np.log(eps_values), np.log(gaps), 1)[0]
            assert slope >= 1.9

    def test_reality_at_eps_zero(self, rng):
        am = fig1_map(0.0)
        for I in rng.uniform(0.1, 0.8, size=8):
            assert abs(invert_action(am, I).imag) <= 1e-12


class TestPredictions:
    def test_circle_exact_spectrum_at_eps_zero(self):
        am = fig1_map(0.0)
        rect = Rectangle(-0.5, 0.5, -0.1, 0.1)
        pred = predict_spectrum(am, 1.0 / 66, "circle_k", "principal_exact", rect)
        for k, lam in pred.points:
            assert abs(lam - k / 66) <= 1e-12

    def test_line_maslov_at_eps_zero(self):
        am = oscillator_map({}, 0.0)
        rect = Rectangle(0.0, 1.0, -0.1, 0.1)
        pred = predict_spectrum(am, 1.0 / 66, "line_maslov", "principal_exact",
                                rect)
        assert pred.points
        for k, lam in pred.points:
            assert abs(lam - (2 * k + 1) / 66) <= 1e-11

    def test_averaged_circle_closed_form(self):
        hbar = 1.0 / 66
        eps = hbar ** 0.5
        am = fig1_map(eps)
        rect = Rectangle(-0.8, 0.8, -0.05, 0.15)
        pred = predict_spectrum(am, hbar, "circle_k", "averaged_first_order",
                                rect)
        assert pred.points
        for k, lam in pred.points:
            assert lam == hbar * k + 1j * eps * (hbar * k) ** 2

    def test_floquet_offset_shifts_quantized_action(self):
        am = fig1_map(0.1)
        hbar = 0.05
        rect = Rectangle(-0.5, 0.5, -0.1, 0.1)
        shifted = predict_spectrum(am, hbar, "circle_k", "principal_exact",
                                   rect, floquet_offset=0.02)
        for k, lam in shifted.points:
            assert abs(lam - invert_action(am, hbar * k - 0.02)) <= 1e-10

    def test_prediction_serialization(self):
        am = fig1_map(0.0)
        rect = Rectangle(-0.2, 0.2, -0.1, 0.1)
        pred = predict_spectrum(am, 0.1, "circle_k", "principal_exact", rect)
        lines = pred.to_csv().strip().split("\n")
        assert lines[0] == "k,re,im,rule,mode"
        assert len(lines) == len(pred.points) + 1
        d = pred.to_json_dict()
        assert d["rule"] == "circle_k"
        assert len(d["points"]) == len(pred.points)

    def test_rect_filters_points(self):
        am = fig1_map(0.0)
        wide = predict_spectrum(am, 0.1, "circle_k", "principal_exact",
                                Rectangle(-0.5, 0.5, -0.1, 0.1))
        narrow = predict_spectrum(am, 0.1, "circle_k", "principal_exact",
                                  Rectangle(-0.2, 0.2, -0.1, 0.1))
        assert len(narrow.points) < len(wide.points)
        ks = {k for k, _ in narrow.points}
        assert ks == {k for k, lam in wide.points
                      if -0.2 <= lam.real <= 0.2}

    def test_bad_rule_and_mode(self):
        am = fig1_map(0.0)
        rect = Rectangle(-0.2, 0.2, -0.1, 0.1)
        with pytest.raises(ConfigError):
            predict_spectrum(am, 0.1, "torus", "principal_exact", rect)
        with pytest.raises(ConfigError):
            predict_spectrum(am, 0.1, "circle_k", "exactish", rect)

    def test_empty_rectangle_rejected(self):
        with pytest.raises(ConfigError):
            Rectangle(0.5, 0.5, -0.1, 0.1)


class TestOscillatorChart:
    def test_positive_actions_only_on_line(self):
        am = oscillator_map({(2, 0): 1.0}, 0.1)
        rect = Rectangle(0.0, 0.5, -0.1, 0.2)
        pred = predict_spectrum(am, 1.0 / 20, "circle_k", "principal_exact",
                                rect)
        assert all(k >= 1 for k, _ in pred.points)

    def test_complex_oscillator_closed_form(self):
        # x^2 + xi^2 + i*eps*x^2 = (1+i*eps) x^2 + xi^2 has action
        # E / (2 sqrt(1+i*eps)), so g(I) = 2 sqrt(1+i*eps) I exactly
        eps = 0.123
        am = oscillator_map({(2, 0): 1.0}, eps)
        root = np.sqrt(1 + 1j * eps)
        for I in (0.2, 0.5, 0.9):
            assert abs(invert_action(am, I) - 2 * root * I) <= 1e-11
