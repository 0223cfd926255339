import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semispec import (CircleSymbol, ConfigError, PlaneSymbol, format_circle,
                      format_plane, parse_circle, parse_plane, parse_symbol)

FIGURE_TEXTS = [
    ("circle", "I + i*epsilon*(cos(theta) + I^2)"),
    ("circle", "I + i*epsilon*(cos(theta) + I^3)"),
    ("line", "x^2 + xi^2 + i*epsilon*x^2"),
    ("line", "x^2 + xi^2 + i*epsilon*(x^2 + x^3)"),
    ("line", "x^2 + xi^2 + i*epsilon*x^4"),
]


class TestParseCircle:
    def test_figure_symbol(self):
        sym = parse_circle("I + i*epsilon*(cos(theta) + I^2)")
        assert sym.f_coeffs == (0.0, 1.0)
        assert sym.q_terms[(1, 0)] == 0.5
        assert sym.q_terms[(-1, 0)] == 0.5
        assert sym.q_terms[(0, 2)] == 1.0
        assert len(sym.q_terms) == 3

    def test_sin_and_frequency(self):
        sym = parse_circle("2*I + i*epsilon*(3*sin(2*theta)*I + 0.5)")
        assert sym.f_coeffs == (0.0, 2.0)
        assert sym.q_terms[(2, 1)] == -1.5j
        assert sym.q_terms[(-2, 1)] == 1.5j
        assert sym.q_terms[(0, 0)] == 0.5

    def test_products_expand(self):
        # cos^2 = 1/2 + cos(2 theta)/2
        sym = parse_circle("I + i*epsilon*(cos(theta)*cos(theta))")
        assert sym.q_terms[(0, 0)] == 0.5
        assert sym.q_terms[(2, 0)] == 0.25
        assert sym.q_terms[(-2, 0)] == 0.25

    def test_unary_minus(self):
        sym = parse_circle("-2*I + i*epsilon*(-cos(theta))")
        assert sym.f_coeffs == (0.0, -2.0)
        assert sym.q_terms[(1, 0)] == -0.5

    def test_f_only(self):
        sym = parse_circle("I^2 - 0.25")
        assert sym.f_coeffs == (-0.25, 0.0, 1.0)
        assert not sym.q_terms


class TestParsePlane:
    def test_figure_symbol(self):
        sym = parse_plane("x^2 + xi^2 + i*epsilon*(x^2 + x^3)", epsilon=0.1)
        assert dict(sym.q_coeffs) == {(2, 0): 1.0, (3, 0): 1.0}
        assert sym.epsilon == 0.1

    def test_all_figures_parse(self):
        for model, text in FIGURE_TEXTS:
            sym = parse_symbol(text, model, epsilon=0.1)
            assert isinstance(sym, (CircleSymbol, PlaneSymbol))


class TestRejections:
    @pytest.mark.parametrize("text", [
        "theta + I",                       # bare theta is not periodic
        "I + i*cos(theta)",                # i without epsilon
        "I + epsilon*I",                   # epsilon without i
        "I + i*epsilon^2*I",               # epsilon nonlinear
        "I + i*epsilon*i*epsilon*I",       # epsilon^2 via product
        "I + i*epsilon*(i*I)",             # complex q coefficient
        "I + q",                           # unknown name
        "I + ",                            # dangling operator
        "I I",                             # missing operator
        "cos(theta*2)",                    # frequency must lead
        "I^-1",                            # negative exponent
        "I^0.5",                           # fractional exponent
        "x + I",                           # plane variable in circle model
    ])
    def test_bad_circle_text(self, text):
        with pytest.raises(ConfigError):
            parse_circle(text)

    def test_plane_f_must_be_oscillator(self):
        with pytest.raises(ConfigError):
            parse_plane("x^2 + 2*xi^2 + i*epsilon*x^2", epsilon=0.1)
        with pytest.raises(ConfigError):
            parse_plane("x^2 + i*epsilon*x^2", epsilon=0.1)

    def test_circle_variables_rejected_on_plane(self):
        with pytest.raises(ConfigError):
            parse_plane("x^2 + xi^2 + i*epsilon*cos(theta)", epsilon=0.1)

    def test_unknown_model(self):
        with pytest.raises(ConfigError):
            parse_symbol("I", "torus")


coeff = st.floats(min_value=-4.0, max_value=4.0, allow_nan=False)


@st.composite
def circle_symbols(draw):
    f = tuple(draw(st.lists(coeff, min_size=1, max_size=3)))
    q = {}
    for n in range(2):
        c0 = draw(coeff)
        if c0:
            q[(0, n)] = complex(c0)
        for m in (1, 3):
            ccos, csin = draw(coeff), draw(coeff)
            if ccos or csin:
                q[(m, n)] = (ccos - 1j * csin) / 2.0
                q[(-m, n)] = (ccos + 1j * csin) / 2.0
    return CircleSymbol(f_coeffs=f, q_terms=q)


@st.composite
def plane_symbols(draw):
    q = {}
    for mn in ((0, 0), (1, 0), (2, 0), (3, 0), (1, 1), (0, 2)):
        c = draw(coeff)
        if c:
            q[mn] = c
    return PlaneSymbol(f_coeffs={(2, 0): 1.0, (0, 2): 1.0}, q_coeffs=q,
                       epsilon=0.25)


class TestRoundTrip:
    @settings(max_examples=60, deadline=None)
    @given(circle_symbols())
    def test_circle_round_trip(self, sym):
        back = parse_circle(format_circle(sym))
        assert back.f_coeffs == sym.f_coeffs
        assert dict(back.q_terms) == dict(sym.q_terms)

    @settings(max_examples=60, deadline=None)
    @given(plane_symbols())
    def test_plane_round_trip(self, sym):
        back = parse_plane(format_plane(sym), epsilon=sym.epsilon)
        assert dict(back.q_coeffs) == dict(sym.q_coeffs)
        assert dict(back.f_coeffs) == dict(sym.f_coeffs)

    def test_parse_format_parse_idempotent(self):
        for model, text in FIGURE_TEXTS:
            first = parse_symbol(text, model, epsilon=0.3)
            if model == "circle":
                second = parse_circle(format_circle(first))
                assert dict(second.q_terms) == dict(first.q_terms)
                assert second.f_coeffs == first.f_coeffs
            else:
                second = parse_plane(format_plane(first), epsilon=0.3)
                assert dict(second.q_coeffs) == dict(first.q_coeffs)
