"""
Tests for input-output equations: forests, closed forms, coefficient map
and the determinant oracle
"""
import pytest

from lcm_indist.analysis.ioeq import (
    IOEquation,
    charpoly_oracle,
    coefficient_map,
    ioeq_esp_cycle,
    ioeq_esp_leak,
    ioeq_forests,
)
from lcm_indist.config import settings
from lcm_indist.core.graph_model import Model, make_cycle_model, make_path_leak_model
from lcm_indist.core.symbolic import Polynomial, parse_label, parse_polynomial
from lcm_indist.errors import DimensionMismatchError, MissingAssignmentError, ParameterRangeError, SearchBoundExceededError

a = parse_label
P = parse_polynomial

M3_C = [
    "0",
    "a_{21}*a_{32}*a_{43} + a_{21}*a_{32}*a_{03}",
    "a_{21}*a_{32} + a_{21}*a_{03} + a_{21}*a_{43} + a_{32}*a_{03} + a_{32}*a_{43}",
    "a_{21} + a_{32} + a_{03} + a_{43}",
]

M3_RENDERED = (
    "y^(4) + (a_{43} + a_{32} + a_{21} + a_{03}) y^(3)"
    " + (a_{32}*a_{43} + a_{21}*a_{43} + a_{21}*a_{32} + a_{32}*a_{03} + a_{21}*a_{03}) y^(2)"
    " + (a_{21}*a_{32}*a_{43} + a_{21}*a_{32}*a_{03}) y^(1)"
    " = a_{21}*a_{32}*a_{43} u"
)


def assert_same_equation(left: IOEquation, right: IOEquation):
    assert left.n == right.n
    for (name, p), (_, q) in zip(left.indexed(), right.indexed()):
        assert p == q, name


class TestForestConstruction:

    def test_running_example_coefficients(self, eq_m3):
        assert list(eq_m3.c) == [P(text) for text in M3_C]
        assert eq_m3.d[0] == P("a_{21}*a_{32}*a_{43}")
        assert all(p.is_zero for p in eq_m3.d[1:])

    def test_golden_rendering_of_third_order_coefficient(self, eq_m3):
        assert str(eq_m3.c[1]) == "a_{21}*a_{32}*a_{43} + a_{21}*a_{32}*a_{03}"

    def test_render(self, eq_m3):
        assert eq_m3.render() == M3_RENDERED

    def test_cycle_model_swaps_leak_for_back_edge(self, eq_m4):
        expected = [P(text.replace("a_{03}", "a_{34}")) for text in M3_C]
        assert list(eq_m4.c) == expected
        assert eq_m4.d[0] == P("a_{21}*a_{32}*a_{43}")

    def test_single_compartment(self):
        eq = ioeq_forests(Model(n=1, input=1, output=1))
        assert eq.c == (Polynomial.zero(),)
        assert eq.d == (Polynomial.one(),)
        assert eq.render() == "y^(1) = u"

    def test_to_json(self, eq_m3):
        payload = eq_m3.to_json()
        assert payload["c"][0] == "0"
        assert payload["c"][1] == "a_{21}*a_{32}*a_{43} + a_{21}*a_{32}*a_{03}"
        assert payload["d"] == ["a_{21}*a_{32}*a_{43}", "0", "0", "0"]

    def test_coefficient_order(self, eq_m3):
        ordered = eq_m3.coefficients()
        assert ordered[0] == eq_m3.c[3]
        assert ordered[3] == eq_m3.c[0]
        assert ordered[4] == eq_m3.d[3]
        assert ordered[7] == eq_m3.d[0]

    def test_parameters_are_the_model_labels(self, m3, eq_m3):
        assert eq_m3.parameters == m3.parameters
        assert eq_m3.labels() == frozenset(m3.parameters)


class TestClosedForms:

    def test_leak_running_example(self, eq_m3):
        assert_same_equation(ioeq_esp_leak(4, 3), eq_m3)

    def test_leak_smallest_case(self):
        eq = ioeq_esp_leak(2, 1)
        assert eq.c[1] == P("a_{21} + a_{01}")
        assert eq.c[0].is_zero
        assert eq.d[0] == P("a_{21}")

    def test_cycle_running_example(self, eq_m4):
        assert_same_equation(ioeq_esp_cycle(4), eq_m4)

    def test_cycle_smallest_case(self):
        eq = ioeq_esp_cycle(2)
        assert eq.c[1] == P("a_{21} + a_{12}")
        assert eq.c[0].is_zero
        assert eq.d[0] == P("a_{21}")

    @pytest.mark.parametrize("n", range(2, 9))
    def test_leak_family_matches_forests(self, n):
        for i in range(1, n):
            assert_same_equation(ioeq_esp_leak(n, i), ioeq_forests(make_path_leak_model(n, i)))

    @pytest.mark.parametrize("n", range(2, 9))
    def test_cycle_family_matches_forests(self, n):
        assert_same_equation(ioeq_esp_cycle(n), ioeq_forests(make_cycle_model(n)))

    @pytest.mark.parametrize("n, i", [(1, 1), (4, 0), (4, 4)])
    def test_leak_ranges(self, n, i):
        with pytest.raises(ParameterRangeError):
            ioeq_esp_leak(n, i)

    def test_cycle_range(self):
        with pytest.raises(ParameterRangeError):
            ioeq_esp_cycle(1)


class TestCoefficientMap:

    def test_all_ones(self, m3):
        theta = {label: 1.0 for label in m3.parameters}
        assert coefficient_map(m3, theta) == [4.0, 5.0, 2.0, 0.0, 0.0, 0.0, 0.0, 1.0]

    def test_zero_rates(self, m3):
        theta = {label: 0.0 for label in m3.parameters}
        assert coefficient_map(m3, theta) == [0.0] * 8

    def test_distinct_primes(self, m3):
        theta = {a("a03"): 2.0, a("a21"): 3.0, a("a32"): 5.0, a("a43"): 7.0}
        assert coefficient_map(m3, theta) == [17.0, 87.0, 135.0, 0.0, 0.0, 0.0, 0.0, 105.0]

    def test_missing_value(self, m3):
        with pytest.raises(MissingAssignmentError):
            coefficient_map(m3, {a("a21"): 1.0})


class TestCharpolyOracle:

    def test_running_example(self, m3, eq_m3):
        assert charpoly_oracle(m3) == list(eq_m3.c)

    def test_single_leak_free_compartment(self):
        assert charpoly_oracle(Model(n=1, input=1, output=1)) == [Polynomial.zero()]

    def test_two_compartments(self):
        model = Model(n=2, edges=[(1, 2)], input=1, output=2, leaks=[2])
        assert charpoly_oracle(model) == [P("a_{21}*a_{02}"), P("a_{21} + a_{02}")]

    @pytest.mark.parametrize("n", range(2, 7))
    def test_path_families(self, n):
        models = [make_path_leak_model(n, i) for i in range(1, n + 1)] + [make_cycle_model(n)]
        for model in models:
            assert charpoly_oracle(model) == list(ioeq_forests(model).c)

    def test_feedback_model(self, feedback_model):
        assert charpoly_oracle(feedback_model) == list(ioeq_forests(feedback_model).c)

    def test_random_corpus(self, random_corpus):
        for model in random_corpus:
            assert charpoly_oracle(model) == list(ioeq_forests(model).c)

    def test_bound(self, monkeypatch):
        monkeypatch.setattr(settings, "CHARPOLY_MAX_N", 3)
        with pytest.raises(SearchBoundExceededError):
            charpoly_oracle(make_cycle_model(4))


class TestEquationShape:

    def test_coefficient_counts_must_match_order(self):
        with pytest.raises(DimensionMismatchError):
            IOEquation(n=2, c=(Polynomial.zero(),), d=(Polynomial.one(), Polynomial.zero()), parameters=())
