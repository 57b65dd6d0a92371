"""
Unit tests for polynomial helpers and potentials.
"""
import pytest

from algebra.polyring import (
    Potential, divide_exact, edges_of, is_homogeneous, linear_form, monomials_of_degree,
    poly_to_text, polynomial_ring, potential_data, quantum_degree, restrict, substitute_linear,
    substitute_many, total_degree, unit_value, variable,
)
from workflows.error_handler import DivisibilityError, UnknownVariableError


@pytest.mark.unit
class TestRingHelpers:
    """Rings keyed by edge identifiers."""

    def test_edges_round_trip(self):
        ring = polynomial_ring([3, 0, 7])
        assert edges_of(ring) == (3, 0, 7)

    def test_unknown_variable(self, ring3):
        with pytest.raises(UnknownVariableError):
            variable(ring3, 5)

    def test_linear_form(self, ring3):
        x0, x1, x2 = ring3.gens
        assert linear_form(ring3, {0: 1, 2: -3, 1: 0}) == x0 - 3 * x2

    def test_substitute_linear(self, ring3):
        x0, x1, x2 = ring3.gens
        p = x0 * x1 + x2
        assert substitute_linear(p, 1, x0 + x2) == x0**2 + x0 * x2 + x2

    def test_substitute_many_is_simultaneous(self, ring3):
        x0, x1, x2 = ring3.gens
        swapped = substitute_many(x0 - 2 * x1, {0: x1, 1: x0})
        assert swapped == x1 - 2 * x0

    def test_restrict_drops_unused_variable(self, ring3):
        x0, _, x2 = ring3.gens
        small = polynomial_ring([0, 2])
        assert poly_to_text(restrict(x0 * x2, small)) == "1*x0*x2"

    def test_degrees(self, ring3):
        x0, x1, x2 = ring3.gens
        assert total_degree(x0**2 * x1 + x2) == 3
        assert quantum_degree(x0 * x1) == 4
        assert total_degree(ring3.zero) == 0
        assert is_homogeneous(x0 * x1 - x2**2)
        assert not is_homogeneous(x0 + x1**2)

    def test_unit_value(self, ring3):
        x0 = ring3.gens[0]
        assert unit_value(ring3.one) == 1
        assert unit_value(-ring3.one) == -1
        assert unit_value(2 * ring3.one) is None
        assert unit_value(x0) is None
        assert unit_value(ring3.zero) is None

    def test_divide_exact(self, ring3):
        x0, x1, _ = ring3.gens
        assert divide_exact(x0**2 - x1**2, x0 - x1) == x0 + x1
        with pytest.raises(DivisibilityError):
            divide_exact(x0**2 + x1, x0 - x1)

    def test_monomials_of_degree(self):
        assert monomials_of_degree(2, 2) == ((2, 0), (1, 1), (0, 2))
        assert monomials_of_degree(0, 0) == ((),)
        assert monomials_of_degree(0, 1) == ()
        assert monomials_of_degree(3, -1) == ()
        assert len(monomials_of_degree(3, 3)) == 10

    def test_text_rendering(self, ring3):
        x0, x1, _ = ring3.gens
        assert poly_to_text(ring3.zero) == "0"
        assert poly_to_text(x0**2 - 3 * x1) == "1*x0^2 -3*x1"


@pytest.mark.unit
class TestPotential:
    """Univariate potentials and their crossing data."""

    def test_sln(self):
        p = Potential.sln(2)
        assert p.coefficients == (0, 0, 0, 1)
        assert p.is_homogeneous
        assert p.rank == 2
        assert p.label == "x^3"

    def test_degenerate_potential(self):
        p = Potential.sln(0)
        assert p.coefficients == (0, 1)
        assert p.rank == 0
        assert p.label == "x"

    def test_trailing_zeros_stripped(self):
        assert Potential(coefficients=(1, 2, 0, 0)).coefficients == (1, 2)

    def test_zero_potential_rejected(self):
        with pytest.raises(ValueError):
            Potential(coefficients=(0, 0))

    def test_negative_rank_rejected(self):
        with pytest.raises(ValueError):
            Potential.sln(-1)

    def test_inhomogeneous_rank(self):
        with pytest.raises(ValueError):
            Potential(coefficients=(0, 1, 1)).rank

    def test_derivative(self, ring3):
        x0 = ring3.gens[0]
        p = Potential(coefficients=(5, 0, 3, 1))
        assert p.derivative() == (0, 6, 3)
        assert p.evaluate_derivative(x0) == 3 * x0**2 + 6 * x0
        assert p.evaluate(x0) == x0**3 + 3 * x0**2 + 5

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_crossing_quotients(self, ring3, n):
        xi, xj, xk = ring3.gens
        w, p_i, p_ij = potential_data(Potential.sln(n), xi, xj, xk)
        assert (xk - xi) * p_i == w
        assert -(xk - xi) * (xk - xj) * p_ij == w

    def test_crossing_potential_vanishes_for_linear_p(self, ring3):
        xi, xj, xk = ring3.gens
        w, p_i, p_ij = potential_data(Potential.sln(0), xi, xj, xk)
        assert not w and not p_i and not p_ij
