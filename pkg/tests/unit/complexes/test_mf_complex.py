"""
Unit tests for crossing complexes, tensor products and assembly.
"""
import random

import pytest

from algebra.polyring import Potential, polynomial_ring, variable
from complexes.mf_complex import (
    apply_overall_shift, assemble, compose, crossing_complex, identity_failures, overall_shift,
    reduce_at_mark, resolution_generators, resolution_summands, restrict_generators, tensor, unit_complex,
)
from knots.braid_model import close_braid, parse_braid
from workflows.error_handler import UnknownVariableError


@pytest.fixture
def edges(ring3):
    return tuple(variable(ring3, e) for e in (0, 1, 2))


@pytest.mark.unit
class TestCrossingComplex:
    """Local four-generator complexes."""

    @pytest.mark.parametrize("sign", [1, -1])
    @pytest.mark.parametrize("potential", [None, Potential.sln(1), Potential.sln(2), Potential.sln(3)])
    def test_identities(self, edges, sign, potential):
        complex_ = crossing_complex(sign, *edges, potential)
        assert complex_.size == 4
        assert identity_failures(complex_, closed=False) == []

    def test_curvature(self, edges):
        assert not crossing_complex(1, *edges).curvature
        assert crossing_complex(1, *edges, Potential.sln(1)).curvature

    def test_bad_sign(self, edges):
        with pytest.raises(ValueError):
            crossing_complex(2, *edges)

    def test_differential_degrees(self, edges):
        complex_ = crossing_complex(1, *edges, Potential.sln(2))
        assert complex_.degree_of("d_plus") == (2, 2, 0)
        assert complex_.degree_of("d_v") == (0, 0, 2)
        assert complex_.degree_of("d_minus") == (4, -2, 0)
        with pytest.raises(ValueError):
            complex_.differential("d_x")

    def test_inhomogeneous_potential_has_no_minus_degree(self, edges):
        complex_ = crossing_complex(1, *edges, Potential(coefficients=(0, 0, 1, 1)))
        assert complex_.degree_of("d_minus") is None

    def test_resolution_generators(self):
        assert resolution_generators(1, "O") == (0, 1)
        assert resolution_generators(1, "S") == (2, 3)
        assert resolution_generators(-1, "O") == (2, 3)
        with pytest.raises(ValueError):
            resolution_generators(1, "X")

    def test_restriction_drops_vertical_arrows(self, edges):
        piece = restrict_generators(crossing_complex(1, *edges), (0, 1))
        assert piece.size == 2
        assert piece.d_v == {}
        assert piece.d_plus


@pytest.mark.unit
class TestTensorAndAssembly:
    """Closed complexes of whole diagrams."""

    @pytest.mark.parametrize("potential", [None, Potential.sln(1), Potential.sln(2), Potential.sln(3)])
    def test_tensor_sizes_and_identities(self, edges, potential):
        x0, x1, x2 = edges
        product = tensor(
            crossing_complex(1, x0, x1, x2, potential), crossing_complex(-1, x2, x0, x1, potential)
        )
        assert product.size == 16
        assert identity_failures(product, closed=False) == []

    def test_tensor_needs_one_ring(self):
        with pytest.raises(ValueError):
            tensor(unit_complex(polynomial_ring([0])), unit_complex(polynomial_ring([1])))

    def test_trefoil(self, trefoil):
        complex_ = assemble(close_braid(trefoil))
        assert complex_.size == 64
        assert complex_.variables == (0, 1, 2, 4)
        assert len(resolution_summands(complex_)) == 8

    def test_split_diagram_counts_closure_marks(self, corpus):
        complex_ = assemble(close_braid(corpus["unlink"]))
        assert complex_.size == 2
        assert complex_.factors == ("mark",)

    @pytest.mark.parametrize("potential", [None, Potential.sln(1), Potential.sln(2), Potential.sln(3)])
    @pytest.mark.parametrize("seed", range(50))
    def test_closed_identities_on_random_braids(self, seed, potential):
        rng = random.Random(seed)
        strands = rng.choice([2, 3])
        letters = [
            str(rng.randint(1, strands - 1) * rng.choice([1, -1])) for _ in range(rng.randint(1, 4))
        ]
        diag = close_braid(parse_braid(" ".join(letters), strands))
        complex_ = assemble(diag, potential)
        assert complex_.size == 4 ** len(letters) * 2 ** (len(diag.pieces) - 1)
        assert identity_failures(complex_, closed=True) == []

    def test_resolution_complex(self, trefoil):
        complex_ = assemble(close_braid(trefoil), resolution=("O", "S", "O"))
        assert complex_.size == 8
        assert complex_.d_v == {}
        assert compose(complex_.d_plus, complex_.d_plus) == {}
        with pytest.raises(ValueError):
            assemble(close_braid(trefoil), resolution=("O",))

    def test_reduce_at_mark(self, trefoil):
        complex_ = reduce_at_mark(assemble(close_braid(trefoil)), 0)
        assert complex_.variables == (1, 2, 4)
        assert complex_.reduced_at == 0
        with pytest.raises(UnknownVariableError):
            reduce_at_mark(complex_, 0)

    def test_overall_shift(self, trefoil):
        assert overall_shift(3, 2, True) == (-2, 4, 2)
        assert overall_shift(3, 2, False) == (-1, 4, 2)
        complex_ = assemble(close_braid(trefoil))
        shifted = apply_overall_shift(complex_, 3, 2, True)
        assert shifted.shift == (-2, 4, 2)
        assert [g.q for g in shifted.generators] == [g.q - 2 for g in complex_.generators]
