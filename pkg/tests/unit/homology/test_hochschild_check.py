"""
Unit tests for Koszul Hochschild homology and the resolution bimodules.
"""
import pytest

from algebra.polyring import polynomial_ring, variable
from algebra.zlinalg import mat_mul
from homology.hochschild_check import (
    BimodulePresentation, KoszulComplex, koszul_hh, open_labels, quantum_base, resolution_bimodule,
    resolutions,
)
from knots.braid_model import close_braid
from schemas.homology import FGAbGroup

Z = FGAbGroup(free_rank=1)


def ring_with(count):
    ring = polynomial_ring(list(range(count)))
    return ring, [variable(ring, e) for e in range(count)]


@pytest.mark.unit
class TestKoszulHomology:
    """Hochschild homology of small cyclic bimodules."""

    def test_polynomial_ring_over_itself(self):
        ring, (x,) = ring_with(1)
        table = koszul_hh(BimodulePresentation(ring=ring, left=(x,), right=(x,)), degree_limit=2)
        assert table == {(0, 0): Z, (2, 0): Z, (4, 0): Z, (2, 1): Z, (4, 1): Z}

    def test_identification_kills_higher_homology(self):
        ring, (a, b) = ring_with(2)
        table = koszul_hh(BimodulePresentation(ring=ring, left=(a,), right=(b,)), degree_limit=2)
        assert table == {(0, 0): Z, (2, 0): Z, (4, 0): Z}

    def test_torsion(self):
        ring, (a, b) = ring_with(2)
        bimodule = BimodulePresentation(ring=ring, left=(a,), right=(b,), relations=(2 * a * b,))
        table = koszul_hh(bimodule, degree_limit=2)
        assert table == {(0, 0): Z, (2, 0): Z, (4, 0): FGAbGroup(torsion=(2,))}

    def test_differential_squares_to_zero(self):
        ring, (a, b, c, d) = ring_with(4)
        bimodule = BimodulePresentation(ring=ring, left=(a, b), right=(c, d), relations=(a * c - b * d,))
        complex_ = KoszulComplex(bimodule)
        for total in range(2, 4):
            top, middle = complex_.group(total, 2), complex_.group(total, 1)
            square = mat_mul(
                complex_.differential(total, 1), complex_.differential(total, 2),
                middle.ngens, top.ngens,
            )
            target = complex_.group(total, 0)
            for j in range(top.ngens):
                assert target.is_trivial_element([row[j] for row in square])

    def test_sign(self):
        assert KoszulComplex.sign((0, 1), 0) == 1
        assert KoszulComplex.sign((0, 1), 1) == -1

    def test_validation(self):
        ring, (a, b) = ring_with(2)
        with pytest.raises(ValueError):
            BimodulePresentation(ring=ring, left=(a, b), right=(a,))
        with pytest.raises(ValueError):
            BimodulePresentation(ring=ring, left=(a,), right=(b,), relations=(a + a * b,))


@pytest.mark.unit
class TestResolutionBimodules:
    """Bimodules of resolved open braids."""

    def test_open_labels_cut_the_closure(self, trefoil):
        crossings, top = open_labels(close_braid(trefoil))
        assert [c.out_edges for c in crossings] == [(2, 3), (4, 5), (6, 7)]
        assert top == {1: 6, 2: 7}

    def test_oriented_kink(self, corpus):
        diag = close_braid(corpus["unknot_kink"])
        bimodule = resolution_bimodule(diag, ("O",))
        assert bimodule.ring.ngens == 1
        assert bimodule.left == bimodule.right
        table = koszul_hh(bimodule, degree_limit=2)
        assert table[(4, 1)] == FGAbGroup(free_rank=2)
        assert table[(4, 2)] == Z
        assert (0, 1) not in table

    def test_singular_resolution_has_a_quadratic(self, trefoil):
        bimodule = resolution_bimodule(close_braid(trefoil), ("S", "O", "O"))
        assert len(bimodule.relations) == 1

    def test_bad_resolutions(self, trefoil):
        diag = close_braid(trefoil)
        with pytest.raises(ValueError):
            resolution_bimodule(diag, ("O",))
        with pytest.raises(ValueError):
            resolution_bimodule(diag, ("O", "X", "S"))

    def test_quantum_base(self, figure_eight):
        diag = close_braid(figure_eight)
        assert quantum_base(diag, ("S", "S", "S", "S")) == -4
        assert quantum_base(diag, ("O", "S", "O", "O")) == -2
        assert quantum_base(diag, ("S", "O", "S", "O")) == 0

    def test_resolutions(self, trefoil):
        assert len(resolutions(close_braid(trefoil))) == 8
