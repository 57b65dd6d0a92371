"""
Unit tests for the spectral sequence towards sl(n) homology.
"""
import pytest

from algebra.polyring import Potential
from homology.iterated import compute_homfly
from homology.spectral_sln import FilteredSliceComplex, build_filtered, sln_homology, spectral_report
from knots.braid_model import close_braid, parse_braid
from knots.skein_oracle import euler_characteristic, homfly, specialize_sln


@pytest.mark.unit
class TestFilteredComplex:

    def test_needs_a_potential(self, trefoil):
        with pytest.raises(ValueError):
            FilteredSliceComplex(compute_homfly(trefoil))

    def test_needs_a_homogeneous_potential(self, trefoil):
        computation = compute_homfly(trefoil, potential=Potential(coefficients=(0, 0, 1, 1)))
        with pytest.raises(ValueError):
            FilteredSliceComplex(computation)

    def test_preserved_grading(self, trefoil):
        filtered = build_filtered(close_braid(trefoil), Potential.sln(2))
        assert filtered.sl_rank == 2
        assert filtered.preserved((2, -2, 0)) == -2
        assert filtered.degree(-2, -2, 2) == (2, -2, 0)
        filtered.certify(filtered.preserved(filtered.computation.table.support()[0]))


@pytest.fixture
def sample(corpus):
    """Braid words by label: the corpus plus the left-handed trefoil"""
    words = dict(corpus)
    words["left_trefoil"] = parse_braid("-1 -1 -1", 2)
    return words


@pytest.mark.unit
class TestSpectralReport:

    @pytest.mark.parametrize("name", ["trefoil", pytest.param("figure_eight", marks=pytest.mark.slow), "left_trefoil"])
    def test_linear_potential_degenerates(self, sample, name):
        filtered = build_filtered(close_braid(sample[name]), Potential.sln(0))
        report = spectral_report(filtered, 4)
        assert report.potential == "x"
        assert report.e_infinity is not None
        assert report.e_infinity.same_groups(filtered.computation.table)
        assert report.discrepancies == []

    @pytest.mark.parametrize("name", ["trefoil", pytest.param("figure_eight", marks=pytest.mark.slow), "left_trefoil"])
    def test_first_page_is_homfly_homology(self, sample, name):
        filtered = build_filtered(close_braid(sample[name]), Potential.sln(2))
        report = spectral_report(filtered, 4)
        assert report.page(1).table.same_groups(filtered.computation.table)
        assert report.e2_matches is not False

    @pytest.mark.parametrize("text", ["1 1", "1 -1"])
    def test_link_pages_stay_in_the_window(self, text):
        filtered = build_filtered(close_braid(parse_braid(text, 2)), Potential.sln(2))
        base = filtered.computation.table
        assert base.truncated
        q_min, q_max = base.q_window
        report = spectral_report(filtered, 4)
        assert report.page(1).table.same_groups(base)
        for page in report.pages:
            assert all(q_min <= q <= q_max for q, _, _ in page.table.support())
            for d in page.differentials:
                assert q_min <= d.source[0] <= q_max and q_min <= d.target[0] <= q_max
        if report.e_infinity is not None:
            assert all(q_min <= q <= q_max for q, _, _ in report.e_infinity.support())

    def test_unknot_sl2(self, unknot):
        table = sln_homology(unknot, 2)
        assert table.sl_rank == 2
        assert [entry.Q for entry in table.entries] == [0]

    def test_sl2_euler(self, trefoil):
        table = sln_homology(trefoil, 2)
        assert euler_characteristic(table, sl_rank=2) == specialize_sln(homfly(trefoil), 2)
