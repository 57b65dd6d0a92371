"""
Integration tests of the HOMFLY-PT and sl(n) pipelines against independent oracles.
Run with: pytest tests/integration -m integration
"""
import pytest

from agents.verification.euler_check import EulerCheckAgent, EulerCheckInput
from algebra.polyring import Potential
from homology.hochschild_check import crosscheck_all, crosscheck_all_async
from homology.iterated import compute_homfly
from homology.spectral_sln import build_filtered, sln_homology, spectral_report
from knots.braid_model import close_braid, parse_braid
from knots.catalog import EQUIVALENT_PAIRS, lookup
from knots.skein_oracle import euler_characteristic, homfly, specialize_sln


@pytest.mark.integration
class TestHomflyHomology:
    """Iterated homology against the skein oracle and Reidemeister moves."""

    @pytest.mark.asyncio
    @pytest.mark.parametrize("name", ["unknot", "hopf", "trefoil", "figure_eight", "unlink"])
    @pytest.mark.parametrize("reduced", [True, False])
    async def test_euler_characteristic(self, corpus, name, reduced):
        word = corpus[name]
        computation = compute_homfly(word, reduced=reduced)
        outcome = await EulerCheckAgent().run(
            EulerCheckInput(computation.table, homfly(word), reduced)
        )
        assert outcome.passed, outcome.detail

    @pytest.mark.parametrize("label, first, second", EQUIVALENT_PAIRS)
    def test_equivalent_presentations(self, label, first, second):
        a = compute_homfly(parse_braid(first[1], first[0]))
        b = compute_homfly(parse_braid(second[1], second[0]), window=a.window)
        assert a.table.differences(b.table) == [], label

    @pytest.mark.parametrize("name, marks", [("trefoil", [0, 1, 3, 5]), ("figure_eight", [0, 2, 5])])
    def test_mark_independence(self, corpus, name, marks):
        tables = [compute_homfly(corpus[name], mark=m).table for m in marks]
        for table in tables[1:]:
            assert table.same_groups(tables[0])

    def test_mirror_has_the_same_rank(self, trefoil):
        table = compute_homfly(trefoil).table
        mirrored = compute_homfly(trefoil.mirror()).table
        assert mirrored.total_rank() == table.total_rank()
        assert euler_characteristic(mirrored) == homfly(trefoil).mirror().numerator

    def test_figure_eight_rank(self, figure_eight):
        assert compute_homfly(figure_eight).table.total_rank() == 5

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["5_1", "5_2", "m5_2"])
    def test_five_crossing_catalog_knots(self, name):
        word = lookup(name)
        computation = compute_homfly(word)
        assert computation.exact
        assert not computation.table.truncated
        assert euler_characteristic(computation.table) == homfly(word).numerator
        assert all(q <= computation.window[1] - 2 for q, _, _ in computation.table.support())


@pytest.mark.integration
class TestSlnSpectralSequence:
    """Pages towards sl(n) homology."""

    @pytest.mark.parametrize("name", ["trefoil", "figure_eight"])
    @pytest.mark.parametrize("n", [2, 3])
    def test_sl_euler(self, corpus, name, n):
        table = sln_homology(corpus[name], n)
        assert euler_characteristic(table, sl_rank=n) == specialize_sln(homfly(corpus[name]), n)

    @pytest.mark.parametrize("n", [1, 2])
    def test_first_page_and_degrees(self, trefoil, n):
        filtered = build_filtered(close_braid(trefoil), Potential.sln(n))
        report = spectral_report(filtered)
        assert report.page(1).table.same_groups(filtered.computation.table)
        assert report.e2_matches is not False
        for page in report.pages:
            r = page.index
            for d in page.differentials:
                shift = tuple(t - s for s, t in zip(d.source, d.target))
                assert shift == (2 * n * r, -2 * r, 2 - 2 * r)

    def test_sl1_is_one_dimensional(self, trefoil):
        table = sln_homology(trefoil, 1)
        assert euler_characteristic(table, sl_rank=1) == specialize_sln(homfly(trefoil), 1)


@pytest.mark.integration
@pytest.mark.slow
class TestHochschildCrosscheck:
    """Koszul Hochschild homology against d_plus homology, one resolution at a time."""

    @pytest.mark.parametrize("name", ["unknot_kink", "hopf"])
    def test_small_diagrams(self, corpus, name):
        comparisons = crosscheck_all(close_braid(corpus[name]), degree_limit=3)
        assert comparisons
        for comparison in comparisons:
            assert comparison.matches, comparison.mismatches()

    @pytest.mark.parametrize("text, strands", [
        ("-1", 2),
        ("1 -1", 2),
        ("-1 -1 -1", 2),
        ("1 -2", 3),
        ("", 2),
        ("1 2 1", 3),
    ])
    def test_negative_and_mixed_braids(self, text, strands):
        comparisons = crosscheck_all(close_braid(parse_braid(text, strands)), degree_limit=2)
        assert len(comparisons) == 2 ** len(text.split())
        for comparison in comparisons:
            assert comparison.matches, comparison.mismatches()

    def test_figure_eight(self, figure_eight):
        comparisons = crosscheck_all(close_braid(figure_eight), degree_limit=2)
        assert len(comparisons) == 16
        for comparison in comparisons:
            assert comparison.matches, comparison.mismatches()

    @pytest.mark.asyncio
    async def test_trefoil(self, trefoil):
        comparisons = await crosscheck_all_async(close_braid(trefoil), degree_limit=2)
        assert len(comparisons) == 8
        assert all(c.matches for c in comparisons)
