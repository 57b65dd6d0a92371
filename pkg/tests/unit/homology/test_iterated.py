"""
Unit tests for the iterated HOMFLY-PT homology.
"""
import pytest

from homology.iterated import (
    compute_homfly, compute_homfly_async, default_window, homfly_homology, knot_window, prepare,
)
from knots.skein_oracle import euler_characteristic, homfly
from schemas.homology import FGAbGroup
from schemas.knot_polynomial import LaurentAQ
from workflows.error_handler import WindowError


@pytest.mark.unit
class TestIteratedHomology:

    def test_unknot(self, unknot):
        computation = compute_homfly(unknot)
        assert computation.exact
        assert computation.table.groups() == {(0, 0, 0): FGAbGroup(free_rank=1)}
        assert computation.polynomial.numerator == LaurentAQ.one()
        assert not computation.table.truncated

    def test_trefoil(self, trefoil):
        table = homfly_homology(trefoil)
        assert table.total_rank() == 3
        assert all(not entry.torsion for entry in table.entries)
        assert euler_characteristic(table) == homfly(trefoil).numerator

    def test_unreduced_unknot_is_truncated(self, unknot):
        computation = compute_homfly(unknot, reduced=False, window=(0, 6))
        assert computation.table.truncated
        assert computation.table.support() == [(1, 0, 0), (3, 0, 0), (5, 0, 0)]
        assert not computation.table.reduced

    def test_links_are_truncated(self, hopf):
        computation = compute_homfly(hopf)
        assert not computation.exact
        assert computation.table.truncated
        assert computation.window == default_window(hopf, computation.complex)

    def test_window_without_support(self, trefoil):
        with pytest.raises(WindowError):
            compute_homfly(trefoil, window=(100, 102))

    def test_empty_window(self, hopf):
        with pytest.raises(WindowError):
            compute_homfly(hopf, window=(4, 0))

    def test_default_window(self, trefoil):
        complex_ = prepare(trefoil).complex
        low, high = default_window(trefoil, complex_)
        assert high == 2 * 3 + 2 * 2
        assert low <= min(g.q for g in complex_.generators)

    def test_knots_start_from_the_polynomial(self, trefoil):
        computation = compute_homfly(trefoil)
        start = knot_window(trefoil, computation.complex, homfly(trefoil))
        low, high = default_window(trefoil, computation.complex)
        top = max(q for _, q, _ in homfly(trefoil).numerator.terms) + 2
        assert start == (low, top)
        assert top < high
        assert computation.window == start

    @pytest.mark.asyncio
    async def test_async_matches_serial(self, trefoil):
        computation = await compute_homfly_async(trefoil, threads=2)
        assert computation.table.same_groups(homfly_homology(trefoil))
