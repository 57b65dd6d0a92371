"""
Unit tests for d_plus homology and its induced maps.
"""
import pytest

from homology.dplus import DPlusHomology, dplus_homology
from homology.iterated import prepare
from homology.slices import offsets_for_window
from schemas.homology import FGAbGroup
from workflows.error_handler import IdentityViolation

Z = FGAbGroup(free_rank=1)


@pytest.fixture
def trefoil_dplus(trefoil):
    return DPlusHomology(prepare(trefoil).complex)


@pytest.mark.unit
class TestDPlusHomology:

    def test_reduced_unknot(self, unknot):
        assert DPlusHomology(prepare(unknot).complex).table(-2, 2) == {(0, 0, 0): Z}

    def test_unreduced_unknot(self, unknot):
        table = DPlusHomology(prepare(unknot, reduced=False).complex).table(0, 6)
        assert table == {(1, 0, 0): Z, (3, 0, 0): Z, (5, 0, 0): Z}

    def test_prefilled(self, trefoil):
        dplus = dplus_homology(prepare(trefoil).complex, (-6, 6))
        assert dplus._slices
        assert dplus.degrees(-6, 6)

    def test_lifts_classify_to_generators(self, trefoil_dplus):
        for degree in trefoil_dplus.degrees(-6, 6):
            group = trefoil_dplus.group(degree)
            for index, lift in enumerate(trefoil_dplus.lifts(degree)):
                unit = [1 if t == index else 0 for t in range(group.ngens)]
                assert trefoil_dplus.classify(degree, lift) == group.reduce(unit)

    def test_vertical_map_squares_to_zero(self, trefoil_dplus):
        for degree in trefoil_dplus.degrees(-6, 6):
            q, j, k = degree
            first = trefoil_dplus.induced_map("d_v", degree)
            second = trefoil_dplus.induced_map("d_v", (q, j, k + 2))
            assert first.certify()
            assert second.compose(first).is_zero

    def test_maps_are_cached(self, trefoil_dplus):
        degree = trefoil_dplus.degrees(-6, 6)[0]
        assert trefoil_dplus.induced_map("d_v", degree) is trefoil_dplus.induced_map("d_v", degree)

    def test_no_induced_dplus(self, trefoil_dplus):
        with pytest.raises(ValueError):
            trefoil_dplus.induced_map("d_plus", (0, 0, 0))

    def test_minus_needs_a_potential(self, trefoil_dplus):
        with pytest.raises(ValueError):
            trefoil_dplus.induced_map("d_minus", (0, 0, 0))

    @pytest.mark.asyncio
    async def test_parallel_prefill_matches(self, trefoil):
        serial = DPlusHomology(prepare(trefoil).complex)
        parallel = DPlusHomology(prepare(trefoil).complex)
        await parallel.prefill_parallel(-6, 6, threads=2)
        assert parallel.table(-6, 6) == serial.table(-6, 6)

    def test_low_ceiling_agrees_with_full_window(self, trefoil):
        low = DPlusHomology(prepare(trefoil).complex).table(-6, 2)
        full = DPlusHomology(prepare(trefoil).complex).table(-6, 6)
        assert low
        assert low == {degree: group for degree, group in full.items() if degree[0] <= 2}

    def test_raising_the_ceiling_keeps_known_bases(self, trefoil_dplus):
        degrees = trefoil_dplus.degrees(-6, 2)
        before = {degree: trefoil_dplus.lifts(degree) for degree in degrees}
        trefoil_dplus.degrees(-6, 6)
        assert trefoil_dplus.ceiling == 6
        for degree, lifts in before.items():
            assert trefoil_dplus.lifts(degree) == lifts

    def test_slices_keep_only_cycles_and_forms(self, trefoil_dplus):
        trefoil_dplus.degrees(-6, 6)
        for piece in trefoil_dplus._slices.values():
            assert set(piece.cycles) == set(piece.groups) == set(piece.functionals)
            for j, group in piece.groups.items():
                assert len(piece.cycles[j]) == group.group.ngens
                assert len(piece.functionals[j]) == group.dim

    def test_slice_keys_skip_offsets_outside_the_window(self, trefoil_dplus):
        keys = trefoil_dplus.slice_keys(-6, 6)
        offsets = offsets_for_window(trefoil_dplus.complex, -6, 6)
        assert len(keys) < len(trefoil_dplus.summands) * len(offsets)
        for key, offset in keys:
            assert trefoil_dplus.reaches(key, offset, -6, 6)

    def test_classify_rejects_a_term_of_the_wrong_degree(self, trefoil_dplus):
        degree = trefoil_dplus.degrees(-6, 6)[0]
        lift = trefoil_dplus.lifts(degree)[0]
        ring = trefoil_dplus.complex.ring
        shifted = {g: c * ring.gens[0] for g, c in lift.items()}
        with pytest.raises(IdentityViolation):
            trefoil_dplus.classify(degree, shifted)
