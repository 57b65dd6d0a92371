"""
Unit tests for braid parsing, closure and the edge ring.
"""
import pytest

from knots.braid_model import (
    close_braid, edge_ring, link_components, parse_braid, solve_unimodular, strand_permutation,
    strand_pieces, type_two_relation,
)
from schemas.braid import Crossing
from workflows.error_handler import BraidParseError, IdentityViolation, UnknownVariableError


@pytest.mark.unit
class TestParseBraid:
    """Signed-integer braid notation."""

    def test_figure_eight(self):
        word = parse_braid("1 -2 1 -2")
        assert word.strands == 3
        assert word.writhe == 0
        assert word.to_text() == "1 -2 1 -2"

    def test_commas_and_spaces(self):
        assert parse_braid("1, 2,-1").to_text() == "1 2 -1"

    def test_empty_word(self):
        word = parse_braid("")
        assert word.strands == 1
        assert word.crossing_count == 0
        assert parse_braid("", 3).strands == 3

    @pytest.mark.parametrize("text", ["a", "1 x", "0", "1.5", "--1"])
    def test_malformed_tokens(self, text):
        with pytest.raises(BraidParseError):
            parse_braid(text)

    def test_generator_out_of_range(self):
        with pytest.raises(BraidParseError) as excinfo:
            parse_braid("3", 2)
        assert excinfo.value.exit_code == 2

    def test_mirror(self):
        assert parse_braid("1 -2").mirror().to_text() == "-1 2"


@pytest.mark.unit
class TestClosure:
    """Closed diagrams and their segments."""

    def test_permutation_and_components(self, trefoil, hopf, corpus):
        assert strand_permutation(trefoil) == {1: 2, 2: 1}
        assert link_components(trefoil) == 1
        assert link_components(hopf) == 2
        assert link_components(corpus["unlink"]) == 2
        assert link_components(corpus["figure_eight"]) == 1

    def test_trefoil_edges(self, trefoil):
        diag = close_braid(trefoil)
        assert diag.edges == (0, 1, 2, 3, 4, 5)
        assert [c.in_edges for c in diag.crossings] == [(0, 1), (2, 3), (4, 5)]
        assert [c.out_edges for c in diag.crossings] == [(2, 3), (4, 5), (0, 1)]
        assert diag.pieces == ((1, 2),)
        assert diag.closure_marks == ()
        assert diag.is_knot

    def test_split_diagram_gets_closure_marks(self, corpus):
        diag = close_braid(corpus["unlink"])
        assert diag.pieces == ((1,), (2,))
        assert diag.marked_edge == 0
        assert diag.closure_marks == (1,)
        assert strand_pieces(corpus["unlink"]) == [(1,), (2,)]

    def test_marked_edge(self, trefoil):
        diag = close_braid(trefoil, 3)
        assert diag.marked_edge == 3
        assert diag.piece_of_edge(3) == (1, 2)

    def test_unknown_mark(self, trefoil):
        with pytest.raises(UnknownVariableError):
            close_braid(trefoil, 99)


@pytest.mark.unit
class TestEdgeRing:
    """Type-II relations and unimodular elimination."""

    def test_type_two_relation(self):
        crossing = Crossing(position=0, index=1, sign=1, in_edges=(0, 1), out_edges=(2, 3))
        assert type_two_relation(crossing) == {2: 1, 3: 1, 0: -1, 1: -1}

    def test_relation_cancels_on_single_crossing(self, corpus):
        diag = close_braid(corpus["unknot_kink"])
        assert type_two_relation(diag.crossings[0]) == {}
        assert edge_ring(diag).relation_rank == 0

    def test_trefoil_rank(self, trefoil):
        presentation = edge_ring(close_braid(trefoil))
        assert len(presentation.variables) == 6
        assert len(presentation.independent_variables) == 4
        assert 0 in presentation.independent_variables

    def test_solution_satisfies_relations(self, figure_eight):
        diag = close_braid(figure_eight)
        presentation = edge_ring(diag)
        for relation in presentation.linear_relations:
            total = {}
            for edge, c in relation.items():
                for e, v in presentation.express(edge).items():
                    total[e] = total.get(e, 0) + c * v
            assert not any(total.values())

    def test_solve_unimodular(self):
        assert solve_unimodular([{0: 1, 1: -1}]) == {1: {0: 1}}
        assert solve_unimodular([{0: 1, 1: -1}], protected=(1,)) == {0: {1: 1}}
        assert solve_unimodular([{0: 1, 1: -1}, {1: 1, 0: -1}]) == {1: {0: 1}}

    def test_no_unit_pivot(self):
        with pytest.raises(IdentityViolation):
            solve_unimodular([{0: 2, 1: 2}])
