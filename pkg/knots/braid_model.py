"""
Braid words, their closures and the edge ring of the closed diagram.
"""
import re
from typing import Dict, List, Optional, Sequence

import networkx as nx
from pydantic import ValidationError

from schemas.braid import BraidLetter, BraidWord, ClosedDiagram, Crossing, EdgeRingPresentation
from services.observability import observability_service
from workflows.error_handler import BraidParseError, IdentityViolation, UnknownVariableError

_TOKEN = re.compile(r"^[+-]?\d+$")


def parse_braid(text: str, strands: Optional[int] = None) -> BraidWord:
    """
    Parse signed-integer braid notation.

    Args:
        text: whitespace or comma separated nonzero integers; "-2" is sigma_2^-1
        strands: explicit strand count, otherwise 1 + largest generator index

    Returns:
        BraidWord
    """
    tokens = [t for t in re.split(r"[\s,]+", text.strip()) if t]
    letters = []
    for token in tokens:
        if not _TOKEN.match(token):
            raise BraidParseError(f"malformed braid token {token!r}")
        value = int(token)
        if value == 0:
            raise BraidParseError("braid generator 0 does not exist")
        letters.append((abs(value), 1 if value > 0 else -1))

    if strands is None:
        strands = 1 + max((index for index, _ in letters), default=0)
    try:
        return BraidWord(
            strands=strands,
            letters=tuple(BraidLetter(index=i, sign=s) for i, s in letters),
        )
    except ValidationError as e:
        raise BraidParseError(f"invalid braid {text!r} on {strands} strands: {e.errors()[0]['msg']}") from e


def strand_permutation(word: BraidWord) -> Dict[int, int]:
    """Bottom position -> top position of every strand"""
    result = {}
    for start in range(1, word.strands + 1):
        position = start
        for letter in word.letters:
            if position == letter.index:
                position += 1
            elif position == letter.index + 1:
                position -= 1
        result[start] = position
    return result


def link_components(word: BraidWord) -> int:
    graph = nx.Graph()
    graph.add_nodes_from(range(1, word.strands + 1))
    graph.add_edges_from(strand_permutation(word).items())
    return nx.number_connected_components(graph)


def strand_pieces(word: BraidWord) -> List[tuple]:
    """Strand positions grouped by the letters that join neighbours"""
    graph = nx.Graph()
    graph.add_nodes_from(range(1, word.strands + 1))
    graph.add_edges_from((l.index, l.index + 1) for l in word.letters)
    return sorted((tuple(sorted(c)) for c in nx.connected_components(graph)), key=min)


def close_braid(word: BraidWord, marked_edge: Optional[int] = None) -> ClosedDiagram:
    """
    Close a braid and label its segments.

    Segments are numbered bottom-to-top and left-to-right; the top segment
    of every position reuses the identifier of its bottom segment.
    """
    last_touch: Dict[int, int] = {}
    for idx, letter in enumerate(word.letters):
        last_touch[letter.index] = idx
        last_touch[letter.index + 1] = idx

    bottom = list(range(word.strands))
    edge_positions = {edge: edge + 1 for edge in bottom}
    current = {p: bottom[p - 1] for p in range(1, word.strands + 1)}
    next_id = word.strands
    crossings = []
    for idx, letter in enumerate(word.letters):
        i = letter.index
        ins = (current[i], current[i + 1])
        outs = []
        for p in (i, i + 1):
            if last_touch[p] == idx:
                outs.append(bottom[p - 1])
            else:
                outs.append(next_id)
                edge_positions[next_id] = p
                next_id += 1
        crossings.append(
            Crossing(position=idx, index=i, sign=letter.sign, in_edges=ins, out_edges=tuple(outs))
        )
        current[i], current[i + 1] = outs

    edges = tuple(range(next_id))
    mark = edges[0] if marked_edge is None else marked_edge
    if mark not in edge_positions:
        raise UnknownVariableError(f"edge {mark} does not exist; the diagram has edges 0..{next_id - 1}")

    pieces = strand_pieces(word)
    marked_position = edge_positions[mark]
    closure_marks = tuple(
        min(e for e, p in edge_positions.items() if p in piece)
        for piece in pieces
        if marked_position not in piece
    )
    diagram = ClosedDiagram(
        word=word,
        crossings=tuple(crossings),
        edges=edges,
        marked_edge=mark,
        edge_positions=edge_positions,
        bottom_edges=tuple(bottom),
        pieces=tuple(pieces),
        closure_marks=closure_marks,
        components=link_components(word),
    )
    observability_service.log_debug(
        f"closed {word}: {len(edges)} edges, {len(pieces)} pieces, {diagram.components} components"
    )
    return diagram


def _combine(form: Dict[int, int], edge: int, coefficient: int):
    value = form.get(edge, 0) + coefficient
    if value:
        form[edge] = value
    else:
        form.pop(edge, None)


def solve_unimodular(
    relations: Sequence[Dict[int, int]], protected: Sequence[int] = ()
) -> Dict[int, Dict[int, int]]:
    """
    Solve integer linear relations by substitution on unit pivots.

    Args:
        relations: variable -> coefficient, each meaning sum = 0
        protected: variables that never become dependent

    Returns:
        dependent variable -> linear form in the remaining variables
    """
    solution: Dict[int, Dict[int, int]] = {}
    for relation in relations:
        reduced: Dict[int, int] = {}
        for edge, c in relation.items():
            for e, v in solution.get(edge, {edge: 1}).items():
                _combine(reduced, e, c * v)
        if not reduced:
            continue
        candidates = [e for e, c in reduced.items() if abs(c) == 1 and e not in protected]
        if not candidates:
            raise IdentityViolation(f"relation {relation} has no unit pivot")
        pivot = max(candidates)
        sign = reduced[pivot]
        form = {e: -sign * c for e, c in reduced.items() if e != pivot}
        for dependent in solution.values():
            if pivot in dependent:
                coefficient = dependent.pop(pivot)
                for e, v in form.items():
                    _combine(dependent, e, coefficient * v)
        solution[pivot] = form
    return solution


def edge_ring(diag: ClosedDiagram) -> EdgeRingPresentation:
    """
    One type-II relation x_k + x_l - x_i - x_j per crossing, solved by
    unimodular substitution. The marked edge is never chosen as a pivot.
    """
    relations = [type_two_relation(crossing) for crossing in diag.crossings]
    try:
        solution = solve_unimodular(relations, protected=(diag.marked_edge,))
    except IdentityViolation as e:
        raise IdentityViolation(f"{e} in {diag.word}") from e

    return EdgeRingPresentation(
        variables=diag.edges,
        linear_relations=relations,
        independent_variables=tuple(e for e in diag.edges if e not in solution),
        solution=solution,
    )


def type_two_relation(crossing: Crossing) -> Dict[int, int]:
    relation: Dict[int, int] = {}
    for edge in crossing.out_edges:
        _combine(relation, edge, 1)
    for edge in crossing.in_edges:
        _combine(relation, edge, -1)
    return relation
