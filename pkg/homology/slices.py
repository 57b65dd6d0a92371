"""
Finite integer slices of polynomial complexes.

An element m * g (m a monomial, g a generator) sits at quantum degree
2 deg(m) + q(g). d_plus raises q and j by 2, so q - j is constant along it:
the horizontal slice at offset delta holds every m * g with
2 deg(m) + q(g) - j(g) = delta, and is finite. d_v keeps q and j, so the
vertical slice at quantum degree q0 is finite as well.
"""
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from algebra.polyring import monomials_of_degree
from algebra.zlinalg import IntComplex
from complexes.mf_complex import SparseMatrix, TriGradedComplex
from services.metrics import slices_built_total

BasisElement = Tuple[int, Tuple[int, ...]]
IntVector = Dict[int, int]


@dataclass
class IntegerSlice:
    """One slice of one summand: basis (generator, exponents), positions, integer differential."""
    summand: Tuple[int, ...]
    offset: int
    basis: List[BasisElement] = field(default_factory=list)
    position: List[int] = field(default_factory=list)
    differential: Dict[int, IntVector] = field(default_factory=dict)
    index: Dict[BasisElement, int] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.basis)

    def positions(self) -> List[int]:
        return sorted(set(self.position))

    def at(self, position: int) -> List[int]:
        return [n for n, p in enumerate(self.position) if p == position]


def _expanded(matrix: SparseMatrix, generators: Iterable[int]) -> Dict[int, List[Tuple[int, Tuple[int, ...], int]]]:
    return {
        g: [
            (target, monom, int(c))
            for target, entry in matrix.get(g, {}).items()
            for monom, c in entry.terms()
        ]
        for g in generators
    }


def _fill_differential(result: IntegerSlice, terms) -> None:
    for n, (g, monom) in enumerate(result.basis):
        column: IntVector = {}
        for target, emonom, c in terms[g]:
            t = result.index.get((target, tuple(a + b for a, b in zip(monom, emonom))))
            if t is not None:
                column[t] = column.get(t, 0) + c
        column = {t: c for t, c in column.items() if c}
        if column:
            result.differential[n] = column
    slices_built_total.inc()


def horizontal_slice(
    complex_: TriGradedComplex,
    generators: Sequence[int],
    offset: int,
    summand: Tuple[int, ...] = (),
    q_ceiling: Optional[int] = None,
) -> IntegerSlice:
    """
    Slice at q - j = offset of the subcomplex spanned by ``generators``; positions are j.

    With ``q_ceiling`` the slice stops at quantum degree q_ceiling + 2. That
    brutal truncation keeps the homology at every q <= q_ceiling.
    """
    nvars = complex_.ring.ngens
    result = IntegerSlice(summand=summand, offset=offset)
    for g in generators:
        gen = complex_.generator(g)
        twice = offset - gen.q + gen.j
        if twice < 0 or twice % 2:
            continue
        if q_ceiling is not None and offset + gen.j > q_ceiling + 2:
            continue
        for monom in monomials_of_degree(nvars, twice // 2):
            result.index[(g, monom)] = len(result.basis)
            result.basis.append((g, monom))
            result.position.append(gen.j)

    _fill_differential(result, _expanded(complex_.d_plus, generators))
    return result


def vertical_slice(complex_: TriGradedComplex, q0: int) -> IntegerSlice:
    """All m * g at quantum degree q0; positions are the k gradings, differential d_v."""
    nvars = complex_.ring.ngens
    result = IntegerSlice(summand=(), offset=q0)
    ids = [g.id for g in complex_.generators]
    for gen in complex_.generators:
        twice = q0 - gen.q
        if twice < 0 or twice % 2:
            continue
        for monom in monomials_of_degree(nvars, twice // 2):
            result.index[(gen.id, monom)] = len(result.basis)
            result.basis.append((gen.id, monom))
            result.position.append(gen.k)
    _fill_differential(result, _expanded(complex_.d_v, ids))
    return result


def to_int_complex(piece: IntegerSlice) -> IntComplex:
    """Positions p = grading // 2 with local bases, as a zlinalg IntComplex"""
    positions = piece.positions()
    if not positions:
        return IntComplex(positions=[])
    local: Dict[int, int] = {}
    bases: Dict[int, List] = {}
    for p in positions:
        members = piece.at(p)
        bases[p // 2] = [piece.basis[n] for n in members]
        for i, n in enumerate(members):
            local[n] = i
    differentials: Dict[int, Dict[int, Dict[int, int]]] = {}
    for source, column in piece.differential.items():
        p = piece.position[source] // 2
        differentials.setdefault(p, {})[local[source]] = {local[t]: c for t, c in column.items()}
    lo, hi = positions[0] // 2, positions[-1] // 2
    return IntComplex(positions=list(range(lo, hi + 1)), bases=bases, differentials=differentials)


def quantum_slice(complex_: TriGradedComplex, q0: int, direction: str = "horizontal") -> IntComplex:
    """
    Integer complex of one quantum slice.

    horizontal: d_plus on all m * g with q - j = q0, i.e. quantum degree q0
    at horizontal degree 0; vertical: d_v at quantum degree q0.
    """
    if direction == "horizontal":
        piece = horizontal_slice(complex_, [g.id for g in complex_.generators], q0)
    elif direction == "vertical":
        piece = vertical_slice(complex_, q0)
    else:
        raise ValueError(f"direction must be horizontal or vertical, not {direction!r}")
    return to_int_complex(piece)


def offsets_for_window(complex_: TriGradedComplex, q_min: int, q_max: int) -> List[int]:
    """Every q - j that meets quantum degrees in [q_min, q_max]"""
    js = [g.j for g in complex_.generators]
    if not js:
        return []
    return list(range(q_min - max(js), q_max - min(js) + 1))
