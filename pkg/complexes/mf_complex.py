"""
Tri-graded complexes of matrix factorizations for closed braid diagrams.

A generator sits at tri-degree (q, j, k): quantum grading, doubled
horizontal grading and doubled vertical grading. Differentials are sparse
column maps source -> {target: polynomial}. d_plus has degree (2, 2, 0),
d_v has degree (0, 0, 2) and, for p = c x^(n+1), d_minus has degree
(2n, -2, 0).
"""
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from sympy.polys.rings import PolyRing

from algebra.polyring import (
    Poly, Potential, edges_of, is_homogeneous, linear_form, poly_to_text, polynomial_ring,
    potential_data, restrict, substitute_linear, substitute_many, total_degree, variable,
)
from config import settings
from knots.braid_model import edge_ring
from schemas.braid import ClosedDiagram
from services.metrics import generators_gauge
from services.observability import observability_service
from workflows.error_handler import IdentityViolation, UnknownVariableError

Degree = Tuple[int, int, int]
SparseMatrix = Dict[int, Dict[int, Poly]]

DIFFERENTIALS = ("d_plus", "d_v", "d_minus")

POSITIVE = "+"
NEGATIVE = "-"
MARK = "mark"


@dataclass(frozen=True)
class GradedGenerator:
    id: int
    q: int
    j: int
    k: int
    state: Tuple[int, ...] = ()

    @property
    def degree(self) -> Degree:
        return (self.q, self.j, self.k)


@dataclass
class TriGradedComplex:
    generators: List[GradedGenerator]
    ring: PolyRing
    d_plus: SparseMatrix = field(default_factory=dict)
    d_v: SparseMatrix = field(default_factory=dict)
    d_minus: SparseMatrix = field(default_factory=dict)
    potential: Optional[Potential] = None
    curvature: Optional[Poly] = None
    factors: Tuple[str, ...] = ()
    reduced_at: Optional[int] = None
    shift: Degree = (0, 0, 0)

    def __post_init__(self):
        if self.curvature is None:
            self.curvature = self.ring.zero

    @property
    def size(self) -> int:
        return len(self.generators)

    @property
    def variables(self) -> Tuple[int, ...]:
        return edges_of(self.ring)

    def differential(self, name: str) -> SparseMatrix:
        if name not in DIFFERENTIALS:
            raise ValueError(f"unknown differential {name!r}")
        return getattr(self, name)

    def degree_of(self, name: str) -> Optional[Degree]:
        if name == "d_plus":
            return (2, 2, 0)
        if name == "d_v":
            return (0, 0, 2)
        if self.potential is None or not self.potential.is_homogeneous:
            return None
        return (2 * self.potential.rank, -2, 0)

    def resolution(self, generator: GradedGenerator) -> Tuple[int, ...]:
        """Per crossing factor: 0 for the oriented and 1 for the singular resolution."""
        key = []
        for kind, local in zip(self.factors, generator.state):
            if kind == POSITIVE:
                key.append(local // 2)
            elif kind == NEGATIVE:
                key.append(1 - local // 2)
        return tuple(key)

    def summand_key(self, generator: GradedGenerator) -> Tuple[int, ...]:
        """Resolution blocks plus closure-mark states; d_plus never leaves a summand."""
        marks = tuple(
            local for kind, local in zip(self.factors, generator.state) if kind == MARK
        )
        return self.resolution(generator) + marks

    def generator(self, generator_id: int) -> GradedGenerator:
        return self._by_id[generator_id]

    @cached_property
    def _by_id(self) -> Dict[int, GradedGenerator]:
        return {g.id: g for g in self.generators}

    def map_entries(self, func: Callable[[Poly], Poly], ring: PolyRing) -> "TriGradedComplex":
        cache: Dict[Poly, Poly] = {}

        def convert(p: Poly) -> Poly:
            if p not in cache:
                cache[p] = func(p)
            return cache[p]

        mapped = {}
        for name in DIFFERENTIALS:
            matrix = {}
            for source, column in self.differential(name).items():
                new_column = {t: convert(e) for t, e in column.items()}
                new_column = {t: e for t, e in new_column.items() if e}
                if new_column:
                    matrix[source] = new_column
            mapped[name] = matrix
        return replace(self, ring=ring, curvature=convert(self.curvature), **mapped)


def unit_complex(ring: PolyRing, potential: Optional[Potential] = None) -> TriGradedComplex:
    """ZZ[x] at (0, 0, 0) with zero differentials"""
    return TriGradedComplex(generators=[GradedGenerator(0, 0, 0, 0)], ring=ring, potential=potential)


def crossing_complex(
    sign: int,
    xi: Poly,
    xj: Poly,
    xk: Poly,
    potential: Optional[Potential] = None,
) -> TriGradedComplex:
    """
    Four-generator complex of one crossing over ZZ[x_i, x_j, x_k].

    Each d_v entry carries (-1)^(j/2) of its source so that d_v anticommutes
    with d_plus and d_minus inside the crossing.
    """
    ring = xi.ring
    one = ring.one
    a, b = xk - xi, xk - xj
    if sign not in (1, -1):
        raise ValueError("crossing sign must be +1 or -1")

    w = p_i = p_ij = ring.zero
    if potential is not None:
        w, p_i, p_ij = potential_data(potential, xi, xj, xk)

    if sign > 0:
        degrees = [(0, -2, 0), (0, 0, 0), (2, -2, -2), (0, 0, -2)]
        d_plus = {0: {1: a}, 2: {3: -a * b}}
        d_v = {2: {0: -(xj - xk)}, 3: {1: one}}
        d_minus = {1: {0: p_i}, 3: {2: p_ij}}
        kind = POSITIVE
    else:
        degrees = [(0, -2, 2), (-2, 0, 2), (0, -2, 0), (0, 0, 0)]
        d_plus = {0: {1: -a * b}, 2: {3: a}}
        d_v = {2: {0: -one}, 3: {1: xj - xk}}
        d_minus = {1: {0: p_ij}, 3: {2: p_i}}
        kind = NEGATIVE

    generators = [GradedGenerator(n, q, j, k, (n,)) for n, (q, j, k) in enumerate(degrees)]
    complex_ = TriGradedComplex(
        generators=generators,
        ring=ring,
        d_plus=_prune(d_plus),
        d_v=_prune(d_v),
        d_minus=_prune(d_minus) if potential is not None else {},
        potential=potential,
        curvature=w,
        factors=(kind,),
    )
    return complex_


def closure_mark_complex(xe: Poly, potential: Optional[Potential] = None) -> TriGradedComplex:
    """
    Koszul factor of a closure identification x_top = x_bottom = x_e:
    d_plus entry x_e - x_e = 0 and d_minus entry p'(x_e).
    """
    ring = xe.ring
    generators = [GradedGenerator(0, 0, -2, 0, (0,)), GradedGenerator(1, 0, 0, 0, (1,))]
    d_minus = {}
    if potential is not None:
        d_minus = _prune({1: {0: potential.evaluate_derivative(xe)}})
    return TriGradedComplex(
        generators=generators, ring=ring, d_minus=d_minus, potential=potential, factors=(MARK,)
    )


def _prune(matrix: SparseMatrix) -> SparseMatrix:
    result = {}
    for source, column in matrix.items():
        column = {t: e for t, e in column.items() if e}
        if column:
            result[source] = column
    return result


def _koszul_sign(generator: GradedGenerator) -> int:
    return -1 if ((generator.j + generator.k) // 2) % 2 else 1


def tensor(left: TriGradedComplex, right: TriGradedComplex) -> TriGradedComplex:
    """
    Tensor product over the common ring.

    d(a x b) = d(a) x b + (-1)^((j_a + k_a)/2) a x d(b) for all three
    differentials.
    """
    if left.ring != right.ring:
        raise ValueError("tensor factors must share one polynomial ring")
    if left.shift != (0, 0, 0) or right.shift != (0, 0, 0):
        raise ValueError("tensor factors must be unshifted")
    potential = left.potential or right.potential
    if left.potential and right.potential and left.potential != right.potential:
        raise ValueError("tensor factors carry different potentials")

    width = right.size
    left_index = {g.id: n for n, g in enumerate(left.generators)}
    right_index = {g.id: n for n, g in enumerate(right.generators)}
    generators = [
        GradedGenerator(ia * width + ib, a.q + b.q, a.j + b.j, a.k + b.k, a.state + b.state)
        for ia, a in enumerate(left.generators)
        for ib, b in enumerate(right.generators)
    ]
    matrices = {}
    for name in DIFFERENTIALS:
        d_left, d_right = left.differential(name), right.differential(name)
        result: SparseMatrix = {}
        for ia, a in enumerate(left.generators):
            sign = _koszul_sign(a)
            left_column = d_left.get(a.id, {})
            for ib, b in enumerate(right.generators):
                column: Dict[int, Poly] = {}
                for target, entry in left_column.items():
                    column[left_index[target] * width + ib] = entry
                for target, entry in d_right.get(b.id, {}).items():
                    key = ia * width + right_index[target]
                    value = entry if sign > 0 else -entry
                    column[key] = column[key] + value if key in column else value
                column = {t: e for t, e in column.items() if e}
                if column:
                    result[ia * width + ib] = column
        matrices[name] = result

    return TriGradedComplex(
        generators=generators,
        ring=left.ring,
        potential=potential,
        curvature=left.curvature + right.curvature,
        factors=left.factors + right.factors,
        **matrices,
    )


ORIENTED = "O"
SINGULAR = "S"


def resolution_generators(sign: int, choice: str) -> Tuple[int, int]:
    """Local generators of one crossing complex spanning a resolution"""
    if choice not in (ORIENTED, SINGULAR):
        raise ValueError(f"resolution must be {ORIENTED!r} or {SINGULAR!r}")
    oriented = choice == ORIENTED
    if sign > 0:
        return (0, 1) if oriented else (2, 3)
    return (2, 3) if oriented else (0, 1)


def restrict_generators(complex_: TriGradedComplex, keep: Sequence[int]) -> TriGradedComplex:
    """Sub-quotient spanned by the given generators; arrows leaving the set are dropped."""
    kept = set(keep)
    matrices = {
        name: {
            s: {t: e for t, e in column.items() if t in kept}
            for s, column in complex_.differential(name).items()
            if s in kept
        }
        for name in DIFFERENTIALS
    }
    return replace(
        complex_,
        generators=[g for g in complex_.generators if g.id in kept],
        **{name: _prune(matrix) for name, matrix in matrices.items()},
    )


def assemble(
    diag: ClosedDiagram,
    potential: Optional[Potential] = None,
    resolution: Optional[Sequence[str]] = None,
    extra_marks: Sequence[int] = (),
) -> TriGradedComplex:
    """
    Total complex of a closed diagram: every crossing complex and closure
    mark tensored over ZZ[edges], then the edge-ring relations imposed by
    substitution into the independent edge variables.

    Args:
        diag: closed braid diagram
        potential: p for the d_minus arrows, None for d_minus = 0
        resolution: optional "O"/"S" per crossing; keeps only that
            resolution of each crossing (d_v then vanishes)
        extra_marks: edges that get an additional closure-mark factor
    """
    if resolution is not None and len(resolution) != len(diag.crossings):
        raise ValueError(f"resolution needs {len(diag.crossings)} choices, got {len(resolution)}")
    presentation = edge_ring(diag)
    full = polynomial_ring(diag.edges)
    complex_ = unit_complex(full, potential)
    for n, crossing in enumerate(diag.crossings):
        i, j = crossing.in_edges
        k = crossing.out_edges[0]
        piece = crossing_complex(
            crossing.sign, variable(full, i), variable(full, j), variable(full, k), potential
        )
        if resolution is not None:
            piece = restrict_generators(piece, resolution_generators(crossing.sign, resolution[n]))
        complex_ = tensor(complex_, piece)
    for edge in tuple(diag.closure_marks) + tuple(extra_marks):
        complex_ = tensor(complex_, closure_mark_complex(variable(full, edge), potential))

    target = polynomial_ring(presentation.independent_variables)
    replacements = {
        dependent: linear_form(full, form) for dependent, form in presentation.solution.items()
    }
    complex_ = complex_.map_entries(
        lambda p: restrict(substitute_many(p, replacements), target), target
    )
    generators_gauge.set(complex_.size)
    observability_service.log_info(
        f"assembled {diag.word}: {complex_.size} generators over {target.ngens} variables"
    )
    if settings.VERIFY_IDENTITIES:
        verify_identities(complex_, closed=True)
    return complex_


def reduce_at_mark(complex_: TriGradedComplex, edge: int) -> TriGradedComplex:
    """Set x_edge = 0 and drop the variable."""
    edges = complex_.variables
    if edge not in edges:
        raise UnknownVariableError(f"x{edge} is not a live variable; live: {list(edges)}")
    target = polynomial_ring([e for e in edges if e != edge])
    zero = complex_.ring.zero
    reduced = complex_.map_entries(
        lambda p: restrict(substitute_linear(p, edge, zero), target), target
    )
    reduced.reduced_at = edge
    return reduced


def overall_shift(writhe: int, strands: int, reduced: bool) -> Degree:
    if reduced:
        return (-writhe + strands - 1, writhe + strands - 1, writhe - strands + 1)
    return (-writhe + strands, writhe + strands - 1, writhe - strands + 1)


def apply_overall_shift(
    complex_: TriGradedComplex, writhe: int, strands: int, reduced: bool
) -> TriGradedComplex:
    dq, dj, dk = overall_shift(writhe, strands, reduced)
    generators = [
        GradedGenerator(g.id, g.q + dq, g.j + dj, g.k + dk, g.state) for g in complex_.generators
    ]
    s = complex_.shift
    return replace(complex_, generators=generators, shift=(s[0] + dq, s[1] + dj, s[2] + dk))


def compose(first: SparseMatrix, second: SparseMatrix) -> SparseMatrix:
    """second after first"""
    result: SparseMatrix = {}
    for source, column in first.items():
        out: Dict[int, Poly] = {}
        for middle, e in column.items():
            for target, f in second.get(middle, {}).items():
                out[target] = out[target] + f * e if target in out else f * e
        out = {t: v for t, v in out.items() if v}
        if out:
            result[source] = out
    return result


def _add(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    result = {s: dict(c) for s, c in a.items()}
    for source, column in b.items():
        out = result.setdefault(source, {})
        for target, e in column.items():
            out[target] = out[target] + e if target in out else e
    return _prune(result)


def identity_failures(complex_: TriGradedComplex, closed: bool) -> List[str]:
    """
    Every differential identity that fails, as readable messages.

    Squares and pairwise anticommutators vanish except
    d_plus d_minus + d_minus d_plus = W Id, where W is the curvature
    (zero for a closed diagram).
    """
    failures = []
    d = {name: complex_.differential(name) for name in DIFFERENTIALS}
    for name in DIFFERENTIALS:
        if compose(d[name], d[name]):
            failures.append(f"{name}^2 != 0")
    for first, second in (("d_plus", "d_v"), ("d_v", "d_minus"), ("d_plus", "d_minus")):
        anticommutator = _add(compose(d[first], d[second]), compose(d[second], d[first]))
        if first == "d_plus" and second == "d_minus" and complex_.curvature:
            expected = {g.id: {g.id: complex_.curvature} for g in complex_.generators}
            anticommutator = _add(anticommutator, {s: {t: -e for t, e in c.items()} for s, c in expected.items()})
        if anticommutator:
            failures.append(f"{first} {second} + {second} {first} != curvature")
    if closed and complex_.curvature:
        failures.append(f"closed diagram has curvature {poly_to_text(complex_.curvature)}")
    failures.extend(homogeneity_failures(complex_))
    return failures


def homogeneity_failures(complex_: TriGradedComplex) -> List[str]:
    failures = []
    by_id = {g.id: g for g in complex_.generators}
    for name in DIFFERENTIALS:
        degree = complex_.degree_of(name)
        if degree is None:
            continue
        for source, column in complex_.differential(name).items():
            s = by_id[source]
            for target, entry in column.items():
                t = by_id[target]
                if not is_homogeneous(entry):
                    failures.append(f"{name} g{source} -> g{target} is not homogeneous")
                    continue
                got = (t.q + 2 * total_degree(entry) - s.q, t.j - s.j, t.k - s.k)
                if got != degree:
                    failures.append(f"{name} g{source} -> g{target} has degree {got}, expected {degree}")
    return failures


def verify_identities(complex_: TriGradedComplex, closed: bool = True) -> None:
    failures = identity_failures(complex_, closed)
    if failures:
        for message in failures[:10]:
            observability_service.log_error(message)
        raise IdentityViolation(f"{len(failures)} differential identities fail: {failures[0]}")


def resolution_summands(complex_: TriGradedComplex) -> Dict[Tuple[int, ...], List[int]]:
    """Generator ids grouped into the summands preserved by d_plus, keys sorted."""
    summands: Dict[Tuple[int, ...], List[int]] = {}
    for g in complex_.generators:
        summands.setdefault(complex_.summand_key(g), []).append(g.id)
    return dict(sorted(summands.items()))


def apply_matrix(matrix: SparseMatrix, vector: Dict[int, Poly]) -> Dict[int, Poly]:
    """Image of a polynomial vector (generator id -> coefficient) under a sparse map"""
    result: Dict[int, Poly] = {}
    for source, coefficient in vector.items():
        for target, entry in matrix.get(source, {}).items():
            value = entry * coefficient
            result[target] = result[target] + value if target in result else value
    return {t: v for t, v in result.items() if v}
