"""
Hochschild homology of resolution bimodules via the Koszul resolution,
compared with d_plus homology of the closed resolution complex.

A resolution (O or S per crossing) of the open braid gives a quotient ring of
the polynomial ring on the open-braid edges: type-II relations at every
crossing, x_k = x_i at oriented ones, x_k x_l = x_i x_j at singular ones, and
the marked variable set to zero. Bottom edges are the left variables y_p,
top edges the right variables z_p. Hochschild homology is the homology of the
Koszul complex on the elements y_p - z_p.

Degrees: m (x) [I] sits at q_HH = 2 deg(m) + 2|I|, Hochschild degree h = |I|.
It is compared with d_plus homology at j = -2h and q = q_HH - 2h + q_base,
where q_base = -2 for each singular negative crossing.
"""
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.rings import PolyRing

from algebra.polyring import (
    Poly, is_homogeneous, linear_form, monomials_of_degree, polynomial_ring, total_degree,
)
from algebra.zlinalg import (
    Lattice, Matrix, PresentedGroup, Subquotient, from_columns, homology_at, zeros,
)
from complexes.mf_complex import ORIENTED, SINGULAR, assemble, reduce_at_mark
from homology.dplus import DPlusHomology
from knots.braid_model import solve_unimodular, type_two_relation
from schemas.braid import ClosedDiagram, Crossing
from schemas.homology import FGAbGroup
from schemas.reports import BidegreeComparison, HochschildComparison
from services.metrics import verification_checks_total
from services.observability import observability_service
from workflows.parallel_executor import run_parallel

Bidegree = Tuple[int, int]


@dataclass
class BimodulePresentation:
    """
    Cyclic bimodule ring / (relations), with left and right actions of
    ZZ[y_1..y_b] and ZZ[z_1..z_b] through the given linear forms.
    """
    ring: PolyRing
    left: Tuple[Poly, ...]
    right: Tuple[Poly, ...]
    relations: Tuple[Poly, ...] = ()
    _pieces: Dict[int, Subquotient] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(self.left) != len(self.right):
            raise ValueError("left and right variable lists differ in length")
        for relation in self.relations:
            if not is_homogeneous(relation):
                raise ValueError("bimodule relations must be homogeneous")

    @property
    def width(self) -> int:
        return len(self.left)

    @property
    def koszul_elements(self) -> List[Poly]:
        return [y - z for y, z in zip(self.left, self.right)]

    def monomials(self, degree: int) -> Tuple[Tuple[int, ...], ...]:
        return monomials_of_degree(self.ring.ngens, degree)

    def piece(self, degree: int) -> Subquotient:
        """Polynomial degree ``degree`` part of the quotient, as a subquotient of ZZ^monomials"""
        if degree not in self._pieces:
            basis = self.monomials(degree)
            index = {m: n for n, m in enumerate(basis)}
            vectors = []
            for relation in self.relations:
                for m in self.monomials(degree - total_degree(relation)):
                    vectors.append(self._coordinates(relation * self.ring({m: 1}), index))
            self._pieces[degree] = Subquotient(
                Lattice.full(len(basis)), Lattice.span(len(basis), vectors)
            )
        return self._pieces[degree]

    @staticmethod
    def _coordinates(p: Poly, index: Dict[Tuple[int, ...], int]) -> List[int]:
        vector = [0] * len(index)
        for monom, c in p.terms():
            vector[index[monom]] += int(c)
        return vector

    def multiply(self, element: Poly, degree: int, vector: Sequence[int]) -> List[int]:
        """Coefficients of linear ``element`` * (vector at ``degree``) at degree + 1"""
        basis = self.monomials(degree)
        p = self.ring({m: c for m, c in zip(basis, vector) if c}) if any(vector) else self.ring.zero
        target = {m: n for n, m in enumerate(self.monomials(degree + 1))}
        return self._coordinates(element * p, target)


class KoszulComplex:
    """C_h = sum over |I| = h of M (x) [I]; d lowers h by one"""

    def __init__(self, bimodule: BimodulePresentation):
        self.bimodule = bimodule
        self.subsets = {
            h: list(combinations(range(bimodule.width), h)) for h in range(bimodule.width + 1)
        }

    def group(self, total: int, h: int) -> PresentedGroup:
        """C_h at q_HH = 2 * total"""
        if h not in self.subsets or total - h < 0:
            return PresentedGroup()
        piece = self.bimodule.piece(total - h).group
        return PresentedGroup(piece.orders * len(self.subsets[h]))

    @staticmethod
    def sign(subset: Tuple[int, ...], i: int) -> int:
        """Negative when the subset has an odd number of elements below i"""
        return -1 if sum(1 for e in subset if e < i) % 2 else 1

    def differential(self, total: int, h: int) -> Matrix:
        """C_h -> C_(h-1) at q_HH = 2 * total"""
        source, target = self.group(total, h), self.group(total, h - 1)
        if source.is_zero or target.is_zero:
            return zeros(target.ngens, source.ngens)
        degree = total - h
        here, there = self.bimodule.piece(degree), self.bimodule.piece(degree + 1)
        block, target_block = here.group.ngens, there.group.ngens
        position = {s: n for n, s in enumerate(self.subsets[h - 1])}
        elements = self.bimodule.koszul_elements
        columns = []
        for subset in self.subsets[h]:
            for lift in here.lifts():
                out = [0] * target.ngens
                for i in subset:
                    rest = tuple(e for e in subset if e != i)
                    image = there.classify(self.bimodule.multiply(elements[i], degree, lift))
                    offset = position[rest] * target_block
                    for t, c in enumerate(image):
                        out[offset + t] += self.sign(subset, i) * c
                columns.append(target.reduce(out))
        return from_columns(columns, target.ngens)

    def homology(self, total: int, h: int) -> FGAbGroup:
        result = homology_at(
            self.differential(total, h + 1),
            self.group(total, h),
            self.differential(total, h),
            self.group(total, h - 1),
            self.group(total, h + 1),
        )
        return FGAbGroup.from_orders(result.group.orders)


def koszul_hh(bimodule: BimodulePresentation, degree_limit: int = 4) -> Dict[Bidegree, FGAbGroup]:
    """
    Hochschild homology table {(q_HH, h): group} for q_HH = 0, 2, ..., 2 * degree_limit.
    """
    complex_ = KoszulComplex(bimodule)
    table = {}
    for total in range(degree_limit + 1):
        for h in range(bimodule.width + 1):
            group = complex_.homology(total, h)
            if not group.is_zero:
                table[(2 * total, h)] = group
    return table


def open_labels(diag: ClosedDiagram) -> Tuple[List[Crossing], Dict[int, int]]:
    """
    Crossings of the open braid and its top edges.

    Closing edges are cut: an output that the closure glued back onto a
    bottom edge gets a fresh identifier instead.

    Returns:
        (relabeled crossings, position -> top edge); a position without
        crossings has its bottom edge on top
    """
    b = diag.strands
    bottom = set(diag.bottom_edges)
    top = {p: diag.bottom_edges[p - 1] for p in range(1, b + 1)}
    next_id = len(diag.edges)
    crossings = []
    for crossing in diag.crossings:
        outs = []
        for t, edge in enumerate(crossing.out_edges):
            if edge in bottom:
                edge = next_id
                top[crossing.index + t] = edge
                next_id += 1
            outs.append(edge)
        crossings.append(crossing.model_copy(update={"out_edges": tuple(outs)}))
    return crossings, top


def resolution_bimodule(diag: ClosedDiagram, resolution: Sequence[str]) -> BimodulePresentation:
    """B'(D_res) / (x_mark) for one resolution of the open braid"""
    if len(resolution) != len(diag.crossings):
        raise ValueError(f"resolution needs {len(diag.crossings)} choices, got {len(resolution)}")
    crossings, top = open_labels(diag)
    relations: List[Dict[int, int]] = [{diag.marked_edge: 1}]
    singular = []
    for crossing, choice in zip(crossings, resolution):
        relations.append(type_two_relation(crossing))
        if choice == ORIENTED:
            relations.append({crossing.out_edges[0]: 1, crossing.in_edges[0]: -1})
        elif choice == SINGULAR:
            singular.append(crossing)
        else:
            raise ValueError(f"resolution must be {ORIENTED!r} or {SINGULAR!r}")

    solution = solve_unimodular(relations)
    edges = set(diag.edges) | set(top.values())
    free = sorted(e for e in edges if e not in solution)
    ring = polynomial_ring(free)

    def express(edge: int) -> Poly:
        return linear_form(ring, solution.get(edge, {edge: 1}))

    quadratics = []
    for crossing in singular:
        (i, j), (k, l) = crossing.in_edges, crossing.out_edges
        relation = express(k) * express(l) - express(i) * express(j)
        if relation:
            quadratics.append(relation)
    b = diag.strands
    return BimodulePresentation(
        ring=ring,
        left=tuple(express(diag.bottom_edges[p - 1]) for p in range(1, b + 1)),
        right=tuple(express(top[p]) for p in range(1, b + 1)),
        relations=tuple(quadratics),
    )


def quantum_base(diag: ClosedDiagram, resolution: Sequence[str]) -> int:
    return -2 * sum(
        1 for crossing, choice in zip(diag.crossings, resolution)
        if crossing.sign < 0 and choice == SINGULAR
    )


def resolution_dplus(diag: ClosedDiagram, resolution: Sequence[str], window: Tuple[int, int]) -> Dict[Bidegree, FGAbGroup]:
    """d_plus homology {(q, j): group} of the reduced closed resolution complex"""
    complex_ = assemble(diag, resolution=resolution, extra_marks=(diag.marked_edge,))
    complex_ = reduce_at_mark(complex_, diag.marked_edge)
    dplus = DPlusHomology(complex_)
    result: Dict[Bidegree, FGAbGroup] = {}
    for (q, j, _), group in dplus.table(*window).items():
        result[(q, j)] = result[(q, j)] + group if (q, j) in result else group
    return result


def crosscheck(
    diag: ClosedDiagram, resolution: Sequence[str], degree_limit: int = 3
) -> HochschildComparison:
    """
    Compare both pipelines for one resolution in every bidegree with
    q_HH <= 2 * degree_limit.
    """
    b = diag.strands
    base = quantum_base(diag, resolution)
    hh = koszul_hh(resolution_bimodule(diag, resolution), degree_limit)
    window = (base - 2 * b, base + 2 * degree_limit)
    dplus = resolution_dplus(diag, resolution, window)

    rows = []
    for q in range(window[0], window[1] + 1):
        for j in range(-2 * b, 1, 2):
            h = -j // 2
            total2 = q - base + 2 * h
            if total2 < 0 or total2 > 2 * degree_limit or total2 % 2:
                continue
            expected = hh.get((total2, h), FGAbGroup())
            got = dplus.get((q, j), FGAbGroup())
            if expected.is_zero and got.is_zero:
                continue
            rows.append(BidegreeComparison(q=q, j=j, expected=expected, got=got))
    for (q, j), group in sorted(dplus.items()):
        if (j > 0 or j < -2 * b) and not group.is_zero:
            rows.append(BidegreeComparison(q=q, j=j, expected=FGAbGroup(), got=group))

    comparison = HochschildComparison(
        resolution="".join(resolution), degree_limit=degree_limit, rows=rows
    )
    verification_checks_total.labels(
        check="hochschild", result="pass" if comparison.matches else "fail"
    ).inc()
    observability_service.log_info(
        f"Hochschild cross-check {diag.word} [{comparison.resolution}]: "
        f"{len(rows)} bidegrees, {len(comparison.mismatches())} mismatches"
    )
    return comparison


def resolutions(diag: ClosedDiagram) -> List[Tuple[str, ...]]:
    return list(product((ORIENTED, SINGULAR), repeat=len(diag.crossings)))


def crosscheck_all(diag: ClosedDiagram, degree_limit: int = 3) -> List[HochschildComparison]:
    return [crosscheck(diag, choice, degree_limit) for choice in resolutions(diag)]


async def crosscheck_all_async(
    diag: ClosedDiagram, degree_limit: int = 3, threads: Optional[int] = None
) -> List[HochschildComparison]:
    """crosscheck_all with resolutions fanned out over the worker pool"""
    return await run_parallel(
        lambda choice: crosscheck(diag, choice, degree_limit), resolutions(diag), threads
    )
