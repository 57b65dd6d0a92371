"""
Spectral sequence from HOMFLY-PT homology to sl(n) homology.

E_0 is the d_plus homology with d_0 = d_v*; the total differential
d_v* + d_minus* is filtered by the horizontal degree j, deeper levels having
smaller j. For p = c x^(n+1) every d_r preserves Q = q + n j, so each
Q-class is an independent finite double complex. Position (j, tau) of a
class, tau = k - j, is the tri-degree (Q - n j, j, tau + j); d_v* moves
(j, tau) -> (j, tau + 2) and d_minus* moves (j, tau) -> (j - 2, tau + 2).

Pages are built with the lattice formula: Z_r(j, tau) holds stacked vectors
on levels j, j - 2, ..., j - 2(r - 1) whose total differential vanishes on
those levels modulo relations; E_r is the level-j projection of Z_r modulo
relations and the level-j part of D y for y reaching down to j from r - 1
levels above.
"""
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from algebra.polyring import Potential
from algebra.zlinalg import (
    Lattice, Matrix, PresentedGroup, Subquotient, column, from_columns, homology_at, mat_mul,
    mat_vec, preimage, solve_integer, zeros,
)
from complexes.mf_complex import Degree
from config import settings
from homology.dplus import DPlusHomology
from homology.iterated import HomflyComputation, Window, finish, prepare_diagram
from knots.braid_model import close_braid
from schemas.braid import BraidWord, ClosedDiagram
from schemas.homology import (
    FGAbGroup, HomologyTable, PageDifferential, SpectralPage, SpectralReport,
)
from services.metrics import page_seconds, verification_checks_total
from services.observability import observability_service
from workflows.error_handler import IdentityViolation
from workflows.parallel_executor import merge_groups, run_parallel

Position = Tuple[int, int]


def _vanishes(matrix: Matrix, target: PresentedGroup, ncols: int) -> bool:
    return all(target.is_trivial_element(column(matrix, c)) for c in range(ncols))


def _induced(source: Subquotient, matrix: Matrix, target: Subquotient) -> Matrix:
    """Matrix of the map between subquotients induced by an integer matrix"""
    try:
        columns = [target.classify(mat_vec(matrix, lift)) for lift in source.lifts()]
    except ValueError as e:
        raise IdentityViolation(f"induced map leaves its subquotient: {e}") from e
    return from_columns(columns, target.group.ngens)


class FilteredSliceComplex:
    """d_plus homology of a closed complex with d_v* and d_minus*, split by Q-class"""

    def __init__(self, computation: HomflyComputation):
        potential = computation.complex.potential
        if potential is None:
            raise ValueError("a filtered complex needs a potential")
        if not potential.is_homogeneous:
            raise ValueError(f"potential {potential.label} is not homogeneous; no Q-grading is preserved")
        self.computation = computation
        self.dplus: DPlusHomology = computation.dplus
        self.potential: Potential = potential
        self.sl_rank = potential.rank
        self.j_min, self.j_max = self.dplus.horizontal_range
        self.levels = list(range(self.j_max, self.j_min - 1, -2))
        self.taus = sorted({k - j for j in self.levels for k in self.dplus.vertical_degrees})

    def preserved(self, degree: Degree) -> int:
        return degree[0] + self.sl_rank * degree[1]

    def degree(self, Q: int, j: int, tau: int) -> Degree:
        return (Q - self.sl_rank * j, j, tau + j)

    def group(self, Q: int, j: int, tau: int) -> PresentedGroup:
        if not self.j_min <= j <= self.j_max:
            return PresentedGroup()
        return self.dplus.group(self.degree(Q, j, tau))

    def _map(self, name: str, Q: int, j: int, tau: int) -> Matrix:
        target_j = j if name == "d_v" else j - 2
        source, target = self.group(Q, j, tau), self.group(Q, target_j, tau + 2)
        if source.is_zero or target.is_zero:
            return zeros(target.ngens, source.ngens)
        return self.dplus.induced_map(name, self.degree(Q, j, tau)).matrix

    def vertical(self, Q: int, j: int, tau: int) -> Matrix:
        """d_v*: (j, tau) -> (j, tau + 2)"""
        return self._map("d_v", Q, j, tau)

    def minus(self, Q: int, j: int, tau: int) -> Matrix:
        """d_minus*: (j, tau) -> (j - 2, tau + 2)"""
        return self._map("d_minus", Q, j, tau)

    def certify(self, Q: int) -> None:
        """d_v*^2, d_minus*^2 and their anticommutator vanish on homology"""
        failures = []
        for j in self.levels:
            for tau in self.taus:
                n = self.group(Q, j, tau).ngens
                if not n:
                    continue
                v, m = self.vertical(Q, j, tau), self.minus(Q, j, tau)
                mid_v, mid_m = self.group(Q, j, tau + 2).ngens, self.group(Q, j - 2, tau + 2).ngens
                vv = mat_mul(self.vertical(Q, j, tau + 2), v, mid_v, n)
                mm = mat_mul(self.minus(Q, j - 2, tau + 2), m, mid_m, n)
                vm = mat_mul(self.vertical(Q, j - 2, tau + 2), m, mid_m, n)
                mv = mat_mul(self.minus(Q, j, tau + 2), v, mid_v, n)
                mixed = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(vm, mv)]
                if not _vanishes(vv, self.group(Q, j, tau + 4), n):
                    failures.append(f"d_v*^2 at {self.degree(Q, j, tau)}")
                if not _vanishes(mm, self.group(Q, j - 4, tau + 4), n):
                    failures.append(f"d_minus*^2 at {self.degree(Q, j, tau)}")
                if not _vanishes(mixed, self.group(Q, j - 2, tau + 4), n):
                    failures.append(f"d_v* d_minus* + d_minus* d_v* at {self.degree(Q, j, tau)}")
        verification_checks_total.labels(
            check="filtered_complex", result="fail" if failures else "pass"
        ).inc()
        if failures:
            raise IdentityViolation(f"Q = {Q}: {failures[0]} ({len(failures)} failures)")


class ClassPages:
    """Pages of one Q-class"""

    def __init__(self, filtered: FilteredSliceComplex, Q: int):
        self.f = filtered
        self.Q = Q
        self._cycles: Dict[Tuple[int, int, int], Lattice] = {}
        self._terms: Dict[Tuple[int, int, int], Subquotient] = {}

    def size(self, j: int, tau: int) -> int:
        return self.f.group(self.Q, j, tau).ngens

    def _condition_matrix(
        self, levels: Sequence[int], tau: int, checked: int
    ) -> Tuple[Matrix, int, List[int]]:
        """
        Rows: the total differential on the first ``checked`` levels, landing
        at tau + 2; columns: stacked coordinates on ``levels`` at tau.
        """
        widths = [self.size(u, tau) for u in levels]
        offsets = [sum(widths[:t]) for t in range(len(levels))]
        ncols = sum(widths)
        rows: Matrix = []
        orders: List[int] = []
        for t, u in enumerate(levels[:checked]):
            target = self.f.group(self.Q, u, tau + 2)
            block = zeros(target.ngens, ncols)
            pieces = [(t, self.f.vertical(self.Q, u, tau))]
            if t > 0:
                pieces.append((t - 1, self.f.minus(self.Q, levels[t - 1], tau)))
            for source, matrix in pieces:
                for r in range(target.ngens):
                    for c in range(widths[source]):
                        block[r][offsets[source] + c] += matrix[r][c]
            rows.extend(block)
            orders.extend(target.orders)
        return rows, ncols, orders

    def cycles(self, r: int, j: int, tau: int) -> Lattice:
        """Z_r(j, tau) in stacked coordinates on levels j, j - 2, ..., j - 2(r - 1)"""
        key = (r, j, tau)
        if key not in self._cycles:
            if r == 0:
                self._cycles[key] = Lattice.full(self.size(j, tau))
            else:
                levels = [j - 2 * t for t in range(r)]
                rows, ncols, orders = self._condition_matrix(levels, tau, checked=r)
                if rows:
                    self._cycles[key] = preimage(rows, len(rows), ncols, Lattice.diagonal(orders))
                else:
                    self._cycles[key] = Lattice.full(ncols)
        return self._cycles[key]

    def boundaries(self, r: int, j: int, tau: int) -> Lattice:
        """Level-j parts of D y that vanish above j, plus the relations at j"""
        n = self.size(j, tau)
        relations = self.f.group(self.Q, j, tau).relations
        if r == 0:
            return relations
        levels = [j + 2 * (r - 1) - 2 * t for t in range(r)]
        rows, ncols, orders = self._condition_matrix(levels, tau - 2, checked=r - 1)
        if rows:
            allowed = preimage(rows, len(rows), ncols, Lattice.diagonal(orders))
        else:
            allowed = Lattice.full(ncols)

        widths = [self.size(u, tau - 2) for u in levels]
        last = sum(widths[:-1])
        v = self.f.vertical(self.Q, j, tau - 2)
        images = []
        for y in allowed.basis:
            image = mat_vec(v, y[last:]) if widths[-1] else [0] * n
            if r > 1 and widths[-2]:
                above = mat_vec(self.f.minus(self.Q, j + 2, tau - 2), y[last - widths[-2]:last])
                image = [a + b for a, b in zip(image, above)]
            images.append(image)
        return Lattice.span(n, images) + relations

    def term(self, r: int, j: int, tau: int) -> Subquotient:
        key = (r, j, tau)
        if key not in self._terms:
            n = self.size(j, tau)
            numerator = self.cycles(r, j, tau).project(list(range(n)))
            try:
                self._terms[key] = Subquotient(numerator, self.boundaries(r, j, tau))
            except ValueError as e:
                raise IdentityViolation(f"page {r} at {self.f.degree(self.Q, j, tau)}: {e}") from e
        return self._terms[key]

    def differential(self, r: int, j: int, tau: int) -> Matrix:
        """d_r from (j, tau) to (j - 2r, tau + 2) in page generator coordinates"""
        source = self.term(r, j, tau)
        target_j = j - 2 * r
        target = self.term(r, target_j, tau + 2)
        if source.group.is_zero or target.group.is_zero:
            return zeros(target.group.ngens, source.group.ngens)

        n = self.size(j, tau)
        z = self.cycles(r, j, tau)
        head = [[b[row] for b in z.basis] for row in range(n)]
        columns = []
        for lift in source.lifts():
            c = solve_integer(head, n, z.rank, lift)
            if c is None:
                raise IdentityViolation(f"page {r} generator at {self.f.degree(self.Q, j, tau)} has no cycle lift")
            x = [sum(ci * b[t] for ci, b in zip(c, z.basis)) for t in range(z.dim)]
            if r == 0:
                image = mat_vec(self.f.vertical(self.Q, j, tau), x)
            else:
                bottom = j - 2 * (r - 1)
                width = self.size(bottom, tau)
                image = mat_vec(self.f.minus(self.Q, bottom, tau), x[z.dim - width:])
            try:
                columns.append(target.classify(image))
            except ValueError as e:
                raise IdentityViolation(f"d_{r} image at {self.f.degree(self.Q, target_j, tau + 2)}: {e}") from e
        return from_columns(columns, target.group.ngens)

    def positions(self) -> List[Position]:
        return [(j, tau) for j in self.f.levels for tau in self.f.taus]

    def table(self, r: int) -> Dict[Degree, FGAbGroup]:
        groups = {}
        for j, tau in self.positions():
            group = self.term(r, j, tau).group
            if not group.is_zero:
                groups[self.f.degree(self.Q, j, tau)] = FGAbGroup.from_orders(group.orders)
        return groups

    def later_differentials_vanish(self, r: int) -> bool:
        """No nonzero E_r term lies where any d_s, s >= r, could reach"""
        for j, tau in self.positions():
            if self.term(r, j, tau).group.is_zero:
                continue
            for deeper in range(j - 2 * r, self.f.j_min - 1, -2):
                if not self.term(r, deeper, tau + 2).group.is_zero:
                    return False
        return True

    def certify_page(self, r: int, differentials: Dict[Position, Matrix]) -> None:
        """d_r^2 = 0 and E_(r+1) = H(E_r, d_r) at every position"""
        for j, tau in self.positions():
            here = self.term(r, j, tau).group
            if here.is_zero and self.term(r + 1, j, tau).group.is_zero:
                continue
            incoming_pos = (j + 2 * r, tau - 2)
            previous = self.term(r, *incoming_pos).group
            incoming = differentials.get(incoming_pos) or zeros(here.ngens, previous.ngens)
            outgoing_target = self.term(r, j - 2 * r, tau + 2).group
            outgoing = differentials.get((j, tau)) or zeros(outgoing_target.ngens, here.ngens)
            square = mat_mul(outgoing, incoming, here.ngens, previous.ngens)
            if not _vanishes(square, outgoing_target, previous.ngens):
                raise IdentityViolation(f"d_{r}^2 != 0 into {self.f.degree(self.Q, j - 2 * r, tau + 2)}")
            homology = homology_at(incoming, here, outgoing, outgoing_target, previous)
            expected = FGAbGroup.from_orders(self.term(r + 1, j, tau).group.orders)
            if FGAbGroup.from_orders(homology.group.orders) != expected:
                raise IdentityViolation(
                    f"E_{r + 1} at {self.f.degree(self.Q, j, tau)} is {expected}, "
                    f"H(E_{r}, d_{r}) is {FGAbGroup.from_orders(homology.group.orders)}"
                )

    def second_page_from_first(self) -> Dict[Degree, FGAbGroup]:
        """H(E_1, d_1) with E_1 = H(E_0, d_v*) and d_1 induced by d_minus*"""
        Q, f = self.Q, self.f

        def first(j: int, tau: int) -> Subquotient:
            return homology_at(
                f.vertical(Q, j, tau - 2), f.group(Q, j, tau), f.vertical(Q, j, tau),
                f.group(Q, j, tau + 2), f.group(Q, j, tau - 2),
            )

        return self._iterate(first, f.minus, lambda j, tau: (j - 2, tau + 2))

    def other_iterated(self) -> Dict[Degree, FGAbGroup]:
        """H(H(E_0, d_minus*), d_v*)"""
        Q, f = self.Q, self.f

        def minus_homology(j: int, tau: int) -> Subquotient:
            return homology_at(
                f.minus(Q, j + 2, tau - 2), f.group(Q, j, tau), f.minus(Q, j, tau),
                f.group(Q, j - 2, tau + 2), f.group(Q, j + 2, tau - 2),
            )

        return self._iterate(minus_homology, f.vertical, lambda j, tau: (j, tau + 2))

    def _iterate(self, inner, outer, step) -> Dict[Degree, FGAbGroup]:
        cache: Dict[Position, Subquotient] = {}

        def term(j: int, tau: int) -> Subquotient:
            if (j, tau) not in cache:
                cache[(j, tau)] = inner(j, tau)
            return cache[(j, tau)]

        def back(j: int, tau: int) -> Position:
            forward = step(j, tau)
            return (2 * j - forward[0], 2 * tau - forward[1])

        groups = {}
        for j, tau in self.positions():
            here = term(j, tau)
            if here.group.is_zero:
                continue
            prev_pos, next_pos = back(j, tau), step(j, tau)
            prev, nxt = term(*prev_pos), term(*next_pos)
            incoming = _induced(prev, outer(self.Q, *prev_pos), here)
            outgoing = _induced(here, outer(self.Q, j, tau), nxt)
            result = homology_at(incoming, here.group, outgoing, nxt.group, prev.group)
            if not result.group.is_zero:
                groups[self.f.degree(self.Q, j, tau)] = FGAbGroup.from_orders(result.group.orders)
        return groups


@dataclass
class ClassResult:
    Q: int
    tables: List[Dict[Degree, FGAbGroup]] = field(default_factory=list)
    differentials: List[List[PageDifferential]] = field(default_factory=list)
    stabilized_at: Optional[int] = None
    second_page_from_first: Dict[Degree, FGAbGroup] = field(default_factory=dict)
    other_iterated: Dict[Degree, FGAbGroup] = field(default_factory=dict)

    def table(self, r: int) -> Dict[Degree, FGAbGroup]:
        return self.tables[min(r, len(self.tables) - 1)]


def run_class(filtered: FilteredSliceComplex, Q: int, k_max: int) -> ClassResult:
    """Pages of one Q-class up to stabilisation or page max(k_max, 2)"""
    if settings.VERIFY_IDENTITIES:
        filtered.certify(Q)
    pages = ClassPages(filtered, Q)
    result = ClassResult(Q=Q)
    limit = max(k_max, 2)
    for r in range(limit + 1):
        started = time.perf_counter()
        matrices: Dict[Position, Matrix] = {}
        listed: List[PageDifferential] = []
        for j, tau in pages.positions():
            if pages.term(r, j, tau).group.is_zero:
                continue
            matrix = pages.differential(r, j, tau)
            matrices[(j, tau)] = matrix
            if matrix:
                listed.append(PageDifferential(
                    source=filtered.degree(Q, j, tau),
                    target=filtered.degree(Q, j - 2 * r, tau + 2),
                    matrix=matrix,
                ))
        result.tables.append(pages.table(r))
        result.differentials.append(listed)

        zero = all(
            _vanishes(m, pages.term(r, j - 2 * r, tau + 2).group, pages.term(r, j, tau).group.ngens)
            for (j, tau), m in matrices.items()
        )
        if settings.VERIFY_IDENTITIES and not zero:
            pages.certify_page(r, matrices)
        page_seconds.observe(time.perf_counter() - started)
        if zero and pages.later_differentials_vanish(r):
            result.stabilized_at = r
            break

    result.second_page_from_first = pages.second_page_from_first()
    result.other_iterated = pages.other_iterated()
    observability_service.log_debug(
        f"Q = {Q}: {len(result.tables)} pages, stabilised at {result.stabilized_at}"
    )
    return result


def build_filtered(
    diag: ClosedDiagram,
    p: Potential,
    mark: Optional[int] = None,
    window: Optional[Window] = None,
) -> FilteredSliceComplex:
    """
    Assemble with potential, reduce at the mark and compute the HOMFLY-PT
    table that serves as E_1.
    """
    if mark is not None and mark != diag.marked_edge:
        diag = close_braid(diag.word, mark)
    computation = finish(prepare_diagram(diag, reduced=True, potential=p), window)
    return FilteredSliceComplex(computation)


def _classes(filtered: FilteredSliceComplex) -> List[int]:
    table = filtered.computation.table
    return sorted({filtered.preserved(degree) for degree in table.support()})


def _page_tables(results: List[ClassResult], r: int) -> Dict[Degree, FGAbGroup]:
    return merge_groups([c.table(r) for c in results])


def _inside(degree: Degree, window: Optional[Window]) -> bool:
    return window is None or window[0] <= degree[0] <= window[1]


def _assemble_report(filtered: FilteredSliceComplex, results: List[ClassResult], k_max: int) -> SpectralReport:
    """
    Merge the Q-classes into pages; pages of a truncated base table are cut
    to its window.
    """
    n = filtered.sl_rank
    base = filtered.computation.table
    window = base.q_window if base.truncated else None
    options = dict(reduced=True, truncated=base.truncated, q_window=base.q_window, sl_rank=n)

    def tabulate(groups: Dict[Degree, FGAbGroup]) -> HomologyTable:
        return HomologyTable.from_groups(
            {d: g for d, g in groups.items() if _inside(d, window)}, **options
        )

    stabilized = None
    if all(c.stabilized_at is not None for c in results):
        stabilized = max((c.stabilized_at for c in results), default=0)
    if stabilized is not None:
        last = max(stabilized, 1)
    else:
        last = max((len(c.tables) - 1 for c in results), default=1)
    last = min(last, max(k_max, 1))

    pages = []
    for r in range(last + 1):
        differentials = [
            d for c in results if r < len(c.differentials) for d in c.differentials[r]
            if _inside(d.source, window) and _inside(d.target, window)
        ]
        pages.append(SpectralPage(
            index=r,
            table=tabulate(_page_tables(results, r)),
            differentials=differentials,
        ))

    e_infinity = None
    if stabilized is not None:
        e_infinity = tabulate(_page_tables(results, stabilized))
    other = tabulate(merge_groups([c.other_iterated for c in results]))
    e2_from_e1 = tabulate(merge_groups([c.second_page_from_first for c in results]))
    e2 = tabulate(_page_tables(results, 2))
    report = SpectralReport(
        sl_rank=n,
        potential=filtered.potential.label,
        pages=pages,
        e_infinity=e_infinity,
        stabilized_at=stabilized,
        other_iterated=other,
        e2_from_e1=e2_from_e1,
        e2_matches=e2.same_groups(e2_from_e1),
        discrepancies=e_infinity.differences(other) if e_infinity is not None else [],
    )
    observability_service.log_info(
        f"spectral sequence for {filtered.potential.label}: {len(results)} Q-classes, "
        f"stabilised at {stabilized}"
    )
    return report


def pages(filtered: FilteredSliceComplex, k_max: Optional[int] = None) -> List[SpectralPage]:
    return spectral_report(filtered, k_max).pages


def spectral_report(filtered: FilteredSliceComplex, k_max: Optional[int] = None) -> SpectralReport:
    k_max = settings.DEFAULT_PAGE_LIMIT if k_max is None else k_max
    results = [run_class(filtered, Q, k_max) for Q in _classes(filtered)]
    return _assemble_report(filtered, results, k_max)


async def spectral_report_async(
    filtered: FilteredSliceComplex, k_max: Optional[int] = None, threads: Optional[int] = None
) -> SpectralReport:
    """spectral_report with Q-classes fanned out over the worker pool"""
    k_max = settings.DEFAULT_PAGE_LIMIT if k_max is None else k_max
    results = await run_parallel(lambda Q: run_class(filtered, Q, k_max), _classes(filtered), threads)
    return _assemble_report(filtered, results, k_max)


def sln_homology(word: BraidWord, n: int, mark: Optional[int] = None) -> HomologyTable:
    """E_infinity for p = x^(n+1), entries carrying Q = q + n j"""
    filtered = build_filtered(close_braid(word, mark), Potential.sln(n))
    report = spectral_report(filtered)
    if report.e_infinity is None:
        raise IdentityViolation(f"sl({n}) spectral sequence of {word} did not stabilise")
    return report.e_infinity
