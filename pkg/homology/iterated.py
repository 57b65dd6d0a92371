"""
HOMFLY-PT homology H(H(C, d_plus), d_v*) of a braid closure.
"""
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from algebra.polyring import Potential
from algebra.zlinalg import Subquotient, homology_at
from complexes.mf_complex import (
    Degree, TriGradedComplex, apply_overall_shift, assemble, reduce_at_mark,
)
from config import settings
from homology.dplus import DPlusHomology
from knots.braid_model import close_braid
from knots.skein_oracle import euler_characteristic, homfly
from schemas.braid import BraidWord, ClosedDiagram
from schemas.homology import FGAbGroup, HomologyTable
from schemas.knot_polynomial import HomflyPolynomial
from services.observability import observability_service
from workflows.error_handler import WindowError

Window = Tuple[int, int]


def vertical_homology(dplus: DPlusHomology, degree: Degree) -> Subquotient:
    """Homology of d_v* at ``degree`` on the d_plus homology"""
    q, j, k = degree
    before, after = (q, j, k - 2), (q, j, k + 2)
    incoming = dplus.induced_map("d_v", before)
    outgoing = dplus.induced_map("d_v", degree)
    return homology_at(
        incoming.matrix, dplus.group(degree), outgoing.matrix, dplus.group(after), dplus.group(before)
    )


def iterated_homology(
    complex_: TriGradedComplex,
    window: Window,
    dplus: Optional[DPlusHomology] = None,
    truncated: bool = False,
) -> HomologyTable:
    """
    Iterated homology over a quantum window.

    Args:
        complex_: closed complex with its overall shift applied
        window: (q_min, q_max), in shifted gradings
        dplus: cached d_plus homology of complex_ to reuse
        truncated: mark the table as cut by the window
    """
    q_min, q_max = window
    if q_min > q_max:
        raise WindowError(f"empty window [{q_min}, {q_max}]")
    dplus = dplus or DPlusHomology(complex_)
    groups: Dict[Degree, FGAbGroup] = {}
    for degree in dplus.degrees(q_min, q_max):
        subquotient = vertical_homology(dplus, degree)
        if not subquotient.group.is_zero:
            groups[degree] = FGAbGroup.from_orders(subquotient.group.orders)
    return HomologyTable.from_groups(
        groups, reduced=complex_.reduced_at is not None, truncated=truncated, q_window=window
    )


def default_window(word: BraidWord, complex_: TriGradedComplex) -> Window:
    c, b = word.crossing_count, word.strands
    lowest = min((g.q for g in complex_.generators), default=0)
    return (min(-2 * c - 2 * b, lowest), 2 * c + 2 * b)


def knot_window(word: BraidWord, complex_: TriGradedComplex, polynomial: HomflyPolynomial) -> Window:
    """default_window with its top lowered to two above the highest q power of P"""
    low, high = default_window(word, complex_)
    top = max((q for _, q, _ in polynomial.numerator.terms), default=0) + 2
    return (low, min(high, top))


def initial_window(computation: "HomflyComputation") -> Window:
    """First window of an automatic run; reduced knots start from the q-span of P"""
    if computation.exact:
        return knot_window(computation.word, computation.complex, homfly(computation.word))
    return default_window(computation.word, computation.complex)


@dataclass
class HomflyComputation:
    """Everything one HOMFLY-PT run produced, kept for the later stages."""
    word: BraidWord
    diagram: ClosedDiagram
    complex: TriGradedComplex
    dplus: DPlusHomology
    reduced: bool
    table: Optional[HomologyTable] = None
    window: Optional[Window] = None
    polynomial: Optional[HomflyPolynomial] = None

    @property
    def exact(self) -> bool:
        """Reduced knot tables have finite support and are certified against P"""
        return self.reduced and self.diagram.is_knot


def prepare(
    word: BraidWord,
    reduced: bool = True,
    mark: Optional[int] = None,
    potential: Optional[Potential] = None,
) -> HomflyComputation:
    """Close, assemble, reduce and shift; no homology yet"""
    return prepare_diagram(close_braid(word, mark), reduced, potential)


def prepare_diagram(
    diagram: ClosedDiagram, reduced: bool = True, potential: Optional[Potential] = None
) -> HomflyComputation:
    word = diagram.word
    complex_ = assemble(diagram, potential)
    if reduced:
        complex_ = reduce_at_mark(complex_, diagram.marked_edge)
    complex_ = apply_overall_shift(complex_, word.writhe, word.strands, reduced)
    return HomflyComputation(
        word=word, diagram=diagram, complex=complex_, dplus=DPlusHomology(complex_), reduced=reduced
    )


def _support_fits(computation: HomflyComputation, table: HomologyTable, q_max: int, edge: bool) -> bool:
    if euler_characteristic(table, "reduced") != computation.polynomial.numerator:
        return False
    return not edge or all(q <= q_max - 2 for q, _, _ in table.support())


def finish(computation: HomflyComputation, window: Optional[Window] = None) -> HomflyComputation:
    """
    Fill in the table.

    Reduced knots: an automatic window starts two above the top q of P and
    widens until the Euler characteristic equals P and no entry touches the edge; an
    explicit window must already satisfy the Euler check. Everything else is
    computed over the window and marked truncated.
    """
    automatic = window is None
    q_min, q_max = initial_window(computation) if automatic else window
    if not computation.exact:
        computation.table = iterated_homology(
            computation.complex, (q_min, q_max), computation.dplus, truncated=True
        )
        computation.window = (q_min, q_max)
        return computation

    computation.polynomial = homfly(computation.word)
    for attempt in range(settings.MAX_WINDOW_WIDENINGS + 1):
        table = iterated_homology(computation.complex, (q_min, q_max), computation.dplus)
        if _support_fits(computation, table, q_max, edge=automatic):
            computation.table, computation.window = table, (q_min, q_max)
            observability_service.log_info(
                f"HOMFLY-PT homology of {computation.word}: {len(table.entries)} entries in q [{q_min}, {q_max}]"
            )
            return computation
        if not automatic:
            raise WindowError(
                f"window [{q_min}, {q_max}] does not hold the support of {computation.word}"
            )
        observability_service.log_warning(f"widening window above q = {q_max} (attempt {attempt + 1})")
        q_max += settings.WINDOW_PADDING
    raise WindowError(
        f"support of {computation.word} not certified after {settings.MAX_WINDOW_WIDENINGS} widenings"
    )


def compute_homfly(
    word: BraidWord,
    reduced: bool = True,
    mark: Optional[int] = None,
    window: Optional[Window] = None,
    potential: Optional[Potential] = None,
) -> HomflyComputation:
    return finish(prepare(word, reduced, mark, potential), window)


async def compute_homfly_async(
    word: BraidWord,
    reduced: bool = True,
    mark: Optional[int] = None,
    window: Optional[Window] = None,
    potential: Optional[Potential] = None,
    threads: Optional[int] = None,
) -> HomflyComputation:
    """compute_homfly with the first window's slices built on the worker pool"""
    computation = prepare(word, reduced, mark, potential)
    first = window or initial_window(computation)
    await computation.dplus.prefill_parallel(*first, threads=threads)
    return finish(computation, window)


def homfly_homology(
    word: BraidWord, reduced: bool = True, mark: Optional[int] = None, window: Optional[Window] = None
) -> HomologyTable:
    return compute_homfly(word, reduced, mark, window).table
