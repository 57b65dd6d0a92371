"""
Gaussian elimination for complexes.

An entry phi = +-1 of the selected differential from x to y cancels the pair
(x, y). Every column a with a y-entry delta_a is corrected by
d(a) -= delta_a * phi * d(x). Each step is logged so vectors can be carried
between the original and the reduced complex:

    include:  a -> a - phi * delta_a * x
    project:  y -> -phi * (d(x) - phi * y),  x -> 0

Both are chain maps for the selected differential with project(include(v)) = v.
The same engine runs on integer slices and on polynomial complexes.
"""
from dataclasses import dataclass
from typing import Callable, Dict, Generic, Hashable, List, Optional, Sequence, Tuple, TypeVar

from algebra.polyring import unit_value
from complexes.mf_complex import (
    DIFFERENTIALS, GradedGenerator, TriGradedComplex, apply_matrix,
)
from config import settings
from services.metrics import eliminated_pairs_total
from services.observability import observability_service

C = TypeVar("C")
Column = Dict[Hashable, C]


@dataclass
class EliminationStep(Generic[C]):
    source: Hashable
    target: Hashable
    unit: int
    image: Column
    incoming: Column


def integer_unit(c: int) -> Optional[int]:
    return c if c in (1, -1) else None


class EliminationEngine(Generic[C]):
    """
    Cancels unit entries of one sparse differential until none remain.

    Args:
        differential: source -> {target: coefficient}
        order: every basis element, sorted by homological degree then id
        unit_of: +1/-1 for a unit coefficient, None otherwise
        zero: additive identity of the coefficients
        stage: label for the elimination counter
    """

    def __init__(
        self,
        differential: Dict[Hashable, Column],
        order: Sequence[Hashable],
        unit_of: Callable[[C], Optional[int]] = integer_unit,
        zero: C = 0,
        stage: str = "slice",
    ):
        self.order = list(order)
        self.rank = {b: n for n, b in enumerate(self.order)}
        self.alive = set(self.order)
        self.unit_of = unit_of
        self.zero = zero
        self.stage = stage
        self.log: List[EliminationStep] = []
        self.forward: Dict[Hashable, Column] = {b: {} for b in self.order}
        self.backward: Dict[Hashable, Column] = {b: {} for b in self.order}
        for source, column in differential.items():
            for target, c in column.items():
                if c:
                    self.forward[source][target] = c
                    self.backward[target][source] = c

    def run(self) -> int:
        changed = True
        while changed:
            changed = False
            for x in self.order:
                if x not in self.alive:
                    continue
                pivot = self._pivot(x)
                if pivot is not None:
                    self._eliminate(x, *pivot)
                    changed = True
        if self.log:
            eliminated_pairs_total.labels(stage=self.stage).inc(len(self.log))
        return len(self.log)

    def _pivot(self, x: Hashable) -> Optional[Tuple[Hashable, int]]:
        best = None
        for y, c in self.forward[x].items():
            unit = self.unit_of(c)
            if unit is not None and (best is None or self.rank[y] < self.rank[best[0]]):
                best = (y, unit)
        return best

    def _eliminate(self, x: Hashable, y: Hashable, unit: int):
        image = {b: c for b, c in self.forward[x].items() if b != y}
        incoming = {a: c for a, c in self.backward[y].items() if a != x}
        for a, delta in incoming.items():
            factor = delta * unit
            column = self.forward[a]
            column.pop(y, None)
            for b, c in image.items():
                value = column.get(b, self.zero) - factor * c
                if value:
                    column[b] = value
                    self.backward[b][a] = value
                else:
                    column.pop(b, None)
                    self.backward[b].pop(a, None)
        for dead in (x, y):
            for b in self.forward.pop(dead):
                if b in self.backward:
                    self.backward[b].pop(dead, None)
            for a in self.backward.pop(dead):
                if a in self.forward:
                    self.forward[a].pop(dead, None)
            self.alive.discard(dead)
        self.log.append(EliminationStep(x, y, unit, image, incoming))
        if settings.TRACE_ELIMINATION:
            observability_service.log_debug(f"eliminate {x} -> {y} ({unit:+d})")

    @property
    def survivors(self) -> List[Hashable]:
        return [b for b in self.order if b in self.alive]

    def differential(self) -> Dict[Hashable, Column]:
        return {a: dict(self.forward[a]) for a in self.survivors}

    def include(self, vector: Column) -> Column:
        """Reduced complex -> original complex"""
        result = dict(vector)
        for step in reversed(self.log):
            total = self.zero
            for a, delta in step.incoming.items():
                if a in result:
                    total = total + result[a] * delta
            if total:
                result[step.source] = -step.unit * total
        return {b: c for b, c in result.items() if c}

    def project(self, vector: Column) -> Column:
        """Original complex -> reduced complex"""
        result = dict(vector)
        for step in self.log:
            result.pop(step.source, None)
            c = result.pop(step.target, None)
            if not c:
                continue
            for b, e in step.image.items():
                value = result.get(b, self.zero) - step.unit * c * e
                if value:
                    result[b] = value
                else:
                    result.pop(b, None)
        return {b: c for b, c in result.items() if c}

    def functionals(
        self, survivors: Sequence[Hashable], keep: Optional[Callable[[Hashable], bool]] = None
    ) -> List[Column]:
        """
        The forms v -> project(v)[s] for each survivor s, over the original basis.

        ``keep`` may skip steps by target; it has to hold on every target that
        shares a homological degree with the survivors.
        """
        forms: List[Column] = [{s: 1} for s in survivors]
        for step in reversed(self.log):
            if keep is not None and not keep(step.target):
                continue
            for form in forms:
                total = self.zero
                for b, e in step.image.items():
                    c = form.get(b)
                    if c:
                        total = total + c * e
                if total:
                    form[step.target] = -step.unit * total
        return forms


def _homological_degree(generator: GradedGenerator, which: str) -> int:
    if which == "d_plus":
        return generator.j
    if which == "d_v":
        return generator.k
    return -generator.j


def gaussian_eliminate(
    complex_: TriGradedComplex, which: str = "d_plus"
) -> Tuple[TriGradedComplex, EliminationEngine]:
    """
    Cancel every unit entry of one differential of a polynomial complex.

    The selected differential is corrected by epsilon - gamma phi^-1 delta;
    the other two are transferred as project . d . include, which induces
    the same maps on the homology of the selected differential.

    Returns:
        (reduced complex, engine holding the include/project maps)
    """
    if which not in DIFFERENTIALS:
        raise ValueError(f"unknown differential {which!r}")
    order = [
        g.id for g in sorted(complex_.generators, key=lambda g: (_homological_degree(g, which), g.id))
    ]
    ring = complex_.ring
    engine = EliminationEngine(
        complex_.differential(which), order, unit_of=unit_value, zero=ring.zero, stage=which
    )
    eliminated = engine.run()
    survivors = set(engine.survivors)

    matrices = {which: {a: c for a, c in engine.differential().items() if c}}
    for name in DIFFERENTIALS:
        if name == which:
            continue
        matrix = {}
        for a in engine.survivors:
            image = engine.project(apply_matrix(complex_.differential(name), engine.include({a: ring.one})))
            if image:
                matrix[a] = image
        matrices[name] = matrix

    reduced = TriGradedComplex(
        generators=[g for g in complex_.generators if g.id in survivors],
        ring=ring,
        potential=complex_.potential,
        curvature=complex_.curvature,
        factors=complex_.factors,
        reduced_at=complex_.reduced_at,
        shift=complex_.shift,
        **matrices,
    )
    observability_service.log_info(
        f"eliminated {eliminated} pairs along {which}: {complex_.size} -> {reduced.size} generators"
    )
    return reduced, engine


def simplify_fully(
    complex_: TriGradedComplex, passes: Sequence[str] = ("d_plus", "d_v")
) -> Tuple[TriGradedComplex, List[EliminationEngine]]:
    """
    Alternate elimination passes until none of them cancels a pair.

    Each pass preserves the homology of its own differential only; the
    iterated homology is computed from single d_plus passes on slices.
    """
    engines: List[EliminationEngine] = []
    while True:
        before = complex_.size
        for which in passes:
            complex_, engine = gaussian_eliminate(complex_, which)
            engines.append(engine)
        if complex_.size == before:
            return complex_, engines
