"""
Homology of d_plus with the induced maps d_v* and d_minus*.

d_plus preserves every resolution summand and the q - j offset, so its
homology splits into finite integer slices. Each slice is shrunk by the
elimination engine and the surviving dense complex gives one presented
group per horizontal degree. A tri-degree (q, j, k) collects the blocks of
all summands at vertical degree k.

Slices are cut off above the quantum degree currently needed and keep only
cycles and coordinate forms once their homology is known.
"""
import threading
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from algebra.polyring import Poly
from algebra.zlinalg import (
    Matrix, PresentedGroup, PresentedGroupMap, Subquotient, from_columns, homology_at, zeros,
)
from complexes.mf_complex import (
    DIFFERENTIALS, Degree, TriGradedComplex, apply_matrix, resolution_summands,
)
from complexes.simplify import EliminationEngine
from config import settings
from homology.slices import BasisElement, IntegerSlice, horizontal_slice, offsets_for_window
from schemas.homology import FGAbGroup
from services.metrics import verification_checks_total
from services.observability import observability_service
from workflows.error_handler import IdentityViolation
from workflows.parallel_executor import run_parallel

SummandKey = Tuple[int, ...]
TermVector = Dict[BasisElement, int]


@dataclass
class SliceHomology:
    """
    d_plus homology of one (summand, offset) slice, per horizontal degree.

    ``cycles[j]`` lifts the generators of ``groups[j]``; ``functionals[j]``
    are the coordinates of the reduced complex at j as forms on (generator,
    exponents). Groups are exact for quantum degrees up to ``ceiling``.
    """
    summand: SummandKey
    offset: int
    ceiling: Optional[int] = None
    groups: Dict[int, Subquotient] = field(default_factory=dict)
    cycles: Dict[int, List[TermVector]] = field(default_factory=dict)
    functionals: Dict[int, List[TermVector]] = field(default_factory=dict)

    def covers(self, q: int) -> bool:
        return self.ceiling is None or q <= self.ceiling

    def adopt(self, older: "SliceHomology"):
        """Take over the degrees ``older`` already knows, so their bases stay fixed"""
        for j in [j for j in self.groups if older.covers(self.offset + j)]:
            del self.groups[j], self.cycles[j], self.functionals[j]
        for j, group in older.groups.items():
            self.groups[j] = group
            self.cycles[j] = older.cycles[j]
            self.functionals[j] = older.functionals[j]

    def classify(self, j: int, terms: TermVector) -> List[int]:
        """Class of a d_plus cycle at horizontal degree j, in generator coordinates"""
        if j not in self.groups:
            return []
        dense = [
            sum(c * form.get(element, 0) for element, c in terms.items())
            for form in self.functionals[j]
        ]
        return self.groups[j].classify(dense)


def _reduced_block(
    reduced: Dict[int, Dict[int, int]], sources: Sequence[int], targets: Sequence[int]
) -> Matrix:
    row = {n: t for t, n in enumerate(targets)}
    matrix = zeros(len(targets), len(sources))
    for s, n in enumerate(sources):
        for target, c in reduced.get(n, {}).items():
            if target in row:
                matrix[row[target]][s] = c
    return matrix


def _terms(piece: IntegerSlice, vector: Dict[int, int]) -> TermVector:
    return {piece.basis[n]: c for n, c in vector.items() if c}


def slice_homology(piece: IntegerSlice, ceiling: Optional[int] = None) -> SliceHomology:
    """
    Eliminate unit entries of one slice, then read homology off the dense remainder.

    Only horizontal degrees with offset + j <= ceiling are recorded. The
    slice and the engine are dropped once cycles and forms are extracted.
    """
    order = sorted(range(piece.size), key=lambda n: (piece.position[n], n))
    engine = EliminationEngine(piece.differential, order, stage="dplus")
    engine.run()
    local: Dict[int, List[int]] = {}
    for n in engine.survivors:
        local.setdefault(piece.position[n], []).append(n)

    result = SliceHomology(summand=piece.summand, offset=piece.offset, ceiling=ceiling)
    reduced = engine.differential()
    for j, here in sorted(local.items()):
        if ceiling is not None and piece.offset + j > ceiling:
            continue
        prev, nxt = local.get(j - 2, []), local.get(j + 2, [])
        subquotient = homology_at(
            _reduced_block(reduced, prev, here),
            PresentedGroup.free(len(here)),
            _reduced_block(reduced, here, nxt),
            PresentedGroup.free(len(nxt)),
            PresentedGroup.free(len(prev)),
        )
        if subquotient.group.is_zero:
            continue
        result.groups[j] = subquotient
        result.cycles[j] = [
            _terms(piece, engine.include({n: c for n, c in zip(here, vector) if c}))
            for vector in subquotient.lifts()
        ]
        forms = engine.functionals(here, keep=lambda n, j=j: piece.position[n] == j)
        result.functionals[j] = [_terms(piece, form) for form in forms]
    return result


class DPlusHomology:
    """
    Lazily computed d_plus homology of a closed complex.

    Slices are cached per (summand, q - j) and rebuilt when a degree above
    their ceiling is asked for; induced maps are cached per (differential,
    source degree) and certified when VERIFY_IDENTITIES is on.
    """

    def __init__(self, complex_: TriGradedComplex):
        self.complex = complex_
        self.summands = resolution_summands(complex_)
        self._summand_of = {g: key for key, ids in self.summands.items() for g in ids}
        self._k_of = {key: complex_.generator(ids[0]).k for key, ids in self.summands.items()}
        self._shapes = {
            key: sorted({(complex_.generator(g).q, complex_.generator(g).j) for g in ids})
            for key, ids in self.summands.items()
        }
        self.ceiling: Optional[int] = None
        self._slices: Dict[Tuple[SummandKey, int], SliceHomology] = {}
        self._maps: Dict[Tuple[str, Degree], PresentedGroupMap] = {}
        self._lock = threading.Lock()

    @property
    def vertical_degrees(self) -> List[int]:
        return sorted(set(self._k_of.values()))

    @property
    def horizontal_range(self) -> Tuple[int, int]:
        js = [g.j for g in self.complex.generators]
        return (min(js), max(js)) if js else (0, 0)

    def keys_at(self, k: int) -> List[SummandKey]:
        return [key for key, kk in self._k_of.items() if kk == k]

    def reaches(self, key: SummandKey, offset: int, q_min: int, q_max: int) -> bool:
        """Whether the slice (key, offset) has elements with q in [q_min, q_max]"""
        for q_g, j_g in self._shapes[key]:
            twice = offset - q_g + j_g
            if twice >= 0 and twice % 2 == 0 and q_min <= offset + j_g <= q_max:
                return True
        return False

    def raise_ceiling(self, q: int):
        with self._lock:
            if self.ceiling is None or q > self.ceiling:
                self.ceiling = q

    def _build(self, key: SummandKey, offset: int, ceiling: Optional[int]) -> SliceHomology:
        piece = horizontal_slice(self.complex, self.summands[key], offset, key, q_ceiling=ceiling)
        return slice_homology(piece, ceiling)

    def _store(self, key: SummandKey, offset: int, built: SliceHomology) -> SliceHomology:
        with self._lock:
            current = self._slices.get((key, offset))
            if current is None or (
                current.ceiling is not None
                and (built.ceiling is None or built.ceiling > current.ceiling)
            ):
                if current is not None:
                    built.adopt(current)
                self._slices[(key, offset)] = built
                current = built
            return current

    def slice(self, key: SummandKey, offset: int, q: Optional[int] = None) -> SliceHomology:
        """Homology of one slice, exact at least up to quantum degree q"""
        need = q if q is not None else self.ceiling
        cached = self._slices.get((key, offset))
        if cached is not None and (need is None or cached.covers(need)):
            return cached
        ceiling = need if self.ceiling is None or need is None else max(need, self.ceiling)
        return self._store(key, offset, self._build(key, offset, ceiling))

    def blocks(self, degree: Degree) -> List[Tuple[SummandKey, SliceHomology]]:
        q, j, k = degree
        return [
            (key, piece)
            for key in self.keys_at(k)
            if self._meets(key, q, j)
            for piece in [self.slice(key, q - j, q)]
            if j in piece.groups
        ]

    def _meets(self, key: SummandKey, q: int, j: int) -> bool:
        return any(
            j_g == j and q >= q_g and (q - q_g) % 2 == 0 for q_g, j_g in self._shapes[key]
        )

    def group(self, degree: Degree) -> PresentedGroup:
        orders: Tuple[int, ...] = ()
        for _, piece in self.blocks(degree):
            orders += piece.groups[degree[1]].group.orders
        return PresentedGroup(orders)

    def fgab(self, degree: Degree) -> FGAbGroup:
        return FGAbGroup.from_orders(self.group(degree).orders)

    def lifts(self, degree: Degree) -> List[Dict[int, Poly]]:
        """Polynomial cycles representing the generators of group(degree), in order"""
        j = degree[1]
        ring = self.complex.ring
        vectors = []
        for _, piece in self.blocks(degree):
            for cycle in piece.cycles[j]:
                collected: Dict[int, Dict[Tuple[int, ...], int]] = {}
                for (g, monom), c in cycle.items():
                    collected.setdefault(g, {})[monom] = c
                vectors.append({g: ring.from_dict(terms) for g, terms in collected.items()})
        return vectors

    def _terms_at(self, degree: Degree, vector: Dict[int, Poly]) -> Dict[SummandKey, TermVector]:
        q, j, k = degree
        parts: Dict[SummandKey, TermVector] = {}
        for g, coefficient in vector.items():
            gen = self.complex.generator(g)
            for monom, c in coefficient.terms():
                if not c:
                    continue
                if gen.j != j or gen.k != k or 2 * sum(monom) + gen.q != q:
                    raise IdentityViolation(
                        f"image at {degree} has a term of degree "
                        f"({2 * sum(monom) + gen.q}, {gen.j}, {gen.k})"
                    )
                parts.setdefault(self._summand_of[g], {})[(g, monom)] = int(c)
        return parts

    def classify(self, degree: Degree, vector: Dict[int, Poly]) -> List[int]:
        """Coordinates of a homogeneous d_plus cycle of tri-degree ``degree``"""
        j = degree[1]
        parts = self._terms_at(degree, vector)
        coordinates: List[int] = []
        for key, piece in self.blocks(degree):
            try:
                coordinates.extend(piece.classify(j, parts.get(key, {})))
            except ValueError as e:
                raise IdentityViolation(f"image at {degree} is not a d_plus cycle: {e}") from e
        return coordinates

    def induced_map(self, name: str, source: Degree) -> PresentedGroupMap:
        """d_v* or d_minus* on homology, from ``source`` to source + deg(name)"""
        if name not in DIFFERENTIALS or name == "d_plus":
            raise ValueError(f"no induced map for {name!r}")
        cached = self._maps.get((name, source))
        if cached is not None:
            return cached
        shift = self.complex.degree_of(name)
        if shift is None:
            raise ValueError(f"{name} is not homogeneous for potential {self.complex.potential}")
        target = (source[0] + shift[0], source[1] + shift[1], source[2] + shift[2])
        source_group, target_group = self.group(source), self.group(target)

        columns = []
        if not target_group.is_zero:
            matrix = self.complex.differential(name)
            columns = [
                self.classify(target, apply_matrix(matrix, lift)) for lift in self.lifts(source)
            ]
        else:
            columns = [[] for _ in range(source_group.ngens)]
        result = PresentedGroupMap(source_group, target_group, from_columns(columns, target_group.ngens))

        if settings.VERIFY_IDENTITIES:
            passed = result.certify()
            verification_checks_total.labels(check="induced_map", result="pass" if passed else "fail").inc()
            if not passed:
                raise IdentityViolation(f"induced {name} at {source} does not respect relations")
        with self._lock:
            self._maps[(name, source)] = result
        return result

    def slice_keys(self, q_min: int, q_max: int) -> List[Tuple[SummandKey, int]]:
        """(summand, offset) pairs whose slice has elements with q in the window"""
        offsets = offsets_for_window(self.complex, q_min, q_max)
        return [
            (key, offset)
            for key in self.summands
            for offset in offsets
            if self.reaches(key, offset, q_min, q_max)
        ]

    def degrees(self, q_min: int, q_max: int) -> List[Degree]:
        """Tri-degrees with nonzero d_plus homology and q in the window"""
        self.raise_ceiling(q_max)
        found = set()
        for key, offset in self.slice_keys(q_min, q_max):
            for j in self.slice(key, offset, q_max).groups:
                if q_min <= offset + j <= q_max:
                    found.add((offset + j, j, self._k_of[key]))
        return sorted(found)

    def table(self, q_min: int, q_max: int) -> Dict[Degree, FGAbGroup]:
        return {degree: self.fgab(degree) for degree in self.degrees(q_min, q_max)}

    def _missing(self, q_min: int, q_max: int) -> List[Tuple[SummandKey, int]]:
        self.raise_ceiling(q_max)
        return [
            item for item in self.slice_keys(q_min, q_max)
            if item not in self._slices or not self._slices[item].covers(q_max)
        ]

    def prefill(self, q_min: int, q_max: int):
        for key, offset in self._missing(q_min, q_max):
            self.slice(key, offset, q_max)

    async def prefill_parallel(self, q_min: int, q_max: int, threads: Optional[int] = None):
        """Compute every slice the window needs on the worker pool"""
        keys = self._missing(q_min, q_max)
        ceiling = self.ceiling
        results = await run_parallel(lambda item: self._build(item[0], item[1], ceiling), keys, threads)
        for (key, offset), result in zip(keys, results):
            self._store(key, offset, result)
        observability_service.log_info(f"prefilled {len(keys)} d_plus slices for q in [{q_min}, {q_max}]")


def dplus_homology(complex_: TriGradedComplex, window: Tuple[int, int]) -> DPlusHomology:
    """
    d_plus homology of a closed complex over a quantum window.

    Returns:
        DPlusHomology with every slice of the window computed
    """
    result = DPlusHomology(complex_)
    result.prefill(*window)
    observability_service.log_info(
        f"d_plus homology: {len(result.summands)} summands, {len(result._slices)} slices"
    )
    return result
