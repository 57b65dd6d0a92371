"""
Exact integer linear algebra.

Dense integer matrices are lists of rows. Lattices are stored as independent
column vectors in ZZ^dim. Everything reduces to one iterative Smith normal
form with the four unimodular transforms tracked.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from services.metrics import smith_decompositions_total

Matrix = List[List[int]]
Vector = List[int]


def zeros(nrows: int, ncols: int) -> Matrix:
    return [[0] * ncols for _ in range(nrows)]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_vec(matrix: Matrix, vector: Sequence[int]) -> Vector:
    return [sum(a * b for a, b in zip(row, vector) if a) for row in matrix]


def mat_mul(a: Matrix, b: Matrix, inner: int, ncols: int) -> Matrix:
    result = zeros(len(a), ncols)
    for i, row in enumerate(a):
        out = result[i]
        for t in range(inner):
            c = row[t]
            if c:
                brow = b[t]
                for j in range(ncols):
                    if brow[j]:
                        out[j] += c * brow[j]
    return result


def from_columns(vectors: Sequence[Sequence[int]], nrows: int) -> Matrix:
    return [[v[i] for v in vectors] for i in range(nrows)]


def column(matrix: Matrix, j: int) -> Vector:
    return [row[j] for row in matrix]


def is_zero_vector(v: Sequence[int]) -> bool:
    return not any(v)


@dataclass
class SmithForm:
    """S * A * T = D with S, T unimodular and D diagonal, d_1 | d_2 | ..."""
    nrows: int
    ncols: int
    diagonal: List[int]
    S: Matrix
    S_inv: Matrix
    T: Matrix
    T_inv: Matrix

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def D(self) -> Matrix:
        d = zeros(self.nrows, self.ncols)
        for i, value in enumerate(self.diagonal):
            d[i][i] = value
        return d


def smith_normal_form(matrix: Matrix, nrows: int, ncols: int) -> SmithForm:
    """
    Smith normal form with transforms.

    Args:
        matrix: nrows x ncols integer matrix (rows), not modified
        nrows, ncols: shape, needed when a dimension is zero

    Returns:
        SmithForm whose diagonal holds the positive invariant factors
    """
    smith_decompositions_total.inc()
    D = [list(row) for row in matrix]
    S, S_inv = identity(nrows), identity(nrows)
    T, T_inv = identity(ncols), identity(ncols)

    def add_row(a: int, b: int, c: int):
        # row a += c * row b
        ra, rb = D[a], D[b]
        for j in range(ncols):
            if rb[j]:
                ra[j] += c * rb[j]
        sa, sb = S[a], S[b]
        for j in range(nrows):
            if sb[j]:
                sa[j] += c * sb[j]
        for r in S_inv:
            if r[a]:
                r[b] -= c * r[a]

    def add_col(a: int, b: int, c: int):
        # col a += c * col b
        for r in D:
            if r[b]:
                r[a] += c * r[b]
        for r in T:
            if r[b]:
                r[a] += c * r[b]
        ta, tb = T_inv[a], T_inv[b]
        for j in range(ncols):
            if ta[j]:
                tb[j] -= c * ta[j]

    def swap_rows(a: int, b: int):
        D[a], D[b] = D[b], D[a]
        S[a], S[b] = S[b], S[a]
        for r in S_inv:
            r[a], r[b] = r[b], r[a]

    def swap_cols(a: int, b: int):
        for r in D:
            r[a], r[b] = r[b], r[a]
        for r in T:
            r[a], r[b] = r[b], r[a]
        T_inv[a], T_inv[b] = T_inv[b], T_inv[a]

    def negate_row(a: int):
        D[a] = [-x for x in D[a]]
        S[a] = [-x for x in S[a]]
        for r in S_inv:
            r[a] = -r[a]

    diagonal: List[int] = []
    t = 0
    while t < min(nrows, ncols):
        best = None
        for i in range(t, nrows):
            row = D[i]
            for j in range(t, ncols):
                if row[j] and (best is None or abs(row[j]) < best[0]):
                    best = (abs(row[j]), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)

        while True:
            pivot = D[t][t]
            changed = False
            for i in range(t + 1, nrows):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // pivot))
                    changed = changed or bool(D[i][t])
            for j in range(t + 1, ncols):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // pivot))
                    changed = changed or bool(D[t][j])
            if changed:
                best = (abs(D[t][t]), t, t)
                for i in range(t + 1, nrows):
                    if D[i][t] and abs(D[i][t]) < best[0]:
                        best = (abs(D[i][t]), i, t)
                for j in range(t + 1, ncols):
                    if D[t][j] and abs(D[t][j]) < best[0]:
                        best = (abs(D[t][j]), t, j)
                _, i, j = best
                if i != t:
                    swap_rows(t, i)
                if j != t:
                    swap_cols(t, j)
                continue
            blocker = None
            if abs(pivot) != 1:
                for i in range(t + 1, nrows):
                    for j in range(t + 1, ncols):
                        if D[i][j] % pivot:
                            blocker = i
                            break
                    if blocker is not None:
                        break
            if blocker is None:
                break
            add_row(t, blocker, 1)

        if D[t][t] < 0:
            negate_row(t)
        diagonal.append(D[t][t])
        t += 1

    return SmithForm(nrows, ncols, diagonal, S, S_inv, T, T_inv)


def invariant_factors(matrix: Matrix, nrows: int, ncols: int) -> List[int]:
    return smith_normal_form(matrix, nrows, ncols).diagonal


class Lattice:
    """A subgroup of ZZ^dim given by independent generators"""

    def __init__(self, dim: int, basis: Sequence[Sequence[int]] = ()):
        self.dim = dim
        self.basis: List[Vector] = [list(v) for v in basis]

    @classmethod
    def span(cls, dim: int, vectors: Sequence[Sequence[int]]) -> "Lattice":
        vectors = [list(v) for v in vectors if any(v)]
        if not vectors:
            return cls(dim)
        form = smith_normal_form(from_columns(vectors, dim), dim, len(vectors))
        basis = [
            [d * form.S_inv[r][i] for r in range(dim)]
            for i, d in enumerate(form.diagonal)
        ]
        return cls(dim, basis)

    @classmethod
    def full(cls, dim: int) -> "Lattice":
        return cls(dim, identity(dim))

    @classmethod
    def diagonal(cls, orders: Sequence[int]) -> "Lattice":
        dim = len(orders)
        basis = []
        for i, d in enumerate(orders):
            if d:
                v = [0] * dim
                v[i] = d
                basis.append(v)
        return cls(dim, basis)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def is_zero(self) -> bool:
        return not self.basis

    @cached_property
    def _solver(self) -> SmithForm:
        return smith_normal_form(from_columns(self.basis, self.dim), self.dim, self.rank)

    def coordinates(self, v: Sequence[int]) -> Optional[Vector]:
        """c with basis * c = v, or None when v is not in the lattice"""
        if self.is_zero:
            return [] if not any(v) else None
        form = self._solver
        sv = mat_vec(form.S, v)
        if any(sv[form.rank:]):
            return None
        y = []
        for value, d in zip(sv, form.diagonal):
            if value % d:
                return None
            y.append(value // d)
        return mat_vec(form.T, y)

    def contains(self, v: Sequence[int]) -> bool:
        return self.coordinates(v) is not None

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(v) for v in other.basis)

    def __add__(self, other: "Lattice") -> "Lattice":
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        return Lattice.span(self.dim, self.basis + other.basis)

    def intersect(self, other: "Lattice") -> "Lattice":
        if self.is_zero or other.is_zero:
            return Lattice(self.dim)
        block = [
            list(self_row) + [-x for x in other_row]
            for self_row, other_row in zip(
                from_columns(self.basis, self.dim), from_columns(other.basis, self.dim)
            )
        ]
        kernel = kernel_basis(block, self.dim, self.rank + other.rank)
        vectors = [
            mat_vec(from_columns(self.basis, self.dim), k[: self.rank]) for k in kernel
        ]
        return Lattice.span(self.dim, vectors)

    def project(self, rows: Sequence[int]) -> "Lattice":
        return Lattice.span(len(rows), [[v[r] for r in rows] for v in self.basis])

    def __repr__(self) -> str:
        return f"Lattice(dim={self.dim}, rank={self.rank})"


def solve_integer(matrix: Matrix, nrows: int, ncols: int, v: Sequence[int]) -> Optional[Vector]:
    """Some x in ZZ^ncols with matrix * x = v, or None"""
    form = smith_normal_form(matrix, nrows, ncols)
    sv = mat_vec(form.S, v) if nrows else []
    if any(sv[form.rank:]):
        return None
    y = [0] * ncols
    for i, d in enumerate(form.diagonal):
        if sv[i] % d:
            return None
        y[i] = sv[i] // d
    return mat_vec(form.T, y) if ncols else []


def kernel_basis(matrix: Matrix, nrows: int, ncols: int) -> List[Vector]:
    """Basis of {x in ZZ^ncols : matrix * x = 0} (always saturated)"""
    form = smith_normal_form(matrix, nrows, ncols)
    return [column(form.T, j) for j in range(form.rank, ncols)]


def kernel(matrix: Matrix, nrows: int, ncols: int) -> Lattice:
    return Lattice(ncols, kernel_basis(matrix, nrows, ncols))


def image(matrix: Matrix, nrows: int, ncols: int) -> Lattice:
    return Lattice.span(nrows, [column(matrix, j) for j in range(ncols)])


def image_of(matrix: Matrix, lattice: Lattice, nrows: int) -> Lattice:
    return Lattice.span(nrows, [mat_vec(matrix, v) for v in lattice.basis])


def preimage(matrix: Matrix, nrows: int, ncols: int, target: Lattice) -> Lattice:
    """{x in ZZ^ncols : matrix * x in target}"""
    if target.is_zero:
        return kernel(matrix, nrows, ncols)
    bmat = from_columns(target.basis, nrows)
    block = [list(matrix[i]) + [-x for x in bmat[i]] for i in range(nrows)]
    vectors = [k[:ncols] for k in kernel_basis(block, nrows, ncols + target.rank)]
    return Lattice.span(ncols, vectors)


@dataclass(frozen=True)
class PresentedGroup:
    """ZZ^n modulo the diagonal relations d_i e_i; order 0 marks a free generator"""
    orders: Tuple[int, ...] = ()

    @property
    def ngens(self) -> int:
        return len(self.orders)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.orders if d == 0)

    @property
    def torsion(self) -> List[int]:
        return sorted(d for d in self.orders if d)

    @property
    def is_zero(self) -> bool:
        return not self.orders

    @cached_property
    def relations(self) -> Lattice:
        return Lattice.diagonal(self.orders)

    def reduce(self, v: Sequence[int]) -> Vector:
        return [x % d if d else x for x, d in zip(v, self.orders)]

    def is_trivial_element(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    @classmethod
    def free(cls, n: int) -> "PresentedGroup":
        return cls((0,) * n)


@dataclass
class PresentedGroupMap:
    """Integer matrix on generators; well defined when relations land in relations"""
    source: PresentedGroup
    target: PresentedGroup
    matrix: Matrix

    def apply(self, v: Sequence[int]) -> Vector:
        return self.target.reduce(mat_vec(self.matrix, v))

    def certify(self) -> bool:
        for i, d in enumerate(self.source.orders):
            if d:
                image_vector = [row[i] * d for row in self.matrix]
                if not self.target.is_trivial_element(image_vector):
                    return False
        return True

    @property
    def is_zero(self) -> bool:
        return all(
            self.target.is_trivial_element(column(self.matrix, j))
            for j in range(self.source.ngens)
        )

    def compose(self, first: "PresentedGroupMap") -> "PresentedGroupMap":
        """self after first"""
        product = mat_mul(self.matrix, first.matrix, self.source.ngens, first.source.ngens)
        return PresentedGroupMap(first.source, self.target, product)


class Subquotient:
    """
    N / M for lattices M inside N in ZZ^dim, with a minimal generating set.

    Generators come from a basis of N adapted to M; those of order 1 are
    dropped, the rest are torsion (order d >= 2) or free (order 0).
    """

    def __init__(self, numerator: Lattice, denominator: Lattice):
        self.numerator = numerator
        self.denominator = denominator
        dim = numerator.dim
        rank_n = numerator.rank
        coords = []
        for v in denominator.basis:
            c = numerator.coordinates(v)
            if c is None:
                raise ValueError("denominator is not contained in the numerator")
            coords.append(c)
        form = smith_normal_form(from_columns(coords, rank_n), rank_n, len(coords))
        self._S = form.S
        adapted = mat_mul(from_columns(numerator.basis, dim), form.S_inv, rank_n, rank_n)
        self._kept: List[int] = []
        orders: List[int] = []
        for i in range(rank_n):
            d = form.diagonal[i] if i < form.rank else 0
            if d != 1:
                self._kept.append(i)
                orders.append(d)
        self._lifts = [column(adapted, i) for i in self._kept]
        self.group = PresentedGroup(tuple(orders))

    @property
    def dim(self) -> int:
        return self.numerator.dim

    def classify(self, v: Sequence[int]) -> Vector:
        """Class of v (which must lie in N) in generator coordinates"""
        c = self.numerator.coordinates(v)
        if c is None:
            raise ValueError("vector is not in the numerator lattice")
        y = mat_vec(self._S, c)
        return self.group.reduce([y[i] for i in self._kept])

    def lift(self, index: int) -> Vector:
        return list(self._lifts[index])

    def lifts(self) -> List[Vector]:
        return [list(v) for v in self._lifts]


def homology_at(
    f: Matrix,
    here: PresentedGroup,
    g: Matrix,
    next_group: PresentedGroup,
    prev_group: PresentedGroup,
) -> Subquotient:
    """
    Homology of prev --f--> here --g--> next for presented groups.

    N = {x : g x in Rel(next)}, M = im f + Rel(here); returns N / M inside
    ZZ^{here.ngens}.
    """
    n = here.ngens
    numerator = preimage(g, next_group.ngens, n, next_group.relations)
    boundaries = Lattice.span(n, [column(f, j) for j in range(prev_group.ngens)])
    denominator = boundaries + here.relations
    return Subquotient(numerator, denominator)


@dataclass
class IntComplex:
    """
    Finite complex of free abelian groups along one grading direction.

    ``bases[p]`` labels the basis of position p; ``differentials[p]`` is the
    sparse map from position p to p+1 as source -> {target: coefficient}.
    """
    positions: List[int]
    bases: Dict[int, List] = field(default_factory=dict)
    differentials: Dict[int, Dict[int, Dict[int, int]]] = field(default_factory=dict)

    def dense(self, p: int) -> Matrix:
        rows = len(self.bases.get(p + 1, []))
        cols = len(self.bases.get(p, []))
        matrix = zeros(rows, cols)
        for source, targets in self.differentials.get(p, {}).items():
            for target, c in targets.items():
                matrix[target][source] = c
        return matrix

    def homology(self) -> Dict[int, Subquotient]:
        result = {}
        for p in self.positions:
            here = PresentedGroup.free(len(self.bases.get(p, [])))
            prev = PresentedGroup.free(len(self.bases.get(p - 1, [])))
            nxt = PresentedGroup.free(len(self.bases.get(p + 1, [])))
            result[p] = homology_at(self.dense(p - 1), here, self.dense(p), nxt, prev)
        return result

    def euler_characteristic(self) -> int:
        return sum((-1) ** (p % 2) * len(self.bases.get(p, [])) for p in self.positions)
