from math import gcd
from typing import Dict, Iterable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Degree = Tuple[int, int, int]


class FGAbGroup(BaseModel):
    """ZZ^free_rank + sum of ZZ/d over the torsion chain"""
    model_config = ConfigDict(frozen=True)

    free_rank: int = Field(0, ge=0)
    torsion: Tuple[int, ...] = ()

    @field_validator("torsion")
    @classmethod
    def _chain(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        for d in value:
            if d < 2:
                raise ValueError("torsion orders must be at least 2")
        for a, b in zip(value, value[1:]):
            if b % a:
                raise ValueError(f"torsion {value} is not a divisibility chain")
        return value

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> "FGAbGroup":
        """Orders of cyclic summands, 0 for ZZ; torsion is normalised to a chain."""
        orders = list(orders)
        free = sum(1 for d in orders if d == 0)
        return cls(free_rank=free, torsion=tuple(_invariant_chain([d for d in orders if d > 1])))

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __add__(self, other: "FGAbGroup") -> "FGAbGroup":
        return FGAbGroup.from_orders(
            [0] * (self.free_rank + other.free_rank) + list(self.torsion) + list(other.torsion)
        )

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


def _invariant_chain(orders: List[int]) -> List[int]:
    """Normalise a list of cyclic orders into invariant factors."""
    factors = sorted(orders)
    changed = True
    while changed:
        changed = False
        for a in range(len(factors)):
            for b in range(a + 1, len(factors)):
                x, y = factors[a], factors[b]
                if y % x:
                    g = gcd(x, y)
                    factors[a], factors[b] = g, x * y // g
                    changed = True
        factors = sorted(f for f in factors if f > 1)
    return factors


class HomologyEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    q: int
    j: int
    k: int
    rank: int = Field(0, ge=0)
    torsion: Tuple[int, ...] = ()
    Q: Optional[int] = Field(None, description="preserved grading q + n*j for sl(n) tables")

    @property
    def degree(self) -> Degree:
        return (self.q, self.j, self.k)

    @property
    def group(self) -> FGAbGroup:
        return FGAbGroup(free_rank=self.rank, torsion=self.torsion)


class HomologyTable(BaseModel):
    """Tri-graded groups, entries sorted by (q, j, k)"""
    entries: List[HomologyEntry] = Field(default_factory=list)
    reduced: bool = True
    truncated: bool = False
    q_window: Optional[Tuple[int, int]] = None
    sl_rank: Optional[int] = Field(None, description="n when the table is an sl(n) homology")

    @model_validator(mode="after")
    def _sorted(self) -> "HomologyTable":
        self.entries = sorted(
            (e for e in self.entries if e.rank or e.torsion), key=lambda e: e.degree
        )
        return self

    @classmethod
    def from_groups(cls, groups: Dict[Degree, FGAbGroup], **kwargs) -> "HomologyTable":
        sl_rank = kwargs.get("sl_rank")
        entries = [
            HomologyEntry(
                q=q, j=j, k=k, rank=g.free_rank, torsion=g.torsion,
                Q=(q + sl_rank * j) if sl_rank is not None else None,
            )
            for (q, j, k), g in groups.items()
            if not g.is_zero
        ]
        return cls(entries=entries, **kwargs)

    def groups(self) -> Dict[Degree, FGAbGroup]:
        return {e.degree: e.group for e in self.entries}

    def group(self, q: int, j: int, k: int) -> FGAbGroup:
        return self.groups().get((q, j, k), FGAbGroup())

    def support(self) -> List[Degree]:
        return [e.degree for e in self.entries]

    def total_rank(self) -> int:
        return sum(e.rank for e in self.entries)

    def shifted(self, dq: int, dj: int, dk: int) -> "HomologyTable":
        return HomologyTable.from_groups(
            {(q + dq, j + dj, k + dk): g for (q, j, k), g in self.groups().items()},
            reduced=self.reduced, truncated=self.truncated, q_window=self.q_window,
            sl_rank=self.sl_rank,
        )

    def restricted(self, q_min: int, q_max: int) -> "HomologyTable":
        return HomologyTable.from_groups(
            {d: g for d, g in self.groups().items() if q_min <= d[0] <= q_max},
            reduced=self.reduced, truncated=self.truncated, q_window=(q_min, q_max),
            sl_rank=self.sl_rank,
        )

    def same_groups(self, other: "HomologyTable") -> bool:
        return self.groups() == other.groups()

    def differences(self, other: "HomologyTable") -> List[str]:
        mine, theirs = self.groups(), other.groups()
        lines = []
        for degree in sorted(set(mine) | set(theirs)):
            a, b = mine.get(degree, FGAbGroup()), theirs.get(degree, FGAbGroup())
            if a != b:
                lines.append(f"{degree}: {a} vs {b}")
        return lines

    def to_json_array(self) -> List[dict]:
        return [
            {"q": e.q, "j": e.j, "k": e.k, "rank": e.rank, "torsion": list(e.torsion),
             **({"Q": e.Q} if e.Q is not None else {})}
            for e in self.entries
        ]

    @classmethod
    def from_json_array(cls, rows: List[dict], **kwargs) -> "HomologyTable":
        return cls(entries=[HomologyEntry(**row) for row in rows], **kwargs)


class PageDifferential(BaseModel):
    """d_r restricted to one source position, in generator coordinates"""
    source: Degree
    target: Degree
    matrix: List[List[int]]


class SpectralPage(BaseModel):
    index: int = Field(..., ge=0)
    table: HomologyTable
    differentials: List[PageDifferential] = Field(default_factory=list)

    @property
    def differential_is_zero(self) -> bool:
        return all(not any(any(row) for row in d.matrix) for d in self.differentials)


class SpectralReport(BaseModel):
    sl_rank: int
    potential: str
    pages: List[SpectralPage] = Field(default_factory=list)
    e_infinity: Optional[HomologyTable] = Field(None, description="None when the sequence did not stabilise by the page limit")
    stabilized_at: Optional[int] = None
    other_iterated: Optional[HomologyTable] = Field(
        None, description="H(H(H+, d_minus*), d_v*)"
    )
    e2_from_e1: Optional[HomologyTable] = None
    e2_matches: Optional[bool] = None
    discrepancies: List[str] = Field(
        default_factory=list, description="degrees where E_infinity and the other iterated homology differ"
    )

    def page(self, index: int) -> Optional[SpectralPage]:
        return next((p for p in self.pages if p.index == index), None)
