from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class BraidLetter(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int = Field(..., ge=1, description="Artin generator index i of sigma_i")
    sign: int = Field(..., description="+1 or -1")

    @field_validator("sign")
    @classmethod
    def _unit_sign(cls, value: int) -> int:
        if value not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return value

    def to_text(self) -> str:
        return str(self.index * self.sign)


class BraidWord(BaseModel):
    model_config = ConfigDict(frozen=True)

    strands: int = Field(..., ge=1)
    letters: Tuple[BraidLetter, ...] = ()

    @model_validator(mode="after")
    def _indices_in_range(self) -> "BraidWord":
        for letter in self.letters:
            if letter.index > self.strands - 1:
                raise ValueError(
                    f"generator {letter.index} needs at least {letter.index + 1} strands, got {self.strands}"
                )
        return self

    @property
    def writhe(self) -> int:
        return sum(letter.sign for letter in self.letters)

    @property
    def crossing_count(self) -> int:
        return len(self.letters)

    def to_text(self) -> str:
        return " ".join(letter.to_text() for letter in self.letters)

    def mirror(self) -> "BraidWord":
        return BraidWord(
            strands=self.strands,
            letters=tuple(BraidLetter(index=l.index, sign=-l.sign) for l in self.letters),
        )

    def __str__(self) -> str:
        return f"[{self.strands}] {self.to_text() or '(empty)'}"


class Crossing(BaseModel):
    """
    One braid letter in the closed diagram.

    in_edges = (i, j) are the bottom-left and bottom-right segments,
    out_edges = (k, l) the top-left and top-right ones.
    """
    model_config = ConfigDict(frozen=True)

    position: int
    index: int
    sign: int
    in_edges: Tuple[int, int]
    out_edges: Tuple[int, int]


class ClosedDiagram(BaseModel):
    model_config = ConfigDict(frozen=True)

    word: BraidWord
    crossings: Tuple[Crossing, ...] = ()
    edges: Tuple[int, ...] = ()
    marked_edge: int = 0
    edge_positions: Dict[int, int] = Field(
        default_factory=dict, description="strand position carrying each edge"
    )
    bottom_edges: Tuple[int, ...] = Field(default=(), description="closure edge of each strand position")
    pieces: Tuple[Tuple[int, ...], ...] = Field(
        default=(), description="strand positions grouped by connecting letters"
    )
    closure_marks: Tuple[int, ...] = Field(
        default=(), description="edges carrying an explicit closure factor"
    )
    components: int = 1

    @property
    def writhe(self) -> int:
        return self.word.writhe

    @property
    def strands(self) -> int:
        return self.word.strands

    @property
    def is_knot(self) -> bool:
        return self.components == 1

    def piece_of_edge(self, edge: int) -> Tuple[int, ...]:
        position = self.edge_positions[edge]
        return next(piece for piece in self.pieces if position in piece)


class EdgeRingPresentation(BaseModel):
    """ZZ[edges] modulo one type-II linear relation per crossing"""
    model_config = ConfigDict(frozen=True)

    variables: Tuple[int, ...]
    linear_relations: List[Dict[int, int]] = Field(default_factory=list)
    independent_variables: Tuple[int, ...] = ()
    solution: Dict[int, Dict[int, int]] = Field(
        default_factory=dict, description="dependent edge -> linear form in independent edges"
    )

    @property
    def relation_rank(self) -> int:
        return len(self.variables) - len(self.independent_variables)

    def express(self, edge: int) -> Dict[int, int]:
        if edge in self.solution:
            return dict(self.solution[edge])
        return {edge: 1}
