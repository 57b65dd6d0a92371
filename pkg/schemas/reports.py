from typing import List, Optional, Tuple

from pydantic import BaseModel, Field

from schemas.homology import FGAbGroup, HomologyTable, SpectralReport


class CheckOutcome(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class BidegreeComparison(BaseModel):
    q: int
    j: int
    expected: FGAbGroup = Field(..., description="Koszul Hochschild side")
    got: FGAbGroup = Field(..., description="d_plus homology side")

    @property
    def match(self) -> bool:
        return self.expected == self.got


class HochschildComparison(BaseModel):
    resolution: str = Field(..., description="one O/S letter per crossing")
    degree_limit: int
    rows: List[BidegreeComparison] = Field(default_factory=list)

    @property
    def matches(self) -> bool:
        return all(row.match for row in self.rows)

    def mismatches(self) -> List[BidegreeComparison]:
        return [row for row in self.rows if not row.match]


class RunReport(BaseModel):
    braid: str
    strands: int
    reduced: bool = True
    marked_edge: Optional[int] = None
    table: Optional[HomologyTable] = None
    window: Optional[Tuple[int, int]] = None
    truncated: bool = False
    spectral: Optional[SpectralReport] = None
    checks: List[CheckOutcome] = Field(default_factory=list)
    hochschild: List[HochschildComparison] = Field(default_factory=list)
    errors: List[str] = Field(default_factory=list)
    exit_code: int = 0

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)
