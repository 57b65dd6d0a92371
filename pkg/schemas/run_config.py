from typing import Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from config import settings
from knots.catalog import names
from workflows.error_handler import BraidParseError


class RunConfig(BaseModel):
    """One engine run, fixed once the command line is parsed"""
    model_config = ConfigDict(frozen=True)

    braid: Optional[str] = Field(None, description="signed-integer braid word; empty text is the trivial braid")
    knot: Optional[str] = Field(None, description="catalog name used instead of a braid")
    strands: Optional[int] = Field(None, ge=1)
    reduced: bool = True
    mark: Optional[int] = Field(None, ge=0)
    sln: Optional[int] = Field(None, ge=0, description="p(x) = x^(n+1); n = 0 is p(x) = x")
    pages: int = Field(default_factory=lambda: settings.DEFAULT_PAGE_LIMIT, ge=1)
    q_min: Optional[int] = None
    q_max: Optional[int] = None
    output_format: Literal["table", "json", "report"] = "table"
    check_euler: bool = False
    crosscheck_hochschild: bool = False
    hochschild_degree_limit: int = Field(3, ge=0)
    compare: Optional[str] = Field(None, description="second braid word whose table must agree")
    metrics: bool = False

    @model_validator(mode="after")
    def _consistent(self) -> "RunConfig":
        if (self.braid is None) == (self.knot is None):
            raise ValueError("give exactly one of braid or knot")
        if (self.q_min is None) != (self.q_max is None):
            raise ValueError("q_min and q_max come together")
        if self.q_min is not None and self.q_min > self.q_max:
            raise ValueError(f"window [{self.q_min}, {self.q_max}] is not ordered")
        if self.knot is not None:
            if self.knot not in names() and not (self.knot.startswith("m") and self.knot[1:] in names()):
                raise ValueError(f"unknown knot {self.knot!r}")
        if self.sln is not None and not self.reduced:
            raise ValueError("sl(n) pages are computed for the reduced theory only")
        return self

    @property
    def window(self) -> Optional[Tuple[int, int]]:
        if self.q_min is None:
            return None
        return (self.q_min, self.q_max)


def build_run_config(**values) -> RunConfig:
    """RunConfig with validation failures reported as parse errors"""
    try:
        return RunConfig(**values)
    except ValidationError as e:
        raise BraidParseError(f"invalid run configuration: {e.errors()[0]['msg']}") from e
