from datetime import datetime
from typing import List, Optional, TypedDict

from homology.iterated import HomflyComputation
from schemas.braid import BraidWord, ClosedDiagram
from schemas.homology import HomologyTable, SpectralReport
from schemas.reports import CheckOutcome, HochschildComparison, RunReport
from schemas.run_config import RunConfig


class RunState(TypedDict, total=False):
    """State of one engine run"""

    # Input
    config: RunConfig

    # Diagram
    word: BraidWord
    diagram: ClosedDiagram

    # Homology
    computation: HomflyComputation
    spectral: Optional[SpectralReport]
    compare_table: Optional[HomologyTable]

    # Verification
    checks: List[CheckOutcome]
    hochschild: List[HochschildComparison]

    # Output
    report: RunReport

    # Error handling
    errors: List[str]
    exit_code: int

    # Metadata
    started_at: datetime
    updated_at: datetime
    status: str  # running, completed, failed
