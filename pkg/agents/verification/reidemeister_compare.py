from typing import NamedTuple

from agents.verification.base import VerificationAgent
from schemas.homology import HomologyTable
from schemas.reports import CheckOutcome


class TablePair(NamedTuple):
    first: HomologyTable
    second: HomologyTable
    label: str = "reidemeister"


class ReidemeisterCompareAgent(VerificationAgent):
    """Two presentations of one link must give identical tables, torsion included"""

    def __init__(self):
        super().__init__(name="ReidemeisterCompareAgent", check_name="reidemeister")

    async def check(self, input_data: TablePair) -> CheckOutcome:
        differences = input_data.first.differences(input_data.second)
        if not differences:
            return CheckOutcome(
                name=input_data.label, passed=True,
                detail=f"{len(input_data.first.entries)} entries agree",
            )
        return CheckOutcome(
            name=input_data.label, passed=False,
            detail=f"{differences[0]} ({len(differences)} differing degrees)",
        )
