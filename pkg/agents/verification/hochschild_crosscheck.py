from typing import List

from agents.verification.base import VerificationAgent
from schemas.reports import CheckOutcome, HochschildComparison


class HochschildCrosscheckAgent(VerificationAgent):
    """Every resolution must agree in every compared bidegree"""

    def __init__(self):
        super().__init__(name="HochschildCrosscheckAgent", check_name="hochschild_agreement")

    async def check(self, input_data: List[HochschildComparison]) -> CheckOutcome:
        failed = [c for c in input_data if not c.matches]
        bidegrees = sum(len(c.rows) for c in input_data)
        if not failed:
            return CheckOutcome(
                name="hochschild", passed=True,
                detail=f"{len(input_data)} resolutions, {bidegrees} bidegrees",
            )
        row = failed[0].mismatches()[0]
        return CheckOutcome(
            name="hochschild", passed=False,
            detail=(
                f"resolution {failed[0].resolution} at (q, j) = ({row.q}, {row.j}): "
                f"Koszul {row.expected}, d_plus {row.got}; {len(failed)} resolutions differ"
            ),
        )
