from abc import abstractmethod
from typing import Any

from agents.base import BaseAgent
from schemas.reports import CheckOutcome
from services.metrics import verification_checks_total


class VerificationAgent(BaseAgent):
    """Compares two independent computations and reports the outcome"""

    def __init__(self, name: str, check_name: str):
        super().__init__(name)
        self.check_name = check_name

    @abstractmethod
    async def check(self, input_data: Any) -> CheckOutcome:
        pass

    async def run(self, input_data: Any) -> CheckOutcome:
        outcome = await self.check(input_data)
        verification_checks_total.labels(
            check=self.check_name, result="pass" if outcome.passed else "fail"
        ).inc()
        self.log(f"{outcome.name}: {'MATCH' if outcome.passed else 'MISMATCH'} {outcome.detail}".rstrip())
        return outcome
