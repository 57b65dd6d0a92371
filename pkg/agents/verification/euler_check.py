from typing import NamedTuple, Optional

from agents.verification.base import VerificationAgent
from knots.skein_oracle import euler_characteristic, expected_euler
from schemas.homology import HomologyTable
from schemas.knot_polynomial import HomflyPolynomial
from schemas.reports import CheckOutcome


class EulerCheckInput(NamedTuple):
    table: HomologyTable
    polynomial: HomflyPolynomial
    reduced: bool = True
    sl_rank: Optional[int] = None


class EulerCheckAgent(VerificationAgent):
    """
    Graded Euler characteristic of a table against the skein oracle.

    Truncated tables are compared with the oracle's q-expansion cut at the
    window top. With sl_rank the table is an E_infinity page and the oracle
    is specialised at a = q^n.
    """

    def __init__(self):
        super().__init__(name="EulerCheckAgent", check_name="euler")

    async def check(self, input_data: EulerCheckInput) -> CheckOutcome:
        table = input_data.table
        mode = "reduced" if input_data.reduced else "unreduced"
        name = "euler" if input_data.sl_rank is None else f"sl({input_data.sl_rank}) euler"

        if table.truncated and input_data.sl_rank is not None:
            raise ValueError("sl(n) Euler checks need a table with finite support")

        got = euler_characteristic(table, mode, sl_rank=input_data.sl_rank)
        if table.truncated:
            q_max = table.q_window[1]
            expected = expected_euler(input_data.polynomial, mode, q_max=q_max)
            got = got.truncate(q_max)
        else:
            expected = expected_euler(input_data.polynomial, mode, sl_rank=input_data.sl_rank)

        if got == expected:
            return CheckOutcome(name=name, passed=True, detail=got.to_text())
        return CheckOutcome(
            name=name, passed=False, detail=f"table gives {got.to_text()}, oracle gives {expected.to_text()}"
        )
