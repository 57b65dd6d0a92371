from typing import List, NamedTuple

from agents.verification.base import VerificationAgent
from schemas.homology import HomologyTable, SpectralReport
from schemas.reports import CheckOutcome


class SpectralAuditInput(NamedTuple):
    report: SpectralReport
    homfly_table: HomologyTable


class SpectralDegreeAgent(VerificationAgent):
    """
    Audits a spectral report: E_1 equals the HOMFLY-PT table, every d_r has
    degree (2nr, -2r, 2 - 2r), and E_2 agrees with H(E_1, d_1).
    """

    def __init__(self):
        super().__init__(name="SpectralDegreeAgent", check_name="spectral_degrees")

    @staticmethod
    def degree_failures(report: SpectralReport) -> List[str]:
        n = report.sl_rank
        failures = []
        for page in report.pages:
            r = page.index
            expected = (2 * n * r, -2 * r, 2 - 2 * r)
            for d in page.differentials:
                shift = tuple(t - s for s, t in zip(d.source, d.target))
                if shift != expected:
                    failures.append(f"d_{r} from {d.source} has degree {shift}, expected {expected}")
        return failures

    async def check(self, input_data: SpectralAuditInput) -> CheckOutcome:
        report = input_data.report
        failures = self.degree_failures(report)

        first = report.page(1)
        if first is None:
            failures.append("no E_1 page")
        elif not first.table.same_groups(input_data.homfly_table):
            failures.extend(f"E_1 vs HOMFLY-PT: {d}" for d in first.table.differences(input_data.homfly_table))
        if report.e2_matches is False:
            failures.append("E_2 differs from H(E_1, d_1)")

        if failures:
            return CheckOutcome(
                name="spectral", passed=False, detail=f"{failures[0]} ({len(failures)} failures)"
            )
        stable = "not stabilised" if report.stabilized_at is None else f"stable from E_{report.stabilized_at}"
        return CheckOutcome(name="spectral", passed=True, detail=f"{len(report.pages)} pages, {stable}")
