import asyncio
from datetime import datetime
from typing import Tuple

from schemas.reports import RunReport
from schemas.run_config import RunConfig
from services.observability import observability_service
from workflows.error_handler import exit_code_for
from workflows.homology_workflow import homology_workflow
from workflows.state import RunState


class WorkflowExecutor:
    """Execute homology runs"""

    @staticmethod
    async def execute(config: RunConfig) -> Tuple[RunReport, int]:
        """
        Run the homology workflow for one configuration

        Args:
            config: validated run configuration

        Returns:
            (report, exit code)
        """
        initial_state: RunState = {
            'config': config,
            'spectral': None,
            'compare_table': None,
            'checks': [],
            'hochschild': [],
            'errors': [],
            'exit_code': 0,
            'started_at': datetime.utcnow(),
            'updated_at': datetime.utcnow(),
            'status': 'running'
        }

        observability_service.log_info(f"Started run for {config.knot or repr(config.braid)}")

        try:
            final_state = await homology_workflow.ainvoke(initial_state)
        except Exception as e:
            observability_service.log_error(f"Run failed outside the pipeline: {e}", exc_info=True)
            report = RunReport(
                braid=config.braid or config.knot or "",
                strands=config.strands or 0,
                reduced=config.reduced,
                errors=[str(e)],
                exit_code=exit_code_for(e),
            )
            return report, report.exit_code

        report = final_state['report']
        elapsed = (final_state['updated_at'] - final_state['started_at']).total_seconds()
        observability_service.log_info(f"Run {final_state['status']} in {elapsed:.2f}s")
        return report, report.exit_code


def run(config: RunConfig) -> Tuple[RunReport, int]:
    """Blocking entry point used by the command line"""
    return asyncio.run(WorkflowExecutor.execute(config))
