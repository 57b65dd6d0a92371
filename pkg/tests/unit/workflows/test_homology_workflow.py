"""
Unit tests for the homology workflow, its executor and helpers.
"""
import pytest
from unittest.mock import AsyncMock, patch

from schemas.homology import FGAbGroup
from schemas.run_config import build_run_config
from services.observability import observability_service
from workflows.error_handler import (
    BraidParseError, IdentityViolation, WindowError, exit_code_for, handle_node_error,
)
from workflows.executor import WorkflowExecutor
from workflows.homology_workflow import route_after_homfly, route_after_parse, route_after_spectral
from workflows.parallel_executor import merge_groups, run_parallel

Z = FGAbGroup(free_rank=1)


@pytest.mark.unit
class TestRouting:

    def test_failed_runs_go_to_report(self):
        state = {"status": "failed", "config": build_run_config(braid="1")}
        assert route_after_parse(state) == "report"
        assert route_after_homfly(state) == "report"
        assert route_after_spectral(state) == "report"

    def test_spectral_only_with_a_potential(self):
        assert route_after_homfly({"config": build_run_config(braid="1")}) == "checks"
        assert route_after_homfly({"config": build_run_config(braid="1", sln=2)}) == "spectral"
        assert route_after_parse({"status": "running"}) == "homfly"


@pytest.mark.unit
class TestErrorHandling:

    def test_exit_codes(self):
        assert exit_code_for(BraidParseError("x")) == 2
        assert exit_code_for(WindowError("x")) == 3
        assert exit_code_for(IdentityViolation("x")) == 5
        assert exit_code_for(RuntimeError("x")) == 1

    @pytest.mark.asyncio
    async def test_handle_node_error(self):
        state = await handle_node_error("homfly", WindowError("too small"), {})
        assert state["errors"] == ["homfly: too small"]
        assert state["status"] == "failed"
        assert state["exit_code"] == 3
        assert observability_service.snapshot() == {"errors.WindowError": 1}


@pytest.mark.unit
class TestParallelExecutor:

    @pytest.mark.asyncio
    async def test_results_in_order(self):
        assert await run_parallel(lambda x: x * x, [3, 1, 2], threads=2) == [9, 1, 4]
        assert await run_parallel(lambda x: x, []) == []

    def test_merge_groups(self):
        merged = merge_groups([{(0, 0, 0): Z}, {(0, 0, 0): FGAbGroup(torsion=(2,)), (2, 0, 0): Z}])
        assert merged == {(0, 0, 0): FGAbGroup(free_rank=1, torsion=(2,)), (2, 0, 0): Z}


@pytest.mark.unit
class TestWorkflowExecutor:

    @pytest.mark.asyncio
    async def test_unknot_run(self):
        report, exit_code = await WorkflowExecutor.execute(build_run_config(braid="", strands=1, check_euler=True))
        assert exit_code == 0
        assert report.table.groups() == {(0, 0, 0): Z}
        assert [check.name for check in report.checks] == ["euler"]
        assert report.passed

    @pytest.mark.asyncio
    async def test_bad_mark_is_reported(self):
        report, exit_code = await WorkflowExecutor.execute(build_run_config(braid="1 1 1", mark=99))
        assert exit_code == 2
        assert report.table is None
        assert report.errors[0].startswith("parse:")

    @pytest.mark.asyncio
    async def test_failed_comparison(self):
        report, exit_code = await WorkflowExecutor.execute(build_run_config(braid="1 1 1", compare="1"))
        assert exit_code == 4
        assert not report.checks[0].passed
        assert report.errors == []

    @pytest.mark.asyncio
    async def test_catalog_knot(self):
        report, exit_code = await WorkflowExecutor.execute(build_run_config(knot="0_1"))
        assert exit_code == 0
        assert report.braid == ""
        assert report.strands == 1

    @pytest.mark.asyncio
    async def test_failure_outside_the_graph(self):
        with patch("workflows.executor.homology_workflow") as graph:
            graph.ainvoke = AsyncMock(side_effect=WindowError("no room"))
            report, exit_code = await WorkflowExecutor.execute(build_run_config(braid="1"))
        assert exit_code == 3
        assert report.errors == ["no room"]
