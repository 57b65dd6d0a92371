from datetime import datetime

from langgraph.graph import END, StateGraph

from agents.verification.euler_check import EulerCheckAgent, EulerCheckInput
from agents.verification.hochschild_crosscheck import HochschildCrosscheckAgent
from agents.verification.reidemeister_compare import ReidemeisterCompareAgent, TablePair
from agents.verification.spectral_degree import SpectralAuditInput, SpectralDegreeAgent
from algebra.polyring import Potential
from homology.hochschild_check import crosscheck_all_async
from homology.iterated import compute_homfly_async
from homology.spectral_sln import FilteredSliceComplex, spectral_report_async
from knots.braid_model import close_braid, parse_braid
from knots.catalog import lookup
from knots.skein_oracle import homfly
from schemas.reports import RunReport
from services.observability import observability_service
from workflows.error_handler import VerificationError, handle_node_error
from workflows.state import RunState

# Initialize agents
euler_agent = EulerCheckAgent()
spectral_agent = SpectralDegreeAgent()
reidemeister_agent = ReidemeisterCompareAgent()
hochschild_agent = HochschildCrosscheckAgent()


# Node functions
async def parse_node(state: RunState) -> RunState:
    """Resolve the braid word and close it"""
    config = state['config']
    observability_service.log_info(f"Parsing {config.knot or repr(config.braid)}")

    try:
        if config.knot is not None:
            word = lookup(config.knot)
        else:
            word = parse_braid(config.braid, config.strands)
        state['word'] = word
        state['diagram'] = close_braid(word, config.mark)
        state['updated_at'] = datetime.utcnow()

    except Exception as e:
        return await handle_node_error("parse", e, state)

    return state


async def homfly_node(state: RunState) -> RunState:
    """Iterated homology of the closed complex"""
    config = state['config']
    word = state['word']
    observability_service.log_info(f"Computing HOMFLY-PT homology of {word}")

    try:
        potential = Potential.sln(config.sln) if config.sln is not None else None
        state['computation'] = await compute_homfly_async(
            word, config.reduced, state['diagram'].marked_edge, config.window, potential
        )
        state['updated_at'] = datetime.utcnow()

    except Exception as e:
        return await handle_node_error("homfly", e, state)

    return state


async def spectral_node(state: RunState) -> RunState:
    """Pages of the spectral sequence towards sl(n) homology"""
    config = state['config']
    observability_service.log_info(f"Computing sl({config.sln}) pages up to E_{config.pages}")

    try:
        filtered = FilteredSliceComplex(state['computation'])
        state['spectral'] = await spectral_report_async(filtered, config.pages)
        state['updated_at'] = datetime.utcnow()

    except Exception as e:
        return await handle_node_error("spectral", e, state)

    return state


async def checks_node(state: RunState) -> RunState:
    """Run the requested cross-checks"""
    config = state['config']
    computation = state['computation']
    spectral = state.get('spectral')
    checks = state.setdefault('checks', [])
    observability_service.log_info("Running verification checks")

    try:
        if config.check_euler:
            polynomial = computation.polynomial or homfly(computation.word)
            checks.append(await euler_agent.run(
                EulerCheckInput(computation.table, polynomial, computation.reduced)
            ))
            if spectral is not None and spectral.e_infinity is not None and computation.exact:
                checks.append(await euler_agent.run(
                    EulerCheckInput(spectral.e_infinity, polynomial, True, spectral.sl_rank)
                ))

        if spectral is not None:
            checks.append(await spectral_agent.run(SpectralAuditInput(spectral, computation.table)))

        if config.compare is not None:
            other = await compute_homfly_async(
                parse_braid(config.compare), config.reduced, None, computation.window
            )
            state['compare_table'] = other.table
            checks.append(await reidemeister_agent.run(
                TablePair(computation.table, other.table, label=f"compare {other.word}")
            ))

        if config.crosscheck_hochschild:
            comparisons = await crosscheck_all_async(state['diagram'], config.hochschild_degree_limit)
            state['hochschild'] = comparisons
            checks.append(await hochschild_agent.run(comparisons))

        state['updated_at'] = datetime.utcnow()

    except Exception as e:
        return await handle_node_error("checks", e, state)

    return state


async def report_node(state: RunState) -> RunState:
    """Gather everything into the run report"""
    config = state['config']
    computation = state.get('computation')
    checks = state.get('checks', [])
    errors = state.get('errors', [])

    exit_code = state.get('exit_code', 0)
    if not errors and not all(check.passed for check in checks):
        exit_code = VerificationError.exit_code

    word = state.get('word')
    state['report'] = RunReport(
        braid=word.to_text() if word is not None else (config.braid or config.knot or ""),
        strands=word.strands if word is not None else (config.strands or 0),
        reduced=config.reduced,
        marked_edge=state['diagram'].marked_edge if 'diagram' in state else None,
        table=computation.table if computation is not None else None,
        window=computation.window if computation is not None else None,
        truncated=computation.table.truncated if computation is not None and computation.table else False,
        spectral=state.get('spectral'),
        checks=checks,
        hochschild=state.get('hochschild', []),
        errors=errors,
        exit_code=exit_code,
    )
    state['exit_code'] = exit_code
    if state.get('status') != 'failed':
        state['status'] = 'completed'
    state['updated_at'] = datetime.utcnow()
    observability_service.log_info(f"Run finished with exit code {exit_code}")
    return state


# Routing
def route_after_parse(state: RunState) -> str:
    return "report" if state.get('status') == 'failed' else "homfly"


def route_after_homfly(state: RunState) -> str:
    if state.get('status') == 'failed':
        return "report"
    return "spectral" if state['config'].sln is not None else "checks"


def route_after_spectral(state: RunState) -> str:
    return "report" if state.get('status') == 'failed' else "checks"


# Build the graph
def create_homology_workflow():
    """Create the homology workflow graph"""

    workflow = StateGraph(RunState)

    # Add nodes
    workflow.add_node("parse", parse_node)
    workflow.add_node("homfly", homfly_node)
    workflow.add_node("spectral_pages", spectral_node)
    workflow.add_node("run_checks", checks_node)
    workflow.add_node("build_report", report_node)

    # Set entry point
    workflow.set_entry_point("parse")

    workflow.add_conditional_edges("parse", route_after_parse, {"homfly": "homfly", "report": "build_report"})
    workflow.add_conditional_edges(
        "homfly",
        route_after_homfly,
        {"spectral": "spectral_pages", "checks": "run_checks", "report": "build_report"}
    )
    workflow.add_conditional_edges("spectral_pages", route_after_spectral, {"checks": "run_checks", "report": "build_report"})
    workflow.add_edge("run_checks", "build_report")
    workflow.add_edge("build_report", END)

    return workflow.compile()


# Singleton compiled workflow
homology_workflow = create_homology_workflow()
