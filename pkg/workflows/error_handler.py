from services.observability import observability_service


class KnotLensError(Exception):
    """Base class for every failure the engine reports"""
    exit_code = 1


class BraidParseError(KnotLensError):
    """Malformed braid text or run configuration"""
    exit_code = 2


class UnknownVariableError(KnotLensError):
    """A marked edge that is not a live variable of the complex"""
    exit_code = 2


class WindowError(KnotLensError):
    """The quantum window cannot contain the support of a finite table"""
    exit_code = 3


class VerificationError(KnotLensError):
    """A cross-check between independent pipelines disagreed"""
    exit_code = 4


class IdentityViolation(KnotLensError):
    """An algebraic identity the construction guarantees has failed"""
    exit_code = 5


class DivisibilityError(IdentityViolation):
    """Exact polynomial division left a remainder"""


class SkeinRecursionError(IdentityViolation):
    """The skein recursion exceeded its sub-problem budget"""


def exit_code_for(error: Exception) -> int:
    if isinstance(error, KnotLensError):
        return error.exit_code
    return 1


async def handle_node_error(node_name: str, error: Exception, state: dict) -> dict:
    """
    Handle errors in workflow nodes

    Args:
        node_name: Name of the node that failed
        error: Exception that occurred
        state: Current run state

    Returns:
        Updated state with error information
    """
    error_message = f"{node_name}: {str(error)}"

    observability_service.log_error(error_message)
    observability_service.increment_counter(f"errors.{type(error).__name__}")

    if 'errors' not in state:
        state['errors'] = []

    state['errors'].append(error_message)
    state['status'] = 'failed'
    state['exit_code'] = exit_code_for(error)

    return state
