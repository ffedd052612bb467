"""Exception types shared across the package."""

from __future__ import annotations


class GraphStructureError(ValueError):
    """A graph fails a structural requirement (e.g. it is disconnected)."""

    def __init__(self, message: str, component: tuple[int, ...] | None = None):
        super().__init__(message)
        self.component = component


class StateError(ValueError):
    """An operation was asked about a state it does not apply to."""


class ResourceGuardError(RuntimeError):
    """An exact/brute-force routine refused an input above its hard size guard."""


class ParseError(ValueError):
    """Malformed edge-list input; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class GenerationError(RuntimeError):
    """A generator could not produce a valid instance (retries exhausted)."""


class DegenerateInstanceError(ValueError):
    """An instance violates a precondition of the requested computation."""


class InvariantViolation(AssertionError):
    """A runtime self-check failed; carries the check name and a witness."""

    def __init__(self, check: str, witness=None, detail: str = ""):
        msg = f"invariant violated: {check}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.check = check
        self.witness = witness


class OnlinePurityError(RuntimeError):
    """The exploration engine touched a part of the graph it has not learned."""


class DegenerateCombWarning(UserWarning):
    """Comb parameters make the heavy teeth no heavier than the light ones."""
