"""Exception types shared across modules."""


class BudgetExceeded(ValueError):
    """An enumeration or bitset would exceed the configured size budget."""


class DegenerateInput(ValueError):
    """Input violates a non-degeneracy precondition (coplanar points, degenerate line, ...)."""


class ConvergenceError(RuntimeError):
    """An iterative estimate hit its iteration cap without meeting tolerance."""
