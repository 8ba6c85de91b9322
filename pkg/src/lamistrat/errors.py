"""Exception hierarchy.

Three coarse families, matching the CLI exit codes: invalid input (1),
verification failure (2), budget exhaustion (3).  Every error carries a
short machine-readable ``code`` used in structured JSON error output.
"""


class LamistratError(Exception):
    code = "Error"

    def payload(self):
        return {"error": self.code, "message": str(self)}


class InvalidInput(LamistratError):
    code = "InvalidInput"


class VerificationFailure(LamistratError):
    code = "VerificationFailure"


class BudgetExceeded(LamistratError):
    code = "BudgetExceeded"


# -- surface / triangulation -------------------------------------------------

class EdgeDegree(InvalidInput):
    """An edge index is not used in exactly two triangle slots."""
    code = "EdgeDegree"


class Disconnected(InvalidInput):
    code = "Disconnected"


class SelfFolded(InvalidInput):
    """An edge appears twice in a single triangle (forbidden in v1)."""
    code = "SelfFolded"


class BadEuler(InvalidInput):
    """No punctured surface signature (g >= 0, n >= 1, 3g-3+n >= 1) matches."""
    code = "BadEuler"


class NotOrientable(InvalidInput):
    """The gluing admits no consistent triangle orientation."""
    code = "NotOrientable"


class NotFlippable(InvalidInput):
    code = "NotFlippable"


# -- normal coordinates ------------------------------------------------------

class ParityViolation(InvalidInput):
    code = "ParityViolation"


class TriangleInequalityViolation(InvalidInput):
    code = "TriangleInequalityViolation"


class PeripheralComponent(InvalidInput):
    """A component of the coordinate vector is a puncture link."""
    code = "PeripheralComponent"

    def __init__(self, message, punctures=()):
        super().__init__(message)
        self.punctures = tuple(punctures)


class FrameMismatch(InvalidInput):
    """Operands live on different triangulations."""
    code = "FrameMismatch"


class NotConnected(InvalidInput):
    code = "NotConnected"


class EmptyLamination(InvalidInput):
    code = "EmptyLamination"


# -- strata / posets ----------------------------------------------------------

class CycleDetected(InvalidInput):
    code = "CycleDetected"


class NotBijective(InvalidInput):
    code = "NotBijective"


# -- mapping classes -----------------------------------------------------------

class WeightCapExceeded(BudgetExceeded):
    code = "WeightCapExceeded"


class NotShortenable(InvalidInput):
    """Flip search failed to carry the curve to a two-triangle annulus."""
    code = "NotShortenable"


class UnknownFixture(InvalidInput):
    code = "UnknownFixture"


class WordNotClosed(InvalidInput):
    """A mapping-class word does not return to its source triangulation."""
    code = "WordNotClosed"
