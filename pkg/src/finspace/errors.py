"""Exception types shared across the package."""


class FinspaceError(Exception):
    pass


class CycleDetected(FinspaceError):
    """The covering relation would force some x < x."""


class InvalidParameter(FinspaceError):
    pass


class NotOrderPreserving(FinspaceError):
    """Raised with a witness (x, x2) where x <= x2 but f(x) !<= f(x2)."""

    def __init__(self, x, x2, fx, fx2):
        self.witness = (x, x2, fx, fx2)
        super().__init__(
            f"not order-preserving: {x} <= {x2} but f({x})={fx} !<= f({x2})={fx2}"
        )


class MismatchedSpaces(FinspaceError):
    pass


class MismatchedSizes(FinspaceError):
    pass


class NotOpen(FinspaceError):
    pass


class NotMinimal(FinspaceError):
    pass


class NotContinuous(FinspaceError):
    def __init__(self, stage, witness):
        self.stage = stage
        self.witness = witness
        super().__init__(f"stage {stage!r} is not continuous at {witness}")


class BudgetExceeded(FinspaceError):
    pass


class BaseMismatch(FinspaceError):
    pass


class NotApplicable(FinspaceError):
    pass


class PreconditionViolated(FinspaceError):
    def __init__(self, clause):
        self.clause = clause
        super().__init__(f"precondition failed: {clause}")


class BoundsOnly(FinspaceError):
    """An exact search could not settle the value; carries (lower, upper)."""

    def __init__(self, lower, upper, detail=""):
        self.lower = lower
        self.upper = upper
        super().__init__(f"bounds only: {lower} <= value <= {upper} {detail}".rstrip())
