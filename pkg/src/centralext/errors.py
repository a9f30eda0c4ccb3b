"""Exception types shared across the package."""


class CentralExtError(Exception):
    """Base class for all library errors."""


class ParseError(CentralExtError):
    def __init__(self, msg, line=None, col=None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f" (line {line}, column {col})"
        super().__init__(msg + where)


class DuplicateSymbol(ParseError):
    pass


class ArityMismatch(ParseError):
    pass


class UnknownSymbol(ParseError):
    pass


class MissingBinding(CentralExtError):
    pass


class SignatureMismatch(CentralExtError):
    pass


class BudgetExceeded(CentralExtError):
    def __init__(self, budget, what="closure"):
        self.budget = budget
        super().__init__(f"{what} exceeded budget of {budget} elements")


class LimitExceeded(CentralExtError):
    def __init__(self, limit, what="enumeration"):
        self.limit = limit
        super().__init__(f"{what} exceeded limit of {limit}")


class IncompatiblePartition(CentralExtError):
    pass


class CarrierMismatch(CentralExtError):
    pass


class NotGenerated(CentralExtError):
    pass


class NotCentral(CentralExtError):
    pass


class DecompositionFailed(CentralExtError):
    pass


class NotASection(CentralExtError):
    pass


class NotIdempotent(CentralExtError):
    pass


class NotSurjective(CentralExtError):
    pass


class IncompatibleResult(CentralExtError):
    pass


class VerificationFailed(CentralExtError):
    pass


class NoIdempotent(CentralExtError):
    pass


class SplittingNotFound(CentralExtError):
    pass


class HypothesisFailed(CentralExtError):
    pass


class SizeSkipped(CentralExtError):
    """Raised (or recorded) when a computation is refused because of size."""
