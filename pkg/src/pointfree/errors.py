"""Exception hierarchy.

Every mathematical failure carries a ``witness`` so that reports can show
the concrete counterexample (an element, a pair, a sieve, ...).
"""


class PointfreeError(Exception):
    """Base class for all errors raised by this package."""

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


# input / structural problems

class CycleError(PointfreeError):
    pass


class DuplicateElementError(PointfreeError):
    pass


class UnknownElementError(PointfreeError):
    pass


class MeetAbsentError(PointfreeError):
    pass


class ParseError(PointfreeError):
    pass


class UnknownReference(PointfreeError):
    pass


class SizeLimitExceeded(PointfreeError):
    pass


class SiteMismatch(PointfreeError):
    pass


# violated laws

class LawViolation(PointfreeError):
    def __init__(self, law, witness=None, message=""):
        super().__init__(message or f"{law} law violated at {witness!r}", witness)
        self.law = law


class NotDistributive(LawViolation):
    def __init__(self, witness=None):
        super().__init__("distributivity", witness)


class FlagMissing(PointfreeError):
    pass


class FunctorialityViolation(PointfreeError):
    pass


class SquareViolation(PointfreeError):
    pass


# executable theorems: these must never fire

class InternalTheoremViolation(PointfreeError):
    pass


class BijectionFailure(PointfreeError):
    pass


class FactorizationFailure(PointfreeError):
    pass


class IsoFailure(PointfreeError):
    pass
