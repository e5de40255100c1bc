"""Exception hierarchy shared by all modules."""


class ShiftError(Exception):
    """Base class for every error raised by the library."""


class EmptyShift(ShiftError):
    pass


class CapExceeded(ShiftError):
    pass


class WordNotInLanguage(ShiftError):
    pass


class TooShort(ShiftError):
    pass


class NotIrreducible(ShiftError):
    pass


class NotSFT(ShiftError):
    pass


class NotSFTDomain(NotSFT):
    pass


class NotSynchronizing(ShiftError):
    pass


class NotSubshift(ShiftError):
    pass


class NotProper(ShiftError):
    pass


class NotFactor(ShiftError):
    pass


class EntropyTie(ShiftError):
    pass


class SearchExhausted(ShiftError):
    pass


class EmbeddingNotFound(ShiftError):
    pass


class ExtensionSearchFailed(ShiftError):
    pass


class PlanInfeasible(ShiftError):
    pass


class ConditionFailed(ShiftError):
    def __init__(self, condition, detail=None):
        self.condition = condition
        self.detail = detail
        msg = condition if detail is None else f"{condition}: {detail}"
        super().__init__(msg)


class MalformedWitness(ShiftError):
    pass


class ParseError(ShiftError):
    def __init__(self, message, location=None):
        self.location = location
        super().__init__(message if location is None else f"{location}: {message}")


class UnknownGallery(ShiftError):
    pass
