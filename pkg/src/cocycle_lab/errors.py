"""Exception hierarchy shared by every module of the package."""


class CocycleLabError(Exception):
    """Base class for all package errors."""


class NonAdmissibleAlphabet(CocycleLabError):
    pass


class NotIrreducible(CocycleLabError):
    pass


class InadmissibleSequence(CocycleLabError):
    pass


class BracketUndefined(CocycleLabError):
    pass


class BudgetExceeded(CocycleLabError):
    pass


class NotSL2(CocycleLabError):
    pass


class DegenerateMatrix(CocycleLabError):
    pass


class WordNotInTable(CocycleLabError):
    pass


class NotBunched(CocycleLabError):
    pass


class NotOnStableSet(CocycleLabError):
    pass


class NotOnUnstableSet(CocycleLabError):
    pass


class NotOneStep(CocycleLabError):
    pass


class DegenerateSingularGap(CocycleLabError):
    pass


class EmptySearchSet(CocycleLabError):
    pass


class IdentityResidualExceeded(CocycleLabError):
    pass


class ConeUndefined(CocycleLabError):
    pass


class ConeStepViolated(CocycleLabError):
    pass


class NoReturn(CocycleLabError):
    pass


class SpecParseError(CocycleLabError):
    """Raised for malformed spec files; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
