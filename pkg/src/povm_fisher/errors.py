"""Exception hierarchy.

Every error carries a ``code`` equal to its class name; the CLI reports that
code verbatim in its diagnostics.
"""


class PovmFisherError(Exception):
    """Base class for all domain errors raised by this package."""

    @property
    def code(self) -> str:
        return type(self).__name__


class InvalidInput(PovmFisherError, ValueError):
    pass


class DimensionMismatch(InvalidInput):
    pass


class NotHermitian(InvalidInput):
    pass


class TraceNotOne(InvalidInput):
    pass


class NotPositive(InvalidInput):
    pass


class RankDeficientState(InvalidInput):
    pass


class EffectError(InvalidInput):
    """Problem with a single POVM effect; ``index`` names the offending outcome."""

    def __init__(self, index: int, message: str):
        super().__init__(message)
        self.index = index


class EffectNotPositive(EffectError):
    pass


class EffectZero(EffectError):
    pass


class CompletenessViolated(InvalidInput):
    pass


class NotMeanZero(InvalidInput):
    pass


class NotTraceless(InvalidInput):
    pass


class ZeroDirection(InvalidInput):
    pass


class DimensionNotTwo(InvalidInput):
    pass


class BasisStateMismatch(InvalidInput):
    pass


class NotInformationallyComplete(PovmFisherError):
    pass


class ICGenerationFailed(PovmFisherError):
    pass


class SpectrumOutOfRange(PovmFisherError, ArithmeticError):
    pass


class SpectrumAnomaly(PovmFisherError, ArithmeticError):
    pass


class DegenerateDirection(PovmFisherError, ArithmeticError):
    pass


class FormatError(InvalidInput):
    """Input file is not valid JSON or does not follow the declared schema."""
