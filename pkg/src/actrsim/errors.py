"""Exception hierarchy for the engine and its harness."""


class EngineError(Exception):
    """Base class for all errors raised by this package."""


# -- chunk store --------------------------------------------------------------

class DuplicateType(EngineError):
    pass


class DuplicateSlot(EngineError):
    pass


class UnknownType(EngineError):
    pass


class UnknownSlot(EngineError):
    pass


class DuplicateChunkName(EngineError):
    pass


class UnknownChunk(EngineError):
    pass


# -- buffer system -------------------------------------------------------------

class DuplicateBuffer(EngineError):
    pass


class UnknownBuffer(EngineError):
    pass


class EmptyBuffer(EngineError):
    pass


class DescriptionMismatch(EngineError):
    """A chunk description's name/type field contradicts the chunk it is applied to."""


# -- scheduler ------------------------------------------------------------------

class TimeInPast(EngineError):
    pass


# -- model parser ----------------------------------------------------------------

class ModelSyntaxError(EngineError):
    """Malformed model text. Carries the 1-based source position."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class DuplicateRuleName(ModelSyntaxError):
    pass


class DuplicateBufferTest(ModelSyntaxError):
    pass


class UnboundRhsVariable(ModelSyntaxError):
    pass


class UnknownAnnotationTarget(ModelSyntaxError):
    pass


# -- engine -----------------------------------------------------------------------

class ProviderExhausted(EngineError):
    """A !bind! provider had no next value (or none was registered)."""


# -- experiment harness -------------------------------------------------------------

class MalformedMove(EngineError):
    pass


class WrongLength(EngineError):
    pass


class EmptyResults(EngineError):
    pass
