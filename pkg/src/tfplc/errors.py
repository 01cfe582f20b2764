"""Exception hierarchy. Every error carries a stable ``code`` string."""


class TfplcError(Exception):
    """Base class; ``code`` names the failure mode (e.g. ``NOT_AN_EMBEDDING``)."""

    def __init__(self, code: str, message: str = ""):
        self.code = code
        super().__init__(f"{code}: {message}" if message else code)


class EmbeddingError(TfplcError):
    pass


class TargetError(TfplcError):
    pass


class EngineError(TfplcError):
    pass


class NoColouringError(TfplcError):
    def __init__(self, message: str = ""):
        super().__init__("NO_COLOURING", message)


class EnumerationError(TfplcError):
    pass


class FormatError(TfplcError):
    """Raised by the instance and planar_code readers; ``line`` is 1-based when known."""

    def __init__(self, code: str, message: str = "", line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(code, message)
