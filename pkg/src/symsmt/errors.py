class SymSmtError(Exception):
    pass


class ParseError(SymSmtError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.message = message


class UnsupportedFeature(SymSmtError):
    """Raised for commands or operators outside the supported fragment."""

    def __init__(self, feature: str, line: int | None = None, column: int | None = None):
        where = f" at {line}:{column}" if line is not None else ""
        super().__init__(f"unsupported feature {feature!r}{where}")
        self.feature = feature


class SortMismatch(SymSmtError):
    pass


class ResourceExceeded(SymSmtError):
    pass
