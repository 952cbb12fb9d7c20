"""Exception types; each maps onto a CLI exit code."""


class LunaError(Exception):
    exit_code = 1


class SchemaError(LunaError):
    """Problem spec failed validation; ``errors`` holds (json path, message) pairs."""

    exit_code = 2

    def __init__(self, errors: list[tuple[str, str]]):
        self.errors = errors
        super().__init__("; ".join(f"{p}: {m}" for p, m in errors))


class CapExceeded(LunaError):
    """A configured size cap or cyclotomic ceiling was hit."""

    exit_code = 3


class OracleMismatch(LunaError):
    exit_code = 4
