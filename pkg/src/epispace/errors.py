"""Exception hierarchy shared by all modules."""


class EpispaceError(Exception):
    """Base class for all errors raised by this package."""


class SignatureError(EpispaceError, ValueError):
    pass


class FormulaSyntaxError(EpispaceError, ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownAtomError(EpispaceError, ValueError):
    def __init__(self, atom: str, offset: int | None = None):
        where = "" if offset is None else f" (at offset {offset})"
        super().__init__(f"unknown atom {atom!r}{where}")
        self.atom = atom
        self.offset = offset


class FormatError(EpispaceError, ValueError):
    """Malformed input file; carries file name, line number and offending token."""

    def __init__(self, message: str, path: str = "<string>", line: int = 0, token: str | None = None):
        loc = f"{path}:{line}" if line else path
        tok = f" near {token!r}" if token is not None else ""
        super().__init__(f"{loc}: {message}{tok}")
        self.path = path
        self.line = line
        self.token = token


class NoSuchBeliefState(EpispaceError, LookupError):
    """No state of the space carries the requested belief set."""

    def __init__(self, message: str, state=None, input_mask=None, target=None):
        super().__init__(message)
        self.state = state
        self.input_mask = input_mask
        self.target = target


class DomainError(EpispaceError, ValueError):
    pass


class NotAPreorder(EpispaceError, ValueError):
    """The relation extracted from an operator is not a total preorder."""


class ConstraintViolation(EpispaceError, ValueError):
    """An assignment breaks ``bel(Psi) <= C`` or the b/C coupling."""


class ScaleExceeded(EpispaceError):
    """The requested exhaustive computation is beyond the configured bound."""
