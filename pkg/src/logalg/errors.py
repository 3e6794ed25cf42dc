"""Exception hierarchy shared by every module."""


class LogAlgError(Exception):
    """Base class for all toolkit errors."""


class ResourceExceeded(LogAlgError):
    """A completion procedure (Groebner basis, Hilbert basis, ...) hit its cap."""


class NotAComplex(LogAlgError):
    pass


class NonCommuting(LogAlgError):
    pass


class NotIntegral(LogAlgError):
    pass


class TorsionGp(LogAlgError):
    """The group completion has torsion where a lattice embedding is needed."""


class NotVirtuallySurjective(LogAlgError):
    pass


class IllDefinedMap(LogAlgError):
    """A map does not respect the relations of its source."""


class UnsupportedPresentation(LogAlgError):
    pass


class NotAPoint(LogAlgError):
    pass


class NotMonomial(LogAlgError):
    pass


class TruncationTooLow(LogAlgError):
    pass


class TooLarge(LogAlgError):
    pass


class NotStrict(LogAlgError):
    pass


class NotSquareZero(LogAlgError):
    pass


class NotADerivation(LogAlgError):
    pass


class ParseError(LogAlgError):
    def __init__(self, message, line=0, col=0, expected=()):
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        loc = f"{line}:{col}: " if line else ""
        exp = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{loc}{message}{exp}")


class ResolveError(ParseError):
    pass
