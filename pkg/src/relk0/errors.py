"""Exception types shared across the package."""


class Relk0Error(Exception):
    """Base class for library errors."""


class NotInvertible(Relk0Error):
    pass


class NoSolution(Relk0Error):
    pass


class BadSize(Relk0Error):
    pass


class NotFinite(Relk0Error):
    pass


class NotLPower(Relk0Error):
    pass


class PrecisionTooLow(Relk0Error):
    pass


class PrecisionMismatch(Relk0Error):
    """Ideal membership differs between the working and guard precision."""


class NotIntegral(Relk0Error):
    pass


class TooLarge(Relk0Error):
    pass


class NotAComplex(Relk0Error):
    pass


class WrongConcentration(Relk0Error):
    pass


class SplitFailure(Relk0Error):
    pass


class BadResidue(Relk0Error):
    pass


class IncompatibleFields(Relk0Error):
    pass


class Ramified(Relk0Error):
    pass


class BadB(Relk0Error):
    pass


class ParseError(Relk0Error):
    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
