"""Exception types raised by the library."""


class CylcertError(Exception):
    pass


class MissingParameter(CylcertError):
    pass


class UnknownCurve(CylcertError):
    pass


class BothSidesParametric(CylcertError):
    pass


class Underdetermined(CylcertError):
    pass


class NoSolution(CylcertError):
    pass


class SingularGram(CylcertError):
    pass


class NotThroughPoint(CylcertError):
    pass


class NameCollision(CylcertError):
    pass


class NotMinusOne(CylcertError):
    pass


class ScriptError(CylcertError):
    """A surgery step failed; ``index`` is its position in the script."""

    def __init__(self, index, cause):
        super().__init__(f"step {index}: {cause}")
        self.index = index
        self.cause = cause


class Stuck(CylcertError):
    pass


class LeftoverCurve(CylcertError):
    pass


class CertificateSyntaxError(CylcertError):
    def __init__(self, msg, line, column):
        super().__init__(f"{msg} (line {line}, column {column})")
        self.line = line
        self.column = column


class SchemaError(CylcertError):
    def __init__(self, path, msg):
        super().__init__(f"{path}: {msg}")
        self.path = path


class NonCanonicalRational(SchemaError):
    pass
