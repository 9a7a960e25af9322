from typing import Optional


class GendrvError(Exception):
    """Base class for every error raised by the gendrv library"""


class InvalidDegree(GendrvError):
    """Derivator degree outside {1, 2, 3}"""

    def __init__(self, degree):
        super().__init__(f"Derivator degree must be 1, 2 or 3, got {degree!r}")
        self.degree = degree


class SingularSystem(GendrvError):
    """Interpolation system could not be solved reliably"""


class MissingTower(GendrvError):
    """Analytic coefficients requested for a target without a derivative tower"""


class ParseError(GendrvError):
    """Malformed expression text"""

    def __init__(self, offset: int, expected: str, text: str = ""):
        super().__init__(f"Parse error at offset {offset}: expected {expected}")
        self.offset = offset
        self.expected = expected
        self.text = text


class ExponentError(ParseError):
    """Exponent of ^ is not an integer literal"""

    def __init__(self, offset: int, text: str = ""):
        GendrvError.__init__(self, f"Exponent at offset {offset} must be an integer literal")
        self.offset = offset
        self.expected = "integer literal"
        self.text = text


class DomainError(GendrvError):
    """Target function undefined at the evaluation point"""


class DegenerateCubic(GendrvError):
    """Leading coefficient of a cubic is negligible"""


class ConfigError(GendrvError):
    """Invalid solver or sweep configuration"""


class ExportError(GendrvError):
    """Writing or reading a result file failed"""

    def __init__(self, path, cause: Optional[BaseException] = None, reason: str = ""):
        detail = reason or (str(cause) if cause is not None else "unknown error")
        super().__init__(f"Could not access '{path}': {detail}")
        self.path = path
        self.cause = cause
