"""Exception hierarchy shared by all modules."""


class BoydMaxwellError(Exception):
    """Base class for all library errors."""


class InputError(BoydMaxwellError):
    """Malformed user input (CLI exit code 2)."""


class CoxSyntaxError(InputError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class LabelRangeError(InputError):
    pass


class AffineInput(BoydMaxwellError):
    pass


class IsotropicMirror(BoydMaxwellError):
    pass


class NotLorentzian(BoydMaxwellError):
    pass


class NotTimelike(BoydMaxwellError):
    pass


class NotSpaceLike(BoydMaxwellError):
    pass


class DegenerateForm(BoydMaxwellError):
    pass


class InsufficientDepth(BoydMaxwellError):
    pass


class UnsupportedDimension(BoydMaxwellError):
    pass


class UnboundedFamily(BoydMaxwellError):
    pass


class NoValidRoot(BoydMaxwellError):
    pass


class AmbiguousRoot(BoydMaxwellError):
    def __init__(self, roots):
        self.roots = tuple(roots)
        super().__init__(f"several admissible roots: {self.roots}")


class IncompatibleBases(BoydMaxwellError):
    pass


class NotCorankOne(BoydMaxwellError):
    pass


class NotLevelTwo(BoydMaxwellError):
    def __init__(self, level: int):
        self.level = level
        super().__init__(f"root system has level {level}, expected 2")
