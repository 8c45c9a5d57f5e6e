"""Exception hierarchy shared by all margindisc modules."""


class MarginDiscError(Exception):
    """Base class for every error raised by this package."""


class NotHermitian(MarginDiscError):
    pass


class NotUnitary(MarginDiscError):
    pass


class NoConvergence(MarginDiscError):
    """An iterative dense solver exceeded its sweep budget."""


class DimensionMismatch(MarginDiscError):
    pass


class InvalidPriors(MarginDiscError):
    pass


class NotProjective(MarginDiscError):
    """Matrix products are not proportional to the table product."""


class DegenerateDraw(MarginDiscError):
    """Random commutant element failed to split into irreducible copies."""


class AlignmentFailure(MarginDiscError):
    """Intertwiner between equivalent irreducible copies did not verify."""


class WitnessMismatch(MarginDiscError):
    """Analytic optimum not reproduced by its own (input, POVM) witness."""


class CertificationFailure(MarginDiscError):
    """Numerical optimizer exceeded the analytic optimum: correctness alarm."""


class CapExceeded(MarginDiscError):
    """Requested construction is larger than the documented size cap."""


class SchemaError(MarginDiscError):
    """Problem file violates the documented JSON schema."""

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class ValidationError(MarginDiscError):
    """Problem file is schema-valid but fails a numerical invariant."""

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")
