"""Exception types shared across the package."""


class QKError(Exception):
    """Base class for all qkflag errors."""


class RegistryMismatch(QKError):
    """Operands were built over different variable registries."""


class InexactDivision(QKError):
    """Polynomial division left a nonzero remainder."""


class NonInvertibleBinding(QKError):
    """A substitution needs the inverse of a value that is not a unit."""


class IndexOutOfRange(QKError):
    """An index argument fell outside its allowed range."""


class InvalidShape(QKError):
    """Flag shape data violates 1 <= r_1 < ... < r_k <= n-1."""


class ShapeMismatch(QKError):
    """Operands are tagged with different flag shapes."""


class EliminationFailure(QKError):
    """Internal consistency check failed while eliminating generators."""


class CapExceeded(QKError):
    """A reduction needed Novikov degree beyond the configured cap."""


class SingularSystem(QKError):
    """A division by a non-unit base coefficient would be required."""


class InconsistentSystem(QKError):
    """A linear system over the base ring has no exact solution."""


class PoleAtQ1(QKError):
    """An operator coefficient is singular at q = 1."""


class ExponentOverflow(QKError):
    """An exponent exceeded the configured magnitude guard."""
