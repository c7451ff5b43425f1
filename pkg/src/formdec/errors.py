"""Exception hierarchy shared by all modules."""


class FormdecError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(FormdecError):
    """Malformed or inconsistent input data (bad shapes, NaNs, bad files)."""


class DimensionMismatchError(ValidationError):
    """Two operands live on spaces of different dimension."""


class NotHermitianError(ValidationError):
    """A matrix expected to be Hermitian is not, beyond tolerance."""


class NotPsdError(ValidationError):
    """A matrix expected to be positive semidefinite has an eigenvalue
    below the tolerance floor."""


class EigenSolverError(FormdecError):
    """The underlying Hermitian eigensolver failed to converge."""


class PreconditionError(FormdecError):
    """A mathematical precondition of an operation does not hold
    (e.g. a form is not dominated when domination is required)."""


class ConsistencyError(FormdecError):
    """Two computations that must agree by theory disagreed numerically.
    Indicates a bug or a badly conditioned input, never a normal outcome."""
