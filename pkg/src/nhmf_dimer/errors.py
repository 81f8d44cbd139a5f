"""Exception types shared across the package."""


class ModelError(Exception):
    """Base class for all domain errors raised by this package."""


class DimensionError(ModelError, ValueError):
    """Vector/matrix shapes do not match the operation's contract."""


class InputError(ModelError, ValueError):
    """Invalid input values (non-finite entries, zero vectors, bad grids)."""


class GaugeSingularError(ModelError, ArithmeticError):
    """A c-norm denominator a^2 + b^2 collapsed below the evaluability threshold.

    Carries the offending |a^2 + b^2| magnitude so callers can diagnose how
    close to an exceptional point the input sits.
    """

    def __init__(self, message, magnitude):
        super().__init__(f"{message} (|c-norm| = {magnitude:.3e})")
        self.magnitude = float(magnitude)


class ConvergenceError(ModelError, RuntimeError):
    """An iterative solve failed to converge; carries the last residual."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (last residual = {residual:.3e})")
        self.residual = float(residual)


class BracketError(ModelError, ValueError):
    """A bisection bracket does not actually bracket the sought transition."""


class PairingError(ModelError, RuntimeError):
    """A complex stationary point has no conjugate partner in the given set."""


class CensusError(ModelError, LookupError):
    """A requested solution branch is absent from the stationary-point set."""


class PoleError(ModelError, ZeroDivisionError):
    """Evaluation exactly at the r = 1 contact pole."""


class DegenerateRootsError(ModelError, ArithmeticError):
    """The cleared reflection polynomial vanished identically."""
