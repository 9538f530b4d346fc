"""Error types shared across the localisation packages."""


class BinlocError(Exception):
    """Base class for all errors raised by this project."""


class DomainError(BinlocError, ValueError):
    """An argument lies outside the domain on which the operation is defined."""


class ModelDomainError(DomainError):
    """A detection model was queried outside the range it is tabulated on."""


class ConfigError(BinlocError, ValueError):
    """A scenario or benchmark configuration is invalid.

    Attributes:
        diagnostics: list of "<field or line>: <message>" strings
    """

    def __init__(self, message: str, diagnostics=None):
        self.diagnostics = list(diagnostics or [])
        if self.diagnostics:
            message = message + "\n" + "\n".join(f"  - {d}" for d in self.diagnostics)
        super().__init__(message)


class EnvelopeViolation(BinlocError, ValueError):
    """The assumed detection model does not dominate the true one."""


class DegenerateWeights(BinlocError, ValueError):
    """Importance weights are all zero."""


class NumericalUnderflow(BinlocError, RuntimeError):
    """The Bayes normaliser fell below the representable floor."""


class ParticleDegeneracy(BinlocError, RuntimeError):
    """Every particle weight underflowed during a particle-filter update."""


class NoQualifyingTrials(BinlocError, RuntimeError):
    """No Monte Carlo trial met the entropy threshold."""


class BoundsViolation(BinlocError, RuntimeError):
    """An agent left the region reachable under the formation control law."""
