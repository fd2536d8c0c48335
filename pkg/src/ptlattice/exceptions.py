"""Exception hierarchy shared by all ptlattice modules."""


class PtLatticeError(Exception):
    """Base class for every error raised by ptlattice."""


class InvalidDimensionError(PtLatticeError, ValueError):
    """Matrix dimension is not a positive even integer (or otherwise unusable)."""


class ContractViolationError(PtLatticeError, ValueError):
    """An input breaks a documented precondition (e.g. non-Hermitian input to a Hermitian solver)."""


class ConvergenceError(PtLatticeError):
    """An iterative kernel did not converge; ``partial`` holds whatever was computed."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class BracketError(PtLatticeError, ValueError):
    """A bisection bracket does not enclose a switching point."""


class ResolutionError(PtLatticeError):
    """Grid refinement could not resolve branch matching."""


class DegenerateTopologyError(PtLatticeError):
    """The spectral locus is at (or numerically too close to) a topology change."""


class ExactnessError(PtLatticeError):
    """A quantity expected to be integral drifted beyond the rounding tolerance."""


class ConstructionError(PtLatticeError):
    """A requested object (e.g. a CPT charge) cannot be constructed for this input."""
