"""Exception types raised across the package."""


class DarlingtonError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(DarlingtonError):
    """Matrix or realization dimensions are inconsistent."""


class ConvergenceError(DarlingtonError):
    """An iterative decomposition failed to converge within its budget."""


class NotContractiveError(DarlingtonError):
    """The transfer function is not strictly contractive where required."""


class PoleError(DarlingtonError):
    """Evaluation requested at (or too close to) a pole."""


class NotSymmetricError(DarlingtonError):
    """A matrix or transfer function fails a required symmetry check."""


class SubspaceError(DarlingtonError):
    """An invariant-subspace or graph-subspace extraction failed."""


class SpectralSplitError(DarlingtonError):
    """Eigenvalue/root clustering could not be resolved consistently."""


class ReductionError(DarlingtonError):
    """A degree-reduction step failed (no admissible direction, or the
    degree did not drop as required)."""


class ValidationError(DarlingtonError):
    """A computed object violates one of its contractual invariants."""
