"""Exception and warning types shared across the package."""


class GridMismatchError(ValueError):
    """Two objects live on different grids."""


class NumericalError(RuntimeError):
    """A discretization is not trustworthy (e.g. mass piled up at the grid edge)."""


class BoundaryMassWarning(UserWarning):
    """A sampled function is not negligible at the edge of its grid."""
