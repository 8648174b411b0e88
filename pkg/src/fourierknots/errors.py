"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """An argument violates a documented precondition."""


class KnotBudgetError(ValueError):
    """The requested knot multiplicities do not fit in the knot budget.

    Attributes
    ----------
    required : int
        Interior knots consumed by the requested jump multiplicities.
    available : int
        Interior knots the budget actually provides (n - q).
    """

    def __init__(self, required: int, available: int):
        self.required = required
        self.available = available
        super().__init__(
            f"knot budget too small: jump knots need {required} interior "
            f"slots but only {available} are available "
            f"(shortfall {required - available}); increase the control count"
        )


class SpectrumSymmetryError(RuntimeError):
    """Inverse transform of a spectrum expected to be conjugate-symmetric
    produced a significant imaginary part, indicating a filter chain that
    broke the symmetry of a real signal's spectrum."""


class GridFormatError(ValueError):
    """A gridded input file failed to parse or validate."""
