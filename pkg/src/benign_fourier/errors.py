"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class NonInterpolableError(ArithmeticError):
    """A sampled Fourier mode has no aliased feature with nonzero weight.

    ``mode`` is the offending frequency in the sample spectrum.
    """

    def __init__(self, mode, message=None):
        self.mode = int(mode)
        super().__init__(
            message
            or f"mode k={self.mode} has nonzero data but its alias set carries zero weight"
        )


class UnsupportedError(NotImplementedError):
    """The requested computation has no implementation for this input class."""


class NotGolombRulerError(InvalidArgumentError):
    """Marks with a repeated pairwise difference.

    ``collisions`` maps each repeated difference to the mark pairs producing it.
    """

    def __init__(self, collisions):
        self.collisions = collisions
        parts = [f"{diff}: {pairs}" for diff, pairs in sorted(collisions.items())]
        super().__init__("repeated differences " + "; ".join(parts))
