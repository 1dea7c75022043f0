"""Exception types raised by convexseg."""


class ConvexSegError(Exception):
    """Base class for library errors."""


class AllForegroundError(ConvexSegError, ValueError):
    """Mask has no background pixels, so no interface exists."""


class AllBackgroundError(ConvexSegError, ValueError):
    """Mask has no object pixels, so no interface exists."""


class DegenerateClassError(ConvexSegError, ValueError):
    """A GMM class received (almost) zero total weight."""


class EmptyLabelsError(ConvexSegError, ValueError):
    """Scribble-based priors need both object and background labels."""


class EmptyObjectError(ConvexSegError, ValueError):
    """Convexity test on a mask without object pixels."""


class NonFiniteStateError(ConvexSegError, FloatingPointError):
    """An ADMM variable became NaN or infinite."""

    def __init__(self, iteration, name):
        super().__init__(f"non-finite values in {name} at iteration {iteration}")
        self.iteration = iteration
        self.name = name
