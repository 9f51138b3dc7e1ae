"""Exception types shared across the package."""


class EmptySpace(ValueError):
    """A measure space needs at least one point."""


class BadWeight(ValueError):
    """Measure weights must be finite and strictly positive."""


class SpaceMismatch(ValueError):
    """Two fields that should live on the same measure space do not."""


class NotIncreasing(ValueError):
    """Breakpoints must be strictly increasing."""


class NotAlternating(ValueError):
    """The function is not in any F_k (slopes must alternate +1, -1, ... )."""


class InconsistentSamples(ValueError):
    """Envelope samples violate the 1-Lipschitz consistency precondition."""


class BadSpec(ValueError):
    """A form descriptor violates one of its invariants."""


class NoConvergence(RuntimeError):
    """An inner proximal solve exhausted its iteration budget or failed its contract."""


class PreconditionFailed(RuntimeError):
    """A check was invoked on an instance that fails its prerequisites."""
