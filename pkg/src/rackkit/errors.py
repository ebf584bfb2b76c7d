"""Exception hierarchy. The CLI maps each family to an exit code."""


class RackInputError(ValueError):
    """Malformed input: bad table shape, out-of-range entries, unknown names."""


class RackAxiomError(RackInputError):
    """A well-formed table that is not a rack."""

    def __init__(self, report):
        self.report = report
        super().__init__(report.message)


class CapExceededError(RuntimeError):
    """A configured resource cap was hit; the answer is unknown, not negative."""


class EnumerationOverflow(CapExceededError):
    pass


class OrthocomplementUndecided(CapExceededError):
    pass


class TheoremViolation(AssertionError):
    """Two independent computations contradict a proven statement.

    Never caught internally; it means either a bug or a counterexample.
    """
