"""Engine-wide exception types."""


class KoszulabError(Exception):
    """Base class for all engine errors."""


class DivisionByZero(KoszulabError):
    pass


class MixedFields(KoszulabError):
    """Operands belong to different coefficient fields."""


class MixedRings(KoszulabError):
    """Operands belong to different polynomial rings."""


class PolySyntaxError(KoszulabError):
    """Parse failure; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownVariable(PolySyntaxError):
    pass


class DegreeOverflow(KoszulabError):
    """An exponent exceeded the fixed-width per-variable bound."""


class NotGraded(KoszulabError):
    """A graded-only operation received ungraded data."""


class ZeroElement(KoszulabError):
    """A sequence entry or localization element is zero."""


class BadBounds(KoszulabError):
    pass


class LiftFailure(KoszulabError):
    """A homology lift failed; indicates an internal bug, never expected."""


class UnstableWindow(KoszulabError):
    """Stage bound too small for every probed degree to stabilize."""
