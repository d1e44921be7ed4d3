"""Exception types shared across the package."""


class PcdynError(Exception):
    """Base class for all package-specific errors."""


class InputError(PcdynError):
    """Malformed or invalid input data (bad JSON, bad matrix, bad arc...)."""


class SingularMatrix(InputError):
    """A Moebius matrix with zero determinant."""


class PoleOnArc(InputError):
    """A piece germ has a pole on the closure of its domain arc."""


class OverlapError(InputError):
    """Piece domains or images overlap on the circle."""


class NotCofinite(InputError):
    """Piece domains or images fail to cover the circle up to a finite set."""


class TagViolation(InputError):
    """A piece germ does not belong to the germ class declared by the tag."""


class EvaluationError(PcdynError):
    """A point could not be evaluated (e.g. no piece on the requested side)."""


class BudgetExceeded(PcdynError):
    """A piece-count or iteration budget was exhausted."""

    def __init__(self, message, pieces=None):
        super().__init__(message)
        self.pieces = pieces


class DegenerateStructure(PcdynError):
    """A structure function that does not describe a circle structure."""
