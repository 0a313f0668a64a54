"""Exception types shared by all modules."""


class RelPhaseError(Exception):
    """Base class for every error raised by this package."""


class ContractViolation(RelPhaseError, ValueError):
    """An input violates a documented precondition (shape, norm, range)."""


class UndefinedPhase(RelPhaseError):
    """A Pancharatnam/Bargmann phase is requested across an (almost) orthogonal pair."""

    def __init__(self, message, overlap=None, index=None):
        super().__init__(message)
        self.overlap = overlap
        self.index = index


class NoUniqueGeodesic(RelPhaseError):
    """Endpoints are antipodal in ray space."""


class TruncationError(RelPhaseError):
    """A Fock-space truncation leaves more than the allowed tail probability."""

    def __init__(self, message, tail=None):
        super().__init__(message)
        self.tail = tail


class SingularConnection(RelPhaseError):
    """The connection one-form has a vanishing denominator on the path."""

    def __init__(self, message, t=None, segment=None):
        super().__init__(message)
        self.t = t
        self.segment = segment


class PostselectionImpossible(RelPhaseError):
    def __init__(self, message, probability=None, step=None):
        super().__init__(message)
        self.probability = probability
        self.step = step


class ZeroVisibility(RelPhaseError):
    def __init__(self, message, visibility=None, step=None):
        super().__init__(message)
        self.visibility = visibility
        self.step = step


class RankDeficient(RelPhaseError):
    """A density operator that must be faithful has (numerically) zero eigenvalues."""

    def __init__(self, message, min_eigenvalue=None, index=None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue
        self.index = index
