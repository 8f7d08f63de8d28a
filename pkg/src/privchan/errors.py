"""Exception hierarchy shared by every module."""


class PrivchanError(ValueError):
    """Base class for all library errors."""


class InvalidStateError(PrivchanError):
    """A Bloch vector or density operator is not a physical qubit state."""


class NotHermitianError(PrivchanError):
    pass


class NotUnitaryError(PrivchanError):
    pass


class InvalidDistributionError(PrivchanError):
    """Probabilities are negative or do not sum to one."""


class NotCompletelyPositiveError(PrivchanError):
    pass


class InfeasibleThetaError(PrivchanError):
    """Requested ciphertext distance cannot be reached for the plaintext set."""


class LengthMismatchError(PrivchanError):
    pass


class InvalidRotationError(PrivchanError):
    """A 3x3 matrix is not a proper rotation of the Bloch ball."""
