"""
Beltrami-specific exception classes and exit codes.
"""

from enum import IntEnum


class BeltramiExitCode(IntEnum):
    INVARIANT_VIOLATION = 249
    PRECONDITION_ERROR = 250
    FIT_FAILURE = 251
    CONFIG_ERROR = 252
    IO_ERROR = 253
    UNKNOWN_ERROR = 255


class BeltramiError(Exception):
    """
    Base class for Beltrami exceptions.

    Attributes:
        exit_code: The exit code associated with this error.
    """

    exit_code: BeltramiExitCode = BeltramiExitCode.UNKNOWN_ERROR


class ConfigError(BeltramiError):
    """
    Raised when a run configuration fails schema validation.

    Attributes:
        exit_code: The configuration error exit code.
    """

    exit_code: BeltramiExitCode = BeltramiExitCode.CONFIG_ERROR


class DescriptorIOError(BeltramiError):
    """
    Raised when a field descriptor or config file cannot be read or parsed.

    Attributes:
        exit_code: The I/O error exit code.
        path: The offending path.
    """

    exit_code: BeltramiExitCode = BeltramiExitCode.IO_ERROR

    def __init__(self, path: str, reason: str) -> None:
        self.path = path
        super().__init__(f"{path}: {reason}")


class PreconditionError(BeltramiError):
    """
    Raised when the input of a pipeline stage violates its precondition.

    Attributes:
        exit_code: The precondition exit code.
        stage: Name of the pipeline stage that rejected its input.
    """

    exit_code: BeltramiExitCode = BeltramiExitCode.PRECONDITION_ERROR

    def __init__(self, message: str, stage: str = "") -> None:
        self.stage = stage
        super().__init__(f"[{stage}] {message}" if stage else message)


class UnsupportedDegreeError(PreconditionError):
    """
    Raised when a special function is asked for a degree above its cap.
    """

    def __init__(self, message: str) -> None:
        super().__init__(message, stage="specfun")


class DomainError(PreconditionError):
    """
    Raised when an argument lies outside the domain of a function.
    """

    def __init__(self, message: str) -> None:
        super().__init__(message, stage="specfun")


class DegreeMismatchError(PreconditionError):
    """
    Raised when harmonics of different degrees are combined.
    """

    def __init__(self, message: str) -> None:
        super().__init__(message, stage="assemble")


class AntipodalCentersError(PreconditionError):
    """
    Raised when multi-center inputs contain coincident or antipodal points.
    """

    def __init__(self, message: str) -> None:
        super().__init__(message, stage="multi_center")


class NonOrthogonalError(PreconditionError):
    """
    Raised when an isometry matrix is not special orthogonal, or a group
    generator does not have the claimed order.
    """

    def __init__(self, message: str) -> None:
        super().__init__(message, stage="isometry")


class LatticeError(PreconditionError):
    """
    Raised when a plane-wave direction is not a rescaled lattice vector, or
    a lattice request exceeds the enumeration cap.
    """

    def __init__(self, message: str) -> None:
        super().__init__(message, stage="lattice")


class ZeroFieldError(PreconditionError):
    """
    Raised when a ratio is requested for a field that vanishes identically.
    """

    def __init__(self, message: str) -> None:
        super().__init__(message, stage="helicity")


class DerivativeUnavailableError(PreconditionError):
    """
    Raised when an evaluator cannot provide the requested derivative order.
    """

    def __init__(self, message: str, stage: str = "norms") -> None:
        super().__init__(message, stage=stage)


class TransversalityError(PreconditionError):
    """
    Raised when a trajectory crosses a Poincare section tangentially.
    """

    def __init__(self, message: str) -> None:
        super().__init__(message, stage="section")


class OrbitEscapeError(PreconditionError):
    """
    Raised when a traced orbit leaves the region of interest.
    """

    def __init__(self, message: str) -> None:
        super().__init__(message, stage="section")


class FitFailure(BeltramiError):
    """
    Raised when an atom fit misses the caller's tolerance.

    Attributes:
        exit_code: The fit failure exit code.
        achieved_error: The sup-error the fit actually reached.
    """

    exit_code: BeltramiExitCode = BeltramiExitCode.FIT_FAILURE

    def __init__(self, achieved_error: float, tolerance: float) -> None:
        self.achieved_error = achieved_error
        self.tolerance = tolerance
        super().__init__(
            f"[atoms] achieved sup-error {achieved_error:.3e} "
            f"exceeds tolerance {tolerance:.3e}"
        )


class InvariantViolation(BeltramiError):
    """
    Raised when a downstream check finds a broken invariant (eigen-identity,
    tangency, conjugate symmetry, ...).

    Attributes:
        exit_code: The invariant violation exit code.
    """

    exit_code: BeltramiExitCode = BeltramiExitCode.INVARIANT_VIOLATION
