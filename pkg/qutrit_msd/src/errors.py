"""
Error types for the qutrit distillation toolkit.

Every failure raised by the library derives from DistillationError so the CLI
can map the whole family onto a single exit code.
"""


class DistillationError(Exception):
    "Base class for all domain errors raised by qutrit_msd."


class NonInvertible(DistillationError):
    "Raised when asked for the inverse of zero in Z_d."


class DimensionError(DistillationError):
    "Raised when operator shapes do not match."


class InvalidState(DistillationError):
    "Raised when a matrix is not a valid density matrix."


class DomainError(DistillationError):
    "Raised when a coordinate or parameter is outside its allowed range."


class SubspaceError(DistillationError):
    "Raised when a state does not lie in the (a,b,b) eigenspace of A_00."


class PhaseConventionError(DistillationError):
    "Raised when a trivial-syndrome projector does not have rank d^k."


class LogicalAlgebraError(DistillationError):
    "Raised when the logical operators do not form a Weyl pair on the codespace."


class PostselectionImpossible(DistillationError):
    "Raised when the trivial syndrome has (numerically) zero probability."


class NoThresholdInBracket(DistillationError):
    "Raised when both ends of a bisection bracket classify the same way."


class CodeFormatError(DistillationError):
    "Raised when a JSON code description is malformed."
