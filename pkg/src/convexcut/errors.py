"""Exception taxonomy shared across the package.

Every error carries a stable ``code`` string so callers (and the CLI,
which maps errors to exit status and a machine-readable line) never
have to match on exception class names or message text.
"""

from __future__ import annotations


class DomainError(Exception):
    """Base class for all domain-level failures.

    Subclasses set ``code`` as a class attribute.  The message is free
    text meant for humans; anything programmatic should key on ``code``.
    """

    code = "DomainError"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)


# ---------------------------------------------------------------------------
# surface construction


class NonInvolutiveGluing(DomainError):
    code = "NonInvolutiveGluing"


class NonOrientable(DomainError):
    code = "NonOrientable"


class Disconnected(DomainError):
    code = "Disconnected"


class UnsupportedSurface(DomainError):
    code = "UnsupportedSurface"


# ---------------------------------------------------------------------------
# curve systems and coloring


class NotNormal(DomainError):
    code = "NotNormal"


class NotDividing(DomainError):
    code = "NotDividing"


class EmptyOnComponent(DomainError):
    code = "EmptyOnComponent"


class IsArc(DomainError):
    code = "IsArc"


class NotTransverse(DomainError):
    code = "NotTransverse"


# ---------------------------------------------------------------------------
# surgery arcs


class WrongCrossingCount(DomainError):
    code = "WrongCrossingCount"


class EndpointsOffDividingSet(DomainError):
    code = "EndpointsOffDividingSet"


class InvalidArc(DomainError):
    code = "InvalidArc"


class NoImbalance(DomainError):
    code = "NoImbalance"


# ---------------------------------------------------------------------------
# sutured input and torus boundaries


class ToroidalSuturePresent(DomainError):
    code = "ToroidalSuturePresent"


class MissingSuture(DomainError):
    code = "MissingSuture"


class NotATorus(DomainError):
    code = "NotATorus"


class AlreadyDivided(DomainError):
    code = "AlreadyDivided"


# ---------------------------------------------------------------------------
# boundary-parallel systems and cutting


class NoIntersections(DomainError):
    code = "NoIntersections"


class InconsistentOrientations(DomainError):
    code = "InconsistentOrientations"


class AlternationViolation(DomainError):
    code = "AlternationViolation"


class BadCutPresentation(DomainError):
    code = "BadCutPresentation"


class NotABall(DomainError):
    code = "NotABall"


# ---------------------------------------------------------------------------
# layered blocks


class GenusTooSmall(DomainError):
    code = "GenusTooSmall"


class InterfaceMismatch(DomainError):
    code = "InterfaceMismatch"


class NotNonSeparatingPair(DomainError):
    code = "NotNonSeparatingPair"


class BadK(DomainError):
    code = "BadK"


# ---------------------------------------------------------------------------
# document layer


class DocumentError(DomainError):
    """Base for failures while reading or writing document files.

    ``location`` is a ``/``-separated path into the document (e.g.
    ``surfaces/disk0/faces``) when the failing node is known.
    """

    code = "DocumentError"

    def __init__(self, message: str = "", location: str | None = None):
        self.location = location
        if location:
            message = f"{message} (at {location})" if message else f"at {location}"
        super().__init__(message)


class DocumentSyntaxError(DocumentError):
    code = "SyntaxError"


class UnknownVersion(DocumentError):
    code = "UnknownVersion"


class DanglingReference(DocumentError):
    code = "DanglingReference"


class InvariantViolation(DocumentError):
    code = "InvariantViolation"
