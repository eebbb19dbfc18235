"""Exception types shared across the package.

Each error carries enough context to be reported by the CLI. The CLI maps
``InputError`` subclasses to exit code 2, ``GuardExceeded`` subclasses to
exit code 3 and ``InternalAssertion`` subclasses to exit code 4.
"""

from __future__ import annotations


class NdpError(Exception):
    """Base class for all package errors."""


class InputError(NdpError):
    """The caller supplied malformed or inconsistent input."""


class GuardExceeded(NdpError):
    """An exhaustive oracle was asked to run above its size guard."""


class InternalAssertion(NdpError):
    """A guarantee that should hold by construction was violated."""


class MalformedRotation(InputError):
    pass


class NonPlanarRotation(InputError):
    pass


class Unreachable(NdpError):
    pass


class NoEnclosingCycle(NdpError):
    pass


class DepthUnavailable(NdpError):
    """Raised when fewer concentric cycles exist than requested.

    ``depth`` is the first index that could not be built and ``cycles`` holds
    the cycles that were built before it.
    """

    def __init__(self, depth: int, cycles: list):
        super().__init__(f"no enclosing cycle at depth {depth}")
        self.depth = depth
        self.cycles = cycles


class PreconditionViolated(InputError):
    pass


class NotAForest(InputError):
    pass


class ViolationBoundExceeded(InternalAssertion):
    pass


class TooLarge(GuardExceeded):
    pass


class TooManyTerminals(GuardExceeded):
    pass


class SearchExhausted(InternalAssertion):
    pass


class ShiftTooLarge(InternalAssertion):
    pass


class CannotExtend(NdpError):
    pass


class NotWellLinkedDetected(NdpError):
    """Enclosure growth found a terminal set that is not well-linked.

    ``certificate`` is a pair of terminal sets with too few disjoint paths.
    """

    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class FaceTooClose(NdpError):
    def __init__(self, vertex: int, distance: int):
        super().__init__(f"vertex {vertex} on the outer face is at distance {distance}")
        self.vertex = vertex
        self.distance = distance


class BadParams(InputError):
    pass
