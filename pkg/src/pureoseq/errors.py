"""Exception hierarchy and the boolean-with-reasons result type."""

from __future__ import annotations

from dataclasses import dataclass


class PureOSeqError(Exception):
    """Base class for every error raised by this package."""


class GraphParseError(PureOSeqError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyGraphError(PureOSeqError):
    pass


class DisconnectedGraphError(PureOSeqError):
    pass


class EnumerationLimitError(PureOSeqError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"spanning-tree enumeration exceeded the cap of {cap} trees")


class NotASpanningTreeError(PureOSeqError):
    pass


class InvalidTripleError(PureOSeqError):
    """Raised when a vertex triple violates the triconed conditions.

    ``clause`` is one of ``"distinct"``, ``"adjacency"``, ``"parallel"``,
    ``"domination"`` or ``"loop"``.
    """

    def __init__(self, clause: str, message: str):
        self.clause = clause
        super().__init__(f"{clause}: {message}")


class NotReducedError(PureOSeqError):
    pass


class NotTriconedError(PureOSeqError):
    pass


class NotTrirootedError(PureOSeqError):
    pass


class NotWeightedError(PureOSeqError):
    pass


class MaximalError(PureOSeqError):
    """augment_step was asked to grow a forest of maximal degree."""


class MonomialError(PureOSeqError):
    pass


@dataclass(frozen=True)
class Check:
    """Truthy verdict carrying the reason codes of every failed clause."""

    ok: bool
    reasons: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def of(cls, reasons) -> "Check":
        reasons = tuple(reasons)
        return cls(not reasons, reasons)
