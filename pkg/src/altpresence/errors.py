"""Exception hierarchy shared by every module."""

from __future__ import annotations


class AltpresenceError(Exception):
    """Base class for all errors raised by this package."""


class MalformedDoi(AltpresenceError, ValueError):
    pass


class IngestError(AltpresenceError):
    """A stream could not be ingested.

    ``stream`` names the file (or stream label), ``row`` is the 1-based line
    number in that stream (the header is line 1) or ``None`` for stream-level
    failures such as a missing header or undecodable bytes.
    """

    def __init__(self, stream: str, row: int | None, reason: str):
        self.stream = stream
        self.row = row
        self.reason = reason
        where = f"{stream}:{row}" if row is not None else stream
        super().__init__(f"{where}: {reason}")


class ReferentialIntegrity(IngestError):
    pass


class EmptySet(AltpresenceError, ValueError):
    pass


class InconsistentAggregates(AltpresenceError, ValueError):
    pass


class DegenerateInput(AltpresenceError, ValueError):
    pass


class LengthMismatch(AltpresenceError, ValueError):
    pass


class InvalidConfig(AltpresenceError, ValueError):
    pass
