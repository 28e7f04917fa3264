"""Exception types shared across the engine.

Every error raised by this package derives from GeolitError so callers can
catch one base class at API boundaries (CLI exit codes, HTTP error bodies).
"""

from __future__ import annotations


class GeolitError(Exception):
    """Base class for all errors raised by geolit."""


# --- corpus / records ---------------------------------------------------


class MalformedRecord(GeolitError):
    """Input line could not be parsed into a document record."""


class MissingAbstract(GeolitError):
    """Record has no usable abstract."""


class DuplicateDocument(GeolitError):
    """A document with this id already exists in the store."""


# --- vectors / embeddings ----------------------------------------------


class DimensionMismatch(GeolitError):
    """Vectors or matrices do not share the expected dimension."""


class ZeroVector(GeolitError):
    """A zero vector where a direction is required."""


class MissingVector(GeolitError):
    """No precomputed vector available for a document id."""


class DimTooLarge(GeolitError):
    """Requested rank exceeds what the data supports."""


# --- topic modeling ------------------------------------------------------


class TooFewPoints(GeolitError):
    """Not enough points for the requested operation."""


class EmptyCluster(GeolitError):
    """A cluster with no tokens cannot be scored."""


class EmptyTopic(GeolitError):
    """A topic with no members has no representatives."""


# --- analytics -----------------------------------------------------------


class WrongKind(GeolitError):
    """Operation requires a different entity kind (e.g. country-only)."""


class UnknownGroup(GeolitError):
    """Referenced group id does not exist."""


# --- store ---------------------------------------------------------------


class StoreUnavailable(GeolitError):
    """The backing store cannot be opened or written."""


class UnknownDocument(GeolitError):
    """Referenced document id does not exist."""


class DuplicateName(GeolitError):
    """A group with this name already exists."""


class UnknownModel(GeolitError):
    """Referenced topic model id does not exist."""


class UnknownField(GeolitError):
    """Query atom uses a field the index does not know."""


class QuerySyntaxError(GeolitError):
    """Query text failed to parse; carries the character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


# --- remote summarization -------------------------------------------------


class Unauthorized(GeolitError):
    """Missing or rejected credential for the remote endpoint."""


class RemoteTimeout(GeolitError):
    """Remote call did not answer within the deadline (after retries)."""


class RemoteError(GeolitError):
    """Remote endpoint answered with a non-success status."""

    def __init__(self, status: int, detail: str = ""):
        super().__init__(f"remote endpoint returned {status}" + (f": {detail}" if detail else ""))
        self.status = status


# --- service --------------------------------------------------------------


class ScopeTooSmall(GeolitError):
    """Query scope has fewer documents than the model requires."""
