"""
Error hierarchy for the near-factorization toolkit.
"""


class NearFactError(Exception):
    """Base class for every error raised by the toolkit."""


class GroupParseError(NearFactError):
    """A group literal could not be parsed."""

    def __init__(self, literal: str, token: str):
        self.literal = literal
        self.token = token
        super().__init__(f"cannot parse group literal {literal!r}: bad token {token!r}")


class InvalidElementError(NearFactError):
    """An element does not belong to the group it is used with."""


class ParameterError(NearFactError):
    """Parameters violate an operation's precondition on sizes or shapes."""


class PreconditionError(NearFactError):
    """Inputs do not satisfy a structural precondition (e.g. not a near-factorization)."""


class ConsistencyError(NearFactError):
    """Internal invariant broken: a computed mate failed exact verification."""


class CatalogError(NearFactError):
    """A persisted record is unreadable or does not re-verify."""
