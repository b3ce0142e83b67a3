"""Exception hierarchy shared across the engine.

The service layer maps these onto structured HTTP errors, so raising the right
subclass is part of each operation's contract.
"""


class EngineError(Exception):
    """Base class for every error the engine raises deliberately."""


class ParseError(EngineError):
    """Malformed query or filter expression."""


class NotFoundError(EngineError):
    """Unknown document, list, or profile id."""


class EmptyListError(EngineError):
    """A list operator was handed an empty input list."""


class NotRecommendableError(EngineError):
    """Document has no usable features for the recommendation space."""


class SnapshotError(EngineError):
    """Corpus snapshot is unreadable, corrupt, or of an unsupported version."""


class TrainingError(EngineError):
    """Vector-space training preconditions not met."""
