"""Exception types shared across the package."""


class LitsqueezeError(Exception):
    """Base class for all package errors."""


class QuerySyntaxError(LitsqueezeError):
    """A boolean query string could not be parsed."""


class TransportError(LitsqueezeError):
    """A remote fetch failed; safe to retry."""


class BackgroundBuildError(LitsqueezeError):
    """A background keyword fetch failed entirely.

    Carries the offending keyword in ``keyword``.
    """

    def __init__(self, keyword: str, message: str):
        super().__init__(f"background fetch failed for keyword {keyword!r}: {message}")
        self.keyword = keyword


class CorpusIOError(LitsqueezeError):
    """A corpus file could not be read or written."""


class ConfigurationError(LitsqueezeError):
    """The engine is missing a required resource (background, universe, ...)."""


class InsufficientBackgroundError(LitsqueezeError):
    """The query set is larger than the background it is tested against."""


class DomainError(LitsqueezeError):
    """A statistical function was called with out-of-range parameters."""


class SimilarityError(LitsqueezeError):
    """Cosine similarity requested for a zero feature vector."""


class NotFoundError(LitsqueezeError):
    """An analysis, network, or edge with the given identifier does not exist."""


class ConflictError(LitsqueezeError):
    """The requested action does not apply to the record's current state."""
