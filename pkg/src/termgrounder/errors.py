"""Exception types shared across the package."""


class TermGrounderError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(TermGrounderError):
    """A document could not be parsed.

    ``byte_offset`` points at the first offending byte when known.
    """

    def __init__(self, message: str, byte_offset: int | None = None):
        if byte_offset is not None:
            message = f"{message} (byte offset {byte_offset})"
        super().__init__(message)
        self.byte_offset = byte_offset


class FormatError(TermGrounderError):
    """Structured input (table, mapping file) violates its declared format."""


class EmptyOntologyError(TermGrounderError):
    """No usable term could be extracted from an ontology source."""


class EmptyCorpusError(TermGrounderError):
    """A matching corpus contains no string to index."""


class ConfigurationError(TermGrounderError):
    """An option value is invalid before any work was done."""


class CacheMissError(TermGrounderError):
    """Requested cache entry does not exist."""

    def __init__(self, acronym: str, available: list[str]):
        listing = ", ".join(available) if available else "(cache is empty)"
        super().__init__(f"no cached ontology {acronym!r}; available: {listing}")
        self.acronym = acronym
        self.available = available


class InputError(TermGrounderError):
    """Source-term input is missing or malformed."""


class CredentialError(TermGrounderError):
    """A remote annotator rejected the supplied credentials."""


class TransportError(TermGrounderError):
    """A remote call failed after exhausting its retry budget."""
