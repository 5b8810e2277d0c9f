"""Exception types shared across the pipeline."""

from __future__ import annotations


class LitvarError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(LitvarError):
    """Variant text matches neither the grammar nor any loose pattern.

    Carries the character offset where parsing stopped and the set of
    token descriptions that would have been accepted there.
    """

    def __init__(self, offset: int, expected: tuple[str, ...] = (), detail: str = ""):
        self.offset = offset
        self.expected = tuple(expected)
        msg = detail or "malformed variant description"
        if self.expected:
            msg += " (expected " + " | ".join(self.expected) + ")"
        super().__init__(f"{msg} at offset {offset}")


class MissingContext(LitvarError):
    """A deprecated intron-numbered form arrived without a transcript."""


class FormatError(LitvarError):
    """A resource or corpus file violates its documented layout."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += str(path)
        if line is not None:
            where += f":{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)


class DuplicateSynonym(FormatError):
    """One synonym maps to two different genes of the same species."""


class SpanMismatch(FormatError):
    """An imported annotation's surface does not equal the text slice."""


class OutOfTranscript(LitvarError):
    """Position does not fall on the transcript (or its near-intron flanks)."""


class UnsupportedEdit(LitvarError):
    """Edit kind (or alphabet) not supported by the requested mapping."""


class RefMismatch(LitvarError):
    """Stated reference allele disagrees with the transcript sequence."""


class MissingSequence(LitvarError):
    """Operation requires a CDS sequence the transcript does not carry."""


class UnmappedRegion(LitvarError):
    """No chain block covers the genomic position."""


class ChecksumError(LitvarError):
    """Index segment file is truncated or corrupt."""


class VersionError(LitvarError):
    """Index segment file has an unknown format version."""


class QueryParseError(LitvarError):
    """Query string is neither a rendered key nor a parseable surface form."""


class ConfigError(LitvarError):
    """Configuration is incomplete or references missing paths."""


class IndexLockError(LitvarError):
    """Another writer holds the index directory lock."""
