"""Gene synonym normalization and species gating.

A gene dictionary maps case-folded synonyms to stable gene identifiers,
one namespace per species taxon. Documents can be filtered by a small
keyword table of species words before indexing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import IO, Iterable

from .errors import DuplicateSynonym, FormatError
from .mentions import Document, combined_text

__all__ = [
    "GeneRecord",
    "GeneMention",
    "GeneDictionary",
    "GateDecision",
    "load_gene_dictionary",
    "normalize_gene",
    "extract_gene_mentions",
    "species_gate",
    "DEFAULT_SPECIES_KEYWORDS",
    "HUMAN_TAXON",
]

HUMAN_TAXON = 9606

DEFAULT_SPECIES_KEYWORDS: dict[str, int] = {
    "human": 9606,
    "humans": 9606,
    "homo sapiens": 9606,
    "mouse": 10090,
    "mice": 10090,
    "murine": 10090,
    "mus musculus": 10090,
    "rat": 10116,
    "rats": 10116,
    "rattus norvegicus": 10116,
}


@dataclass(frozen=True)
class GeneRecord:
    gene_id: str
    primary_symbol: str
    synonyms: frozenset[str]
    species_taxon: int


@dataclass(frozen=True)
class GeneMention:
    pmid: int
    start: int
    end: int
    surface: str
    gene_id: str


@dataclass
class GeneDictionary:
    """Immutable-after-load synonym lookup, per species taxon."""

    records: list[GeneRecord] = field(default_factory=list)
    _by_taxon: dict[int, dict[str, str]] = field(default_factory=dict)
    _max_tokens: dict[int, int] = field(default_factory=dict)

    def add(self, record: GeneRecord, line: int | None = None, path: str | None = None) -> None:
        table = self._by_taxon.setdefault(record.species_taxon, {})
        for synonym in record.synonyms:
            folded = " ".join(synonym.casefold().split())
            if not folded:
                continue
            existing = table.get(folded)
            if existing is not None and existing != record.gene_id:
                raise DuplicateSynonym(
                    f"synonym {synonym!r} maps to both {existing} and {record.gene_id} "
                    f"for taxon {record.species_taxon}",
                    line,
                    path,
                )
            table[folded] = record.gene_id
            tokens = folded.count(" ") + 1
            if tokens > self._max_tokens.get(record.species_taxon, 0):
                self._max_tokens[record.species_taxon] = tokens
        self.records.append(record)

    def lookup(self, text: str, taxon: int = HUMAN_TAXON) -> str | None:
        folded = " ".join(text.casefold().split())
        return self._by_taxon.get(taxon, {}).get(folded)

    def max_tokens(self, taxon: int = HUMAN_TAXON) -> int:
        return self._max_tokens.get(taxon, 0)

    def dump(self, stream: IO[str]) -> None:
        """Serialize back to the TSV layout (deterministic row order)."""
        for rec in sorted(self.records, key=lambda r: (r.species_taxon, r.gene_id, r.primary_symbol)):
            extra = sorted(rec.synonyms - {rec.primary_symbol})
            synonyms = "|".join([rec.primary_symbol, *extra])
            stream.write(
                f"{rec.gene_id}\t{rec.primary_symbol}\t{synonyms}\t{rec.species_taxon}\n"
            )


def load_gene_dictionary(source: Iterable[str] | IO[str], path: str | None = None) -> GeneDictionary:
    """Load gene TSV rows: gene_id, primary_symbol, pipe-joined synonyms, taxon.

    ``#`` comments and blank lines are allowed. The primary symbol always
    counts as a synonym of itself.
    """
    gdict = GeneDictionary()
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise FormatError(f"expected 4 tab-separated fields, got {len(fields)}", lineno, path)
        gene_id, primary, synonym_text, taxon_text = fields
        if not gene_id or not primary:
            raise FormatError("gene_id and primary_symbol must be non-empty", lineno, path)
        try:
            taxon = int(taxon_text)
        except ValueError:
            raise FormatError(f"bad taxon {taxon_text!r}", lineno, path) from None
        synonyms = {s.strip() for s in synonym_text.split("|") if s.strip()}
        synonyms.add(primary)
        record = GeneRecord(
            gene_id=gene_id,
            primary_symbol=primary,
            synonyms=frozenset(synonyms),
            species_taxon=taxon,
        )
        gdict.add(record, line=lineno, path=path)
    return gdict


def normalize_gene(text: str, gdict: GeneDictionary, taxon: int = HUMAN_TAXON) -> str | None:
    """Case-insensitive exact synonym lookup; None on a miss."""
    return gdict.lookup(text, taxon)


_TOKEN_RE = re.compile(r"[A-Za-z0-9][A-Za-z0-9_-]*")


def extract_gene_mentions(
    doc: Document, gdict: GeneDictionary, taxon: int = HUMAN_TAXON
) -> list[GeneMention]:
    """Word-boundary dictionary matches over title + abstract.

    At each token the longest synonym hit wins (synonyms may span several
    tokens); matches never overlap and come back sorted by start.
    """
    text = combined_text(doc)
    tokens = list(_TOKEN_RE.finditer(text))
    max_tokens = gdict.max_tokens(taxon)
    mentions: list[GeneMention] = []
    i = 0
    while i < len(tokens):
        hit = None
        for width in range(min(max_tokens, len(tokens) - i), 0, -1):
            start = tokens[i].start()
            end = tokens[i + width - 1].end()
            gene_id = gdict.lookup(text[start:end], taxon)
            if gene_id is not None:
                hit = (start, end, gene_id, width)
                break
        if hit is None:
            i += 1
            continue
        start, end, gene_id, width = hit
        mentions.append(
            GeneMention(pmid=doc.pmid, start=start, end=end, surface=text[start:end], gene_id=gene_id)
        )
        i += width
    return mentions


@dataclass(frozen=True)
class GateDecision:
    keep: bool
    reason: str | None = None


def species_gate(
    doc: Document,
    allowed_taxa: set[int] = frozenset({HUMAN_TAXON}),
    keywords: dict[str, int] | None = None,
) -> GateDecision:
    """Keep a document unless it mentions exclusively non-allowed species.

    Detection is a word-boundary keyword table over the combined text; a
    document with no species words at all is kept.
    """
    if not allowed_taxa:
        raise ValueError("allowed_taxa must be non-empty")
    table = DEFAULT_SPECIES_KEYWORDS if keywords is None else keywords
    text = combined_text(doc).casefold()
    seen: set[int] = set()
    words: set[str] = set()
    for keyword, taxon in table.items():
        if re.search(rf"(?<![a-z0-9]){re.escape(keyword)}(?![a-z0-9])", text):
            seen.add(taxon)
            words.add(keyword)
    if not seen or seen & set(allowed_taxa):
        return GateDecision(keep=True)
    return GateDecision(
        keep=False,
        reason="only non-allowed species mentioned: " + ", ".join(sorted(words)),
    )
