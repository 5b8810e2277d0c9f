"""Scan document text for variant mentions, offset-anchored.

Five pattern classes are registered: canonical HGVS descriptions,
1-letter protein shorthand (R506Q), spelled 3-letter protein forms
(Arg506Gln), deprecated intron-numbered IVS notation, and rsIDs.
Offsets index into ``title + " " + abstract`` so every downstream
consumer shares one coordinate space.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .errors import MissingContext, ParseError
from .hgvs import VariantAst, parse_loose

__all__ = [
    "Document",
    "Mention",
    "PatternClass",
    "combined_text",
    "extract_mentions",
    "list_pattern_classes",
    "attach_gene_context",
    "classify_surface",
]


@dataclass(frozen=True)
class Document:
    pmid: int
    title: str
    abstract: str


def combined_text(doc: Document) -> str:
    return f"{doc.title} {doc.abstract}"


class PatternClass(str, Enum):
    HGVS_CANONICAL = "hgvs_canonical"
    PROTEIN_SHORTHAND = "protein_shorthand"
    PROTEIN_SPELLED = "protein_spelled"
    IVS = "ivs"
    RSID = "rsid"


@dataclass(frozen=True)
class Mention:
    pmid: int
    start: int
    end: int
    surface: str
    pattern_class: PatternClass
    ast: VariantAst | None = None


# --- scanning patterns ------------------------------------------------------
# Leading guard blocks matches inside words and right after a dot, which is
# what keeps shorthand/spelled candidates from firing inside "p.R506Q".
_LEAD = r"(?<![A-Za-z0-9_.])"
_TRAIL = r"(?![A-Za-z0-9_])"

_ACC = r"[A-Za-z][A-Za-z0-9_.-]*"
_REF_PREFIX = rf"(?:{_ACC}(?:\([A-Za-z0-9_.-]+\))?:)?"

_NT_POINT = r"[0-9]+(?:[+-][0-9]+)?"
_NT_RANGE = rf"{_NT_POINT}(?:_{_NT_POINT})?"
_DNA_EDIT = r"(?:[ACGT][>→][ACGT]|delins[ACGT]+|del[ACGT]*|dup[ACGT]*|ins[ACGT]+|[ACGT]?=)"
_RNA_EDIT = r"(?:[acgu][>→][acgu]|delins[acgu]+|del[acgu]*|dup[acgu]*|ins[acgu]+|[acgu]?=)"

_AA3 = r"(?:Ala|Arg|Asn|Asp|Cys|Gln|Glu|Gly|His|Ile|Leu|Lys|Met|Phe|Pro|Ser|Thr|Trp|Tyr|Val)"
_AA1 = r"[ACDEFGHIKLMNPQRSTVWYX*]"
_AA_ANY = rf"(?:{_AA3}|Ter|{_AA1})"
# Canonical p. mentions use 1-letter residues; 3-letter anchors belong to
# the spelled class whether or not a p. prefix is present.
_P1_POINT = rf"{_AA1}[0-9]+"
_P1_EDIT = rf"(?:delins{_AA1}+|del|dup|ins{_AA1}+|{_AA1}?fs|=|{_AA1})"
_P3_POINT = rf"(?:{_AA3}|Ter)[0-9]+"
_P3_EDIT = rf"(?:delins{_AA_ANY}+|del|dup|ins{_AA_ANY}+|{_AA_ANY}?fs|=|{_AA_ANY})"

_CANONICAL_RES = (
    re.compile(rf"{_LEAD}{_REF_PREFIX}[gcmn]\.{_NT_RANGE}{_DNA_EDIT}{_TRAIL}"),
    re.compile(rf"{_LEAD}{_REF_PREFIX}r\.{_NT_RANGE}{_RNA_EDIT}{_TRAIL}"),
    re.compile(rf"{_LEAD}{_REF_PREFIX}p\.{_P1_POINT}(?:_{_P1_POINT})?{_P1_EDIT}{_TRAIL}"),
)
_SHORTHAND_RE = re.compile(
    rf"{_LEAD}[ACDEFGHIKLMNPQRSTVWY][0-9]+(?:[ACDEFGHIKLMNPQRSTVWYX*]|fs){_TRAIL}"
)
_SPELLED_RE = re.compile(
    rf"{_LEAD}(?:{_REF_PREFIX}p\.)?{_P3_POINT}(?:_{_P3_POINT})?{_P3_EDIT}{_TRAIL}"
)
_IVS_RE = re.compile(rf"{_LEAD}IVS[0-9]+[+-][0-9]+[ACGT][>→][ACGT]{_TRAIL}")
_RSID_RE = re.compile(rf"{_LEAD}[Rr][Ss][0-9]+{_TRAIL}")


@dataclass(frozen=True)
class _PatternSpec:
    pattern_class: PatternClass
    description: str
    regexes: tuple[re.Pattern[str], ...]


PATTERN_REGISTRY: tuple[_PatternSpec, ...] = (
    _PatternSpec(
        PatternClass.HGVS_CANONICAL,
        "canonical descriptions with a g./c./r./p./m./n. prefix, optionally accession-qualified",
        _CANONICAL_RES,
    ),
    _PatternSpec(
        PatternClass.PROTEIN_SHORTHAND,
        "1-letter protein shorthand such as R506Q, W26X, or R506fs",
        (_SHORTHAND_RE,),
    ),
    _PatternSpec(
        PatternClass.PROTEIN_SPELLED,
        "spelled 3-letter protein forms such as Arg506Gln or Trp26Ter",
        (_SPELLED_RE,),
    ),
    _PatternSpec(
        PatternClass.IVS,
        "deprecated intron-numbered notation such as IVS1+1G>A (needs a transcript to resolve)",
        (_IVS_RE,),
    ),
    _PatternSpec(
        PatternClass.RSID,
        "dbSNP identifiers of the form rs<number>",
        (_RSID_RE,),
    ),
)

_CLASS_ORDER = {spec.pattern_class: i for i, spec in enumerate(PATTERN_REGISTRY)}


def list_pattern_classes() -> list[tuple[PatternClass, str]]:
    """Registry contents in deterministic order (used by docs and the CLI)."""
    return [(spec.pattern_class, spec.description) for spec in PATTERN_REGISTRY]


def _resolve_longest(spans: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Non-overlapping subset, longest match first, then leftmost."""
    chosen: list[tuple[int, int]] = []
    for start, end in sorted(spans, key=lambda s: (-(s[1] - s[0]), s[0])):
        if all(end <= c_start or start >= c_end for c_start, c_end in chosen):
            chosen.append((start, end))
    return sorted(chosen)


def extract_mentions(doc: Document) -> list[Mention]:
    """All variant mentions in a document, sorted by start offset.

    Overlapping candidates within one pattern class resolve to the
    longest match. A mention whose surface fails to parse is kept as
    evidence with ``ast=None`` (recall beats structure here).
    """
    text = combined_text(doc)
    mentions: list[Mention] = []
    for spec in PATTERN_REGISTRY:
        spans = [
            (m.start(), m.end())
            for regex in spec.regexes
            for m in regex.finditer(text)
        ]
        for start, end in _resolve_longest(spans):
            surface = text[start:end]
            try:
                ast = parse_loose(surface)
            except (ParseError, MissingContext):
                ast = None
            mentions.append(
                Mention(
                    pmid=doc.pmid,
                    start=start,
                    end=end,
                    surface=surface,
                    pattern_class=spec.pattern_class,
                    ast=ast,
                )
            )
    mentions.sort(key=lambda m: (m.start, m.end, _CLASS_ORDER[m.pattern_class]))
    return mentions


def classify_surface(surface: str) -> PatternClass | None:
    """Pattern class whose regex accepts *surface* in full, if any."""
    for spec in PATTERN_REGISTRY:
        for regex in spec.regexes:
            if regex.fullmatch(surface):
                return spec.pattern_class
    return None


def attach_gene_context(mentions, genes):
    """Pair each variant mention with the nearest gene mention.

    Distance is the character gap between spans (0 when they overlap);
    ties break toward the gene that precedes the variant. With no gene
    mentions in the document every pairing is None.
    """
    paired = []
    for mention in mentions:
        best_gene = None
        best_key = None
        for gene in genes:
            if gene.end <= mention.start:
                distance, precedes = mention.start - gene.end, 0
            elif gene.start >= mention.end:
                distance, precedes = gene.start - mention.end, 1
            else:
                distance, precedes = 0, 0
            key = (distance, precedes, gene.start)
            if best_key is None or key < best_key:
                best_key = key
                best_gene = gene
        paired.append((mention, best_gene.gene_id if best_gene is not None else None))
    return paired
