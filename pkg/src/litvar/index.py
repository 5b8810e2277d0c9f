"""Inverted index from canonical variant keys to article postings.

Documents flow through extraction, gene attachment, and canonicalization;
every derivable identity of a mention (coding, genomic on the target
assembly, protein) becomes a key so that a query phrased at any level
hits. Postings persist in a versioned binary segment with a trailing
checksum. One writer at a time; readers always see the last published
snapshot and never block on ingestion.
"""

from __future__ import annotations

import re
import struct
import threading
import zlib
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import IO, Iterable

from .coords import ChainMap, TranscriptModel, c_to_g, c_to_p, liftover, r_to_c
from .errors import (
    FormatError,
    MissingContext,
    OutOfTranscript,
    ParseError,
    QueryParseError,
    RefMismatch,
    MissingSequence,
    SpanMismatch,
    UnmappedRegion,
    UnsupportedEdit,
    VersionError,
    ChecksumError,
)
from .genes import (
    GeneDictionary,
    GeneMention,
    extract_gene_mentions,
    normalize_gene,
    species_gate,
    HUMAN_TAXON,
)
from .hgvs import (
    EditKind,
    Molecule,
    VariantAst,
    format_body,
    normalize_ast,
    parse_loose,
    rsid_ast,
)
from .mentions import (
    Document,
    Mention,
    PatternClass,
    attach_gene_context,
    classify_surface,
    combined_text,
    extract_mentions,
)

__all__ = [
    "CanonicalKey",
    "EvidenceSpan",
    "Posting",
    "Resources",
    "ImportedAnnotation",
    "DocumentReport",
    "IngestReport",
    "LiteratureIndex",
    "ingest_pubtator",
    "canonicalize",
    "save_segment",
    "load_segment",
]

UNKNOWN_GENE = "*"

KEY_MOLECULES = ("g", "c", "p", "rsid")

_KEY_RE = re.compile(r"([0-9]+)\|([^|]+)\|(g|c|p|rsid)\|(.+)\Z")


@dataclass(frozen=True, order=True)
class CanonicalKey:
    """Deterministic normalized variant identity used as the index key."""

    species_taxon: int
    gene_id: str
    molecule: str
    edit_repr: str

    def __post_init__(self):
        if self.molecule not in KEY_MOLECULES:
            raise ValueError(f"key molecule must be one of {KEY_MOLECULES}")

    def render(self) -> str:
        return f"{self.species_taxon}|{self.gene_id}|{self.molecule}|{self.edit_repr}"

    @classmethod
    def parse(cls, text: str) -> "CanonicalKey":
        m = _KEY_RE.fullmatch(text)
        if m is None:
            raise ValueError(f"not a rendered key: {text!r}")
        return cls(int(m.group(1)), m.group(2), m.group(3), m.group(4))


class Source:
    EXTRACTED = "extracted"
    IMPORTED = "imported"


@dataclass(frozen=True)
class EvidenceSpan:
    start: int
    end: int
    surface: str
    pattern_class: PatternClass
    source: str

    def sort_key(self):
        return (self.start, self.end, self.surface, self.pattern_class.value, self.source)


@dataclass(frozen=True)
class Posting:
    """Query-facing view of one key's postings."""

    key: str
    pmids: tuple[int, ...]
    evidence: dict[int, tuple[EvidenceSpan, ...]]


@dataclass
class Resources:
    """Normalization resources shared by indexing and querying."""

    gene_dict: GeneDictionary
    transcripts: dict[str, TranscriptModel]
    chain: ChainMap | None = None
    target_assembly: str = "default"
    taxa: frozenset[int] = frozenset({HUMAN_TAXON})
    species_keywords: dict[str, int] | None = None
    key_taxon: int = HUMAN_TAXON
    _by_gene: dict[str, list[str]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        by_gene: dict[str, list[str]] = {}
        for tid in sorted(self.transcripts):
            by_gene.setdefault(self.transcripts[tid].gene_id, []).append(tid)
        self._by_gene = by_gene

    def transcript_for_gene(self, gene_id: str | None) -> TranscriptModel | None:
        """First transcript (by id) annotated for the gene, if any."""
        if gene_id is None:
            return None
        tids = self._by_gene.get(gene_id)
        return self.transcripts[tids[0]] if tids else None

    def resolve_gene(self, text: str | None) -> str | None:
        """Map a query-side gene qualifier to a dictionary gene id."""
        if text is None:
            return None
        gene_id = normalize_gene(text, self.gene_dict, self.key_taxon)
        if gene_id is not None:
            return gene_id
        for record in self.gene_dict.records:
            if record.gene_id == text and record.species_taxon == self.key_taxon:
                return text
        return None


# ---------------------------------------------------------------------------
# Canonical keys
# ---------------------------------------------------------------------------

_STRIP_REF_KINDS = {EditKind.DELETION, EditKind.DUPLICATION, EditKind.SYNONYMOUS}


def _key_edit_body(ast: VariantAst) -> str:
    """Edit rendering for keys: like the canonical body, but redundant
    stated alleles on nucleotide del/dup/= are dropped so stated and
    unstated surface forms collide onto one key."""
    if ast.molecule is not Molecule.PROTEIN and ast.edit.kind in _STRIP_REF_KINDS:
        ast = replace(ast, edit=replace(ast.edit, ref_allele=None))
    return format_body(ast)


def _lift_genomic(ast: VariantAst, resources: Resources) -> VariantAst:
    """Lift a contig-qualified genomic AST to the target assembly.

    Contigs the chain does not mention pass through unchanged (they are
    taken to be on the target assembly already); positions inside a
    covered contig but outside every block raise UnmappedRegion.
    """
    chain = resources.chain
    if chain is None or ast.reference_accession not in chain:
        return ast
    return liftover(ast, chain)


def canonicalize(
    ast: VariantAst, gene_id: str | None, resources: Resources
) -> list[CanonicalKey]:
    """Every canonical key derivable from a normalized mention AST.

    Protein mentions key at p level; coding mentions key at c level plus
    g (lifted to the target assembly) and p when a transcript for the
    gene allows the mapping; RNA substitutions reduce to coding terms
    first; rsIDs key as opaque identifiers with gene ``*``. Underivable
    levels are simply omitted.
    """
    ast = normalize_ast(ast)
    taxon = resources.key_taxon
    gene = gene_id if gene_id is not None else UNKNOWN_GENE
    keys: set[CanonicalKey] = set()

    if ast.edit.kind is EditKind.RSID:
        keys.add(CanonicalKey(taxon, UNKNOWN_GENE, "rsid", f"rs{ast.edit.rsid_number}"))
        return sorted(keys)

    molecule = ast.molecule
    if molecule is Molecule.RNA:
        try:
            ast = r_to_c(ast)
        except UnsupportedEdit:
            return []
        molecule = Molecule.CODING

    if molecule is Molecule.PROTEIN:
        keys.add(CanonicalKey(taxon, gene, "p", _key_edit_body(ast)))
    elif molecule is Molecule.CODING:
        keys.add(CanonicalKey(taxon, gene, "c", _key_edit_body(ast)))
        transcript = resources.transcript_for_gene(gene_id)
        if transcript is not None:
            try:
                g_ast = _lift_genomic(c_to_g(ast, transcript), resources)
                keys.add(
                    CanonicalKey(
                        taxon, gene, "g",
                        f"{g_ast.reference_accession}:{_key_edit_body(g_ast)}",
                    )
                )
            except (OutOfTranscript, UnsupportedEdit, UnmappedRegion):
                pass
            try:
                p_ast = c_to_p(ast, transcript)
                keys.add(CanonicalKey(taxon, gene, "p", _key_edit_body(p_ast)))
            except (OutOfTranscript, UnsupportedEdit, RefMismatch, MissingSequence):
                pass
    elif molecule in (Molecule.GENOMIC, Molecule.MITOCHONDRIAL):
        if ast.reference_accession is not None:
            try:
                g_ast = _lift_genomic(ast, resources)
            except UnmappedRegion:
                return sorted(keys)
            keys.add(
                CanonicalKey(
                    taxon, gene, "g",
                    f"{g_ast.reference_accession}:{_key_edit_body(g_ast)}",
                )
            )
    # Molecule.NONCODING carries no key level; kept as evidence only.
    return sorted(keys)


# ---------------------------------------------------------------------------
# PubTator corpus ingestion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ImportedAnnotation:
    pmid: int
    start: int
    end: int
    surface: str
    ann_type: str
    norm_id: str | None


_VARIANT_ANN_TYPES = {
    "mutation", "variant", "dnamutation", "proteinmutation", "snp", "genomicmutation",
}
_GENE_ANN_TYPES = {"gene"}
_NORM_RSID_RE = re.compile(r"rs([0-9]+)\Z", re.IGNORECASE)


def ingest_pubtator(
    source: Iterable[str] | IO[str], path: str | None = None
) -> list[tuple[Document, list[ImportedAnnotation]]]:
    """Parse a PubTator-format corpus stream.

    Per document: ``PMID|t|<title>``, ``PMID|a|<abstract>``, zero or more
    tab-separated annotation lines, and a blank-line terminator (implicit
    at end of stream). Annotation offsets are 0-based into
    ``title + " " + abstract`` and each surface must equal its slice.
    """
    docs: list[tuple[Document, list[ImportedAnnotation]]] = []
    seen_pmids: set[int] = set()
    pending_title: tuple[int, str] | None = None
    current: Document | None = None
    annotations: list[ImportedAnnotation] = []

    def finalize():
        nonlocal current, annotations
        if current is not None:
            docs.append((current, annotations))
            current, annotations = None, []

    lineno = 0
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line:
            if pending_title is not None:
                raise FormatError("title line without an abstract line", lineno, path)
            finalize()
            continue

        if current is None:
            parts = line.split("|", 2)
            if pending_title is None:
                if len(parts) != 3 or parts[1] != "t":
                    raise FormatError("expected a PMID|t|<title> line", lineno, path)
                pmid = _parse_pmid(parts[0], lineno, path)
                if pmid in seen_pmids:
                    raise FormatError(f"duplicate pmid {pmid}", lineno, path)
                pending_title = (pmid, parts[2])
            else:
                if len(parts) != 3 or parts[1] != "a":
                    raise FormatError("expected a PMID|a|<abstract> line", lineno, path)
                pmid = _parse_pmid(parts[0], lineno, path)
                if pmid != pending_title[0]:
                    raise FormatError(
                        f"abstract pmid {pmid} != title pmid {pending_title[0]}", lineno, path
                    )
                current = Document(pmid=pmid, title=pending_title[1], abstract=parts[2])
                seen_pmids.add(pmid)
                pending_title = None
            continue

        fields = line.split("\t")
        if len(fields) != 6:
            raise FormatError(
                f"expected 6 tab-separated annotation fields, got {len(fields)}", lineno, path
            )
        pmid = _parse_pmid(fields[0], lineno, path)
        if pmid != current.pmid:
            raise FormatError(f"annotation pmid {pmid} != document pmid {current.pmid}", lineno, path)
        try:
            start, end = int(fields[1]), int(fields[2])
        except ValueError:
            raise FormatError("annotation offsets must be integers", lineno, path) from None
        text = combined_text(current)
        if not 0 <= start < end <= len(text):
            raise FormatError(f"annotation span [{start},{end}) out of bounds", lineno, path)
        surface = fields[3]
        if text[start:end] != surface:
            raise SpanMismatch(
                f"annotation surface {surface!r} != text slice {text[start:end]!r}", lineno, path
            )
        annotations.append(
            ImportedAnnotation(
                pmid=pmid,
                start=start,
                end=end,
                surface=surface,
                ann_type=fields[4],
                norm_id=None if fields[5] == "-" else fields[5],
            )
        )

    if pending_title is not None:
        raise FormatError("title line without an abstract line", lineno, path)
    finalize()
    return docs


def _parse_pmid(text: str, lineno: int, path: str | None) -> int:
    try:
        pmid = int(text)
    except ValueError:
        raise FormatError(f"bad pmid {text!r}", lineno, path) from None
    if pmid < 1:
        raise FormatError(f"pmid must be >= 1, got {pmid}", lineno, path)
    return pmid


# ---------------------------------------------------------------------------
# The index
# ---------------------------------------------------------------------------

@dataclass
class DocumentReport:
    pmid: int
    indexed: bool
    dropped_reason: str | None = None
    mentions_extracted: int = 0
    mentions_imported: int = 0
    keys_emitted: int = 0
    failures: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class IngestReport:
    documents_indexed: int = 0
    documents_dropped: int = 0
    mentions_extracted: int = 0
    mentions_imported: int = 0
    keys_emitted: int = 0
    failures: list[tuple[int, str, str]] = field(default_factory=list)

    def absorb(self, doc_report: DocumentReport) -> None:
        if doc_report.indexed:
            self.documents_indexed += 1
        else:
            self.documents_dropped += 1
        self.mentions_extracted += doc_report.mentions_extracted
        self.mentions_imported += doc_report.mentions_imported
        self.keys_emitted += doc_report.keys_emitted
        self.failures.extend(
            (doc_report.pmid, surface, reason) for surface, reason in doc_report.failures
        )


class LiteratureIndex:
    """Canonical key -> article postings, with per-document ingestion.

    Writers serialize on an internal lock and publish an immutable
    snapshot after each document; readers query the snapshot and never
    block. Re-indexing a document is a no-op per (pmid, key, evidence).
    """

    def __init__(self, resources: Resources):
        self.resources = resources
        self._write_lock = threading.Lock()
        self._postings: dict[str, dict[int, set[EvidenceSpan]]] = {}
        self._pmids: set[int] = set()
        self._published: dict[str, tuple[tuple[int, tuple[EvidenceSpan, ...]], ...]] = {}
        self._published_pmids: tuple[int, ...] = ()

    # -- write side --------------------------------------------------------

    def add_document(
        self, doc: Document, imported: Iterable[ImportedAnnotation] = ()
    ) -> DocumentReport:
        report = DocumentReport(pmid=doc.pmid, indexed=False)
        decision = species_gate(doc, self.resources.taxa, self.resources.species_keywords)
        if not decision.keep:
            report.dropped_reason = decision.reason
            report.failures.append(("<document>", f"species gate: {decision.reason}"))
            return report

        extracted = extract_mentions(doc)
        report.mentions_extracted = len(extracted)
        tagged: list[tuple[Mention, str]] = [(m, Source.EXTRACTED) for m in extracted]
        imported_genes: list[GeneMention] = []
        for ann in imported:
            kind = ann.ann_type.casefold()
            if kind in _GENE_ANN_TYPES:
                gene_id = ann.norm_id or normalize_gene(
                    ann.surface, self.resources.gene_dict, self.resources.key_taxon
                )
                if gene_id is not None:
                    imported_genes.append(
                        GeneMention(ann.pmid, ann.start, ann.end, ann.surface, gene_id)
                    )
                continue
            if kind not in _VARIANT_ANN_TYPES:
                continue
            mention = self._imported_mention(ann)
            if mention is None:
                report.failures.append((ann.surface, "imported annotation unusable"))
                continue
            report.mentions_imported += 1
            tagged.append((mention, Source.IMPORTED))

        genes = sorted(
            extract_gene_mentions(doc, self.resources.gene_dict, self.resources.key_taxon)
            + imported_genes,
            key=lambda g: (g.start, g.end),
        )

        paired = attach_gene_context([m for m, _ in tagged], genes)
        with self._write_lock:
            for (mention, gene_id), (_, source) in zip(paired, tagged):
                ast = mention.ast
                if ast is None and mention.pattern_class is PatternClass.IVS:
                    ast = self._resolve_ivs_mention(mention, gene_id)
                if ast is None:
                    report.failures.append((mention.surface, "unparseable mention"))
                    continue
                keys = canonicalize(ast, gene_id, self.resources)
                if not keys:
                    report.failures.append((mention.surface, "no canonical key derivable"))
                    continue
                evidence = EvidenceSpan(
                    start=mention.start,
                    end=mention.end,
                    surface=mention.surface,
                    pattern_class=mention.pattern_class,
                    source=source,
                )
                for key in keys:
                    self._postings.setdefault(key.render(), {}).setdefault(
                        doc.pmid, set()
                    ).add(evidence)
                report.keys_emitted += len(keys)
            self._pmids.add(doc.pmid)
            report.indexed = True
            self._publish_locked()
        return report

    def _imported_mention(self, ann: ImportedAnnotation) -> Mention | None:
        """Re-parse an imported annotation for identity; spans are trusted."""
        pattern_class = classify_surface(ann.surface)
        try:
            ast = parse_loose(ann.surface)
        except (ParseError, MissingContext):
            ast = None
        if ast is None and ann.norm_id:
            m = _NORM_RSID_RE.fullmatch(ann.norm_id)
            if m is not None:
                ast = rsid_ast(int(m.group(1)))
                pattern_class = pattern_class or PatternClass.RSID
        if pattern_class is None:
            if ast is None:
                return None
            pattern_class = PatternClass.HGVS_CANONICAL
        return Mention(
            pmid=ann.pmid,
            start=ann.start,
            end=ann.end,
            surface=ann.surface,
            pattern_class=pattern_class,
            ast=ast,
        )

    def _resolve_ivs_mention(self, mention: Mention, gene_id: str | None) -> VariantAst | None:
        transcript = self.resources.transcript_for_gene(gene_id)
        if transcript is None:
            return None
        try:
            return parse_loose(mention.surface, context=transcript)
        except (ParseError, MissingContext, OutOfTranscript):
            return None

    def _publish_locked(self) -> None:
        snapshot = {
            key: tuple(
                (pmid, tuple(sorted(evs, key=EvidenceSpan.sort_key)))
                for pmid, evs in sorted(per_pmid.items())
            )
            for key, per_pmid in self._postings.items()
        }
        self._published = snapshot
        self._published_pmids = tuple(sorted(self._pmids))

    # -- read side ----------------------------------------------------------

    @property
    def document_count(self) -> int:
        return len(self._published_pmids)

    @property
    def key_count(self) -> int:
        return len(self._published)

    def keys(self) -> list[str]:
        return sorted(self._published)

    def posting(self, key: str) -> Posting | None:
        entry = self._published.get(key)
        if entry is None:
            return None
        return Posting(
            key=key,
            pmids=tuple(pmid for pmid, _ in entry),
            evidence={pmid: evs for pmid, evs in entry},
        )

    def query_keys(self, keys: Iterable[str]) -> list[tuple[int, list[EvidenceSpan]]]:
        """Union of postings for pre-rendered keys, pmid ascending."""
        snapshot = self._published
        merged: dict[int, set[EvidenceSpan]] = {}
        for key in keys:
            for pmid, evidence in snapshot.get(key, ()):
                merged.setdefault(pmid, set()).update(evidence)
        return [
            (pmid, sorted(merged[pmid], key=EvidenceSpan.sort_key))
            for pmid in sorted(merged)
        ]

    def resolve_query(self, text: str, gene: str | None = None) -> list[str]:
        """Canonical keys a query consults: a rendered key verbatim, or a
        parsed + normalized + canonicalized surface form."""
        text = text.strip()
        if not text:
            raise QueryParseError("empty query")
        if _KEY_RE.fullmatch(text):
            return [text]
        gene_id = self.resources.resolve_gene(gene)
        try:
            ast = parse_loose(text)
        except MissingContext:
            transcript = self.resources.transcript_for_gene(gene_id)
            if transcript is None:
                return []
            try:
                ast = parse_loose(text, context=transcript)
            except (ParseError, MissingContext, OutOfTranscript) as exc:
                raise QueryParseError(str(exc)) from exc
        except ParseError as exc:
            raise QueryParseError(str(exc)) from exc
        if gene is not None and gene_id is None:
            # Unknown gene qualifier: nothing indexed under it.
            return []
        return [key.render() for key in canonicalize(ast, gene_id, self.resources)]

    def query(self, text: str, gene: str | None = None) -> list[tuple[int, list[EvidenceSpan]]]:
        """Articles mentioning the variant, with evidence spans.

        *text* may be a rendered key or any parseable surface form.
        Raises QueryParseError when it is neither.
        """
        return self.query_keys(self.resolve_query(text, gene))


# ---------------------------------------------------------------------------
# Segment persistence
# ---------------------------------------------------------------------------

SEGMENT_MAGIC = b"LVSG"
SEGMENT_VERSION = 1

_CLASS_LIST = list(PatternClass)
_CLASS_TO_BYTE = {cls: i for i, cls in enumerate(_CLASS_LIST)}
_SOURCE_LIST = [Source.EXTRACTED, Source.IMPORTED]
_SOURCE_TO_BYTE = {src: i for i, src in enumerate(_SOURCE_LIST)}


def _pack_str(text: str) -> bytes:
    raw = text.encode("utf-8")
    if len(raw) > 0xFFFF:
        raise ValueError("string too long for segment format")
    return struct.pack("<H", len(raw)) + raw


class _Reader:
    def __init__(self, data: bytes, pos: int = 0):
        self.data = data
        self.pos = pos

    def unpack(self, fmt: str):
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.data):
            raise ChecksumError("segment body shorter than its header promises")
        values = struct.unpack_from(fmt, self.data, self.pos)
        self.pos += size
        return values

    def read_str(self) -> str:
        (length,) = self.unpack("<H")
        if self.pos + length > len(self.data):
            raise ChecksumError("segment body shorter than its header promises")
        raw = self.data[self.pos : self.pos + length]
        self.pos += length
        return raw.decode("utf-8")


def save_segment(index: LiteratureIndex, path: str | Path) -> None:
    """Write the published snapshot as a segment file.

    Layout (little-endian): magic ``LVSG``, u16 version, u64 document
    count, u64 key count, the sorted pmid table (u64 each), a key table
    of (key string, u64 offset, u32 length) into the postings area,
    the postings area, and a trailing crc32 of everything before it.
    """
    snapshot = index._published
    pmids = index._published_pmids
    keys = sorted(snapshot)

    postings_blobs: list[bytes] = []
    offsets: list[tuple[int, int]] = []
    cursor = 0
    for key in keys:
        blob = bytearray()
        entries = snapshot[key]
        blob += struct.pack("<I", len(entries))
        for pmid, evidence in entries:
            blob += struct.pack("<QH", pmid, len(evidence))
            for ev in evidence:
                blob += struct.pack("<II", ev.start, ev.end)
                blob += _pack_str(ev.surface)
                blob += struct.pack(
                    "<BB", _CLASS_TO_BYTE[ev.pattern_class], _SOURCE_TO_BYTE[ev.source]
                )
        postings_blobs.append(bytes(blob))
        offsets.append((cursor, len(blob)))
        cursor += len(blob)

    out = bytearray()
    out += SEGMENT_MAGIC
    out += struct.pack("<H", SEGMENT_VERSION)
    out += struct.pack("<QQ", len(pmids), len(keys))
    for pmid in pmids:
        out += struct.pack("<Q", pmid)
    for key, (offset, length) in zip(keys, offsets):
        out += _pack_str(key)
        out += struct.pack("<QI", offset, length)
    for blob in postings_blobs:
        out += blob
    out += struct.pack("<I", zlib.crc32(bytes(out)) & 0xFFFFFFFF)
    Path(path).write_bytes(bytes(out))


def load_segment(path: str | Path, resources: Resources) -> LiteratureIndex:
    """Read a segment written by :func:`save_segment`.

    Raises VersionError on an unknown magic/version and ChecksumError on
    truncation or corruption. ``load(save(x))`` answers every key query
    identically to ``x``.
    """
    data = Path(path).read_bytes()
    if len(data) < len(SEGMENT_MAGIC) + 2:
        raise ChecksumError("file too short to be a segment")
    if data[: len(SEGMENT_MAGIC)] != SEGMENT_MAGIC:
        raise VersionError("not a litvar segment file")
    (version,) = struct.unpack_from("<H", data, len(SEGMENT_MAGIC))
    if version != SEGMENT_VERSION:
        raise VersionError(f"unknown segment format version {version}")
    if len(data) < len(SEGMENT_MAGIC) + 2 + 4:
        raise ChecksumError("file too short to carry a checksum")
    (stored_crc,) = struct.unpack_from("<I", data, len(data) - 4)
    if zlib.crc32(data[:-4]) & 0xFFFFFFFF != stored_crc:
        raise ChecksumError("segment checksum mismatch (truncated or corrupt file)")

    reader = _Reader(data[:-4], pos=len(SEGMENT_MAGIC) + 2)
    doc_count, key_count = reader.unpack("<QQ")
    pmids = [reader.unpack("<Q")[0] for _ in range(doc_count)]
    key_table: list[tuple[str, int, int]] = []
    for _ in range(key_count):
        key = reader.read_str()
        offset, length = reader.unpack("<QI")
        key_table.append((key, offset, length))
    postings_base = reader.pos

    index = LiteratureIndex(resources)
    for key, offset, length in key_table:
        blob = _Reader(reader.data, postings_base + offset)
        (n_pmids,) = blob.unpack("<I")
        per_pmid: dict[int, set[EvidenceSpan]] = {}
        for _ in range(n_pmids):
            pmid, n_evidence = blob.unpack("<QH")
            spans = set()
            for _ in range(n_evidence):
                start, end = blob.unpack("<II")
                surface = blob.read_str()
                class_byte, source_byte = blob.unpack("<BB")
                try:
                    pattern_class = _CLASS_LIST[class_byte]
                    source = _SOURCE_LIST[source_byte]
                except IndexError:
                    raise ChecksumError("segment contains invalid enum bytes") from None
                spans.add(EvidenceSpan(start, end, surface, pattern_class, source))
            per_pmid[pmid] = spans
        if blob.pos - (postings_base + offset) != length:
            raise ChecksumError("posting blob length disagrees with the key table")
        index._postings[key] = per_pmid
    index._pmids = set(pmids)
    index._publish_locked()
    return index
