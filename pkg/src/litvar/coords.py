"""Map variant descriptions between molecular levels and assemblies.

Transcript-relative coding coordinates are converted to genomic positions
by walking the exon layout (strand-aware, with intron offsets anchored at
exon edges), protein consequences are computed from the CDS sequence, and
genomic positions are lifted between assemblies through offset-constant
chain blocks. Everything here is pure arithmetic over immutable models.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass, replace
from itertools import accumulate
from typing import IO, Iterable

from .errors import (
    FormatError,
    MissingSequence,
    OutOfTranscript,
    RefMismatch,
    UnmappedRegion,
    UnsupportedEdit,
)
from .hgvs import (
    DNA_BASES,
    EditKind,
    EditSpec,
    Molecule,
    PositionSpec,
    VariantAst,
    normalize_ast,
)

__all__ = [
    "TranscriptModel",
    "ChainBlock",
    "ChainMap",
    "c_to_g",
    "g_to_c",
    "c_to_p",
    "r_to_c",
    "liftover",
    "translate_cds",
    "reverse_complement",
    "load_transcripts",
    "load_chain",
]

CODON_TABLE = {
    "TTT": "F", "TTC": "F", "TTA": "L", "TTG": "L",
    "CTT": "L", "CTC": "L", "CTA": "L", "CTG": "L",
    "ATT": "I", "ATC": "I", "ATA": "I", "ATG": "M",
    "GTT": "V", "GTC": "V", "GTA": "V", "GTG": "V",
    "TCT": "S", "TCC": "S", "TCA": "S", "TCG": "S",
    "CCT": "P", "CCC": "P", "CCA": "P", "CCG": "P",
    "ACT": "T", "ACC": "T", "ACA": "T", "ACG": "T",
    "GCT": "A", "GCC": "A", "GCA": "A", "GCG": "A",
    "TAT": "Y", "TAC": "Y", "TAA": "*", "TAG": "*",
    "CAT": "H", "CAC": "H", "CAA": "Q", "CAG": "Q",
    "AAT": "N", "AAC": "N", "AAA": "K", "AAG": "K",
    "GAT": "D", "GAC": "D", "GAA": "E", "GAG": "E",
    "TGT": "C", "TGC": "C", "TGA": "*", "TGG": "W",
    "CGT": "R", "CGC": "R", "CGA": "R", "CGG": "R",
    "AGT": "S", "AGC": "S", "AGA": "R", "AGG": "R",
    "GGT": "G", "GGC": "G", "GGA": "G", "GGG": "G",
}

_COMPLEMENT = str.maketrans("ACGT", "TGCA")


def reverse_complement(seq: str) -> str:
    return seq.translate(_COMPLEMENT)[::-1]


def translate_cds(seq: str) -> str:
    """Translate a CDS into 1-letter residues ('*' for stop codons)."""
    return "".join(CODON_TABLE[seq[i : i + 3]] for i in range(0, len(seq) - len(seq) % 3, 3))


@dataclass
class TranscriptModel:
    """Exon layout, strand, CDS bounds, and optional CDS sequence.

    ``exons`` are 1-based inclusive genomic intervals sorted by genomic
    start and non-overlapping. ``cds_start``/``cds_end`` are 1-based
    positions along the spliced transcript (transcript orientation).
    """

    transcript_id: str
    gene_id: str
    contig: str
    strand: str
    exons: list[tuple[int, int]]
    cds_start: int
    cds_end: int
    cds_sequence: str | None = None

    def __post_init__(self):
        if self.strand not in ("+", "-"):
            raise ValueError(f"strand must be + or -, got {self.strand!r}")
        if not self.exons:
            raise ValueError("transcript needs at least one exon")
        prev_end = 0
        for start, end in self.exons:
            if start < 1 or end < start:
                raise ValueError(f"bad exon interval [{start}, {end}]")
            if start <= prev_end:
                raise ValueError("exons must be sorted by genomic start and non-overlapping")
            prev_end = end
        if not 1 <= self.cds_start <= self.cds_end <= self.exonic_length():
            raise ValueError("CDS bounds must lie within the spliced transcript")
        if self.cds_sequence is not None and len(self.cds_sequence) != self.cds_length():
            raise ValueError("cds_sequence length must equal cds_end - cds_start + 1")

    def exonic_length(self) -> int:
        return sum(end - start + 1 for start, end in self.exons)

    def cds_length(self) -> int:
        return self.cds_end - self.cds_start + 1

    def exons_transcript_order(self) -> list[tuple[int, int]]:
        return self.exons if self.strand == "+" else list(reversed(self.exons))

    def exon_lengths(self) -> list[int]:
        """Exon lengths in transcript order (what intron numbering follows)."""
        return [end - start + 1 for start, end in self.exons_transcript_order()]

    def transcript_to_genomic(self, t_pos: int) -> int:
        """Genomic position of the *t_pos*-th spliced-transcript base."""
        if t_pos < 1:
            raise OutOfTranscript(f"transcript position {t_pos} < 1")
        remaining = t_pos
        for start, end in self.exons_transcript_order():
            length = end - start + 1
            if remaining <= length:
                if self.strand == "+":
                    return start + remaining - 1
                return end - remaining + 1
            remaining -= length
        raise OutOfTranscript(
            f"transcript position {t_pos} beyond spliced length {self.exonic_length()}"
        )

    def genomic_to_transcript(self, g_pos: int) -> int | None:
        """Spliced-transcript position of *g_pos*, or None when intronic/outside."""
        consumed = 0
        for start, end in self.exons_transcript_order():
            if start <= g_pos <= end:
                if self.strand == "+":
                    return consumed + (g_pos - start) + 1
                return consumed + (end - g_pos) + 1
            consumed += end - start + 1
        return None


_MAPPABLE_KINDS = {
    EditKind.SUBSTITUTION,
    EditKind.DELETION,
    EditKind.DUPLICATION,
    EditKind.INSERTION,
    EditKind.DELINS,
}


def _require(ast: VariantAst, molecule: Molecule, op: str) -> None:
    if ast.molecule is not molecule:
        raise ValueError(f"{op} expects a {molecule.value}. description, got {ast}")


def _strand_sign(t: TranscriptModel) -> int:
    return 1 if t.strand == "+" else -1


def _c_point_to_g(c_pos: int, offset: int | None, t: TranscriptModel) -> int:
    """Map one coding position (with optional intron offset) to genomic."""
    t_pos = c_pos + t.cds_start - 1
    if not 1 <= t_pos <= t.exonic_length():
        raise OutOfTranscript(f"c.{c_pos} outside transcript {t.transcript_id}")
    anchor = t.transcript_to_genomic(t_pos)
    if not offset:
        return anchor

    boundaries = list(accumulate(t.exon_lengths()))
    exons = t.exons_transcript_order()
    if offset > 0:
        if t_pos not in boundaries:
            raise OutOfTranscript(f"+{offset} offset not anchored at an exon 3' edge")
        exon_idx = boundaries.index(t_pos)
        if exon_idx == len(exons) - 1:
            raise OutOfTranscript("offset runs past the end of the transcript")
        intron_len = _intron_length(exons[exon_idx], exons[exon_idx + 1])
        if offset > intron_len:
            raise OutOfTranscript(f"offset +{offset} exceeds intron length {intron_len}")
    else:
        starts = [1] + [b + 1 for b in boundaries[:-1]]
        if t_pos not in starts:
            raise OutOfTranscript(f"{offset} offset not anchored at an exon 5' edge")
        exon_idx = starts.index(t_pos)
        if exon_idx == 0:
            raise OutOfTranscript("offset runs past the start of the transcript")
        intron_len = _intron_length(exons[exon_idx - 1], exons[exon_idx])
        if -offset > intron_len:
            raise OutOfTranscript(f"offset {offset} exceeds intron length {intron_len}")
    return anchor + offset * _strand_sign(t)


def _intron_length(exon_a: tuple[int, int], exon_b: tuple[int, int]) -> int:
    """Intron size between two exons adjacent in transcript order."""
    left, right = sorted([exon_a, exon_b])
    return right[0] - left[1] - 1


def _oriented_alleles(edit: EditSpec, t: TranscriptModel) -> EditSpec:
    if t.strand == "+":
        return edit
    return replace(
        edit,
        ref_allele=reverse_complement(edit.ref_allele) if edit.ref_allele else None,
        alt_allele=reverse_complement(edit.alt_allele) if edit.alt_allele else None,
    )


def c_to_g(ast: VariantAst, t: TranscriptModel) -> VariantAst:
    """Map a coding-coordinate description to genomic coordinates.

    Positions walk the exon table; on the minus strand alleles are
    reverse-complemented and range endpoints swap so start <= end.
    Intron offsets resolve to plain genomic positions.
    """
    _require(ast, Molecule.CODING, "c_to_g")
    ast = normalize_ast(ast)
    if ast.edit.kind not in _MAPPABLE_KINDS:
        raise UnsupportedEdit(f"cannot map {ast.edit.kind.value} edits to genomic coordinates")

    pos = ast.position
    g_start = _c_point_to_g(pos.start, pos.start_offset, t)
    g_end = _c_point_to_g(pos.end, pos.end_offset, t) if pos.end is not None else None
    if g_end is not None and g_end < g_start:
        g_start, g_end = g_end, g_start

    return VariantAst(
        molecule=Molecule.GENOMIC,
        position=PositionSpec(start=g_start, end=g_end),
        edit=_oriented_alleles(ast.edit, t),
        reference_accession=t.contig,
        gene_symbol=ast.gene_symbol,
    )


def _g_point_to_c(g_pos: int, t: TranscriptModel) -> tuple[int, int | None]:
    """Coding position (+ optional intron offset) for one genomic base."""
    t_pos = t.genomic_to_transcript(g_pos)
    if t_pos is None:
        t_pos, offset = _nearest_exon_edge(g_pos, t)
    else:
        offset = None
    c_pos = t_pos - t.cds_start + 1
    if not 1 <= c_pos <= t.cds_length():
        raise OutOfTranscript(
            f"g.{g_pos} not reachable from coding coordinates of {t.transcript_id}"
        )
    return c_pos, offset


def _nearest_exon_edge(g_pos: int, t: TranscriptModel) -> tuple[int, int]:
    """Anchor an intronic genomic base to its nearest exon edge.

    Returns (transcript position of the anchoring exon edge, signed
    offset). The donor (+) side wins distance ties, matching how the
    first half of an intron is written.
    """
    exons = t.exons_transcript_order()
    boundaries = list(accumulate(t.exon_lengths()))
    for idx in range(len(exons) - 1):
        cur_exon, nxt_exon = exons[idx], exons[idx + 1]
        left, right = sorted([cur_exon, nxt_exon])
        if not left[1] < g_pos < right[0]:
            continue
        if t.strand == "+":
            donor_dist = g_pos - cur_exon[1]
            acceptor_dist = nxt_exon[0] - g_pos
        else:
            donor_dist = cur_exon[0] - g_pos
            acceptor_dist = g_pos - nxt_exon[1]
        if donor_dist <= acceptor_dist:
            return boundaries[idx], donor_dist
        return boundaries[idx] + 1, -acceptor_dist
    raise OutOfTranscript(f"g.{g_pos} outside transcript {t.transcript_id} and its introns")


def g_to_c(ast: VariantAst, t: TranscriptModel) -> VariantAst:
    """Inverse of :func:`c_to_g` on exonic and near-intronic bases."""
    _require(ast, Molecule.GENOMIC, "g_to_c")
    ast = normalize_ast(ast)
    if ast.edit.kind not in _MAPPABLE_KINDS:
        raise UnsupportedEdit(f"cannot map {ast.edit.kind.value} edits to coding coordinates")

    pos = ast.position
    c_start, start_off = _g_point_to_c(pos.start, t)
    c_end = end_off = None
    if pos.end is not None:
        c_end, end_off = _g_point_to_c(pos.end, t)
        if (c_end, end_off or 0) < (c_start, start_off or 0):
            c_start, c_end = c_end, c_start
            start_off, end_off = end_off, start_off

    return VariantAst(
        molecule=Molecule.CODING,
        position=PositionSpec(
            start=c_start, end=c_end, start_offset=start_off, end_offset=end_off
        ),
        edit=_oriented_alleles(ast.edit, t),
        reference_accession=t.transcript_id,
        gene_symbol=ast.gene_symbol,
    )


def c_to_p(ast: VariantAst, t: TranscriptModel) -> VariantAst:
    """Protein consequence of a single-base coding substitution.

    The affected codon is re-translated; a silent change comes back as the
    `=` form and a stop gain renders `*`. The stated reference base must
    match the CDS sequence.
    """
    _require(ast, Molecule.CODING, "c_to_p")
    ast = normalize_ast(ast)
    if ast.edit.kind is not EditKind.SUBSTITUTION:
        raise UnsupportedEdit("protein consequences are computed for substitutions only")
    if t.cds_sequence is None:
        raise MissingSequence(f"{t.transcript_id} carries no CDS sequence")
    pos = ast.position
    if pos.start_offset:
        raise OutOfTranscript("intronic positions have no protein consequence")
    if not 1 <= pos.start <= t.cds_length():
        raise OutOfTranscript(f"c.{pos.start} outside the CDS (1..{t.cds_length()})")

    seq = t.cds_sequence.upper()
    if seq[pos.start - 1] != ast.edit.ref_allele:
        raise RefMismatch(
            f"c.{pos.start} is {seq[pos.start - 1]} in {t.transcript_id}, "
            f"not {ast.edit.ref_allele}"
        )

    codon_index = (pos.start - 1) // 3  # 0-based
    codon_start = codon_index * 3
    codon = seq[codon_start : codon_start + 3]
    if len(codon) < 3:
        raise MissingSequence("CDS is truncated mid-codon")
    within = pos.start - 1 - codon_start
    mutated = codon[:within] + ast.edit.alt_allele + codon[within + 1 :]
    aa_ref = CODON_TABLE[codon]
    aa_alt = CODON_TABLE[mutated]

    if aa_ref == aa_alt:
        edit = EditSpec(EditKind.SYNONYMOUS, ref_allele=aa_ref)
    else:
        edit = EditSpec(EditKind.SUBSTITUTION, ref_allele=aa_ref, alt_allele=aa_alt)
    return VariantAst(
        molecule=Molecule.PROTEIN,
        position=PositionSpec(start=codon_index + 1),
        edit=edit,
        gene_symbol=ast.gene_symbol,
    )


def r_to_c(ast: VariantAst) -> VariantAst:
    """Rewrite an RNA-level substitution in coding-DNA terms (u -> T)."""
    _require(ast, Molecule.RNA, "r_to_c")
    ast = normalize_ast(ast)
    if ast.edit.kind is not EditKind.SUBSTITUTION:
        raise UnsupportedEdit("only RNA substitutions map to coding descriptions")
    try:
        ref = _rna_to_dna(ast.edit.ref_allele)
        alt = _rna_to_dna(ast.edit.alt_allele)
    except KeyError as exc:
        raise UnsupportedEdit(f"invalid RNA base {exc.args[0]!r}") from exc
    return replace(
        ast,
        molecule=Molecule.CODING,
        edit=EditSpec(EditKind.SUBSTITUTION, ref_allele=ref, alt_allele=alt),
    )


_RNA_TO_DNA = {"a": "A", "c": "C", "g": "G", "u": "T"}


def _rna_to_dna(allele: str) -> str:
    return "".join(_RNA_TO_DNA[b] for b in allele)


@dataclass(frozen=True)
class ChainBlock:
    """Offset-constant mapping for src positions in [src_start, src_end]."""

    src_start: int
    src_end: int
    dst_start: int

    @property
    def dst_end(self) -> int:
        return self.dst_start + (self.src_end - self.src_start)

    def map(self, pos: int) -> int:
        return self.dst_start + (pos - self.src_start)


class ChainMap:
    """Per-contig ordered blocks mapping one assembly's coordinates to another.

    Blocks are same-strand and gap-free internally; positions bounds are
    1-based inclusive on both ends.
    """

    def __init__(self, blocks_by_contig: dict[str, list[ChainBlock]]):
        self._blocks: dict[str, list[ChainBlock]] = {}
        self._starts: dict[str, list[int]] = {}
        for contig, blocks in blocks_by_contig.items():
            ordered = sorted(blocks, key=lambda b: b.src_start)
            prev_end = 0
            for b in ordered:
                if b.src_start < 1 or b.src_end < b.src_start:
                    raise ValueError(f"bad chain block {b} on {contig}")
                if b.src_start <= prev_end:
                    raise ValueError(f"overlapping chain blocks on {contig}")
                prev_end = b.src_end
            self._blocks[contig] = ordered
            self._starts[contig] = [b.src_start for b in ordered]

    def contigs(self) -> set[str]:
        return set(self._blocks)

    def __contains__(self, contig: str) -> bool:
        return contig in self._blocks

    def _resolve_contig(self, contig: str | None) -> str:
        if contig is not None:
            return contig
        if len(self._blocks) == 1:
            return next(iter(self._blocks))
        raise UnmappedRegion("contig unknown and chain covers several contigs")

    def map_position(self, contig: str | None, pos: int) -> int:
        contig = self._resolve_contig(contig)
        blocks = self._blocks.get(contig)
        if not blocks:
            raise UnmappedRegion(f"no chain blocks for contig {contig!r}")
        idx = bisect_right(self._starts[contig], pos) - 1
        if idx < 0 or pos > blocks[idx].src_end:
            raise UnmappedRegion(f"{contig}:{pos} not covered by any chain block")
        return blocks[idx].map(pos)


def liftover(ast: VariantAst, chain: ChainMap) -> VariantAst:
    """Remap a genomic description through *chain*; alleles unchanged.

    Range endpoints must fall in one block each (and the same block, so
    the interval stays offset-constant); otherwise UnmappedRegion.
    """
    if ast.molecule not in (Molecule.GENOMIC, Molecule.MITOCHONDRIAL):
        raise ValueError(f"liftover expects a genomic description, got {ast}")
    pos = ast.position
    new_start = chain.map_position(ast.reference_accession, pos.start)
    new_end = None
    if pos.end is not None:
        new_end = chain.map_position(ast.reference_accession, pos.end)
        if new_end - new_start != pos.end - pos.start:
            raise UnmappedRegion("range crosses a chain block boundary")
    return replace(ast, position=PositionSpec(start=new_start, end=new_end))


# ---------------------------------------------------------------------------
# Resource file loaders
# ---------------------------------------------------------------------------

_EXON_RE = re.compile(r"([0-9]+)-([0-9]+)\Z")


def _data_lines(source: Iterable[str] | IO[str]):
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line or line.lstrip().startswith("#"):
            continue
        yield lineno, line


def load_transcripts(source: Iterable[str] | IO[str], path: str | None = None) -> dict[str, TranscriptModel]:
    """Read transcript TSV rows into models keyed by transcript id.

    Columns: transcript_id, gene_id, contig, strand, comma-separated
    exon_start-exon_end intervals, cds_start, cds_end, CDS sequence or
    ``-`` when absent. ``#`` comments and blank lines are skipped.
    """
    out: dict[str, TranscriptModel] = {}
    for lineno, line in _data_lines(source):
        fields = line.split("\t")
        if len(fields) != 8:
            raise FormatError(f"expected 8 tab-separated fields, got {len(fields)}", lineno, path)
        tid, gene_id, contig, strand, exon_text, cds_start, cds_end, seq = fields
        exons = []
        for part in exon_text.split(","):
            m = _EXON_RE.match(part.strip())
            if m is None:
                raise FormatError(f"bad exon interval {part!r}", lineno, path)
            exons.append((int(m.group(1)), int(m.group(2))))
        try:
            model = TranscriptModel(
                transcript_id=tid,
                gene_id=gene_id,
                contig=contig,
                strand=strand,
                exons=exons,
                cds_start=int(cds_start),
                cds_end=int(cds_end),
                cds_sequence=None if seq == "-" else seq.upper(),
            )
        except ValueError as exc:
            raise FormatError(str(exc), lineno, path) from exc
        if model.cds_sequence is not None and not set(model.cds_sequence) <= DNA_BASES:
            raise FormatError("CDS sequence contains non-ACGT characters", lineno, path)
        if tid in out:
            raise FormatError(f"duplicate transcript id {tid!r}", lineno, path)
        out[tid] = model
    return out


def load_chain(source: Iterable[str] | IO[str], path: str | None = None) -> ChainMap:
    """Read chain TSV rows (contig, src_start, src_end, dst_start)."""
    blocks: dict[str, list[ChainBlock]] = {}
    for lineno, line in _data_lines(source):
        fields = line.split("\t")
        if len(fields) != 4:
            raise FormatError(f"expected 4 tab-separated fields, got {len(fields)}", lineno, path)
        contig = fields[0]
        try:
            block = ChainBlock(int(fields[1]), int(fields[2]), int(fields[3]))
        except ValueError as exc:
            raise FormatError(f"bad chain block numbers: {exc}", lineno, path) from exc
        blocks.setdefault(contig, []).append(block)
    try:
        return ChainMap(blocks)
    except ValueError as exc:
        raise FormatError(str(exc), path=path) from exc
