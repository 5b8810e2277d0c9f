"""Parse, normalize, and format HGVS-style variant descriptions.

The grammar covers the mention classes rule-based extractors emit in
practice: substitutions, deletions, duplications, insertions, delins,
protein frameshifts, the `=` (no-change) form, and bare rsIDs. Positions
may carry intron offsets (``c.60+1``) on transcript-level molecules.
Complex descriptions (mosaics, repeats, uncertain breakpoints) are
rejected with :class:`~litvar.errors.ParseError`.

Loose, deprecated, or sloppily formatted mentions (``R506Q``,
``Arg506Gln``, ``IVS1+1G>A``, ``rs80359550``, stray whitespace, unicode
arrows) are handled by :func:`parse_loose`, which normalizes them to the
same AST :func:`parse_canonical` would produce.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from itertools import accumulate
from typing import TYPE_CHECKING

from .errors import MissingContext, OutOfTranscript, ParseError

if TYPE_CHECKING:  # pragma: no cover - import cycle guard, typing only
    from .coords import TranscriptModel

__all__ = [
    "Molecule",
    "EditKind",
    "PositionSpec",
    "EditSpec",
    "VariantAst",
    "parse_canonical",
    "parse_loose",
    "format_canonical",
    "format_body",
    "normalize_ast",
    "validate_ast",
]


class Molecule(str, Enum):
    """Molecule level a description is anchored to (its HGVS prefix letter)."""

    GENOMIC = "g"
    CODING = "c"
    RNA = "r"
    PROTEIN = "p"
    MITOCHONDRIAL = "m"
    NONCODING = "n"


class EditKind(str, Enum):
    SUBSTITUTION = "substitution"
    DELETION = "deletion"
    DUPLICATION = "duplication"
    INSERTION = "insertion"
    DELINS = "delins"
    FRAMESHIFT = "frameshift"
    SYNONYMOUS = "synonymous"
    RSID = "rsid"


# Molecules whose positions may carry intron offsets (+n / -n).
OFFSET_MOLECULES = frozenset({Molecule.CODING, Molecule.NONCODING, Molecule.RNA})

# Nucleotide alphabets; protein uses 1-letter codes plus '*' for stop.
DNA_BASES = frozenset("ACGT")
RNA_BASES = frozenset("acgu")

AA3_TO_1 = {
    "Ala": "A", "Arg": "R", "Asn": "N", "Asp": "D", "Cys": "C",
    "Gln": "Q", "Glu": "E", "Gly": "G", "His": "H", "Ile": "I",
    "Leu": "L", "Lys": "K", "Met": "M", "Phe": "F", "Pro": "P",
    "Ser": "S", "Thr": "T", "Trp": "W", "Tyr": "Y", "Val": "V",
    "Ter": "*",
}
AA1_TO_3 = {one: three for three, one in AA3_TO_1.items()}
AA1 = frozenset(AA1_TO_3) - {"*"}
AA_ALPHABET = AA1 | {"*"}

_RNA_TO_DNA = {"a": "A", "c": "C", "g": "G", "u": "T"}


@dataclass(frozen=True)
class PositionSpec:
    """1-based position or range, with optional intron offsets."""

    start: int
    end: int | None = None
    start_offset: int | None = None
    end_offset: int | None = None

    @property
    def is_range(self) -> bool:
        return self.end is not None

    def sort_key(self) -> tuple[int, int]:
        return (self.start, self.start_offset or 0)

    def end_sort_key(self) -> tuple[int, int]:
        if self.end is None:
            return self.sort_key()
        return (self.end, self.end_offset or 0)

    def span_length(self) -> int | None:
        """Base count covered, or None when offsets make it ambiguous."""
        if self.start_offset or self.end_offset:
            return None
        if self.end is None:
            return 1
        return self.end - self.start + 1


@dataclass(frozen=True)
class EditSpec:
    """What changed. For protein edits ``ref_allele`` holds the anchor
    residue(s): one per stated position (two for ranges)."""

    kind: EditKind
    ref_allele: str | None = None
    alt_allele: str | None = None
    rsid_number: int | None = None


@dataclass(frozen=True)
class VariantAst:
    """Normalized variant description.

    ``molecule`` and ``position`` are None exactly for rsID mentions,
    which carry an opaque dbSNP number and nothing else.
    """

    molecule: Molecule | None
    position: PositionSpec | None
    edit: EditSpec
    reference_accession: str | None = None
    gene_symbol: str | None = None


def rsid_ast(number: int) -> VariantAst:
    return VariantAst(
        molecule=None,
        position=None,
        edit=EditSpec(kind=EditKind.RSID, rsid_number=number),
    )


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

_NT_RANGE_KINDS = {EditKind.DELETION, EditKind.DUPLICATION, EditKind.INSERTION, EditKind.DELINS}


def validate_ast(ast: VariantAst) -> None:
    """Raise ValueError unless *ast* satisfies the type invariants."""
    edit = ast.edit
    if edit.kind is EditKind.RSID:
        if not (isinstance(edit.rsid_number, int) and edit.rsid_number >= 1):
            raise ValueError("rsid edit requires a positive rsid_number")
        if ast.molecule is not None or ast.position is not None:
            raise ValueError("rsid edit carries no molecule or position")
        if edit.ref_allele or edit.alt_allele:
            raise ValueError("rsid edit carries no alleles")
        return

    if ast.molecule is None or ast.position is None:
        raise ValueError("non-rsid edit requires molecule and position")
    if edit.rsid_number is not None:
        raise ValueError("rsid_number only valid on rsid edits")

    pos = ast.position
    if pos.start < 1:
        raise ValueError("positions are 1-based")
    if pos.start_offset == 0 or pos.end_offset == 0:
        raise ValueError("intron offsets must be nonzero")
    if pos.end is None and pos.end_offset is not None:
        raise ValueError("end_offset without end")
    if pos.end is not None:
        if pos.end < 1:
            raise ValueError("positions are 1-based")
        if pos.sort_key() >= pos.end_sort_key():
            raise ValueError("range start must precede range end")
    if (pos.start_offset or pos.end_offset) and ast.molecule not in OFFSET_MOLECULES:
        raise ValueError(f"intron offsets not allowed on {ast.molecule.value}. positions")

    if ast.molecule is Molecule.PROTEIN:
        _validate_protein_edit(pos, edit)
    else:
        _validate_nt_edit(ast.molecule, pos, edit)


def _validate_protein_edit(pos: PositionSpec, edit: EditSpec) -> None:
    if pos.start_offset or pos.end_offset:
        raise ValueError("protein positions carry no intron offsets")
    anchors = 2 if pos.is_range else 1
    ref = edit.ref_allele or ""
    alt = edit.alt_allele
    for residue in ref + (alt or ""):
        if residue not in AA_ALPHABET:
            raise ValueError(f"invalid amino-acid code {residue!r}")
    kind = edit.kind
    if kind is EditKind.SUBSTITUTION:
        if pos.is_range or len(ref) != 1 or alt is None or len(alt) != 1:
            raise ValueError("protein substitution is one residue to one residue")
    elif kind is EditKind.SYNONYMOUS:
        if pos.is_range or len(ref) != 1 or alt is not None:
            raise ValueError("protein '=' form anchors a single residue")
    elif kind is EditKind.FRAMESHIFT:
        if pos.is_range or len(ref) != 1 or (alt is not None and len(alt) != 1):
            raise ValueError("frameshift anchors a single residue")
    elif kind in (EditKind.DELETION, EditKind.DUPLICATION):
        if len(ref) != anchors or alt is not None:
            raise ValueError("protein del/dup carries anchor residues only")
    elif kind is EditKind.INSERTION:
        if not pos.is_range or len(ref) != 2 or not alt:
            raise ValueError("protein insertion needs flanking anchors and residues")
    elif kind is EditKind.DELINS:
        if len(ref) != anchors or not alt:
            raise ValueError("protein delins needs anchors and inserted residues")
    else:
        raise ValueError(f"edit kind {kind.value} not valid at protein level")


def _validate_nt_edit(molecule: Molecule, pos: PositionSpec, edit: EditSpec) -> None:
    alphabet = RNA_BASES if molecule is Molecule.RNA else DNA_BASES
    for base in (edit.ref_allele or "") + (edit.alt_allele or ""):
        if base not in alphabet:
            raise ValueError(f"invalid base {base!r} for {molecule.value}. edit")
    kind = edit.kind
    ref, alt = edit.ref_allele, edit.alt_allele
    if kind is EditKind.SUBSTITUTION:
        if pos.is_range or not ref or not alt or len(ref) != 1 or len(alt) != 1:
            raise ValueError("substitution is a single-base change")
    elif kind is EditKind.SYNONYMOUS:
        if pos.is_range or alt is not None or (ref is not None and len(ref) != 1):
            raise ValueError("'=' form anchors a single base")
    elif kind in (EditKind.DELETION, EditKind.DUPLICATION):
        if alt is not None:
            raise ValueError("del/dup carries no inserted allele")
        span = pos.span_length()
        if ref is not None and span is not None and len(ref) != span:
            raise ValueError("stated allele length disagrees with the span")
    elif kind is EditKind.INSERTION:
        if not pos.is_range or not alt or ref is not None:
            raise ValueError("insertion needs flanking positions and inserted bases")
    elif kind is EditKind.DELINS:
        if not alt or ref is not None:
            raise ValueError("delins carries inserted bases only")
    else:
        raise ValueError(f"edit kind {kind.value} not valid at nucleotide level")


# ---------------------------------------------------------------------------
# Canonical parser
# ---------------------------------------------------------------------------

_PREFIX_RE = re.compile(
    r"(?:(?P<acc>[A-Za-z][A-Za-z0-9_.-]*?)"
    r"(?:\((?P<gene>[A-Za-z0-9_.-]+)\))?:)?"
    r"(?P<mol>[gcrnmp])\."
)
_RSID_CANONICAL_RE = re.compile(r"rs([0-9]+)\Z")
_INT_RE = re.compile(r"([0-9]+)")
_OFFSET_RE = re.compile(r"([+-])([0-9]+)")


class _Cursor:
    __slots__ = ("text", "pos")

    def __init__(self, text: str, pos: int = 0):
        self.text = text
        self.pos = pos

    def eof(self) -> bool:
        return self.pos >= len(self.text)

    def take(self, pattern: re.Pattern[str]) -> re.Match[str] | None:
        m = pattern.match(self.text, self.pos)
        if m is not None:
            self.pos = m.end()
        return m

    def literal(self, token: str) -> bool:
        if self.text.startswith(token, self.pos):
            self.pos += len(token)
            return True
        return False

    def fail(self, *expected: str):
        raise ParseError(self.pos, expected)


def parse_canonical(text: str) -> VariantAst:
    """Parse a canonical HGVS-style description into a :class:`VariantAst`.

    The molecule is inferred from the ``g./c./r./p./m./n.`` prefix and an
    optional ``ACCESSION:`` (or ``ACCESSION(GENE):``) prefix is captured.
    Raises :class:`ParseError` with the failing offset otherwise.
    """
    if not text:
        raise ParseError(0, ("variant description",))

    m = _RSID_CANONICAL_RE.match(text)
    if m is not None:
        return rsid_ast(int(m.group(1)))

    head = _PREFIX_RE.match(text)
    if head is None:
        raise ParseError(0, ("molecule prefix g./c./r./p./m./n.", "rs<number>"))
    molecule = Molecule(head.group("mol"))
    cur = _Cursor(text, head.end())

    if molecule is Molecule.PROTEIN:
        position, edit = _parse_protein_tail(cur)
    else:
        position, edit = _parse_nt_tail(cur, molecule)

    if not cur.eof():
        cur.fail("end of description")

    ast = VariantAst(
        molecule=molecule,
        position=position,
        edit=edit,
        reference_accession=head.group("acc"),
        gene_symbol=head.group("gene"),
    )
    try:
        validate_ast(ast)
    except ValueError as exc:
        raise ParseError(cur.pos, (), detail=str(exc)) from exc
    return ast


def _parse_point(cur: _Cursor, allow_offset: bool) -> tuple[int, int | None]:
    m = cur.take(_INT_RE)
    if m is None:
        cur.fail("position digits")
    value = int(m.group(1))
    if value < 1:
        raise ParseError(m.start(1), (), detail="positions are 1-based")
    offset = None
    if allow_offset:
        om = cur.take(_OFFSET_RE)
        if om is not None:
            offset = int(om.group(2))
            if om.group(1) == "-":
                offset = -offset
            if offset == 0:
                raise ParseError(om.start(2), (), detail="intron offsets must be nonzero")
    return value, offset


def _parse_nt_tail(cur: _Cursor, molecule: Molecule) -> tuple[PositionSpec, EditSpec]:
    allow_offset = molecule in OFFSET_MOLECULES
    start, start_off = _parse_point(cur, allow_offset)
    end = end_off = None
    if cur.literal("_"):
        end, end_off = _parse_point(cur, allow_offset)
    position = _build_position(start, end, start_off, end_off, cur)

    if molecule is Molecule.RNA:
        base_re, bases_re, base_name = _RNA_BASE_RE, _RNA_BASES_RE, "rna base"
    else:
        base_re, bases_re, base_name = _DNA_BASE_RE, _DNA_BASES_RE, "base"

    if cur.literal("delins"):
        alt = cur.take(bases_re)
        if alt is None:
            cur.fail(base_name)
        edit = EditSpec(EditKind.DELINS, alt_allele=alt.group(0))
    elif cur.literal("del"):
        ref = cur.take(bases_re)
        edit = EditSpec(EditKind.DELETION, ref_allele=ref.group(0) if ref else None)
    elif cur.literal("dup"):
        ref = cur.take(bases_re)
        edit = EditSpec(EditKind.DUPLICATION, ref_allele=ref.group(0) if ref else None)
    elif cur.literal("ins"):
        alt = cur.take(bases_re)
        if alt is None:
            cur.fail(base_name)
        edit = EditSpec(EditKind.INSERTION, alt_allele=alt.group(0))
    elif cur.literal("="):
        edit = EditSpec(EditKind.SYNONYMOUS)
    else:
        ref = cur.take(base_re)
        if ref is None:
            cur.fail(base_name, "del", "dup", "ins", "delins", "=")
        if cur.literal(">"):
            alt = cur.take(base_re)
            if alt is None:
                cur.fail(base_name)
            edit = EditSpec(EditKind.SUBSTITUTION, ref_allele=ref.group(0), alt_allele=alt.group(0))
        elif cur.literal("="):
            edit = EditSpec(EditKind.SYNONYMOUS, ref_allele=ref.group(0))
        else:
            cur.fail(">", "=")

    return position, edit


_DNA_BASE_RE = re.compile(r"[ACGT]")
_DNA_BASES_RE = re.compile(r"[ACGT]+")
_RNA_BASE_RE = re.compile(r"[acgu]")
_RNA_BASES_RE = re.compile(r"[acgu]+")


def _build_position(
    start: int, end: int | None, start_off: int | None, end_off: int | None, cur: _Cursor
) -> PositionSpec:
    if end is not None:
        # Collapse degenerate single-base "ranges" like 76_76.
        if (start, start_off or 0) == (end, end_off or 0):
            end, end_off = None, None
        elif (start, start_off or 0) > (end, end_off or 0):
            raise ParseError(cur.pos, (), detail="range start must precede range end")
    return PositionSpec(start=start, end=end, start_offset=start_off, end_offset=end_off)


def _parse_aa(cur: _Cursor) -> str | None:
    """Consume one residue code (3-letter, 1-letter, Ter, X, or *)."""
    chunk = cur.text[cur.pos : cur.pos + 3]
    if chunk in AA3_TO_1:
        cur.pos += 3
        return AA3_TO_1[chunk]
    ch = cur.text[cur.pos : cur.pos + 1]
    if ch in AA1 or ch == "*":
        cur.pos += 1
        return ch
    if ch == "X":
        cur.pos += 1
        return "*"
    return None


def _parse_aa_seq(cur: _Cursor) -> str | None:
    residues = []
    while True:
        aa = _parse_aa(cur)
        if aa is None:
            break
        residues.append(aa)
    return "".join(residues) or None


def _parse_protein_tail(cur: _Cursor) -> tuple[PositionSpec, EditSpec]:
    ref1 = _parse_aa(cur)
    if ref1 is None:
        cur.fail("amino-acid code")
    start, _ = _parse_point(cur, allow_offset=False)
    end = None
    ref2 = None
    if cur.literal("_"):
        ref2 = _parse_aa(cur)
        if ref2 is None:
            cur.fail("amino-acid code")
        end, _ = _parse_point(cur, allow_offset=False)
    position = _build_position(start, end, None, None, cur)
    if position.end is None:
        ref2 = None  # degenerate 506_506 range collapsed to one anchor
    anchors = ref1 + (ref2 or "")

    if cur.literal("delins"):
        alt = _parse_aa_seq(cur)
        if alt is None:
            cur.fail("amino-acid code")
        edit = EditSpec(EditKind.DELINS, ref_allele=anchors, alt_allele=alt)
    elif cur.literal("del"):
        edit = EditSpec(EditKind.DELETION, ref_allele=anchors)
    elif cur.literal("dup"):
        edit = EditSpec(EditKind.DUPLICATION, ref_allele=anchors)
    elif cur.literal("ins"):
        alt = _parse_aa_seq(cur)
        if alt is None:
            cur.fail("amino-acid code")
        edit = EditSpec(EditKind.INSERTION, ref_allele=anchors, alt_allele=alt)
    elif cur.literal("fs"):
        edit = EditSpec(EditKind.FRAMESHIFT, ref_allele=anchors)
    elif cur.literal("="):
        edit = EditSpec(EditKind.SYNONYMOUS, ref_allele=anchors)
    else:
        alt = _parse_aa(cur)
        if alt is None:
            cur.fail("amino-acid code", "del", "dup", "ins", "delins", "fs", "=")
        if cur.literal("fs"):
            edit = EditSpec(EditKind.FRAMESHIFT, ref_allele=anchors, alt_allele=alt)
        else:
            edit = EditSpec(EditKind.SUBSTITUTION, ref_allele=anchors, alt_allele=alt)

    return position, edit


# ---------------------------------------------------------------------------
# Loose patterns
# ---------------------------------------------------------------------------

_WS_RE = re.compile(r"\s+")
_ARROWS = str.maketrans({"→": ">", "⇒": ">", "⟶": ">", "−": "-", "–": "-"})

_LOOSE_RSID_RE = re.compile(r"[Rr][Ss]([0-9]+)\Z")
_LOOSE_SHORTHAND_RE = re.compile(r"([A-Z])([0-9]+)([A-Z*])\Z")
_LOOSE_SHORTHAND_FS_RE = re.compile(r"([A-Z])([0-9]+)fs\Z")
_LOOSE_SPELLED_RE = re.compile(r"([A-Za-z]{3})([0-9]+)([A-Za-z]{3}|[Xx]|\*)\Z")
_LOOSE_SPELLED_FS_RE = re.compile(r"([A-Za-z]{3})([0-9]+)fs\Z")
_LOOSE_IVS_RE = re.compile(r"[Ii][Vv][Ss]([0-9]+)([+-])([0-9]+)([ACGTacgt])>([ACGTacgt])\Z")


def _aa_from_loose(code: str) -> str | None:
    if code in ("*",):
        return "*"
    if len(code) == 1:
        up = code.upper()
        if up == "X":
            return "*"
        return up if up in AA1 else None
    return AA3_TO_1.get(code.capitalize())


def parse_loose(text: str, context: "TranscriptModel | None" = None) -> VariantAst:
    """Parse deprecated/loose variant mentions into a normalized AST.

    Handles everything :func:`parse_canonical` does (tolerating whitespace
    and unicode arrows) plus protein shorthand (``R506Q``), spelled
    3-letter forms (``Arg506Gln``), intron-numbered IVS notation (needs
    *context* to resolve against exon boundaries), and rsIDs.
    """
    cleaned = _WS_RE.sub("", text).translate(_ARROWS)
    if not cleaned:
        raise ParseError(0, ("variant description",))

    try:
        return normalize_ast(parse_canonical(cleaned))
    except ParseError:
        pass

    m = _LOOSE_RSID_RE.match(cleaned)
    if m is not None:
        return rsid_ast(int(m.group(1)))

    for pattern in (_LOOSE_SHORTHAND_RE, _LOOSE_SPELLED_RE):
        m = pattern.match(cleaned)
        if m is None:
            continue
        ref = _aa_from_loose(m.group(1))
        alt = _aa_from_loose(m.group(3))
        if ref is None or ref == "*" or alt is None:
            continue
        return VariantAst(
            molecule=Molecule.PROTEIN,
            position=PositionSpec(start=_loose_pos(m.group(2))),
            edit=EditSpec(EditKind.SUBSTITUTION, ref_allele=ref, alt_allele=alt),
        )

    for pattern in (_LOOSE_SHORTHAND_FS_RE, _LOOSE_SPELLED_FS_RE):
        m = pattern.match(cleaned)
        if m is None:
            continue
        ref = _aa_from_loose(m.group(1))
        if ref is None or ref == "*":
            continue
        return VariantAst(
            molecule=Molecule.PROTEIN,
            position=PositionSpec(start=_loose_pos(m.group(2))),
            edit=EditSpec(EditKind.FRAMESHIFT, ref_allele=ref),
        )

    m = _LOOSE_IVS_RE.match(cleaned)
    if m is not None:
        if context is None:
            raise MissingContext(
                f"intron-numbered form {text.strip()!r} needs a transcript to resolve"
            )
        return _resolve_ivs(
            intron=int(m.group(1)),
            sign=m.group(2),
            distance=_loose_pos(m.group(3)),
            ref=m.group(4).upper(),
            alt=m.group(5).upper(),
            context=context,
        )

    raise ParseError(
        0,
        ("canonical description", "protein shorthand", "spelled protein", "IVS form", "rsID"),
    )


def _loose_pos(digits: str) -> int:
    value = int(digits)
    if value < 1:
        raise ParseError(0, (), detail="positions are 1-based")
    return value


def _resolve_ivs(
    intron: int, sign: str, distance: int, ref: str, alt: str, context: "TranscriptModel"
) -> VariantAst:
    """Anchor intron-numbered notation to coding coordinates.

    Intron *n* begins after the last base of exon *n* in transcript order;
    ``+k`` counts from the donor side, ``-k`` from the acceptor side.
    """
    lengths = context.exon_lengths()
    if not 1 <= intron <= len(lengths) - 1:
        raise OutOfTranscript(
            f"{context.transcript_id} has {len(lengths) - 1} intron(s), no intron {intron}"
        )
    boundaries = list(accumulate(lengths))
    if sign == "+":
        t_anchor, offset = boundaries[intron - 1], distance
    else:
        t_anchor, offset = boundaries[intron - 1] + 1, -distance
    c_anchor = t_anchor - context.cds_start + 1
    if not 1 <= c_anchor <= context.cds_length():
        raise OutOfTranscript("intron boundary falls outside the coding sequence")
    return VariantAst(
        molecule=Molecule.CODING,
        position=PositionSpec(start=c_anchor, start_offset=offset),
        edit=EditSpec(EditKind.SUBSTITUTION, ref_allele=ref, alt_allele=alt),
    )


# ---------------------------------------------------------------------------
# Formatting and normalization
# ---------------------------------------------------------------------------


def format_canonical(ast: VariantAst, protein_three_letter: bool = False) -> str:
    """Render *ast* as canonical text (same AST, identical bytes).

    Protein residues use 1-letter codes with ``*`` for stop; pass
    ``protein_three_letter=True`` for the 3-letter display form (never
    used for index keys).
    """
    validate_ast(ast)
    if ast.edit.kind is EditKind.RSID:
        return f"rs{ast.edit.rsid_number}"
    prefix = ""
    if ast.reference_accession:
        prefix = ast.reference_accession
        if ast.gene_symbol:
            prefix += f"({ast.gene_symbol})"
        prefix += ":"
    return f"{prefix}{ast.molecule.value}.{format_body(ast, protein_three_letter)}"


def format_body(ast: VariantAst, protein_three_letter: bool = False) -> str:
    """Body text after the ``<molecule>.`` prefix (whole text for rsIDs)."""
    if ast.edit.kind is EditKind.RSID:
        return f"rs{ast.edit.rsid_number}"
    if ast.molecule is Molecule.PROTEIN:
        return _protein_body(ast.position, ast.edit, protein_three_letter)
    return _nt_body(ast.position, ast.edit)


def _point_str(pos: int, offset: int | None) -> str:
    return f"{pos}{offset:+d}" if offset is not None else str(pos)


def _nt_body(pos: PositionSpec, edit: EditSpec) -> str:
    where = _point_str(pos.start, pos.start_offset)
    if pos.end is not None:
        where += f"_{_point_str(pos.end, pos.end_offset)}"
    kind = edit.kind
    if kind is EditKind.SUBSTITUTION:
        return f"{where}{edit.ref_allele}>{edit.alt_allele}"
    if kind is EditKind.SYNONYMOUS:
        return f"{where}{edit.ref_allele or ''}="
    if kind is EditKind.DELETION:
        return f"{where}del{edit.ref_allele or ''}"
    if kind is EditKind.DUPLICATION:
        return f"{where}dup{edit.ref_allele or ''}"
    if kind is EditKind.INSERTION:
        return f"{where}ins{edit.alt_allele}"
    return f"{where}delins{edit.alt_allele}"


def _aa_out(residue: str, three: bool) -> str:
    return AA1_TO_3[residue] if three else residue


def _protein_body(pos: PositionSpec, edit: EditSpec, three: bool) -> str:
    ref = edit.ref_allele or ""
    where = f"{_aa_out(ref[0], three)}{pos.start}"
    if pos.end is not None:
        where += f"_{_aa_out(ref[1], three)}{pos.end}"
    kind = edit.kind
    if kind is EditKind.SUBSTITUTION:
        return f"{where}{_aa_out(edit.alt_allele, three)}"
    if kind is EditKind.SYNONYMOUS:
        return f"{where}="
    if kind is EditKind.FRAMESHIFT:
        alt = _aa_out(edit.alt_allele, three) if edit.alt_allele else ""
        return f"{where}{alt}fs"
    if kind is EditKind.DELETION:
        return f"{where}del"
    if kind is EditKind.DUPLICATION:
        return f"{where}dup"
    inserted = "".join(_aa_out(r, three) for r in edit.alt_allele)
    if kind is EditKind.INSERTION:
        return f"{where}ins{inserted}"
    return f"{where}delins{inserted}"


def _normalize_residues(value: str) -> str:
    """Map hand-built residue strings to 1-letter codes (Ter/X -> *).

    Case disambiguates: exact title-case chunks ("TrpTer") decode as
    3-letter codes, anything else is per-residue 1-letter ("PHE" = P,H,E).
    """
    if len(value) % 3 == 0 and len(value) >= 3:
        chunks = [value[i : i + 3] for i in range(0, len(value), 3)]
        if all(c in AA3_TO_1 for c in chunks):
            return "".join(AA3_TO_1[c] for c in chunks)
    out = []
    for ch in value:
        up = ch.upper()
        out.append("*" if up == "X" or ch == "*" else up)
    return "".join(out)


def _clean_token(value: str | None) -> str | None:
    if value is None:
        return None
    value = "".join(value.split())
    return value or None


def normalize_ast(ast: VariantAst) -> VariantAst:
    """Collapse representation variance; idempotent.

    3-letter residues become 1-letter, Ter/X become ``*``, nucleotide case
    follows the molecule (DNA upper, RNA lower), degenerate single-base
    ranges collapse, and stray whitespace is stripped.
    """
    edit = ast.edit
    if edit.kind is EditKind.RSID:
        return rsid_ast(edit.rsid_number)

    ref, alt = edit.ref_allele, edit.alt_allele
    if ast.molecule is Molecule.PROTEIN:
        ref = _normalize_residues(ref) if ref else None
        alt = _normalize_residues(alt) if alt else None
    elif ast.molecule is Molecule.RNA:
        ref = ref.lower() if ref else None
        alt = alt.lower() if alt else None
    else:
        ref = ref.upper() if ref else None
        alt = alt.upper() if alt else None

    pos = ast.position
    if pos is not None and pos.end is not None:
        if (pos.start, pos.start_offset or 0) == (pos.end, pos.end_offset or 0):
            pos = PositionSpec(start=pos.start, start_offset=pos.start_offset)
            if ast.molecule is Molecule.PROTEIN and ref and len(ref) == 2:
                ref = ref[0]

    return VariantAst(
        molecule=ast.molecule,
        position=pos,
        edit=EditSpec(kind=edit.kind, ref_allele=ref, alt_allele=alt),
        reference_accession=_clean_token(ast.reference_accession),
        gene_symbol=_clean_token(ast.gene_symbol),
    )
