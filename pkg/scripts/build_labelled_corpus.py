#!/usr/bin/env python3
"""Regenerate the hand-labelled extraction fixtures.

Documents are composed from filler prose interleaved with variant
surfaces; gold spans come from the composition itself (independent of
the extractor), and a self-check asserts the extractor reproduces the
gold exactly before anything is written. Outputs:

    tests/fixtures/labelled_corpus.pubtator
    tests/fixtures/labelled_mentions.tsv   (pmid, start, end, surface, class)
"""

from __future__ import annotations

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from litvar.mentions import Document, extract_mentions  # noqa: E402

# Each document is (pmid, title pieces, abstract pieces); a piece is either
# filler text or ("surface", "class"). Filler must not match any pattern.
V = tuple

DOCS = [
    (2001,
     ["BRCA2 variant ", V(("c.76A>T", "hgvs_canonical")), " in early onset disease"],
     ["We observed ", V(("c.76A>T", "hgvs_canonical")), " and ", V(("rs80359550", "rsid")),
      " in three families with strong history."]),
    (2002,
     ["Factor F5 substitution ", V(("R506Q", "protein_shorthand")), " and thrombosis risk"],
     ["The spelled form ", V(("Arg506Gln", "protein_spelled")), " matches ",
      V(("p.R506Q", "hgvs_canonical")), " and ", V(("p.Arg506Gln", "protein_spelled")),
      " in older reports."]),
    (2003,
     ["Splice donor change ", V(("IVS1+1G>A", "ivs")), " in TOYA"],
     ["The same change is written ", V(("c.60+1G>A", "hgvs_canonical")),
      " against the current transcript, and ", V(("IVS2-2A>C", "ivs")),
      " affects the downstream acceptor."]),
    (2004,
     ["Recurring stop gain ", V(("W26X", "protein_shorthand")), " revisited"],
     ["Earlier surveys listed ", V(("Trp26Ter", "protein_spelled")), ", ",
      V(("p.W26*", "hgvs_canonical")), ", and ", V(("p.Trp26Ter", "protein_spelled")),
      " for the same allele."]),
    (2005,
     ["Accessioned description ", V(("NM_000059.3:c.7397T>C", "hgvs_canonical")), " and context"],
     ["A deletion ", V(("c.76_78delACT", "hgvs_canonical")), " plus a duplication ",
      V(("c.76dup", "hgvs_canonical")), " were reported together."]),
    (2006,
     ["Insertions and delins forms"],
     ["Both ", V(("c.76_77insT", "hgvs_canonical")), " and ",
      V(("c.76_78delinsAG", "hgvs_canonical")), " disrupt the reading frame, unlike ",
      V(("c.76=", "hgvs_canonical")), " which is silent."]),
    (2007,
     ["Genomic and mitochondrial coordinates"],
     ["Mapping gives ", V(("chrT:g.1004T>C", "hgvs_canonical")), " and separately ",
      V(("g.1001A>G", "hgvs_canonical")), " and ", V(("g.2001A>G", "hgvs_canonical")),
      " and ", V(("m.8993T>G", "hgvs_canonical")), " with maternal inheritance."]),
    (2008,
     ["RNA notation ", V(("r.76a>u", "hgvs_canonical")), " equals the coding form"],
     ["The transcript change ", V(("c.4T>C", "hgvs_canonical")), " was confirmed, and ",
      V(("rs113993960", "rsid")), " served as a nearby marker."]),
    (2009,
     ["Frameshifts ", V(("R506fs", "protein_shorthand")), " and ",
      V(("Arg506fs", "protein_spelled"))],
     ["A truncating form ", V(("p.R506fs", "hgvs_canonical")), " shortens the protein, and ",
      V(("p.Arg506Profs", "protein_spelled")), " names the new residue."]),
    (2010,
     ["Kinase hotspot mentions ", V(("V600E", "protein_shorthand")), " and ",
      V(("T790M", "protein_shorthand"))],
     ["Resistance surveys also track ", V(("L858R", "protein_shorthand")), ", ",
      V(("D816V", "protein_shorthand")), ", and ", V(("G719S", "protein_shorthand")),
      " across cohorts."]),
    (2011,
     ["Protein ranges ", V(("p.R506_W508del", "hgvs_canonical")), " and friends"],
     ["Curators wrote ", V(("p.Arg506_Trp508del", "protein_spelled")), ", ",
      V(("p.C5_G7delinsW", "hgvs_canonical")), ", and ", V(("p.A3_D4insG", "hgvs_canonical")),
      " for the adjacent events."]),
    (2012,
     ["Noncoding and synonymous notes"],
     ["The noncoding change ", V(("n.54C>G", "hgvs_canonical")), " sits near ",
      V(("c.6T>C", "hgvs_canonical")), " which is synonymous, and ",
      V(("rs4149056", "rsid")), " tags the haplotype, while ",
      V(("Gly12Asp", "protein_spelled")), " and ", V(("c.88C>T", "hgvs_canonical")),
      " are unrelated."]),
    (2013,
     ["Mixed report with ", V(("p.K15del", "hgvs_canonical")), " and ",
      V(("p.G7dup", "hgvs_canonical"))],
     ["A final deletion ", V(("c.76del", "hgvs_canonical")), " plus ",
      V(("c.101_103del", "hgvs_canonical")), " closed the series, and ",
      V(("rs80359550", "rsid")), " recurred."]),
]


def compose(pieces):
    text = ""
    gold = []
    for piece in pieces:
        if isinstance(piece, tuple):
            surface, cls = piece
            gold.append((len(text), len(text) + len(surface), surface, cls))
            text += surface
        else:
            text += piece
    return text, gold


def build():
    corpus_lines = []
    gold_rows = []
    total = 0
    for pmid, title_pieces, abstract_pieces in DOCS:
        title, title_gold = compose(title_pieces)
        abstract, abstract_gold = compose(abstract_pieces)
        shift = len(title) + 1  # abstract offsets shift past "title "
        gold = title_gold + [(s + shift, e + shift, surf, cls) for s, e, surf, cls in abstract_gold]
        doc = Document(pmid=pmid, title=title, abstract=abstract)

        expected = {(pmid, s, e, surf, cls) for s, e, surf, cls in gold}
        got = {
            (m.pmid, m.start, m.end, m.surface, m.pattern_class.value)
            for m in extract_mentions(doc)
        }
        if expected != got:
            raise SystemExit(
                f"pmid {pmid}: extractor disagrees with construction\n"
                f"  missing: {sorted(expected - got)}\n  extra:   {sorted(got - expected)}"
            )

        corpus_lines.append(f"{pmid}|t|{title}")
        corpus_lines.append(f"{pmid}|a|{abstract}")
        corpus_lines.append("")
        gold_rows.extend((pmid, s, e, surf, cls) for s, e, surf, cls in gold)
        total += len(gold)

    if total != 50:
        raise SystemExit(f"labelled corpus must carry exactly 50 mentions, got {total}")

    fixtures = REPO / "tests" / "fixtures"
    (fixtures / "labelled_corpus.pubtator").write_text("\n".join(corpus_lines) + "\n")
    with open(fixtures / "labelled_mentions.tsv", "w") as handle:
        handle.write("# pmid\tstart\tend\tsurface\tpattern_class\n")
        for pmid, s, e, surf, cls in gold_rows:
            handle.write(f"{pmid}\t{s}\t{e}\t{surf}\t{cls}\n")
    print(f"wrote {len(DOCS)} documents, {total} gold mentions")


if __name__ == "__main__":
    build()
