from pathlib import Path

import pytest

from litvar.genes import GeneMention
from litvar.mentions import (
    Document,
    PatternClass,
    attach_gene_context,
    classify_surface,
    combined_text,
    extract_mentions,
    list_pattern_classes,
)

FIXTURES = Path(__file__).parent / "fixtures"


def test_single_canonical_mention_offsets():
    doc = Document(1001, "BRCA2 c.76A>T in breast cancer", "We report a rare variant.")
    mentions = extract_mentions(doc)
    assert len(mentions) == 1
    m = mentions[0]
    assert (m.start, m.end, m.surface) == (6, 13, "c.76A>T")
    assert m.pattern_class is PatternClass.HGVS_CANONICAL
    assert m.ast is not None


def test_empty_document():
    assert extract_mentions(Document(1, "", "")) == []


def test_two_classes_in_start_order():
    doc = Document(7, "Variant rs80359550 and p.Arg506Gln co-occur", "")
    mentions = extract_mentions(doc)
    assert [m.pattern_class for m in mentions] == [
        PatternClass.RSID,
        PatternClass.PROTEIN_SPELLED,
    ]
    assert mentions[0].start < mentions[1].start


def test_spans_slice_to_surface():
    doc = Document(
        9,
        "NM_000059.3:c.7397T>C with W26X and IVS2-2A>C",
        "Plus Arg506Gln, rs123, c.76_78delACT here.",
    )
    text = combined_text(doc)
    mentions = extract_mentions(doc)
    assert len(mentions) == 6
    for m in mentions:
        assert text[m.start : m.end] == m.surface
    assert mentions == sorted(mentions, key=lambda m: m.start)


def test_longest_match_wins_within_class():
    doc = Document(3, "NM_000059.3:c.7397T>C was seen", "")
    mentions = extract_mentions(doc)
    assert [m.surface for m in mentions] == ["NM_000059.3:c.7397T>C"]


def test_unparseable_candidate_kept_as_evidence():
    # IVS forms cannot parse without a transcript; the mention survives.
    doc = Document(4, "the IVS1+1G>A allele", "")
    (mention,) = extract_mentions(doc)
    assert mention.pattern_class is PatternClass.IVS
    assert mention.ast is None


def test_word_boundaries_block_embedded_matches():
    doc = Document(5, "XR506Q and Qc.76A>Tz and rs123x", "")
    assert extract_mentions(doc) == []


def test_deterministic():
    doc = Document(
        6, "W26X near rs777 and c.4T>C", "Arg506Gln recurs with IVS1+1G>A often."
    )
    assert extract_mentions(doc) == extract_mentions(doc)


def test_registry_shape():
    classes = list_pattern_classes()
    assert len(classes) == 5
    assert classes[0][0] is PatternClass.HGVS_CANONICAL
    assert classes == list_pattern_classes()
    assert all(isinstance(desc, str) and desc for _, desc in classes)


def test_classify_surface():
    assert classify_surface("c.76A>T") is PatternClass.HGVS_CANONICAL
    assert classify_surface("R506Q") is PatternClass.PROTEIN_SHORTHAND
    assert classify_surface("Arg506Gln") is PatternClass.PROTEIN_SPELLED
    assert classify_surface("IVS1+1G>A") is PatternClass.IVS
    assert classify_surface("rs80359550") is PatternClass.RSID
    assert classify_surface("not a variant") is None


class TestGeneContext:
    def test_nearest_gene(self):
        doc = Document(1001, "BRCA2 c.76A>T in breast cancer", "We report a rare variant.")
        mentions = extract_mentions(doc)
        genes = [GeneMention(1001, 0, 5, "BRCA2", "HGNC:1101")]
        [(mention, gene_id)] = attach_gene_context(mentions, genes)
        assert mention.surface == "c.76A>T"
        assert gene_id == "HGNC:1101"

    def test_no_genes(self):
        doc = Document(1, "c.76A>T stands alone", "")
        [(_, gene_id)] = attach_gene_context(extract_mentions(doc), [])
        assert gene_id is None

    def test_equal_distance_prefers_preceding(self):
        # gene A ends 2 chars before the variant; gene B starts 2 chars after.
        doc = Document(2, "GENEA  c.76A>T  GENEB", "")
        mentions = extract_mentions(doc)
        genes = [
            GeneMention(2, 0, 5, "GENEA", "ID:A"),
            GeneMention(2, 16, 21, "GENEB", "ID:B"),
        ]
        [(_, gene_id)] = attach_gene_context(mentions, genes)
        assert gene_id == "ID:A"


class TestLabelledCorpus:
    """The shipped 50-mention gold corpus: precision = recall = 1.0."""

    @staticmethod
    def load_gold():
        gold = set()
        with open(FIXTURES / "labelled_mentions.tsv") as handle:
            for line in handle:
                if line.startswith("#") or not line.strip():
                    continue
                pmid, start, end, surface, cls = line.rstrip("\n").split("\t")
                gold.add((int(pmid), int(start), int(end), surface, cls))
        return gold

    @staticmethod
    def load_docs():
        from litvar.index import ingest_pubtator

        with open(FIXTURES / "labelled_corpus.pubtator") as handle:
            return [doc for doc, _ in ingest_pubtator(handle)]

    def test_exact_agreement(self):
        gold = self.load_gold()
        assert len(gold) == 50
        predicted = set()
        for doc in self.load_docs():
            text = combined_text(doc)
            for m in extract_mentions(doc):
                assert text[m.start : m.end] == m.surface
                predicted.add((m.pmid, m.start, m.end, m.surface, m.pattern_class.value))
        assert predicted == gold
