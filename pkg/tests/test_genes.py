import io

import pytest

from litvar.errors import DuplicateSynonym, FormatError
from litvar.genes import (
    GateDecision,
    extract_gene_mentions,
    load_gene_dictionary,
    normalize_gene,
    species_gate,
)
from litvar.mentions import Document


def load(text):
    return load_gene_dictionary(io.StringIO(text))


FIXTURE_ROW = "HGNC:1101\tBRCA2\tFANCD1|BRCC2\t9606\n"


class TestLoad:
    def test_fixture_row(self):
        gdict = load(FIXTURE_ROW)
        assert gdict.lookup("fancd1") == "HGNC:1101"
        assert gdict.lookup("BRCC2") == "HGNC:1101"

    def test_primary_symbol_counts_as_synonym(self):
        gdict = load(FIXTURE_ROW)
        assert normalize_gene("BRCA2", gdict) == "HGNC:1101"

    def test_empty_stream(self):
        gdict = load("")
        assert gdict.lookup("anything") is None

    def test_comments_and_blanks_skipped(self):
        gdict = load("# header\n\n" + FIXTURE_ROW)
        assert len(gdict.records) == 1

    def test_duplicate_synonym_same_species(self):
        rows = "ID:1\tAAA\tABC\t9606\nID:2\tBBB\tABC\t9606\n"
        with pytest.raises(DuplicateSynonym) as err:
            load(rows)
        assert err.value.line == 2

    def test_same_synonym_other_species_ok(self):
        rows = "ID:1\tBRCA2\t-\t9606\nID:2\tBrca2\t-\t10090\n"
        gdict = load(rows)
        assert gdict.lookup("brca2", 9606) == "ID:1"
        assert gdict.lookup("brca2", 10090) == "ID:2"

    def test_malformed_row(self):
        with pytest.raises(FormatError) as err:
            load("only\tthree\tfields\n")
        assert err.value.line == 1

    def test_bad_taxon(self):
        with pytest.raises(FormatError):
            load("ID:1\tAAA\tAAA\tnine\n")

    def test_serialize_round_trip(self, gene_dict):
        buffer = io.StringIO()
        gene_dict.dump(buffer)
        reloaded = load(buffer.getvalue())
        for record in gene_dict.records:
            for synonym in record.synonyms:
                assert reloaded.lookup(synonym, record.species_taxon) == gene_dict.lookup(
                    synonym, record.species_taxon
                )


class TestNormalize:
    def test_case_folding(self, gene_dict):
        assert normalize_gene("BRCA2", gene_dict) == "HGNC:1101"
        assert normalize_gene("brca2", gene_dict) == "HGNC:1101"

    def test_miss(self, gene_dict):
        assert normalize_gene("NOTAGENE", gene_dict) is None

    def test_primary_symbol_for_every_record(self, gene_dict):
        for record in gene_dict.records:
            assert (
                normalize_gene(record.primary_symbol, gene_dict, record.species_taxon)
                == record.gene_id
            )


class TestExtract:
    def test_title_mention(self, gene_dict):
        doc = Document(1001, "BRCA2 c.76A>T in breast cancer", "We report a rare variant.")
        mentions = extract_gene_mentions(doc, gene_dict)
        assert [(m.start, m.end, m.gene_id) for m in mentions] == [(0, 5, "HGNC:1101")]
        assert mentions[0].surface == "BRCA2"

    def test_word_boundary(self, gene_dict):
        assert extract_gene_mentions(Document(1, "ABRCA2X", ""), gene_dict) == []

    def test_every_occurrence(self, gene_dict):
        doc = Document(2, "BRCA2 interacts while BRCA2 declines", "")
        assert len(extract_gene_mentions(doc, gene_dict)) == 2

    def test_synonym_and_case(self, gene_dict):
        doc = Document(3, "fancd1 carriers", "")
        [m] = extract_gene_mentions(doc, gene_dict)
        assert m.gene_id == "HGNC:1101"


class TestSpeciesGate:
    def test_non_allowed_species_only(self):
        decision = species_gate(Document(1, "a murine model of disease", ""), {9606})
        assert decision == GateDecision(keep=False, reason=decision.reason)
        assert "murine" in decision.reason

    def test_no_species_words(self):
        assert species_gate(Document(1, "no species mentioned here", ""), {9606}).keep

    def test_any_allowed_species(self):
        doc = Document(1, "human and mouse cohorts", "")
        assert species_gate(doc, {9606}).keep

    def test_allowed_taxa_must_be_non_empty(self):
        with pytest.raises(ValueError):
            species_gate(Document(1, "x", ""), set())

    def test_deterministic(self):
        doc = Document(1, "rat studies only", "")
        assert species_gate(doc, {9606}) == species_gate(doc, {9606})
        assert species_gate(doc, {10116}).keep
