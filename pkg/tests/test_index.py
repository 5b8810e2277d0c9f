import io
import json
from pathlib import Path

import pytest

from litvar.errors import ChecksumError, FormatError, QueryParseError, SpanMismatch, VersionError
from litvar.hgvs import parse_loose
from litvar.index import (
    CanonicalKey,
    LiteratureIndex,
    canonicalize,
    ingest_pubtator,
    load_segment,
    save_segment,
)
from litvar.mentions import Document

FIXTURES = Path(__file__).parent / "fixtures"

FIXTURE_DOC = (
    "1001|t|BRCA2 c.76A>T in breast cancer\n"
    "1001|a|We report a rare variant.\n"
    "1001\t6\t13\tc.76A>T\tMutation\t-\n"
)


class TestPubtator:
    def test_fixture_document(self):
        [(doc, annotations)] = ingest_pubtator(io.StringIO(FIXTURE_DOC))
        assert doc == Document(1001, "BRCA2 c.76A>T in breast cancer", "We report a rare variant.")
        [ann] = annotations
        assert (ann.start, ann.end, ann.surface) == (6, 13, "c.76A>T")
        assert ann.norm_id is None

    def test_empty_stream(self):
        assert ingest_pubtator(io.StringIO("")) == []

    def test_span_mismatch(self):
        bad = FIXTURE_DOC.replace("c.76A>T\tMutation", "c.76A>C\tMutation").replace(
            "1001\t6\t13\tc.76A>T", "1001\t6\t13\tc.76A>C"
        )
        with pytest.raises(SpanMismatch) as err:
            ingest_pubtator(io.StringIO(bad))
        assert err.value.line == 3

    def test_three_document_fixture(self):
        with open(FIXTURES / "corpus_3docs.pubtator") as handle:
            docs = ingest_pubtator(handle)
        assert [doc.pmid for doc, _ in docs] == [1001, 1002, 1003]

    @pytest.mark.parametrize(
        "text,line",
        [
            ("1001|x|title\n", 1),
            ("1001|t|title\n1002|a|abstract\n", 2),
            ("1001|t|title\n1001|a|abstract\nnot-an-annotation\n", 3),
            ("1001|t|title\n1001|a|abstract\n1001\t0\t99\tooo\tMutation\t-\n", 3),
            ("1001|t|title\n\n", 2),
            ("1001|t|t\n1001|a|a\n\n1001|t|t\n1001|a|a\n", 4),
        ],
    )
    def test_format_errors_carry_line_numbers(self, text, line):
        with pytest.raises(FormatError) as err:
            ingest_pubtator(io.StringIO(text))
        assert err.value.line == line

    def test_pipe_in_title_tolerated(self):
        text = "5|t|left | right\n5|a|ok\n"
        [(doc, _)] = ingest_pubtator(io.StringIO(text))
        assert doc.title == "left | right"


class TestCanonicalKey:
    def test_render_parse_round_trip(self):
        key = CanonicalKey(9606, "HGNC:1101", "c", "76A>T")
        assert key.render() == "9606|HGNC:1101|c|76A>T"
        assert CanonicalKey.parse(key.render()) == key

    def test_total_order(self):
        keys = [
            CanonicalKey(9606, "*", "rsid", "rs1"),
            CanonicalKey(9606, "F5", "p", "R506Q"),
            CanonicalKey(9606, "*", "c", "76A>T"),
        ]
        rendered = sorted(k.render() for k in keys)
        assert [k.render() for k in sorted(keys)] == rendered


class TestCanonicalize:
    def test_protein_with_gene(self, resources):
        keys = canonicalize(parse_loose("p.R506Q"), "F5", resources)
        assert [k.render() for k in keys] == ["9606|F5|p|R506Q"]

    def test_coding_derives_all_levels(self, resources_no_chain):
        keys = canonicalize(parse_loose("c.4T>C"), "G1", resources_no_chain)
        assert [k.render() for k in keys] == [
            "9606|G1|c|4T>C",
            "9606|G1|g|chrT:1004T>C",
            "9606|G1|p|F2L",
        ]

    def test_coding_lifts_to_target_assembly(self, resources):
        keys = canonicalize(parse_loose("c.4T>C"), "G1", resources)
        assert "9606|G1|g|chrT:11004T>C" in [k.render() for k in keys]

    def test_rsid_passthrough(self, resources):
        keys = canonicalize(parse_loose("rs80359550"), "HGNC:1101", resources)
        assert [k.render() for k in keys] == ["9606|*|rsid|rs80359550"]

    def test_unknown_gene_keys_star(self, resources):
        keys = canonicalize(parse_loose("c.76A>T"), None, resources)
        assert [k.render() for k in keys] == ["9606|*|c|76A>T"]

    def test_intronic_has_no_protein_level(self, resources):
        rendered = [k.render() for k in canonicalize(parse_loose("c.60+1G>A"), "G1", resources)]
        assert rendered == ["9606|G1|c|60+1G>A", "9606|G1|g|chrT:11061G>A"]

    def test_stated_del_ref_dropped_from_key(self, resources):
        a = canonicalize(parse_loose("c.76delA"), "F5", resources)
        b = canonicalize(parse_loose("c.76del"), "F5", resources)
        assert a == b
        assert a[0].edit_repr == "76del"

    def test_rna_reduces_to_coding(self, resources):
        assert canonicalize(parse_loose("r.76a>u"), "F5", resources) == canonicalize(
            parse_loose("c.76A>T"), "F5", resources
        )


class TestIndex:
    def test_end_to_end_fixture_document(self, built_index):
        hits = built_index.query_keys(["9606|HGNC:1101|c|76A>T"])
        assert [pmid for pmid, _ in hits] == [1001]
        [(_, evidence)] = hits
        sources = {ev.source for ev in evidence}
        assert sources == {"extracted", "imported"}

    def test_idempotent_reindex(self, resources, corpus_docs):
        index = LiteratureIndex(resources)
        for doc, anns in corpus_docs:
            index.add_document(doc, anns)
        before = {key: index.query_keys([key]) for key in index.keys()}
        for doc, anns in corpus_docs:
            index.add_document(doc, anns)
        after = {key: index.query_keys([key]) for key in index.keys()}
        assert before == after

    def test_order_independence(self, resources, corpus_docs):
        forward = LiteratureIndex(resources)
        backward = LiteratureIndex(resources)
        for doc, anns in corpus_docs:
            forward.add_document(doc, anns)
        for doc, anns in reversed(corpus_docs):
            backward.add_document(doc, anns)
        assert forward.keys() == backward.keys()
        for key in forward.keys():
            assert forward.query_keys([key]) == backward.query_keys([key])

    def test_species_gate_drops_document(self, resources):
        index = LiteratureIndex(resources)
        report = index.add_document(Document(42, "a murine study of BRCA2 c.76A>T", ""))
        assert not report.indexed
        assert report.dropped_reason
        assert index.key_count == 0

    def test_ivs_resolves_with_gene_context(self, built_index):
        hits = built_index.query("IVS1+1G>A", gene="TOYA")
        assert [pmid for pmid, _ in hits] == [1003]

    def test_query_surface_vs_rendered_key(self, built_index):
        via_surface = built_index.query("c.76A>T", gene="BRCA2")
        via_key = built_index.query("9606|HGNC:1101|c|76A>T")
        assert via_surface == via_key

    def test_query_equivalent_loose_forms(self, built_index):
        a = built_index.query("p.Arg506Gln", gene="F5")
        b = built_index.query("R506Q", gene="F5")
        assert a == b
        assert [pmid for pmid, _ in a] == [1002]

    def test_query_never_indexed(self, built_index):
        assert built_index.query("c.9999A>T", gene="BRCA2") == []

    def test_query_unparseable(self, built_index):
        with pytest.raises(QueryParseError):
            built_index.query("banana")

    def test_gene_star_isolation(self, built_index):
        # The fixture c.76A>T is indexed under BRCA2; a gene-less query
        # consults only '*' keys and must not see it.
        assert built_index.query("c.76A>T") == []
        assert built_index.query("c.76A>T", gene="BRCA2") != []

    def test_unknown_gene_qualifier_matches_nothing(self, built_index):
        assert built_index.query("c.76A>T", gene="NOTAGENE") == []

    def test_gene_id_accepted_as_qualifier(self, built_index):
        assert built_index.query("c.76A>T", gene="HGNC:1101") == built_index.query(
            "c.76A>T", gene="BRCA2"
        )

    def test_rsid_query_ignores_gene(self, built_index):
        assert [p for p, _ in built_index.query("rs80359550")] == [1002]
        assert built_index.query("rs80359550", gene="F5") == built_index.query("rs80359550")

    def test_equivalence_classes_fixture(self, built_index):
        with open(FIXTURES / "equivalence_classes.json") as handle:
            classes = json.load(handle)
        assert len(classes) >= 20
        for entry in classes:
            assert len(entry["surfaces"]) >= 3
            key_sets = [
                built_index.resolve_query(surface, entry["gene"])
                for surface in entry["surfaces"]
            ]
            assert all(ks == key_sets[0] for ks in key_sets), entry["name"]
            assert key_sets[0], entry["name"]


class TestPersistence:
    def test_round_trip_identical_answers(self, built_index, resources, tmp_path):
        path = tmp_path / "index.seg"
        save_segment(built_index, path)
        loaded = load_segment(path, resources)
        assert loaded.keys() == built_index.keys()
        assert loaded.document_count == built_index.document_count
        for key in built_index.keys():
            assert loaded.query_keys([key]) == built_index.query_keys([key])

    def test_truncated_file(self, built_index, resources, tmp_path):
        path = tmp_path / "index.seg"
        save_segment(built_index, path)
        data = path.read_bytes()
        path.write_bytes(data[: len(data) // 2])
        with pytest.raises(ChecksumError):
            load_segment(path, resources)

    def test_corrupt_byte(self, built_index, resources, tmp_path):
        path = tmp_path / "index.seg"
        save_segment(built_index, path)
        data = bytearray(path.read_bytes())
        data[len(data) // 2] ^= 0xFF
        path.write_bytes(bytes(data))
        with pytest.raises(ChecksumError):
            load_segment(path, resources)

    def test_unknown_version(self, built_index, resources, tmp_path):
        path = tmp_path / "index.seg"
        save_segment(built_index, path)
        data = bytearray(path.read_bytes())
        data[4:6] = (999).to_bytes(2, "little")
        path.write_bytes(bytes(data))
        with pytest.raises(VersionError):
            load_segment(path, resources)

    def test_not_a_segment(self, resources, tmp_path):
        path = tmp_path / "junk.seg"
        path.write_bytes(b"definitely not a segment file")
        with pytest.raises(VersionError):
            load_segment(path, resources)

    def test_save_is_deterministic(self, built_index, tmp_path):
        a, b = tmp_path / "a.seg", tmp_path / "b.seg"
        save_segment(built_index, a)
        save_segment(built_index, b)
        assert a.read_bytes() == b.read_bytes()
