import json
import os
from pathlib import Path

import pytest

from litvar.cli import main, writer_lock
from litvar.config import load_config
from litvar.errors import ConfigError, IndexLockError

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestConfig:
    def test_file_and_defaults(self, config_file):
        config = load_config(config_file, env={})
        assert config.gene_dictionary.name == "genes.tsv"
        assert config.taxa == frozenset({9606})
        assert config.assembly == "toyasm2"
        assert config.listen == "127.0.0.1:8080"

    def test_env_overrides(self, config_file):
        config = load_config(config_file, env={"LITVAR_ASSEMBLY": "other", "LITVAR_TAXA": "9606,10090"})
        assert config.assembly == "other"
        assert config.taxa == frozenset({9606, 10090})

    def test_missing_required(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("transcripts=somewhere.tsv\n")
        with pytest.raises(ConfigError):
            load_config(path, env={})

    def test_missing_resource_path(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("gene_dictionary=missing.tsv\ntranscripts=also_missing.tsv\n")
        with pytest.raises(ConfigError):
            load_config(path, env={})

    def test_empty_taxa_rejected(self, config_file):
        with pytest.raises(ConfigError):
            load_config(config_file, env={"LITVAR_TAXA": ""})  # explicit empty

    def test_env_only(self, tmp_path):
        env = {
            "LITVAR_GENE_DICTIONARY": str(FIXTURES / "genes.tsv"),
            "LITVAR_TRANSCRIPTS": str(FIXTURES / "transcripts.tsv"),
        }
        config = load_config(None, env=env)
        assert config.chains is None


class TestIngest:
    def test_fixture_corpus(self, config_file, capsys):
        code, out, err = run(
            capsys, "--config", str(config_file), "ingest", str(FIXTURES / "corpus_3docs.pubtator")
        )
        assert code == 0, err
        assert "documents indexed: 3" in out
        mentions = int(out.split("mentions extracted: ")[1].split("\n")[0])
        assert mentions >= 3

    def test_empty_corpus(self, config_file, tmp_path, capsys):
        empty = tmp_path / "empty.pubtator"
        empty.write_text("")
        code, out, _ = run(capsys, "--config", str(config_file), "ingest", str(empty))
        assert code == 0
        assert "documents indexed: 0" in out

    def test_malformed_line_7_exits_2(self, config_file, tmp_path, capsys):
        corpus = tmp_path / "bad.pubtator"
        corpus.write_text(
            "11|t|first title\n"      # 1
            "11|a|first abstract\n"   # 2
            "\n"                      # 3
            "12|t|second title\n"     # 4
            "12|a|second abstract\n"  # 5
            "\n"                      # 6
            "13|x|broken line\n"      # 7
        )
        code, _, err = run(capsys, "--config", str(config_file), "ingest", str(corpus))
        assert code == 2
        assert ":7" in err

    def test_incremental_ingest_accumulates(self, config_file, tmp_path, capsys):
        first = tmp_path / "first.pubtator"
        first.write_text("21|t|BRCA2 c.76A>T seen\n21|a|none\n\n")
        second = tmp_path / "second.pubtator"
        second.write_text("22|t|BRCA2 c.76A>T again\n22|a|none\n\n")
        run(capsys, "--config", str(config_file), "ingest", str(first))
        run(capsys, "--config", str(config_file), "ingest", str(second))
        code, out, _ = run(capsys, "--config", str(config_file), "query", "c.76A>T", "--gene", "BRCA2")
        assert code == 0
        pmids = [int(line.split("\t")[0]) for line in out.splitlines()]
        assert pmids == [21, 22]


class TestQuery:
    @pytest.fixture()
    def ingested(self, config_file, capsys):
        code = main(["--config", str(config_file), "ingest", str(FIXTURES / "corpus_3docs.pubtator")])
        assert code == 0
        capsys.readouterr()
        return config_file

    def test_text_output(self, ingested, capsys):
        code, out, _ = run(capsys, "--config", str(ingested), "query", "c.76A>T", "--gene", "BRCA2")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "1001\tc.76A>T\t6-13"

    def test_loose_forms_byte_identical(self, ingested, capsys):
        _, out_a, _ = run(capsys, "--config", str(ingested), "query", "p.R506Q", "--gene", "F5")
        _, out_b, _ = run(capsys, "--config", str(ingested), "query", "p.Arg506Gln", "--gene", "F5")
        assert out_a == out_b
        assert out_a.startswith("1002\t")

    def test_empty_result_exit_zero(self, ingested, capsys):
        code, out, _ = run(capsys, "--config", str(ingested), "query", "c.424242A>T")
        assert code == 0
        assert out == ""

    def test_unparseable_exit_3(self, ingested, capsys):
        code, _, err = run(capsys, "--config", str(ingested), "query", "banana")
        assert code == 3
        assert "error" in err

    def test_json_format(self, ingested, capsys):
        code, out, _ = run(
            capsys, "--config", str(ingested), "query", "rs80359550", "--format", "json"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["keys"] == ["9606|*|rsid|rs80359550"]
        assert [hit["pmid"] for hit in payload["hits"]] == [1002]
        assert {"start", "end", "surface"} == set(payload["hits"][0]["evidence"][0])

    def test_query_without_index_fails(self, config_file, capsys):
        code, _, err = run(capsys, "--config", str(config_file), "query", "c.76A>T")
        assert code == 1
        assert "ingest" in err


class TestMisc:
    def test_patterns_listing(self, capsys):
        code, out, _ = run(capsys, "patterns")
        assert code == 0
        assert len(out.splitlines()) == 5
        assert out.splitlines()[0].startswith("hgvs_canonical\t")

    def test_writer_lock_exclusive(self, fixture_config):
        with writer_lock(fixture_config):
            with pytest.raises(IndexLockError):
                with writer_lock(fixture_config):
                    pass
        # released on exit
        with writer_lock(fixture_config):
            pass

    def test_missing_config_is_error(self, capsys):
        code, _, err = run(capsys, "query", "c.76A>T")
        assert code == 1
        assert "gene_dictionary" in err
