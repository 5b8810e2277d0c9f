from pathlib import Path

import pytest

from litvar.config import Config
from litvar.coords import load_chain, load_transcripts
from litvar.genes import load_gene_dictionary
from litvar.index import LiteratureIndex, Resources, ingest_pubtator

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def gene_dict():
    with open(FIXTURES / "genes.tsv") as handle:
        return load_gene_dictionary(handle, path="genes.tsv")


@pytest.fixture(scope="session")
def transcripts():
    with open(FIXTURES / "transcripts.tsv") as handle:
        return load_transcripts(handle, path="transcripts.tsv")


@pytest.fixture(scope="session")
def toy1(transcripts):
    return transcripts["TOY1"]


@pytest.fixture(scope="session")
def toy2(transcripts):
    return transcripts["TOY2"]


@pytest.fixture(scope="session")
def chain():
    with open(FIXTURES / "chain.tsv") as handle:
        return load_chain(handle, path="chain.tsv")


@pytest.fixture(scope="session")
def resources(gene_dict, transcripts, chain):
    return Resources(
        gene_dict=gene_dict,
        transcripts=transcripts,
        chain=chain,
        target_assembly="toyasm2",
    )


@pytest.fixture(scope="session")
def resources_no_chain(gene_dict, transcripts):
    return Resources(gene_dict=gene_dict, transcripts=transcripts)


@pytest.fixture()
def corpus_docs():
    with open(FIXTURES / "corpus_3docs.pubtator") as handle:
        return ingest_pubtator(handle, path="corpus_3docs.pubtator")


@pytest.fixture()
def built_index(resources, corpus_docs):
    index = LiteratureIndex(resources)
    for doc, annotations in corpus_docs:
        index.add_document(doc, annotations)
    return index


@pytest.fixture()
def fixture_config(tmp_path):
    """Config pointing at the shipped fixtures with a fresh index dir."""
    return Config(
        gene_dictionary=FIXTURES / "genes.tsv",
        transcripts=FIXTURES / "transcripts.tsv",
        chains=FIXTURES / "chain.tsv",
        assembly="toyasm2",
        index_dir=tmp_path / "index",
    )


@pytest.fixture()
def config_file(tmp_path):
    """Write a key=value config file referencing the shipped fixtures."""
    path = tmp_path / "litvar.cfg"
    path.write_text(
        f"gene_dictionary={FIXTURES / 'genes.tsv'}\n"
        f"transcripts={FIXTURES / 'transcripts.tsv'}\n"
        f"chains={FIXTURES / 'chain.tsv'}\n"
        "taxa=9606\n"
        "assembly=toyasm2\n"
        f"index_dir={tmp_path / 'index'}\n"
    )
    return path
