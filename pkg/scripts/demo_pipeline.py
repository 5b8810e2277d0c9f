#!/usr/bin/env python3
"""End-to-end walkthrough over the shipped fixtures.

Builds a throwaway index from tests/fixtures, then answers a handful of
lookups phrased at different molecular levels and in deprecated forms.

    python scripts/demo_pipeline.py
"""

from __future__ import annotations

import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from litvar.cli import main  # noqa: E402

FIXTURES = REPO / "tests" / "fixtures"

QUERIES = [
    ("c.76A>T", "BRCA2"),
    ("p.Arg506Gln", "F5"),
    ("R506Q", "F5"),
    ("rs80359550", None),
    ("IVS1+1G>A", "TOYA"),
    ("p.F2L", "TOYA"),
    ("9606|G1|g|chrT:11004T>C", None),
]


def run():
    with tempfile.TemporaryDirectory(prefix="litvar-demo-") as tmp:
        config = Path(tmp) / "litvar.cfg"
        config.write_text(
            f"gene_dictionary={FIXTURES / 'genes.tsv'}\n"
            f"transcripts={FIXTURES / 'transcripts.tsv'}\n"
            f"chains={FIXTURES / 'chain.tsv'}\n"
            "taxa=9606\n"
            "assembly=toyasm2\n"
            f"index_dir={Path(tmp) / 'index'}\n"
        )
        print("== ingest ==")
        code = main(["--config", str(config), "ingest", str(FIXTURES / "corpus_3docs.pubtator")])
        if code != 0:
            raise SystemExit(code)
        for variant, gene in QUERIES:
            qualifier = f" --gene {gene}" if gene else ""
            print(f"\n== query {variant!r}{qualifier} ==")
            argv = ["--config", str(config), "query", variant]
            if gene:
                argv += ["--gene", gene]
            main(argv)
        print("\n(serve the same index with: litvar --config <cfg> serve)")


if __name__ == "__main__":
    run()
