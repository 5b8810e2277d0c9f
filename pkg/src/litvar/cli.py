"""Command-line surface: corpus ingestion, lookups, and the HTTP server.

    litvar --config litvar.cfg ingest corpus.pubtator
    litvar --config litvar.cfg query "p.Arg506Gln" --gene F5 [--format json]
    litvar --config litvar.cfg serve [--listen 127.0.0.1:8080]

Exit codes: 0 success, 1 configuration or I/O trouble, 2 corpus format
errors, 3 unparseable query.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
import threading

from .config import Config, load_config, load_resources
from .errors import ConfigError, FormatError, IndexLockError, LitvarError, QueryParseError
from .index import LiteratureIndex, ingest_pubtator, load_segment, save_segment
from .mentions import list_pattern_classes
from .server import SearchServer, hits_payload, parse_listen_address

__all__ = ["main"]


@contextlib.contextmanager
def writer_lock(config: Config):
    """Exclusive writer lock on the index directory (lock file, O_EXCL)."""
    config.index_dir.mkdir(parents=True, exist_ok=True)
    path = config.lock_path
    try:
        fd = os.open(path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise IndexLockError(
            f"another writer holds {path}; remove it if that process is gone"
        ) from None
    try:
        os.write(fd, f"{os.getpid()}\n".encode())
        os.close(fd)
        yield
    finally:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(path)


def _open_index(config: Config) -> LiteratureIndex:
    resources = load_resources(config)
    if not config.segment_path.exists():
        raise ConfigError(f"no index segment at {config.segment_path}; run ingest first")
    return load_segment(config.segment_path, resources)


def cmd_ingest(args, config: Config) -> int:
    resources = load_resources(config)
    with writer_lock(config):
        if config.segment_path.exists():
            index = load_segment(config.segment_path, resources)
        else:
            index = LiteratureIndex(resources)
        with open(args.corpus, encoding="utf-8") as handle:
            parsed = ingest_pubtator(handle, path=args.corpus)
        from .index import IngestReport

        report = IngestReport()
        for doc, annotations in parsed:
            report.absorb(index.add_document(doc, annotations))
        save_segment(index, config.segment_path)

    print(f"documents indexed: {report.documents_indexed}")
    print(f"documents dropped: {report.documents_dropped}")
    print(f"mentions extracted: {report.mentions_extracted}")
    print(f"mentions imported: {report.mentions_imported}")
    print(f"keys emitted: {report.keys_emitted}")
    print(f"failures: {len(report.failures)}")
    for pmid, surface, reason in report.failures:
        print(f"  {pmid}\t{surface}\t{reason}")
    return 0


def cmd_query(args, config: Config) -> int:
    index = _open_index(config)
    keys = index.resolve_query(args.variant, args.gene)
    hits = index.query_keys(keys)
    if args.format == "json":
        payload = {
            "variant": args.variant,
            "gene": args.gene,
            "keys": keys,
            "hits": hits_payload(hits),
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        for pmid, evidence in hits:
            for ev in evidence:
                print(f"{pmid}\t{ev.surface}\t{ev.start}-{ev.end}")
    return 0


def cmd_serve(args, config: Config) -> int:
    listen = args.listen or config.listen
    server = SearchServer(parse_listen_address(listen), index=None)

    def _load():
        server.index = _open_index(config)

    loader = threading.Thread(target=_load, daemon=True)
    loader.start()
    print(f"serving on http://{listen} (read-only)", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def cmd_patterns(args, config: Config | None) -> int:
    for pattern_class, description in list_pattern_classes():
        print(f"{pattern_class.value}\t{description}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="litvar",
        description="Index variant mentions from PubMed-style corpora and look up articles by variant.",
    )
    parser.add_argument("--config", help="path to a key=value config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="ingest a PubTator-format corpus into the index")
    p_ingest.add_argument("corpus", help="corpus file path")

    p_query = sub.add_parser("query", help="look up articles for a variant")
    p_query.add_argument("variant", help="rendered key or any parseable surface form")
    p_query.add_argument("--gene", help="gene symbol qualifier")
    p_query.add_argument("--format", choices=("text", "json"), default="text")

    p_serve = sub.add_parser("serve", help="serve the read-only HTTP search API")
    p_serve.add_argument("--listen", help="host:port (overrides config)")

    sub.add_parser("patterns", help="list the registered mention pattern classes")
    return parser


_NEEDS_CONFIG = {"ingest", "query", "serve"}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config) if args.command in _NEEDS_CONFIG else None
        handler = {
            "ingest": cmd_ingest,
            "query": cmd_query,
            "serve": cmd_serve,
            "patterns": cmd_patterns,
        }[args.command]
        return handler(args, config)
    except QueryParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, IndexLockError, LitvarError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
