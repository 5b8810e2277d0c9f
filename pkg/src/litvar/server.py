"""Read-only HTTP search endpoint over a loaded index.

GET /v1/articles?variant=<urlencoded>&gene=<symbol>  -> keys consulted + hits
GET /v1/parse?q=<urlencoded>[&gene=<symbol>]         -> normalized AST + keys

The handler never mutates the index; while the index is still loading
every request answers 503.
"""

from __future__ import annotations

import json
import logging
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlsplit

from .errors import MissingContext, OutOfTranscript, ParseError, QueryParseError
from .hgvs import VariantAst, format_canonical, parse_loose
from .index import LiteratureIndex, canonicalize

__all__ = ["SearchServer", "ast_to_dict", "parse_listen_address"]

log = logging.getLogger(__name__)


def parse_listen_address(listen: str) -> tuple[str, int]:
    host, _, port = listen.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"listen address must be host:port, got {listen!r}")
    return host, int(port)


def ast_to_dict(ast: VariantAst) -> dict:
    return {
        "molecule": ast.molecule.value if ast.molecule is not None else None,
        "position": None
        if ast.position is None
        else {
            "start": ast.position.start,
            "end": ast.position.end,
            "start_offset": ast.position.start_offset,
            "end_offset": ast.position.end_offset,
        },
        "edit": {
            "kind": ast.edit.kind.value,
            "ref_allele": ast.edit.ref_allele,
            "alt_allele": ast.edit.alt_allele,
            "rsid_number": ast.edit.rsid_number,
        },
        "reference_accession": ast.reference_accession,
        "gene_symbol": ast.gene_symbol,
    }


def hits_payload(hits) -> list[dict]:
    return [
        {
            "pmid": pmid,
            "evidence": [
                {"start": ev.start, "end": ev.end, "surface": ev.surface} for ev in evidence
            ],
        }
        for pmid, evidence in hits
    ]


class SearchServer(ThreadingHTTPServer):
    """HTTP server bound to one (possibly still-loading) index."""

    daemon_threads = True

    def __init__(self, address: tuple[str, int], index: LiteratureIndex | None):
        super().__init__(address, _Handler)
        self.index = index


class _Handler(BaseHTTPRequestHandler):
    server_version = "litvar/0.1"

    def do_GET(self):  # noqa: N802 - http.server API
        url = urlsplit(self.path)
        params = parse_qs(url.query)
        if url.path == "/v1/articles":
            self._articles(params)
        elif url.path == "/v1/parse":
            self._parse(params)
        else:
            self._send(404, {"error": f"unknown path {url.path}"})

    def _index(self) -> LiteratureIndex | None:
        return self.server.index

    def _articles(self, params):
        index = self._index()
        if index is None:
            self._send(503, {"error": "index is loading"})
            return
        variant = _first(params, "variant")
        gene = _first(params, "gene")
        if not variant:
            self._send(400, {"error": "missing variant parameter"})
            return
        try:
            keys = index.resolve_query(variant, gene)
        except QueryParseError as exc:
            self._send(400, {"error": str(exc)})
            return
        hits = index.query_keys(keys)
        self._send(
            200,
            {"variant": variant, "gene": gene, "keys": keys, "hits": hits_payload(hits)},
        )

    def _parse(self, params):
        index = self._index()
        if index is None:
            self._send(503, {"error": "index is loading"})
            return
        query = _first(params, "q")
        gene = _first(params, "gene")
        if not query:
            self._send(400, {"error": "missing q parameter"})
            return
        resources = index.resources
        gene_id = resources.resolve_gene(gene)
        try:
            try:
                ast = parse_loose(query)
            except MissingContext:
                transcript = resources.transcript_for_gene(gene_id)
                if transcript is None:
                    raise
                ast = parse_loose(query, context=transcript)
        except (ParseError, MissingContext, OutOfTranscript) as exc:
            self._send(400, {"error": str(exc)})
            return
        keys = [key.render() for key in canonicalize(ast, gene_id, resources)]
        self._send(
            200,
            {
                "query": query,
                "canonical": format_canonical(ast),
                "ast": ast_to_dict(ast),
                "keys": keys,
            },
        )

    def _send(self, status: int, payload: dict):
        body = json.dumps(payload, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, fmt, *args):  # quiet by default
        log.debug("%s - %s", self.address_string(), fmt % args)


def _first(params: dict[str, list[str]], name: str) -> str | None:
    values = params.get(name)
    return values[0] if values else None
