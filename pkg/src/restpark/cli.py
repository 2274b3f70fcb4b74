"""Command line entry points: ``restpark serve | query | demo``."""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence
from urllib.parse import urlsplit

from . import __version__
from .client import ClientError, Endpoint, RestparkClient
from .federation import BindingTable, PlanError, plan_from_dict, run_plan
from .model import format_term, TriplePattern
from .ntriples import read_file, serialize_document
from .service import QueryError, RestparkServer, parse_position, serve_in_background
from .store import DEFAULT_PAGE_SIZE, MAX_PAGE_SIZE, PageRequest, TripleStore

log = logging.getLogger("restpark")

EXIT_OK, EXIT_FAILURE, EXIT_USAGE, EXIT_BIND = 0, 1, 2, 3


def _host_port(text: str) -> tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep or not port.isdigit() or not 0 <= int(port) <= 65535:
        raise argparse.ArgumentTypeError(f"expected HOST:PORT, got {text!r}")
    return host or "127.0.0.1", int(port)


def _page_size(text: str) -> int:
    n = int(text)
    if not 1 <= n <= MAX_PAGE_SIZE:
        raise argparse.ArgumentTypeError(f"page size must be in 1..{MAX_PAGE_SIZE}")
    return n


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _named_url(text: str) -> tuple[str, str]:
    name, sep, url = text.partition("=")
    if not sep or not name or not url:
        raise argparse.ArgumentTypeError(f"expected NAME=URL, got {text!r}")
    return name, url


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="restpark", description="Serve and query RDF triples over GET /restpark.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="serve an N-Triples file at /restpark")
    serve.add_argument("--data", required=True, type=Path, help="N-Triples file to load")
    serve.add_argument("--bind", type=_host_port, default=("127.0.0.1", 8080), metavar="HOST:PORT")
    serve.add_argument("--mount", default="", help="path prefix, e.g. /dblp serves /dblp/restpark")
    serve.add_argument("--strict", action="store_true", help="refuse to start if any line fails to parse")

    query = sub.add_parser("query", help="run one triple pattern against an endpoint, print N-Triples")
    query.add_argument("--endpoint", required=True, help="base URL, without the /restpark suffix")
    query.add_argument("--subject")
    query.add_argument("--predicate")
    query.add_argument("--object", help='IRI, _:label, or a quoted literal such as \'"William Shatner"\'')
    query.add_argument("--page-size", type=_page_size, default=DEFAULT_PAGE_SIZE)
    query.add_argument("--timeout", type=float, default=30.0)
    paging = query.add_mutually_exclusive_group()
    paging.add_argument("--page", type=_positive, help="fetch only this page")
    paging.add_argument("--max-pages", type=_positive, default=10000, help="safety limit when following pages")

    demo = sub.add_parser("demo", help="run a federated query plan and print its binding table")
    demo.add_argument("--plan", required=True, type=Path)
    demo.add_argument(
        "--endpoint", action="append", type=_named_url, default=[], metavar="NAME=URL",
        help="override an endpoint named in the plan",
    )
    demo.add_argument(
        "--local-fixtures", type=Path, metavar="DIR",
        help="serve DIR/<name>.nt for every plan endpoint on ephemeral local ports",
    )
    demo.add_argument("--parallelism", type=_positive, default=4)
    demo.add_argument("--format", choices=("table", "jsonl", "both"), default="both")
    return parser


def cmd_serve(args) -> int:
    try:
        report = read_file(args.data, strict=False)
    except (OSError, UnicodeDecodeError) as exc:
        log.error("cannot read %s: %s", args.data, exc)
        return EXIT_USAGE
    for line, message in report.errors[:20]:
        log.warning("%s:%d: %s", args.data, line, message)
    if args.strict and report.errors:
        log.error("%d malformed lines in %s", len(report.errors), args.data)
        return EXIT_USAGE
    store = TripleStore(report.triples)
    log.info("loaded %d triples (%d distinct, %d bad lines) from %s",
             len(report.triples), len(store), len(report.errors), args.data)
    try:
        server = RestparkServer(store, args.bind, args.mount)
    except OSError as exc:
        log.error("cannot bind %s:%d: %s", *args.bind, exc)
        return EXIT_BIND
    log.info("serving %s/restpark", server.base_url)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        log.info("shutting down")
    finally:
        server.server_close()
    return EXIT_OK


def cmd_query(args) -> int:
    try:
        endpoint = Endpoint(args.endpoint.rstrip("/"))
        terms = {
            name: parse_position(name, value)
            for name in ("subject", "predicate", "object")
            if (value := getattr(args, name)) is not None
        }
    except (ValueError, QueryError) as exc:
        print(f"restpark query: {exc}", file=sys.stderr)
        return EXIT_USAGE
    pattern = TriplePattern(**terms)
    client = RestparkClient(timeout=args.timeout, max_pages=args.max_pages)
    try:
        if args.page is not None:
            triples = client.query_page(endpoint, pattern, PageRequest(args.page, args.page_size)).triples
        else:
            triples = client.query_all(endpoint, pattern, page_size=args.page_size)
    except ClientError as exc:
        print(f"restpark query: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    sys.stdout.write(serialize_document(triples))
    return EXIT_OK


def format_table(table: BindingTable) -> str:
    header = [f"?{c}" for c in table.columns]
    cells = [[format_term(t) for t in row] for row in table.tuples()]
    widths = [max([len(h)] + [len(r[i]) for r in cells]) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    lines.append(f"({len(cells)} row{'s' if len(cells) != 1 else ''})")
    return "\n".join(lines) + "\n"


def format_jsonl(table: BindingTable) -> str:
    return "".join(
        json.dumps({c: format_term(t) for c, t in zip(table.columns, row)}, ensure_ascii=False) + "\n"
        for row in table.tuples()
    )


def _start_fixture_servers(stack: contextlib.ExitStack, directory: Path, endpoints: dict) -> dict[str, str]:
    urls = {}
    for name, url in endpoints.items():
        store = TripleStore(read_file(directory / f"{name}.nt", strict=True).triples)
        server = stack.enter_context(serve_in_background(store, mount_prefix=urlsplit(url).path))
        urls[name] = server.base_url
        log.info("serving %s.nt at %s/restpark", name, server.base_url)
    return urls


def cmd_demo(args) -> int:
    try:
        doc = json.loads(args.plan.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        print(f"restpark demo: cannot load plan {args.plan}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    with contextlib.ExitStack() as stack:
        try:
            overrides = {}
            if args.local_fixtures is not None:
                overrides.update(_start_fixture_servers(stack, args.local_fixtures, dict(doc.get("endpoints") or {})))
            overrides.update(dict(args.endpoint))
            plan = plan_from_dict(doc, overrides)
            table = run_plan(plan, RestparkClient(), parallelism=args.parallelism)
        except PlanError as exc:
            print(f"restpark demo: {exc}", file=sys.stderr)
            return EXIT_FAILURE
        except (OSError, ValueError) as exc:  # unreadable fixture files, bad endpoint URLs
            print(f"restpark demo: {exc}", file=sys.stderr)
            return EXIT_FAILURE
    if args.format in ("table", "both"):
        sys.stdout.write(format_table(table))
    if args.format == "both":
        sys.stdout.write("\n")
    if args.format in ("jsonl", "both"):
        sys.stdout.write(format_jsonl(table))
    return EXIT_OK


COMMANDS = {"serve": cmd_serve, "query": cmd_query, "demo": cmd_demo}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
