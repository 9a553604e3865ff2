"""Command-line front end: ``analyze``, ``graph`` and ``corpus``."""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from . import __version__
from .loader import ResolutionCatalog, load_schema_set
from .model import SchemaError
from .report import RENDERERS, CorpusManifest, analyze, corpus_text, run_corpus, to_dot

EXIT_OK, EXIT_ERROR, EXIT_PARTIAL = 0, 1, 2

log = logging.getLogger("xsdmetrics")


def _positive_int(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be an integer >= 1")
    return n


def _input_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--entry", action="extend", nargs="+", required=True, metavar="PATH",
                   help="entry schema document (repeatable)")
    p.add_argument("--main", metavar="DIR", help="main-schema scope: directory or glob "
                   "(default: directory of the first entry)")
    p.add_argument("--catalog", metavar="FILE", help="offline resolution catalog")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xsdmetrics", description="XML Schema complexity metrics")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="compute all metrics for a schema set")
    _input_args(a)
    a.add_argument("--recursion-weight", type=_positive_int, metavar="R",
                   help="also evaluate C(XSD) at this recursion weight")
    a.add_argument("--format", choices=sorted(RENDERERS), default="text")
    a.add_argument("--strict", action="store_true", help="treat unresolved references as errors")

    g = sub.add_parser("graph", help="export the component dependency graph as DOT")
    _input_args(g)
    g.add_argument("--hidden", action="store_true", help="include hidden subtyping edges")
    g.add_argument("--format", choices=["dot"], default="dot")

    c = sub.add_parser("corpus", help="analyze every target of a corpus manifest")
    c.add_argument("--manifest", required=True, metavar="FILE")
    c.add_argument("--out", metavar="PATH")
    return parser


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _catalog(path: Optional[str]) -> Optional[ResolutionCatalog]:
    return ResolutionCatalog.from_file(path) if path else None


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        if args.command == "analyze":
            report = analyze(args.entry, args.main, _catalog(args.catalog),
                             recursion_weight=args.recursion_weight, strict=args.strict)
            _emit(RENDERERS[args.format](report), args.out)
            return EXIT_PARTIAL if report.partial else EXIT_OK
        if args.command == "graph":
            schema_set, load_report = load_schema_set(args.entry, args.main, _catalog(args.catalog))
            _emit(to_dot(schema_set, hidden=args.hidden), args.out)
            return EXIT_PARTIAL if load_report.partial else EXIT_OK
        results = run_corpus(CorpusManifest.parse(args.manifest))
        _emit(corpus_text(results), args.out)
        return EXIT_ERROR if any(r.status in ("FAIL", "ERROR") for r in results) else EXIT_OK
    except (SchemaError, OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
