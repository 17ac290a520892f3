"""Command-line interface: mapping, ontology caching, graph export, evaluation.

Exit codes: 0 on success, 1 on a usage error, 2 on a runtime failure.
"""

from __future__ import annotations

import argparse
import difflib
import json
import logging
import sys
from pathlib import Path

from ._version import __version__
from .engine import MappingConfig, map_terms, read_source_terms
from .errors import TermGrounderError
from .ontology import TermTypeFilter

log = logging.getLogger(__name__)

_MAPPER_CHOICES = [
    "levenshtein", "jaro", "jarowinkler", "jaccard", "indel", "tfidf", "zooma", "bioportal",
]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)  # mistyped flags must not prefix-match
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise _UsageError(message)


def _known_flags(parser: argparse.ArgumentParser) -> list[str]:
    flags = []
    for action in parser._actions:  # noqa: SLF001 - option strings are stable API
        flags.extend(action.option_strings)
        if isinstance(action, argparse._SubParsersAction):
            for sub in action.choices.values():
                flags.extend(_known_flags(sub))
    return flags


def build_parser() -> _Parser:
    parser = _Parser(
        prog="termgrounder",
        description="Map free-text descriptions of biomedical entities to ontology terms.",
    )
    parser.add_argument("--version", action="version", version=f"termgrounder {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p_map = sub.add_parser("map", help="map source terms to an ontology")
    p_map.add_argument("--source", required=True,
                       help="terms to map: a line-separated text file or a table file")
    p_map.add_argument("--target", required=True,
                       help="target ontology: file path, URL, cached acronym (with "
                            "--use-cache), or comma-separated acronyms / 'all' for the "
                            "remote mappers")
    p_map.add_argument("--output", help="write the mapping table CSV to this path")
    p_map.add_argument("--mapper", choices=_MAPPER_CHOICES, default="tfidf",
                       help="string-comparison method used to score candidates")
    p_map.add_argument("--top", type=int, default=1, metavar="N",
                       help="keep at most N mappings per source term")
    p_map.add_argument("--min-score", type=float, default=0.3,
                       help="drop candidates scoring below this value in [0,1]; "
                            "1 means exact match")
    p_map.add_argument("--excl-deprecated", action="store_true",
                       help="never map to terms flagged as deprecated")
    p_map.add_argument("--base-iris", nargs="+", default=[],
                       help="only map to terms whose IRI starts with one of these prefixes")
    p_map.add_argument("--csv-column", help="when the source is a table, map this column")
    p_map.add_argument("--ids-column",
                       help="when the source is a table, read source-term ids from this column")
    p_map.add_argument("--separator", default=",",
                       help="cell separator for table input (default ',')")
    p_map.add_argument("--term-type", choices=[t.value for t in TermTypeFilter],
                       default="classes", help="map to ontology classes, properties, or both")
    p_map.add_argument("--incl-unmapped", action="store_true",
                       help="keep unmapped terms in the output, tagged 'unmapped'")
    p_map.add_argument("--use-cache", action="store_true",
                       help="treat --target as the acronym of a previously cached ontology")
    p_map.add_argument("--save-graphs", action="store_true",
                       help="also write the neighborhood graph of every mapped term")
    p_map.add_argument("--ngram-size", type=int, default=3,
                       help="character n-gram size for the tfidf mapper")
    p_map.add_argument("--blocklist",
                       help="file of regex patterns (one per line) marking terms that "
                            "must not be mapped; they stay in the output tagged 'ignored'")
    p_map.add_argument("--templates",
                       help="file of single-group regex templates that rewrite matching "
                            "terms to their captured group before mapping")
    p_map.add_argument("--incl-broad-synonyms", action="store_true",
                       help="also match against broad synonyms")
    p_map.add_argument("--cache-root", help="cache directory (default: TERMGROUNDER_CACHE)")

    p_cache = sub.add_parser("cache", help="store processed ontologies for fast reuse")
    p_cache.add_argument("--target", help="ontology file path or URL to cache")
    p_cache.add_argument("--acronym", help="short name the cached ontology is filed under")
    p_cache.add_argument("--table",
                         help="CSV of acronym,locator rows to cache as a set")
    p_cache.add_argument("--separator", default=",", help="separator of the --table file")
    p_cache.add_argument("--cache-root", help="cache directory (default: TERMGROUNDER_CACHE)")

    p_eval = sub.add_parser("eval", help="compare mappings against a verified benchmark")
    p_eval.add_argument("--tool-output", required=True, help="mapping table CSV to evaluate")
    p_eval.add_argument("--benchmark", required=True, help="verified mappings in SSSOM TSV")
    p_eval.add_argument("--ontology", required=True,
                        help="ontology used for the hierarchy categorization")
    p_eval.add_argument("--report", help="write the per-pair comparison CSV here")

    p_graphs = sub.add_parser("graphs", help="export neighborhood graphs of mapped terms")
    p_graphs.add_argument("--table", required=True, help="mapping table CSV")
    p_graphs.add_argument("--ontology", required=True, help="ontology file path or URL")
    p_graphs.add_argument("--output", required=True, help="write the graph document here")

    return parser


def _cmd_map(args) -> int:
    from .preprocess import read_pattern_file

    config = MappingConfig(
        mapper=args.mapper,
        max_mappings=args.top,
        min_score=args.min_score,
        excl_deprecated=args.excl_deprecated,
        base_iris=tuple(args.base_iris),
        term_type=args.term_type,
        incl_unmapped=args.incl_unmapped,
        ngram_size=args.ngram_size,
        include_broad_synonyms=args.incl_broad_synonyms,
        csv_column=args.csv_column,
        source_terms_ids_column=args.ids_column,
        separator=args.separator,
        use_cache=args.use_cache,
        save_graphs=args.save_graphs,
        output_file=args.output,
    )
    terms = read_source_terms(args.source, config)
    table = map_terms(
        terms,
        args.target,
        config,
        template_patterns=read_pattern_file(args.templates) if args.templates else (),
        blocklist_patterns=read_pattern_file(args.blocklist) if args.blocklist else (),
        cache_root=args.cache_root,
    )
    mapped = sum(1 for r in table.rows if r.target_iri)
    print(f"{mapped} mappings for {len(terms)} source terms"
          f" ({len(table.unmapped)} unmapped)")
    if args.output:
        print(f"wrote {args.output}")
    else:
        from .mapping_io import serialize_mapping_table

        sys.stdout.write(serialize_mapping_table(table, incl_unmapped=config.incl_unmapped))
    return 0


def _cmd_cache(args) -> int:
    from .cache import cache_ontology, cache_ontology_set

    if args.table:
        rows = []
        import csv as _csv

        with open(args.table, encoding="utf-8") as handle:
            for row in _csv.reader(handle, delimiter=args.separator):
                if len(row) >= 2 and row[0].strip():
                    rows.append((row[0].strip(), row[1].strip()))
        entries, failures = cache_ontology_set(rows, cache_root=args.cache_root)
        for entry in entries:
            print(f"cached {entry.acronym}: {entry.term_count} terms")
        for acronym, reason in failures:
            print(f"failed {acronym}: {reason}", file=sys.stderr)
        return 0 if not failures else 2
    if not (args.target and args.acronym):
        raise _UsageError("cache requires either --table or both --target and --acronym")
    entry = cache_ontology(args.target, args.acronym, cache_root=args.cache_root)
    print(f"cached {entry.acronym}: {entry.term_count} terms at {entry.path}")
    return 0


def _cmd_eval(args) -> int:
    from .evaluation import compare_sets, comparison_report_csv, parse_sssom
    from .engine import resolve_ontology_source
    from .hierarchy import build_hierarchy
    from .mapping_io import read_mapping_table

    table = read_mapping_table(args.tool_output)
    benchmark = parse_sssom(Path(args.benchmark).read_bytes())
    ontology = resolve_ontology_source(args.ontology)
    hierarchy = build_hierarchy(ontology)
    records, summary = compare_sets(table, benchmark, hierarchy)
    print(summary.as_text())
    if args.report:
        Path(args.report).write_text(comparison_report_csv(records), encoding="utf-8")
        print(f"wrote {args.report}")
    return 0


def _cmd_graphs(args) -> int:
    from .engine import resolve_ontology_source
    from .hierarchy import build_hierarchy
    from .mapping_io import export_term_graphs, read_mapping_table

    table = read_mapping_table(args.table)
    ontology = resolve_ontology_source(args.ontology)
    document = export_term_graphs(table, ontology, build_hierarchy(ontology))
    Path(args.output).write_text(json.dumps(document, indent=2, sort_keys=True),
                                 encoding="utf-8")
    print(f"wrote {args.output} ({len(document['graphs'])} graphs)")
    return 0


_COMMANDS = {"map": _cmd_map, "cache": _cmd_cache, "eval": _cmd_eval, "graphs": _cmd_graphs}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            parser.print_help()
            return 1
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        message = str(exc)
        bad_flag = next((a for a in argv if a.startswith("--")
                         and a not in _known_flags(parser)), None)
        if bad_flag:
            hints = difflib.get_close_matches(bad_flag, _known_flags(parser), n=1)
            if hints:
                message += f" (did you mean {hints[0]}?)"
        print(f"usage error: {message}", file=sys.stderr)
        return 1
    except TermGrounderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
