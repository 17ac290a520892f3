"""The mapping pipeline: preprocessing, matcher dispatch, result assembly.

``map_terms`` is the single entry point used by the CLI, the HTTP service,
and library callers. The pipeline is: normalize -> regex templates ->
blocklist -> corpus filtering -> matcher -> per-term truncation -> table
assembly, with deterministic ordering (input order across terms, rank order
within a term, IRI order on score ties).
"""

from __future__ import annotations

import datetime
import logging
import os
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from pathlib import Path

from ._version import __version__
from .errors import ConfigurationError, InputError
from .ontology import Ontology, OntologyTerm, TermTypeFilter, filter_terms, iri_to_curie
from .preprocess import (
    UNMAPPED_TAG,
    SourceTerm,
    apply_blocklist,
    apply_regex_templates,
    make_source_terms,
)
from .syntactic import SYNTACTIC_METRICS, best_syntactic_match
from .tfidf import build_tfidf_index, tfidf_match

log = logging.getLogger(__name__)

BIOPORTAL_API_KEY_ENV = "TERMGROUNDER_BIOPORTAL_API_KEY"


class MapperKind(Enum):
    LEVENSHTEIN = "levenshtein"
    JARO = "jaro"
    JAROWINKLER = "jarowinkler"
    JACCARD = "jaccard"
    INDEL = "indel"
    TFIDF = "tfidf"
    ZOOMA = "zooma"
    BIOPORTAL = "bioportal"


class MappingType(Enum):
    EXACT = "Exact"
    BROAD = "Broad"
    NARROW = "Narrow"


class Approval(Enum):
    UNAPPROVED = "Unapproved"
    APPROVED = "Approved"
    REJECTED = "Rejected"


REMOTE_MAPPERS = (MapperKind.ZOOMA, MapperKind.BIOPORTAL)


@dataclass
class MappingConfig:
    """All mapping options, with their documented defaults."""

    mapper: MapperKind = MapperKind.TFIDF
    max_mappings: int = 1
    min_score: float = 0.3
    excl_deprecated: bool = False
    base_iris: tuple[str, ...] = ()
    term_type: TermTypeFilter = TermTypeFilter.CLASSES
    incl_unmapped: bool = False
    ngram_size: int = 3
    include_broad_synonyms: bool = False
    csv_column: str | None = None
    source_terms_ids_column: str | None = None
    separator: str = ","
    use_cache: bool = False
    save_graphs: bool = False
    output_file: str | None = None

    def __post_init__(self):
        if isinstance(self.mapper, str):
            self.mapper = MapperKind(self.mapper)
        if isinstance(self.term_type, str):
            self.term_type = TermTypeFilter(self.term_type)
        if isinstance(self.base_iris, list):
            self.base_iris = tuple(self.base_iris)
        if self.max_mappings < 1:
            raise ConfigurationError("max_mappings must be >= 1")
        if not 0.0 <= self.min_score <= 1.0:
            raise ConfigurationError("min_score must lie in [0, 1]")
        if self.ngram_size < 1:
            raise ConfigurationError("ngram_size must be >= 1")


@dataclass
class Mapping:
    """One (source term -> ontology term) candidate row.

    Rows for ignored source terms keep all target fields empty; ``rank`` is
    1-based and contiguous within a source term, with rank 1 carrying the
    maximal score.
    """

    source: SourceTerm
    target_iri: str = ""
    target_curie: str = ""
    target_label: str = ""
    score: float | None = None
    mapper: MapperKind | None = None
    matched_string: str = ""
    mapping_type: MappingType = MappingType.EXACT
    approval: Approval = Approval.UNAPPROVED
    rank: int | None = None


@dataclass
class MappingTable:
    metadata: dict[str, str] = field(default_factory=dict)
    rows: list[Mapping] = field(default_factory=list)
    unmapped: list[SourceTerm] = field(default_factory=list)


def _looks_like_path(source: str | Path) -> bool:
    if isinstance(source, Path):
        return True
    if "\n" in source:
        return False
    try:
        return Path(source).is_file()
    except OSError:
        return False


def read_source_terms(source: str | Path, config: MappingConfig | None = None) -> list[SourceTerm]:
    """Read input terms from a file path or raw text.

    Without ``csv_column`` every non-empty line is one term. With it, the
    input is parsed as a character-separated table and values are taken from
    that column, ids from ``source_terms_ids_column`` when given. Duplicates
    are preserved.
    """
    config = config or MappingConfig()
    if _looks_like_path(source):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = str(source)

    if config.csv_column:
        import csv
        import io

        reader = csv.DictReader(io.StringIO(text), delimiter=config.separator)
        available = reader.fieldnames or []
        if config.csv_column not in available:
            raise InputError(
                f"column {config.csv_column!r} not found; available columns: {available}"
            )
        ids_column = config.source_terms_ids_column
        if ids_column and ids_column not in available:
            raise InputError(
                f"column {ids_column!r} not found; available columns: {available}"
            )
        terms = []
        for row in reader:
            value = (row.get(config.csv_column) or "").strip()
            if not value:
                continue
            term_id = (row.get(ids_column) or "").strip() if ids_column else None
            terms.append(SourceTerm(text=value, id=term_id or None))
    else:
        terms = [SourceTerm(text=line.strip()) for line in text.splitlines() if line.strip()]

    if not terms:
        raise InputError("no source terms found in input")
    return terms


def resolve_ontology_source(
    locator: str, separator: str = ",", acronym: str = "", timeout: float = 60.0
) -> Ontology:
    """Load an ontology from a path or URL, sniffing the document format."""
    from .obograph import parse_obograph
    from .termtable import parse_term_table

    if locator.startswith(("http://", "https://")):
        import requests

        response = requests.get(locator, timeout=timeout)
        response.raise_for_status()
        raw: bytes | str = response.content
    else:
        raw = Path(locator).read_bytes()

    text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    if text.lstrip()[:1] == "{":
        return parse_obograph(text, acronym=acronym, source_locator=locator)
    return parse_term_table(text, separator=separator, acronym=acronym, source_locator=locator)


def _config_metadata(config: MappingConfig) -> dict[str, str]:
    values = {}
    for f in fields(config):
        value = getattr(config, f.name)
        if isinstance(value, Enum):
            value = value.value
        elif isinstance(value, tuple):
            value = "|".join(value)
        if f.name == "separator":  # keep control characters printable
            value = str(value).encode("unicode_escape").decode("ascii")
        values[f"config.{f.name}"] = "" if value is None else str(value)
    return values


def _candidate_rows(
    term: SourceTerm,
    candidates: list[tuple[OntologyTerm, float, str]],
    config: MappingConfig,
) -> list[Mapping]:
    rows = []
    for rank, (target, score, matched) in enumerate(candidates, start=1):
        rows.append(
            Mapping(
                source=term,
                target_iri=target.iri,
                target_curie=target.curie,
                target_label=target.display_label,
                score=score,
                mapper=config.mapper,
                matched_string=matched,
                rank=rank,
            )
        )
    return rows


def _match_local(
    active: list[SourceTerm], corpus: list[OntologyTerm], config: MappingConfig
) -> list[list[tuple[OntologyTerm, float, str]]]:
    if config.mapper is MapperKind.TFIDF:
        return tfidf_match(
            active,
            corpus,
            top_n=config.max_mappings,
            min_score=config.min_score,
            ngram_size=config.ngram_size,
            include_broad=config.include_broad_synonyms,
        )
    metric = config.mapper.value
    assert metric in SYNTACTIC_METRICS
    results = []
    for term in active:
        try:
            candidates = best_syntactic_match(
                term,
                corpus,
                metric=metric,
                top_n=config.max_mappings,
                include_broad=config.include_broad_synonyms,
            )
        except Exception as exc:  # degrade, do not abort the bulk job
            log.error("matcher failed for %r: %s", term.text, exc)
            candidates = []
        results.append([c for c in candidates if c[1] >= config.min_score])
    return results


def _match_remote(
    active: list[SourceTerm],
    target_ontology: str,
    config: MappingConfig,
    transport,
    api_key: str,
) -> list[list[tuple[OntologyTerm, float, str]]]:
    from .remote import bioportal_annotate, zooma_annotate

    if config.mapper is MapperKind.BIOPORTAL:
        key = api_key or os.environ.get(BIOPORTAL_API_KEY_ENV, "")
        annotations = bioportal_annotate(
            active, ontologies=target_ontology, api_key=key, transport=transport
        )
    else:
        annotations = zooma_annotate(active, ontologies=target_ontology, transport=transport)

    by_text: dict[str, list] = {}
    for annotation in annotations:
        by_text.setdefault(annotation.source_text, []).append(annotation)

    results = []
    for term in active:
        ranked = sorted(
            by_text.get(term.text, ()), key=lambda a: (-a.score, a.term_iri)
        )
        seen: set[str] = set()
        candidates = []
        for annotation in ranked:
            if annotation.term_iri in seen or annotation.score < config.min_score:
                continue
            seen.add(annotation.term_iri)
            stub = OntologyTerm(
                iri=annotation.term_iri,
                curie=iri_to_curie(annotation.term_iri),
                labels=[annotation.term_label] if annotation.term_label else [],
            )
            candidates.append((stub, annotation.score, annotation.term_label))
            if len(candidates) == config.max_mappings:
                break
        results.append(candidates)
    return results


def map_terms(
    source_terms,
    target_ontology: "str | Path | Ontology",
    config: MappingConfig | None = None,
    template_patterns: list[str] = (),
    blocklist_patterns: list[str] = (),
    transport=None,
    api_key: str = "",
    cache_root=None,
    **overrides,
) -> MappingTable:
    """Map source terms to ontology terms and return the mapping table.

    ``source_terms`` may be a list of strings, a dict of term text to tag
    list, or prepared :class:`SourceTerm` objects. ``target_ontology`` is a
    file path, URL, cached acronym (with ``use_cache``), an already parsed
    :class:`Ontology`, or, for the remote mappers, a comma-separated list of
    ontology acronyms (or ``all``). Keyword overrides patch individual
    :class:`MappingConfig` fields, e.g. ``map_terms(..., min_score=0.8)``.
    """
    config = config or MappingConfig()
    if overrides:
        valid = {f.name for f in fields(MappingConfig)}
        unknown = set(overrides) - valid
        if unknown:
            raise ConfigurationError(f"unknown config overrides: {sorted(unknown)}")
        config = replace(config, **overrides)

    terms = make_source_terms(source_terms)
    if template_patterns:
        terms = apply_regex_templates(terms, list(template_patterns))
    if blocklist_patterns:
        terms = apply_blocklist(terms, list(blocklist_patterns))
    active = [t for t in terms if not t.is_ignored]

    ontology: Ontology | None = None
    if config.mapper in REMOTE_MAPPERS:
        acronym, locator = str(target_ontology), str(target_ontology)
        match_results = _match_remote(active, str(target_ontology), config, transport, api_key)
    else:
        if isinstance(target_ontology, Ontology):
            ontology = target_ontology
            acronym, locator = ontology.acronym, ontology.source_locator
        else:
            if config.use_cache:
                from .cache import load_cached

                ontology = load_cached(str(target_ontology), cache_root=cache_root)
            else:
                ontology = resolve_ontology_source(
                    str(target_ontology), separator=config.separator
                )
            acronym = ontology.acronym or str(target_ontology)
            locator = ontology.source_locator or str(target_ontology)
        corpus = filter_terms(
            ontology,
            base_iris=config.base_iris,
            excl_deprecated=config.excl_deprecated,
            term_type=config.term_type,
        )
        corpus = [t for t in corpus if t.is_matchable()]
        if corpus:
            match_results = _match_local(active, corpus, config)
        else:
            log.warning("corpus is empty after filtering; every term will be unmapped")
            match_results = [[] for _ in active]

    results_by_term = dict(zip([id(t) for t in active], match_results))

    table = MappingTable()
    table.metadata = {
        "tool": f"termgrounder {__version__}",
        "generated": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "ontology_acronym": acronym,
        "ontology_locator": locator,
        **_config_metadata(config),
    }
    for term in terms:
        if term.is_ignored:
            table.rows.append(Mapping(source=term))
            continue
        candidates = results_by_term.get(id(term), [])
        if candidates:
            table.rows.extend(_candidate_rows(term, candidates, config))
        else:
            if UNMAPPED_TAG not in term.tags:
                term.tags.append(UNMAPPED_TAG)
            table.unmapped.append(term)

    if config.output_file:
        from .mapping_io import export_term_graphs_file, write_mapping_table

        write_mapping_table(table, config.output_file, incl_unmapped=config.incl_unmapped)
        if config.save_graphs and ontology is not None:
            from .hierarchy import build_hierarchy

            export_term_graphs_file(
                table,
                ontology,
                build_hierarchy(ontology),
                str(config.output_file) + ".graphs.json",
            )
    return table
