"""termgrounder: map free-text entity descriptions to controlled ontology terms."""

from ._version import __version__
from .cache import cache_ontology, cache_ontology_set, load_cached
from .engine import (
    Approval,
    MapperKind,
    Mapping,
    MappingConfig,
    MappingTable,
    MappingType,
    map_terms,
    read_source_terms,
)
from .evaluation import categorize, compare_sets, parse_sssom
from .hierarchy import build_hierarchy
from .mapping_io import read_mapping_table, write_mapping_table
from .obograph import parse_obograph
from .ontology import Ontology, OntologyTerm, TermType, TermTypeFilter, filter_terms
from .preprocess import SourceTerm, apply_blocklist, apply_regex_templates, normalize
from .termtable import parse_term_table, serialize_term_table
from .tfidf import TfidfIndex, build_tfidf_index, tfidf_match, tfidf_topn

__all__ = [
    "__version__",
    "Approval",
    "MapperKind",
    "Mapping",
    "MappingConfig",
    "MappingTable",
    "MappingType",
    "Ontology",
    "OntologyTerm",
    "SourceTerm",
    "TermType",
    "TermTypeFilter",
    "TfidfIndex",
    "apply_blocklist",
    "apply_regex_templates",
    "build_hierarchy",
    "build_tfidf_index",
    "cache_ontology",
    "cache_ontology_set",
    "categorize",
    "compare_sets",
    "filter_terms",
    "load_cached",
    "map_terms",
    "normalize",
    "parse_obograph",
    "parse_sssom",
    "parse_term_table",
    "read_mapping_table",
    "read_source_terms",
    "serialize_term_table",
    "tfidf_match",
    "tfidf_topn",
    "write_mapping_table",
]
