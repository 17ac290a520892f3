"""In-memory ontology model: terms, the term store, and corpus filtering."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from enum import Enum

log = logging.getLogger(__name__)

_COMPACT_ID = re.compile(r"^([A-Za-z][A-Za-z0-9.]*)_(.+)$")


class TermType(Enum):
    CLASS = "Class"
    PROPERTY = "Property"


class TermTypeFilter(Enum):
    CLASSES = "classes"
    PROPERTIES = "properties"
    BOTH = "both"


def iri_to_curie(iri: str) -> str:
    """Derive a compact identifier from a term IRI.

    ``http://purl.obolibrary.org/obo/MONDO_0004975`` becomes ``MONDO:0004975``;
    identifiers that already look compact (``EX:1``) are returned unchanged.
    """
    if "://" not in iri:
        return iri
    tail = iri.rstrip("/#")
    for sep in ("#", "/"):
        if sep in tail:
            tail = tail.rsplit(sep, 1)[1]
    m = _COMPACT_ID.match(tail)
    if m:
        return f"{m.group(1)}:{m.group(2)}"
    return tail


@dataclass
class OntologyTerm:
    """One controlled term of an ontology.

    ``parents``/``children``/``instances`` hold IRIs of directly related
    terms; transitive closure lives in :class:`~termgrounder.hierarchy.HierarchyIndex`.
    """

    iri: str
    curie: str = ""
    labels: list[str] = field(default_factory=list)
    exact_synonyms: list[str] = field(default_factory=list)
    broad_synonyms: list[str] = field(default_factory=list)
    definitions: list[str] = field(default_factory=list)
    parents: set[str] = field(default_factory=set)
    children: set[str] = field(default_factory=set)
    instances: set[str] = field(default_factory=set)
    deprecated: bool = False
    term_type: TermType = TermType.CLASS

    def __post_init__(self):
        if not self.iri:
            raise ValueError("OntologyTerm requires a non-empty IRI")
        if not self.curie:
            self.curie = iri_to_curie(self.iri)

    @property
    def display_label(self) -> str:
        """First label in document order, falling back to the first synonym."""
        if self.labels:
            return self.labels[0]
        if self.exact_synonyms:
            return self.exact_synonyms[0]
        return ""

    def matchable_strings(self, include_broad: bool = False) -> list[str]:
        """Labels and synonyms eligible for string matching, in corpus order."""
        out = list(self.labels) + list(self.exact_synonyms)
        if include_broad:
            out += list(self.broad_synonyms)
        return out

    def is_matchable(self) -> bool:
        return bool(self.labels or self.exact_synonyms or self.broad_synonyms)


@dataclass
class Ontology:
    """A parsed term store keyed by IRI.

    Parent IRIs that do not resolve to a term in the store are kept on the
    referencing term and recorded in ``dangling``.
    """

    acronym: str = ""
    source_locator: str = ""
    terms: dict[str, OntologyTerm] = field(default_factory=dict)
    version_info: str | None = None
    dangling: set[str] = field(default_factory=set)
    skipped_nodes: int = 0

    def __len__(self) -> int:
        return len(self.terms)

    def add_term(self, term: OntologyTerm) -> None:
        if term.iri in self.terms:
            raise ValueError(f"duplicate term IRI {term.iri!r}")
        self.terms[term.iri] = term

    def link_relations(self) -> None:
        """Make parents/children mutually consistent and flag dangling IRIs.

        Children sets are rebuilt from the parents sets, which are the single
        source of truth after parsing.
        """
        self.dangling = set()
        for term in self.terms.values():
            term.children = set()
        for term in self.terms.values():
            for parent_iri in term.parents:
                parent = self.terms.get(parent_iri)
                if parent is None:
                    self.dangling.add(parent_iri)
                else:
                    parent.children.add(term.iri)
        if self.dangling:
            log.debug("%d dangling parent IRIs kept without closure", len(self.dangling))

    def content_equal(self, other: "Ontology") -> bool:
        """Field-wise term equality, ignoring acronym/locator bookkeeping."""
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[iri] == other.terms[iri] for iri in self.terms)


def filter_terms(
    ontology: Ontology,
    base_iris: list[str] | tuple[str, ...] = (),
    excl_deprecated: bool = False,
    term_type: TermTypeFilter = TermTypeFilter.BOTH,
) -> list[OntologyTerm]:
    """Select matching-corpus terms, ordered by ascending IRI.

    With ``base_iris`` given, only terms whose IRI starts with one of the
    prefixes are retained; an empty list keeps everything. Deprecated terms
    are dropped when ``excl_deprecated`` is set, and ``term_type`` restricts
    the result to classes, properties, or both.
    """
    selected = []
    for iri in sorted(ontology.terms):
        term = ontology.terms[iri]
        if base_iris and not any(iri.startswith(prefix) for prefix in base_iris):
            continue
        if excl_deprecated and term.deprecated:
            continue
        if term_type is TermTypeFilter.CLASSES and term.term_type is not TermType.CLASS:
            continue
        if term_type is TermTypeFilter.PROPERTIES and term.term_type is not TermType.PROPERTY:
            continue
        selected.append(term)
    return selected
