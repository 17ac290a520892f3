"""Parser for OBO Graph JSON ontology documents.

Converts a ``graphs`` document (nodes with labels/synonyms/definitions plus
``is_a``/``subPropertyOf``/``rdf:type`` edges) into an :class:`Ontology`.
See https://github.com/geneontology/obographs for the format.
"""

from __future__ import annotations

import json
import logging

from .errors import EmptyOntologyError, ParseError
from .ontology import Ontology, OntologyTerm, TermType

log = logging.getLogger(__name__)

# Predicates are matched by their raw value or by the local name after the
# last '#' or '/' of a full IRI, so both compact and expanded forms work.
_PREF_LABEL_PREDS = {"skos:prefLabel", "prefLabel"}
_EXACT_SYNONYM_PREDS = {"hasExactSynonym"}
_BROAD_SYNONYM_PREDS = {"hasBroadSynonym"}
_EXTRA_SYNONYM_PREDS = {"NCIT:P90", "P90", "EFO:alternative_term", "alternative_term"}
_DEFINITION_PREDS = {"IAO:0000115", "IAO_0000115", "skos:definition", "definition"}
_PARENT_PREDS = {"is_a", "subPropertyOf"}
_INSTANCE_PREDS = {"rdf:type", "type"}

_NODE_TYPES = {"CLASS": TermType.CLASS, "PROPERTY": TermType.PROPERTY}


def _pred_matches(pred: str, known: set[str]) -> bool:
    if pred in known:
        return True
    tail = pred
    for sep in ("#", "/"):
        if sep in tail:
            tail = tail.rsplit(sep, 1)[1]
    return tail in known


def parse_obograph(data: bytes | str, acronym: str = "", source_locator: str = "") -> Ontology:
    """Parse OBO Graph JSON content into an :class:`Ontology`.

    Args:
        data: Raw document content (UTF-8 bytes or text).
        acronym: Short name recorded on the resulting ontology.
        source_locator: Path or URL the content came from, for bookkeeping.

    Returns:
        Ontology populated with one term per CLASS/PROPERTY node; nodes of
        other types are skipped. Parent/child links are made mutually
        consistent before returning.

    Raises:
        ParseError: The document is not valid JSON or lacks a ``graphs`` array.
        EmptyOntologyError: No parsable node was found.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise ParseError(f"invalid JSON: {exc.msg}", byte_offset=offset) from exc

    graphs = doc.get("graphs") if isinstance(doc, dict) else None
    if not isinstance(graphs, list) or not graphs:
        raise ParseError("document has no non-empty 'graphs' array")

    ontology = Ontology(acronym=acronym, source_locator=source_locator)
    skipped = 0
    for graph in graphs:
        if ontology.version_info is None:
            ontology.version_info = (graph.get("meta") or {}).get("version")
        for node in graph.get("nodes", []):
            term = _parse_node(node)
            if term is None:
                if _is_countable_error(node):
                    skipped += 1
                continue
            if term.iri in ontology.terms:
                _merge_term(ontology.terms[term.iri], term)
            else:
                ontology.add_term(term)
        _apply_edges(ontology, graph.get("edges", []))

    ontology.skipped_nodes = skipped
    if skipped:
        log.warning("skipped %d nodes without an id", skipped)
    if not ontology.terms:
        raise EmptyOntologyError("no parsable CLASS or PROPERTY nodes in document")
    ontology.link_relations()
    return ontology


def _is_countable_error(node: dict) -> bool:
    # Nodes of unknown/foreign type are silently out of scope; a node that
    # would otherwise qualify but lacks an id is a record-level error.
    return isinstance(node, dict) and not node.get("id")


def _parse_node(node: dict) -> OntologyTerm | None:
    if not isinstance(node, dict):
        return None
    term_type = _NODE_TYPES.get(node.get("type", ""))
    if term_type is None:
        return None
    iri = node.get("id")
    if not iri:
        return None

    term = OntologyTerm(iri=iri, term_type=term_type)
    if node.get("lbl"):
        term.labels.append(node["lbl"])

    meta = node.get("meta") or {}
    definition = meta.get("definition") or {}
    if isinstance(definition, dict) and definition.get("val"):
        term.definitions.append(definition["val"])

    for synonym in meta.get("synonyms", []):
        pred, val = synonym.get("pred", ""), synonym.get("val")
        if not val:
            continue
        if _pred_matches(pred, _EXACT_SYNONYM_PREDS):
            term.exact_synonyms.append(val)
        elif _pred_matches(pred, _BROAD_SYNONYM_PREDS):
            term.broad_synonyms.append(val)

    for bpv in meta.get("basicPropertyValues", []):
        pred, val = bpv.get("pred", ""), bpv.get("val")
        if not val:
            continue
        if _pred_matches(pred, _PREF_LABEL_PREDS):
            term.labels.append(val)
        elif _pred_matches(pred, _EXTRA_SYNONYM_PREDS):
            term.exact_synonyms.append(val)
        elif _pred_matches(pred, _DEFINITION_PREDS):
            term.definitions.append(val)

    if meta.get("deprecated") is True:
        term.deprecated = True
    return term


def _merge_term(existing: OntologyTerm, extra: OntologyTerm) -> None:
    # The same IRI may appear in several graphs of one document.
    for attr in ("labels", "exact_synonyms", "broad_synonyms", "definitions"):
        seen = getattr(existing, attr)
        for value in getattr(extra, attr):
            if value not in seen:
                seen.append(value)
    existing.deprecated = existing.deprecated or extra.deprecated


def _apply_edges(ontology: Ontology, edges: list[dict]) -> None:
    for edge in edges:
        sub, pred, obj = edge.get("sub"), edge.get("pred", ""), edge.get("obj")
        if not sub or not obj:
            continue
        if _pred_matches(pred, _PARENT_PREDS):
            child = ontology.terms.get(sub)
            if child is not None:
                child.parents.add(obj)
        elif _pred_matches(pred, _INSTANCE_PREDS):
            cls = ontology.terms.get(obj)
            if cls is not None and cls.term_type is TermType.CLASS:
                cls.instances.add(sub)
