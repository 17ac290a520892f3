"""Character-separated term tables: a lightweight ontology ingest/serialize format.

The header row is required. ``iri`` and ``label`` columns are mandatory;
``labels``, ``exact_synonyms``, ``broad_synonyms``, ``definitions``,
``parents``, ``instances``, ``deprecated`` and ``term_type`` are recognized
when present, everything else is ignored. Multi-valued cells join their items
with ``|`` (backslash-escaped inside values).
"""

from __future__ import annotations

import csv
import io

from .errors import EmptyOntologyError, FormatError
from .ontology import Ontology, OntologyTerm, TermType

_REQUIRED_COLUMNS = ("iri", "label")


def join_multi(values: list[str]) -> str:
    return "|".join(v.replace("\\", "\\\\").replace("|", "\\|") for v in values)


def split_multi(cell: str) -> list[str]:
    if not cell:
        return []
    items, current, escaped = [], [], False
    for ch in cell:
        if escaped:
            current.append(ch)
            escaped = False
        elif ch == "\\":
            escaped = True
        elif ch == "|":
            items.append("".join(current))
            current = []
        else:
            current.append(ch)
    items.append("".join(current))
    return items


def parse_term_table(
    data: bytes | str,
    separator: str = ",",
    acronym: str = "",
    source_locator: str = "",
) -> Ontology:
    """Parse a character-separated term table into an :class:`Ontology`.

    Raises:
        FormatError: Missing required column, or a duplicate IRI (named in
            the message).
        EmptyOntologyError: The table has a header but no data rows.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    reader = csv.reader(io.StringIO(text), delimiter=separator)
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError("term table is empty (no header row)") from None

    columns = {name.strip().lower(): idx for idx, name in enumerate(header)}
    for required in _REQUIRED_COLUMNS:
        if required not in columns:
            raise FormatError(
                f"term table is missing required column {required!r}; found: {header}"
            )

    def cell(row: list[str], name: str) -> str:
        idx = columns.get(name)
        if idx is None or idx >= len(row):
            return ""
        return row[idx].strip()

    ontology = Ontology(acronym=acronym, source_locator=source_locator)
    for row in reader:
        if not any(v.strip() for v in row):
            continue
        iri = cell(row, "iri")
        if not iri:
            raise FormatError(f"row {reader.line_num} has an empty iri cell")
        if iri in ontology.terms:
            raise FormatError(f"duplicate IRI {iri!r} in term table")

        labels_cell = cell(row, "labels")
        if labels_cell:
            labels = split_multi(labels_cell)
        else:
            label = cell(row, "label")
            labels = [label] if label else []

        type_cell = cell(row, "term_type") or TermType.CLASS.value
        try:
            term_type = TermType(type_cell)
        except ValueError:
            raise FormatError(f"unknown term_type {type_cell!r} for {iri}") from None

        ontology.add_term(
            OntologyTerm(
                iri=iri,
                labels=labels,
                exact_synonyms=split_multi(cell(row, "exact_synonyms")),
                broad_synonyms=split_multi(cell(row, "broad_synonyms")),
                definitions=split_multi(cell(row, "definitions")),
                parents=set(split_multi(cell(row, "parents"))),
                instances=set(split_multi(cell(row, "instances"))),
                deprecated=cell(row, "deprecated").lower() in ("true", "1", "yes"),
                term_type=term_type,
            )
        )

    if not ontology.terms:
        raise EmptyOntologyError("term table contains no data rows")
    ontology.link_relations()
    return ontology


def serialize_term_table(ontology: Ontology, separator: str = ",") -> str:
    """Serialize an ontology so that :func:`parse_term_table` restores it field-wise."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, delimiter=separator, lineterminator="\n")
    writer.writerow(
        [
            "iri",
            "label",
            "labels",
            "exact_synonyms",
            "broad_synonyms",
            "definitions",
            "parents",
            "instances",
            "deprecated",
            "term_type",
        ]
    )
    for iri in sorted(ontology.terms):
        term = ontology.terms[iri]
        writer.writerow(
            [
                term.iri,
                term.display_label,
                join_multi(term.labels),
                join_multi(term.exact_synonyms),
                join_multi(term.broad_synonyms),
                join_multi(term.definitions),
                join_multi(sorted(term.parents)),
                join_multi(sorted(term.instances)),
                "true" if term.deprecated else "false",
                term.term_type.value,
            ]
        )
    return buffer.getvalue()
