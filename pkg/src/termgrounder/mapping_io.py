"""Mapping-table CSV serialization and term-graph export.

The CSV layout is a leading block of ``# key: value`` metadata lines, then
the fixed header row, then one row per mapping. Ignored source terms appear
as rows without a target; unmapped terms are appended the same way when the
table was produced with ``incl_unmapped``. Scores are printed with three
decimals. ``read_mapping_table`` is the exact inverse, so a downloaded table
(including curation state) can be re-uploaded to resume a session.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .engine import Approval, Mapping, MapperKind, MappingTable, MappingType
from .errors import FormatError
from .hierarchy import HierarchyIndex
from .ontology import Ontology
from .preprocess import IGNORED_TAG, UNMAPPED_TAG, SourceTerm
from .termtable import join_multi, split_multi

COLUMNS = [
    "Source Term",
    "Source Term ID",
    "Tags",
    "Mapped Term Label",
    "Mapped Term CURIE",
    "Mapped Term IRI",
    "Mapping Score",
    "Rank",
    "Mapper",
    "Matched String",
    "Mapping Type",
    "Approval",
]


def format_score(score: float | None) -> str:
    return "" if score is None else f"{score:.3f}"


def serialize_mapping_table(table: MappingTable, incl_unmapped: bool | None = None) -> str:
    """Render the table as CSV text (UTF-8, ``\\n`` line endings)."""
    if incl_unmapped is None:
        incl_unmapped = table.metadata.get("config.incl_unmapped") == "True"
    buffer = io.StringIO()
    for key, value in table.metadata.items():
        buffer.write(f"# {key}: {value}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in table.rows:
        writer.writerow(_row_cells(row))
    if incl_unmapped:
        for term in table.unmapped:
            writer.writerow(_source_only_cells(term))
    return buffer.getvalue()


def _row_cells(row: Mapping) -> list[str]:
    if not row.target_iri:
        return _source_only_cells(row.source)
    return [
        row.source.text,
        row.source.id or "",
        join_multi(row.source.tags),
        row.target_label,
        row.target_curie,
        row.target_iri,
        format_score(row.score),
        str(row.rank) if row.rank is not None else "",
        row.mapper.value if row.mapper else "",
        row.matched_string,
        row.mapping_type.value,
        row.approval.value,
    ]


def _source_only_cells(term: SourceTerm) -> list[str]:
    return [term.text, term.id or "", join_multi(term.tags), "", "", "", "", "", "", "", "", ""]


def write_mapping_table(
    table: MappingTable, path: str | Path, incl_unmapped: bool | None = None
) -> None:
    Path(path).write_text(serialize_mapping_table(table, incl_unmapped), encoding="utf-8")


def parse_mapping_table(text: str) -> MappingTable:
    """Parse CSV text produced by :func:`serialize_mapping_table`.

    Raises:
        FormatError: Malformed metadata line or header row; the message
            identifies the first offending line.
    """
    lines = text.splitlines()
    metadata: dict[str, str] = {}
    header_index = None
    for lineno, line in enumerate(lines):
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if ":" in body:
                key, _, value = body.partition(":")
                metadata[key.strip()] = value.lstrip(" ")
            elif body:
                raise FormatError(f"line {lineno + 1}: malformed metadata line {line!r}")
            continue
        if not line.strip():
            continue
        header_index = lineno
        break
    if header_index is None:
        raise FormatError("mapping table has no header row")

    reader = csv.reader(io.StringIO("\n".join(lines[header_index:])))
    header = next(reader)
    if header != COLUMNS:
        raise FormatError(
            f"line {header_index + 1}: unexpected header {header!r}; expected {COLUMNS!r}"
        )

    table = MappingTable(metadata=metadata)
    for cells in reader:
        if not any(cells):
            continue
        if len(cells) != len(COLUMNS):
            raise FormatError(
                f"row {reader.line_num}: expected {len(COLUMNS)} cells, found {len(cells)}"
            )
        values = dict(zip(COLUMNS, cells))
        term = SourceTerm(
            text=values["Source Term"],
            id=values["Source Term ID"] or None,
            tags=split_multi(values["Tags"]),
        )
        if not values["Mapped Term IRI"]:
            if IGNORED_TAG in term.tags:
                table.rows.append(Mapping(source=term))
            elif UNMAPPED_TAG in term.tags:
                table.unmapped.append(term)
            else:
                raise FormatError(
                    f"row {reader.line_num}: no target and no ignored/unmapped tag"
                )
            continue
        try:
            mapping = Mapping(
                source=term,
                target_iri=values["Mapped Term IRI"],
                target_curie=values["Mapped Term CURIE"],
                target_label=values["Mapped Term Label"],
                score=float(values["Mapping Score"]) if values["Mapping Score"] else None,
                mapper=MapperKind(values["Mapper"]) if values["Mapper"] else None,
                matched_string=values["Matched String"],
                mapping_type=MappingType(values["Mapping Type"]),
                approval=Approval(values["Approval"]),
                rank=int(values["Rank"]) if values["Rank"] else None,
            )
        except ValueError as exc:
            raise FormatError(f"row {reader.line_num}: {exc}") from exc
        table.rows.append(mapping)
    return table


def read_mapping_table(path: str | Path) -> MappingTable:
    return parse_mapping_table(Path(path).read_text(encoding="utf-8"))


def export_term_graphs(
    table: MappingTable, ontology: Ontology, hierarchy: HierarchyIndex
) -> dict:
    """Build the node-link neighborhood document for every mapped term.

    Each graph contains the mapped term, all of its ancestors, and its
    direct children; edges are the direct child-to-parent links among the
    included nodes. Graphs are keyed by the mapped term's CURIE.
    """
    graphs: dict[str, dict] = {}
    seen: set[str] = set()
    for row in table.rows:
        iri = row.target_iri
        if not iri or iri in seen or iri not in ontology.terms:
            continue
        seen.add(iri)
        term = ontology.terms[iri]
        include = {iri} | hierarchy.ancestors.get(iri, set()) | {
            child for child in term.children if child in ontology.terms
        }
        nodes = [
            {
                "id": ontology.terms[node_iri].curie,
                "iri": node_iri,
                "label": ontology.terms[node_iri].display_label,
            }
            for node_iri in sorted(include)
        ]
        edges = []
        for node_iri in sorted(include):
            for parent_iri in sorted(hierarchy.direct_parents.get(node_iri, ())):
                if parent_iri in include:
                    edges.append(
                        {
                            "source": ontology.terms[node_iri].curie,
                            "target": ontology.terms[parent_iri].curie,
                        }
                    )
        graphs[term.curie] = {"nodes": nodes, "edges": edges}
    return {"graphs": graphs}


def export_term_graphs_file(
    table: MappingTable, ontology: Ontology, hierarchy: HierarchyIndex, path: str | Path
) -> None:
    document = export_term_graphs(table, ontology, hierarchy)
    Path(path).write_text(json.dumps(document, indent=2, sort_keys=True), encoding="utf-8")
