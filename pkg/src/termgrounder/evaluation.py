"""Compare generated mappings with human-verified sets, by hierarchy relation.

Each (tool term T, benchmark term H) pair falls into exactly one category,
checked in strict order: Same (T = H), MoreSpecific (H is an ancestor of T),
MoreGeneral (T is an ancestor of H), Sibling (shared direct parent), else
Unrelated. "Ancestor" means the asserted-subclass transitive closure; terms
absent from the evaluation ontology land in Unrelated with a note.
"""

from __future__ import annotations

import csv
import io
import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

from .engine import MappingTable
from .errors import FormatError
from .hierarchy import HierarchyIndex

log = logging.getLogger(__name__)

_REQUIRED_SSSOM_COLUMNS = ("subject_id", "subject_label", "object_id")

TERM_NOT_FOUND_NOTE = "term-not-found"


class Category(Enum):
    SAME = "Same"
    MORE_SPECIFIC = "MoreSpecific"
    MORE_GENERAL = "MoreGeneral"
    SIBLING = "Sibling"
    UNRELATED = "Unrelated"


@dataclass
class BenchmarkMapping:
    input_text: str
    benchmark_iri: str
    source_id: str | None = None


@dataclass
class ComparisonRecord:
    input_text: str
    tool_iri: str
    benchmark_iri: str
    category: Category
    note: str = ""


@dataclass
class ComparisonSummary:
    counts: dict[Category, int] = field(default_factory=dict)
    percentages: dict[Category, float] = field(default_factory=dict)
    total: int = 0
    unmapped: int = 0

    @classmethod
    def from_records(cls, records: list[ComparisonRecord], unmapped: int = 0):
        counts = Counter(record.category for record in records)
        total = len(records)
        summary = cls(total=total, unmapped=unmapped)
        for category in Category:
            count = counts.get(category, 0)
            summary.counts[category] = count
            summary.percentages[category] = round(100.0 * count / total, 2) if total else 0.0
        return summary

    def as_text(self) -> str:
        lines = [f"{'Category':<14}{'Count':>8}  {'Percent':>8}"]
        for category in Category:
            lines.append(
                f"{category.value:<14}{self.counts.get(category, 0):>8}"
                f"  {self.percentages.get(category, 0.0):>7.2f}%"
            )
        lines.append(f"{'Total':<14}{self.total:>8}")
        if self.unmapped:
            lines.append(f"{'Unmapped':<14}{self.unmapped:>8}")
        return "\n".join(lines)


def parse_sssom(data: bytes | str) -> list[BenchmarkMapping]:
    """Parse an SSSOM TSV document into benchmark mappings.

    The optional leading ``#`` metadata block is skipped. ``subject_label``
    becomes the input text and ``object_id`` the benchmark IRI. Subjects
    appearing on more than one row are dropped entirely (the comparison
    corpus keeps only inputs with exactly one verified mapping); the dropped
    row count is logged.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    reader = csv.DictReader(io.StringIO("\n".join(lines)), delimiter="\t")
    header = reader.fieldnames or []
    missing = [c for c in _REQUIRED_SSSOM_COLUMNS if c not in header]
    if missing:
        raise FormatError(f"SSSOM input is missing required columns {missing}; found {header}")

    rows = []
    skipped_incomplete = 0
    for row in reader:
        subject = (row.get("subject_id") or "").strip()
        label = (row.get("subject_label") or "").strip()
        obj = (row.get("object_id") or "").strip()
        if not subject or not label or not obj:
            skipped_incomplete += 1
            continue
        rows.append((subject, label, obj))

    subject_counts = Counter(subject for subject, _, _ in rows)
    dropped = sum(count for count in subject_counts.values() if count > 1)
    if dropped:
        log.warning("dropped %d SSSOM rows whose subject has multiple mappings", dropped)
    if skipped_incomplete:
        log.warning("skipped %d SSSOM rows with empty required cells", skipped_incomplete)
    return [
        BenchmarkMapping(input_text=label, benchmark_iri=obj, source_id=subject)
        for subject, label, obj in rows
        if subject_counts[subject] == 1
    ]


def categorize(tool_iri: str, benchmark_iri: str, hierarchy: HierarchyIndex) -> Category:
    """Assign the hierarchy category for one (T, H) pair."""
    if tool_iri == benchmark_iri:
        return Category.SAME
    if benchmark_iri in hierarchy.ancestors.get(tool_iri, ()):
        return Category.MORE_SPECIFIC
    if tool_iri in hierarchy.ancestors.get(benchmark_iri, ()):
        return Category.MORE_GENERAL
    tool_parents = hierarchy.direct_parents.get(tool_iri, set())
    benchmark_parents = hierarchy.direct_parents.get(benchmark_iri, set())
    if tool_parents & benchmark_parents:
        return Category.SIBLING
    return Category.UNRELATED


def compare_sets(
    tool_table: MappingTable,
    benchmark: list[BenchmarkMapping],
    hierarchy: HierarchyIndex,
    samples_per_category: int = 3,
) -> tuple[list[ComparisonRecord], ComparisonSummary]:
    """Categorize the rank-1 tool mapping for every benchmark input.

    Benchmark inputs missing from the tool output are tallied as unmapped
    (a separate count, not a category). Returns the per-pair records and the
    aggregate summary; sample records per category are logged for inspection.
    """
    rank1: dict[str, str] = {}
    for row in tool_table.rows:
        if row.target_iri and (row.rank is None or row.rank == 1):
            rank1.setdefault(row.source.text, row.target_iri)

    records: list[ComparisonRecord] = []
    unmapped = 0
    known = hierarchy.ancestors
    for entry in benchmark:
        tool_iri = rank1.get(entry.input_text)
        if tool_iri is None:
            unmapped += 1
            continue
        category = categorize(tool_iri, entry.benchmark_iri, hierarchy)
        note = ""
        if category is Category.UNRELATED and (
            tool_iri not in known or entry.benchmark_iri not in known
        ):
            note = TERM_NOT_FOUND_NOTE
        records.append(
            ComparisonRecord(
                input_text=entry.input_text,
                tool_iri=tool_iri,
                benchmark_iri=entry.benchmark_iri,
                category=category,
                note=note,
            )
        )

    summary = ComparisonSummary.from_records(records, unmapped=unmapped)
    for category in Category:
        samples = [r for r in records if r.category is category][:samples_per_category]
        for record in samples:
            log.info(
                "%s sample: %r -> tool %s vs benchmark %s",
                category.value,
                record.input_text,
                record.tool_iri,
                record.benchmark_iri,
            )
    return records, summary


def comparison_report_csv(records: list[ComparisonRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["Input Text", "Tool IRI", "Benchmark IRI", "Category", "Note"])
    for record in records:
        writer.writerow(
            [record.input_text, record.tool_iri, record.benchmark_iri,
             record.category.value, record.note]
        )
    return buffer.getvalue()
