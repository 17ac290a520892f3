import logging
import random

import pytest

from termgrounder.engine import Mapping, MappingTable
from termgrounder.errors import FormatError
from termgrounder.evaluation import (
    Category,
    ComparisonSummary,
    categorize,
    compare_sets,
    comparison_report_csv,
    parse_sssom,
    BenchmarkMapping,
)
from termgrounder.hierarchy import build_hierarchy
from termgrounder.preprocess import SourceTerm

from .conftest import make_ontology
from .oracles import categorize_bruteforce

SSSOM = "\n".join(
    [
        "# curie_map:",
        "#   EFO: http://www.ebi.ac.uk/efo/",
        "subject_id\tsubject_label\tpredicate_id\tobject_id",
        "UKB:1\tasthma\tskos:exactMatch\tEFO:0000270",
        "UKB:2\tangina\tskos:exactMatch\tEFO:0003913",
        "UKB:3\tstroke\tskos:exactMatch\tEFO:0000712",
    ]
)


class TestParseSssom:
    def test_three_rows(self):
        mappings = parse_sssom(SSSOM)
        assert len(mappings) == 3
        assert mappings[0].input_text == "asthma"
        assert mappings[0].benchmark_iri == "EFO:0000270"
        assert mappings[0].source_id == "UKB:1"

    def test_metadata_block_ignored(self):
        assert len(parse_sssom(SSSOM)) == len(parse_sssom(SSSOM.replace("# curie_map:\n", "")))

    def test_duplicate_subject_drops_both(self, caplog):
        doubled = SSSOM + "\nUKB:1\tasthma again\tskos:exactMatch\tEFO:9999999"
        with caplog.at_level(logging.WARNING):
            mappings = parse_sssom(doubled)
        assert len(mappings) == 2
        assert all(m.source_id != "UKB:1" for m in mappings)
        assert any("2" in r.message and "multiple" in r.message for r in caplog.records)

    def test_missing_columns(self):
        with pytest.raises(FormatError, match="subject_label"):
            parse_sssom("subject_id\tobject_id\nA\tB")

    def test_bytes_accepted(self):
        assert len(parse_sssom(SSSOM.encode("utf-8"))) == 3


@pytest.fixture
def abc_hierarchy():
    # A below B below C; D is a second child of B; E is off on its own
    onto = make_ontology(
        {
            "A": {"labels": ["a"], "parents": ["B"]},
            "B": {"labels": ["b"], "parents": ["C"]},
            "C": {"labels": ["c"]},
            "D": {"labels": ["d"], "parents": ["B"]},
            "E": {"labels": ["e"]},
        }
    )
    return build_hierarchy(onto)


class TestCategorize:
    def test_same(self, abc_hierarchy):
        assert categorize("A", "A", abc_hierarchy) is Category.SAME

    def test_more_specific_and_general(self, abc_hierarchy):
        assert categorize("A", "C", abc_hierarchy) is Category.MORE_SPECIFIC
        assert categorize("C", "A", abc_hierarchy) is Category.MORE_GENERAL

    def test_sibling(self, abc_hierarchy):
        assert categorize("A", "D", abc_hierarchy) is Category.SIBLING

    def test_unrelated(self, abc_hierarchy):
        assert categorize("A", "E", abc_hierarchy) is Category.UNRELATED

    def test_absent_terms_fall_to_unrelated(self, abc_hierarchy):
        assert categorize("A", "NCBITaxon:210", abc_hierarchy) is Category.UNRELATED
        assert categorize("BTO:1", "A", abc_hierarchy) is Category.UNRELATED

    def test_precedence_subclass_beats_sibling(self):
        # F is both a child and a grandchild of H: subclass check wins
        onto = make_ontology(
            {
                "H": {"labels": ["h"]},
                "M": {"labels": ["m"], "parents": ["H"]},
                "F": {"labels": ["f"], "parents": ["M", "H"]},
            }
        )
        hier = build_hierarchy(onto)
        assert categorize("F", "M", hier) is Category.MORE_SPECIFIC

    def test_antisymmetry_on_random_dags(self):
        rng = random.Random(31)
        for _ in range(10):
            iris = [f"N{i}" for i in range(12)]
            spec = {}
            for i, iri in enumerate(iris):
                pool = iris[i + 1 :]
                spec[iri] = {
                    "labels": [iri],
                    "parents": rng.sample(pool, k=min(len(pool), rng.randint(0, 2))),
                }
            hier = build_hierarchy(make_ontology(spec))
            for t in iris:
                for h in iris:
                    got = categorize(t, h, hier)
                    if got is Category.MORE_SPECIFIC:
                        assert categorize(h, t, hier) is Category.MORE_GENERAL
                    if got is Category.SAME:
                        assert t == h

    def test_matches_bruteforce_on_random_dags(self):
        rng = random.Random(13)
        for _ in range(10):
            iris = [f"N{i}" for i in range(10)]
            spec = {}
            for i, iri in enumerate(iris):
                pool = iris[i + 1 :]
                spec[iri] = {
                    "labels": [iri],
                    "parents": rng.sample(pool, k=min(len(pool), rng.randint(0, 2))),
                }
            onto = make_ontology(spec)
            hier = build_hierarchy(onto)
            parents = {iri: set(t.parents) for iri, t in onto.terms.items()}
            for t in iris:
                for h in iris:
                    assert categorize(t, h, hier).value == categorize_bruteforce(
                        t, h, parents
                    )


def table_for(pairs):
    table = MappingTable()
    for text, iri in pairs:
        table.rows.append(
            Mapping(source=SourceTerm(text), target_iri=iri, rank=1)
        )
    return table


class TestCompareSets:
    def test_all_same(self, abc_hierarchy):
        benchmark = [BenchmarkMapping("a", "A"), BenchmarkMapping("b", "B")]
        table = table_for([("a", "A"), ("b", "B")])
        records, summary = compare_sets(table, benchmark, abc_hierarchy)
        assert summary.counts[Category.SAME] == 2
        assert summary.percentages[Category.SAME] == 100.0

    def test_five_category_fixture(self, abc_hierarchy):
        benchmark = [
            BenchmarkMapping("same", "A"),
            BenchmarkMapping("specific", "C"),
            BenchmarkMapping("general", "A"),
            BenchmarkMapping("sibling", "D"),
            BenchmarkMapping("unrelated", "E"),
        ]
        table = table_for(
            [
                ("same", "A"),
                ("specific", "A"),
                ("general", "C"),
                ("sibling", "A"),
                ("unrelated", "A"),
            ]
        )
        records, summary = compare_sets(table, benchmark, abc_hierarchy)
        assert [summary.counts[c] for c in Category] == [1, 1, 1, 1, 1]

    def test_unmapped_tallied_separately(self, abc_hierarchy):
        benchmark = [BenchmarkMapping("a", "A"), BenchmarkMapping("ghost", "E")]
        table = table_for([("a", "A")])
        records, summary = compare_sets(table, benchmark, abc_hierarchy)
        assert summary.unmapped == 1
        assert summary.total == 1

    def test_rank1_used(self, abc_hierarchy):
        table = MappingTable()
        term = SourceTerm("a")
        table.rows.append(Mapping(source=term, target_iri="A", rank=1))
        table.rows.append(Mapping(source=term, target_iri="E", rank=2))
        records, _ = compare_sets(table, [BenchmarkMapping("a", "A")], abc_hierarchy)
        assert records[0].category is Category.SAME

    def test_term_not_found_note(self, abc_hierarchy):
        records, _ = compare_sets(
            table_for([("x", "A")]),
            [BenchmarkMapping("x", "NCBITaxon:210")],
            abc_hierarchy,
        )
        assert records[0].category is Category.UNRELATED
        assert records[0].note == "term-not-found"

    def test_report_csv(self, abc_hierarchy):
        records, _ = compare_sets(
            table_for([("a", "A")]), [BenchmarkMapping("a", "A")], abc_hierarchy
        )
        text = comparison_report_csv(records)
        assert text.splitlines()[0] == "Input Text,Tool IRI,Benchmark IRI,Category,Note"
        assert "Same" in text

    def test_summary_text_layout(self):
        summary = ComparisonSummary.from_records([], unmapped=0)
        lines = summary.as_text().splitlines()
        assert lines[0].startswith("Category")
        assert len(lines) == 1 + len(Category) + 1  # header, categories, total
