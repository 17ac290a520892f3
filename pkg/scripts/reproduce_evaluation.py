"""Run the benchmark comparison workflow end to end and print the summary.

Steps: load EFO v3.62.0, map the three spot-check inputs and verify their
rank-1 targets, then for each benchmark set map every input text and
categorize the rank-1 mapping against the verified one by hierarchy relation.
Prints a category-by-set table (counts and percentages) and the Same-fraction
deltas against the published reference fractions.

Run scripts/fetch_evaluation_data.py first (or place the files manually);
this script touches no network itself.
"""

import argparse
import sys
import time
from pathlib import Path

from termgrounder.engine import map_terms
from termgrounder.evaluation import Category, compare_sets, parse_sssom
from termgrounder.hierarchy import build_hierarchy
from termgrounder.obograph import parse_obograph

DATA_DIR = Path(__file__).resolve().parent.parent / "tests" / "data"

SPOT_CHECKS = [
    ("heart disease", "http://www.ebi.ac.uk/efo/EFO_0003777"),
    ("alzheimers", "http://purl.obolibrary.org/obo/MONDO_0004975"),
    ("panic attack", "http://www.ebi.ac.uk/efo/EFO_0004262"),
]

# published Same fractions the comparison is measured against (+/- 3pp)
REFERENCE_SAME = {"ukb-efo": 0.73, "biomappings": 0.79, "ols": 0.81}


def load_efo(path: Path):
    print(f"loading {path} ...")
    started = time.perf_counter()
    ontology = parse_obograph(path.read_bytes(), acronym="EFO", source_locator=str(path))
    print(f"  {len(ontology)} terms in {time.perf_counter() - started:.1f}s")
    return ontology


def run_spot_checks(ontology) -> bool:
    print("\nrank-1 spot checks (scores reported, not asserted):")
    table = map_terms(
        [text for text, _ in SPOT_CHECKS], ontology, excl_deprecated=True, min_score=0.0
    )
    rank1 = {r.source.text: r for r in table.rows if r.rank == 1}
    ok = True
    for text, expected_iri in SPOT_CHECKS:
        row = rank1.get(text)
        if row is None:
            print(f"  {text!r}: UNMAPPED (expected {expected_iri})")
            ok = False
            continue
        verdict = "ok" if row.target_iri == expected_iri else f"MISMATCH ({expected_iri})"
        print(f"  {text!r} -> {row.target_curie} {row.target_label!r} "
              f"score {row.score:.3f}  [{verdict}]")
        ok = ok and row.target_iri == expected_iri
    return ok


def run_benchmark(name: str, path: Path, ontology, hierarchy):
    benchmark = parse_sssom(path.read_bytes())
    print(f"\n{name}: {len(benchmark)} single-mapping inputs")
    started = time.perf_counter()
    table = map_terms(
        [b.input_text for b in benchmark], ontology, excl_deprecated=True, min_score=0.0
    )
    records, summary = compare_sets(table, benchmark, hierarchy)
    print(f"  mapped + categorized in {time.perf_counter() - started:.1f}s")
    return summary


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--efo", default=str(DATA_DIR / "efo-v3.62.0.json"))
    parser.add_argument("--benchmarks-dir", default=str(DATA_DIR / "benchmarks"))
    parser.add_argument("--strict", action="store_true",
                        help="exit nonzero when a Same fraction misses the 3pp window")
    args = parser.parse_args()

    efo_path = Path(args.efo)
    if not efo_path.is_file():
        print(f"missing {efo_path}; run scripts/fetch_evaluation_data.py first")
        return 1
    ontology = load_efo(efo_path)
    hierarchy = build_hierarchy(ontology)

    spot_ok = run_spot_checks(ontology)

    summaries = {}
    for name in REFERENCE_SAME:
        path = Path(args.benchmarks_dir) / f"{name}.sssom.tsv"
        if not path.is_file():
            print(f"\n{name}: SKIPPED ({path} not found)")
            continue
        summaries[name] = run_benchmark(name, path, ontology, hierarchy)

    if summaries:
        names = list(summaries)
        print("\n" + "=" * (16 + 18 * len(names)))
        print(f"{'Category':<16}" + "".join(f"{n:>18}" for n in names))
        print("=" * (16 + 18 * len(names)))
        for category in Category:
            cells = []
            for n in names:
                s = summaries[n]
                cells.append(f"{s.counts[category]} ({s.percentages[category]:.1f}%)")
            print(f"{category.value:<16}" + "".join(f"{c:>18}" for c in cells))
        print(f"{'Unmapped':<16}"
              + "".join(f"{summaries[n].unmapped:>18}" for n in names))

        print("\nSame-fraction deltas vs reference:")
        within = True
        for n in names:
            s = summaries[n]
            fraction = s.counts[Category.SAME] / max(s.total, 1)
            delta = fraction - REFERENCE_SAME[n]
            flag = "ok" if abs(delta) <= 0.03 else "OUT OF WINDOW"
            within = within and abs(delta) <= 0.03
            print(f"  {n}: {100 * fraction:.1f}% vs {100 * REFERENCE_SAME[n]:.0f}% "
                  f"(delta {100 * delta:+.1f}pp) [{flag}]")
    else:
        within = False
        print("\nno benchmark sets found; nothing compared")

    if args.strict and not (spot_ok and within and len(summaries) == len(REFERENCE_SAME)):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
