"""Download the evaluation ontology and benchmark mapping sets.

Fetches the EFO v3.62.0 release (OBO Graph JSON) plus three human-verified
mapping collections, converting each into a canonical SSSOM TSV with
subject_id / subject_label / object_id columns under tests/data/benchmarks/.
The full suite's evaluation-reproduction test and
scripts/reproduce_evaluation.py read from those locations.

Needs outbound network access. Each download is independent; failures are
reported and the rest proceed, so a partially reachable mirror still yields
usable files. Files already present are kept unless --force is given.

If the upstream layouts have drifted, download the sets manually and place
SSSOM TSVs at the paths printed by --show-paths.
"""

import argparse
import csv
import io
import sys
from pathlib import Path

import requests

DATA_DIR = Path(__file__).resolve().parent.parent / "tests" / "data"
BENCH_DIR = DATA_DIR / "benchmarks"

EFO_URL = "https://github.com/EBISPOT/efo/releases/download/v3.62.0/efo.json"
UKB_URL = (
    "https://raw.githubusercontent.com/EBISPOT/EFO-UKB-mappings/master/"
    "UK_Biobank_master_file.tsv"
)
BIOMAPPINGS_URL = (
    "https://raw.githubusercontent.com/biopragmatics/biomappings/master/"
    "src/biomappings/resources/mappings.tsv"
)
OLS_URLS = [
    # the hosting layout of the OLS cross-ontology set has moved before;
    # try the known locations in order
    "https://raw.githubusercontent.com/ccb-hms/ontology-mapper-evaluation/main/data/ols_mappings.sssom.tsv",
    "https://raw.githubusercontent.com/ccb-hms/ontology-mapper-evaluation/master/data/ols_mappings.sssom.tsv",
]

EFO_IRI_PREFIX = "http://www.ebi.ac.uk/efo/EFO_"
OBO_IRI_PREFIX = "http://purl.obolibrary.org/obo/"


def download(url: str, timeout: float = 120.0) -> bytes:
    print(f"  GET {url}")
    response = requests.get(url, timeout=timeout)
    response.raise_for_status()
    return response.content


def write_sssom(path: Path, rows: list[tuple[str, str, str]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, delimiter="\t", lineterminator="\n")
        writer.writerow(["subject_id", "subject_label", "object_id"])
        writer.writerows(rows)
    print(f"  wrote {path} ({len(rows)} rows)")


def pick_column(header: list[str], *candidates: str) -> int | None:
    lowered = [h.strip().lower() for h in header]
    for candidate in candidates:
        if candidate in lowered:
            return lowered.index(candidate)
    return None


def convert_ukb(raw: bytes) -> list[tuple[str, str, str]]:
    """UK-Biobank phenotype -> EFO master file to SSSOM triples.

    Multi-IRI cells become several rows for the same subject, so inputs with
    more than one verified mapping are dropped later by the uniqueness rule.
    """
    text = raw.decode("utf-8", errors="replace")
    reader = csv.reader(io.StringIO(text), delimiter="\t")
    header = next(reader)
    query_col = pick_column(header, "zooma query", "query", "ukb phenotype", "phenotype")
    iri_col = pick_column(header, "mapped_term_uri", "mapped term uri", "term_uri", "uri")
    if query_col is None or iri_col is None:
        raise ValueError(f"unrecognized UK-Biobank file header: {header}")
    rows = []
    for record in reader:
        if len(record) <= max(query_col, iri_col):
            continue
        query = record[query_col].strip()
        iris = record[iri_col].replace("||", ",").split(",")
        for iri in (i.strip() for i in iris):
            if query and iri:
                rows.append((f"UKB:{query}", query, iri))
    return rows


def convert_biomappings(raw: bytes) -> list[tuple[str, str, str]]:
    """Biomappings curated TSV to SSSOM triples targeting EFO.

    Keeps exact-match rows with EFO on either side; the non-EFO side's label
    becomes the input text.
    """
    text = raw.decode("utf-8", errors="replace")
    reader = csv.DictReader(io.StringIO(text), delimiter="\t")
    rows = []
    for record in reader:
        relation = (record.get("relation") or "").strip()
        if relation and not relation.endswith("exactMatch"):
            continue
        s_prefix = (record.get("source prefix") or "").strip().lower()
        t_prefix = (record.get("target prefix") or "").strip().lower()
        if t_prefix == "efo" and s_prefix != "efo":
            subject = f"{record['source prefix']}:{record['source identifier']}"
            label = (record.get("source name") or "").strip()
            target_iri = EFO_IRI_PREFIX + record["target identifier"].strip()
        elif s_prefix == "efo" and t_prefix != "efo":
            subject = f"{record['target prefix']}:{record['target identifier']}"
            label = (record.get("target name") or "").strip()
            target_iri = EFO_IRI_PREFIX + record["source identifier"].strip()
        else:
            continue
        if label:
            rows.append((subject, label, target_iri))
    return rows


def convert_generic_sssom(raw: bytes) -> list[tuple[str, str, str]]:
    """Pass-through for documents that already carry the SSSOM columns."""
    text = raw.decode("utf-8", errors="replace")
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    reader = csv.DictReader(io.StringIO("\n".join(lines)), delimiter="\t")
    rows = []
    for record in reader:
        subject = (record.get("subject_id") or "").strip()
        label = (record.get("subject_label") or "").strip()
        target = (record.get("object_id") or "").strip()
        if subject and label and target:
            rows.append((subject, label, target))
    return rows


def fetch_all(force: bool = False) -> int:
    failures = 0
    efo_path = DATA_DIR / "efo-v3.62.0.json"
    print("EFO v3.62.0 release:")
    if efo_path.is_file() and not force:
        print(f"  {efo_path} already present")
    else:
        try:
            efo_path.parent.mkdir(parents=True, exist_ok=True)
            efo_path.write_bytes(download(EFO_URL))
            print(f"  wrote {efo_path}")
        except Exception as exc:
            print(f"  FAILED: {exc}")
            failures += 1

    jobs = [
        ("ukb-efo", [UKB_URL], convert_ukb),
        ("biomappings", [BIOMAPPINGS_URL], convert_biomappings),
        ("ols", OLS_URLS, convert_generic_sssom),
    ]
    for name, urls, converter in jobs:
        target = BENCH_DIR / f"{name}.sssom.tsv"
        print(f"{name} benchmark set:")
        if target.is_file() and not force:
            print(f"  {target} already present")
            continue
        raw = None
        for url in urls:
            try:
                raw = download(url)
                break
            except Exception as exc:
                print(f"  FAILED: {exc}")
        if raw is None:
            failures += 1
            continue
        try:
            write_sssom(target, converter(raw))
        except Exception as exc:
            print(f"  conversion FAILED: {exc}")
            failures += 1
    return failures


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--force", action="store_true", help="redownload existing files")
    parser.add_argument("--show-paths", action="store_true",
                        help="print expected file locations and exit")
    args = parser.parse_args()
    if args.show_paths:
        print(DATA_DIR / "efo-v3.62.0.json")
        for name in ("ukb-efo", "biomappings", "ols"):
            print(BENCH_DIR / f"{name}.sssom.tsv")
        return 0
    failures = fetch_all(force=args.force)
    if failures:
        print(f"\n{failures} download(s) failed; see messages above. You can place "
              "SSSOM TSVs manually at the paths shown by --show-paths.")
        return 1
    print("\nall evaluation data in place")
    return 0


if __name__ == "__main__":
    sys.exit(main())
