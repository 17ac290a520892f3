import os
from pathlib import Path

import pytest

from termgrounder import _kernels
from termgrounder.ontology import Ontology, OntologyTerm, TermType

EFO_ENV = "TERMGROUNDER_EFO_JSON"
_DATA_DIR = Path(__file__).parent / "data"


def efo_json_path() -> Path | None:
    """Local copy of the EFO v3.62.0 release file, if one is available."""
    candidates = []
    if os.environ.get(EFO_ENV):
        candidates.append(Path(os.environ[EFO_ENV]))
    candidates.append(_DATA_DIR / "efo-v3.62.0.json")
    for path in candidates:
        if path.is_file():
            return path
    return None


requires_efo = pytest.mark.skipif(
    efo_json_path() is None,
    reason=f"needs the EFO v3.62.0 release file (set {EFO_ENV} or run "
    "scripts/fetch_evaluation_data.py)",
)


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # JIT-compile every kernel before any timed test section runs.
    _kernels.warmup()


@pytest.fixture(scope="session")
def efo_ontology():
    path = efo_json_path()
    if path is None:
        pytest.skip("EFO release file not available")
    from termgrounder.obograph import parse_obograph

    return parse_obograph(path.read_bytes(), acronym="EFO", source_locator=str(path))


def make_ontology(spec: dict[str, dict], acronym: str = "EX") -> Ontology:
    """Build a small ontology from {iri: {labels, synonyms, parents, ...}}."""
    onto = Ontology(acronym=acronym, source_locator="fixture")
    for iri, fields in spec.items():
        onto.add_term(
            OntologyTerm(
                iri=iri,
                labels=list(fields.get("labels", [])),
                exact_synonyms=list(fields.get("exact_synonyms", [])),
                broad_synonyms=list(fields.get("broad_synonyms", [])),
                definitions=list(fields.get("definitions", [])),
                parents=set(fields.get("parents", [])),
                deprecated=fields.get("deprecated", False),
                term_type=TermType(fields.get("term_type", "Class")),
            )
        )
    onto.link_relations()
    return onto


@pytest.fixture
def disease_ontology() -> Ontology:
    """A tiny disease hierarchy used across engine and service tests.

    disorder
      heart disease (syn: cardiac disease)
        heart failure (syn: cardiac failure)
      lung disease
        asthma
      deprecated disease (deprecated)
    """
    return make_ontology(
        {
            "EX:0001": {"labels": ["disorder"]},
            "EX:0002": {
                "labels": ["heart disease"],
                "exact_synonyms": ["cardiac disease"],
                "parents": ["EX:0001"],
            },
            "EX:0003": {
                "labels": ["heart failure"],
                "exact_synonyms": ["cardiac failure"],
                "parents": ["EX:0002"],
            },
            "EX:0004": {"labels": ["lung disease"], "parents": ["EX:0001"]},
            "EX:0005": {"labels": ["asthma"], "parents": ["EX:0004"]},
            "EX:0006": {
                "labels": ["deprecated disease"],
                "parents": ["EX:0001"],
                "deprecated": True,
            },
        }
    )


# --- acceptance criterion reporting ----------------------------------------

_acceptance_reports: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "setup" and report.skipped:
        _acceptance_reports[name] = "SKIP"
    elif report.when == "call":
        _acceptance_reports[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_reports:
        return
    try:
        from tests.test_acceptance import CRITERIA
    except ImportError:
        try:
            from test_acceptance import CRITERIA
        except ImportError:
            CRITERIA = {}
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome in _acceptance_reports.items():
        description = CRITERIA.get(name, name)
        terminalreporter.write_line(f"{outcome}: {description}")
