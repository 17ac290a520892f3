"""Clients for BioPortal-style and Zooma-style annotator web services.

The HTTP transport is injected as a callable so the module is fully testable
offline; the default transport uses ``requests``. Every call carries a
deadline, requests are rate limited, and 429/5xx responses are retried with
exponential backoff up to a cap. Transport failures are recorded per batch
and surface as unmapped terms rather than aborting a bulk job.
"""

from __future__ import annotations

import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import CredentialError, TransportError
from .ontology import iri_to_curie
from .preprocess import SourceTerm

log = logging.getLogger(__name__)

BIOPORTAL_BASE_URL = "https://data.bioontology.org/annotator"
ZOOMA_BASE_URL = "https://www.ebi.ac.uk/spot/zooma/v2/api/services/annotate"

# Zooma reports confidence levels, not scores; this fixed table converts them.
ZOOMA_CONFIDENCE_SCORES = {"HIGH": 1.0, "GOOD": 0.75, "MEDIUM": 0.5, "LOW": 0.25}
ZOOMA_UNKNOWN_CONFIDENCE_SCORE = 0.25


@dataclass
class RemoteAnnotation:
    source_text: str
    term_iri: str
    term_label: str
    ontology_acronym: str
    score: float
    raw_payload: object = None


@dataclass
class RemoteClientConfig:
    base_url: str = ""
    api_key: str = ""
    batch_size: int = 10
    request_delay: float = 0.25
    max_retries: int = 3
    backoff_base: float = 0.5
    timeout: float = 30.0
    max_in_flight: int = 2


class _RateLimiter:
    def __init__(self, delay: float):
        self._delay = delay
        self._lock = threading.Lock()
        self._next = 0.0

    def wait(self) -> None:
        with self._lock:
            now = time.monotonic()
            pause = max(0.0, self._next - now)
            self._next = max(now, self._next) + self._delay
        if pause:
            time.sleep(pause)


def default_transport(url: str, params: dict, timeout: float) -> tuple[int, object]:
    import requests

    response = requests.get(url, params=params, timeout=timeout)
    try:
        payload = response.json()
    except ValueError:
        payload = None
    return response.status_code, payload


def _call_with_retries(
    transport, url: str, params: dict, config: RemoteClientConfig, limiter: _RateLimiter
):
    last_status = None
    for attempt in range(config.max_retries + 1):
        limiter.wait()
        status, payload = transport(url, params, config.timeout)
        if status in (401, 403):
            raise CredentialError(f"service rejected credentials (HTTP {status})")
        if status == 429 or status >= 500:
            last_status = status
            if attempt < config.max_retries:
                time.sleep(config.backoff_base * (2**attempt))
            continue
        if status != 200:
            raise TransportError(f"unexpected HTTP {status} from {url}")
        return payload
    raise TransportError(
        f"retries exhausted after {config.max_retries + 1} attempts (last HTTP {last_status})"
    )


def _run_batches(batches, worker, max_in_flight: int):
    if max_in_flight <= 1 or len(batches) <= 1:
        return [worker(batch) for batch in batches]
    with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
        return list(pool.map(worker, batches))


def bioportal_annotate(
    terms: list[SourceTerm],
    ontologies: str = "all",
    api_key: str = "",
    transport=None,
    config: RemoteClientConfig | None = None,
) -> list[RemoteAnnotation]:
    """Annotate terms against a BioPortal-style annotator endpoint.

    ``ontologies`` is a comma-separated acronym list (or ``all``). Every
    returned annotation carries score 1.0 because the service reports no
    confidence values. Batches that keep failing are logged and skipped, so
    their terms simply end up unmapped.
    """
    config = config or RemoteClientConfig()
    api_key = api_key or config.api_key
    if not api_key:
        raise CredentialError("bioportal mapper requires a non-empty API key")
    transport = transport or default_transport
    base_url = config.base_url or BIOPORTAL_BASE_URL
    limiter = _RateLimiter(config.request_delay)

    active = [t for t in terms if not t.is_ignored]
    batches = [
        active[i : i + config.batch_size] for i in range(0, len(active), config.batch_size)
    ]

    def annotate_batch(batch: list[SourceTerm]) -> list[RemoteAnnotation]:
        text = "\n".join(term.text for term in batch)
        params = {
            "text": text,
            "ontologies": "" if ontologies == "all" else ontologies,
            "apikey": api_key,
            "longest_only": "true",
        }
        try:
            payload = _call_with_retries(transport, base_url, params, config, limiter)
        except CredentialError:
            raise
        except TransportError as exc:
            log.error("bioportal batch of %d terms failed: %s", len(batch), exc)
            return []
        return _parse_bioportal_payload(payload, batch, text)

    results = _run_batches(batches, annotate_batch, config.max_in_flight)
    return [annotation for batch in results for annotation in batch]


def _parse_bioportal_payload(
    payload, batch: list[SourceTerm], joined_text: str
) -> list[RemoteAnnotation]:
    if not isinstance(payload, list):
        return []
    # Map annotation character offsets back to the term occupying that line.
    line_spans = []
    offset = 0
    for term in batch:
        line_spans.append((offset, offset + len(term.text), term))
        offset += len(term.text) + 1

    def term_for_offset(position: int) -> SourceTerm | None:
        for start, stop, term in line_spans:
            if start <= position <= stop:
                return term
        return None

    annotations = []
    for entry in payload:
        annotated = entry.get("annotatedClass") or {}
        iri = annotated.get("@id", "")
        if not iri:
            continue
        label = annotated.get("prefLabel", "")
        acronym = (annotated.get("links") or {}).get("ontology", "").rstrip("/").rsplit("/", 1)[-1]
        spans = entry.get("annotations") or [{}]
        for span in spans:
            position = span.get("from")
            term = None
            if isinstance(position, int):
                term = term_for_offset(position - 1)  # service offsets are 1-based
            if term is None and span.get("text"):
                needle = span["text"].lower()
                term = next((t for t in batch if needle in t.text.lower()), None)
            if term is None and len(batch) == 1:
                term = batch[0]
            if term is None:
                continue
            annotations.append(
                RemoteAnnotation(
                    source_text=term.text,
                    term_iri=iri,
                    term_label=label,
                    ontology_acronym=acronym,
                    score=1.0,
                    raw_payload=entry,
                )
            )
    return annotations


def zooma_annotate(
    terms: list[SourceTerm],
    ontologies: str = "all",
    transport=None,
    config: RemoteClientConfig | None = None,
) -> list[RemoteAnnotation]:
    """Annotate terms against a Zooma-style endpoint, one request per term.

    Service confidence levels map onto scores via ``ZOOMA_CONFIDENCE_SCORES``;
    unknown levels fall back to the LOW score with a warning.
    """
    config = config or RemoteClientConfig()
    transport = transport or default_transport
    base_url = config.base_url or ZOOMA_BASE_URL
    limiter = _RateLimiter(config.request_delay)

    active = [t for t in terms if not t.is_ignored]

    def annotate_one(term: SourceTerm) -> list[RemoteAnnotation]:
        params = {"propertyValue": term.text}
        if ontologies and ontologies != "all":
            params["filter"] = f"required:[none],ontologies:[{ontologies}]"
        try:
            payload = _call_with_retries(transport, base_url, params, config, limiter)
        except CredentialError:
            raise
        except TransportError as exc:
            log.error("zooma request for %r failed: %s", term.text, exc)
            return []
        return _parse_zooma_payload(payload, term)

    results = _run_batches(active, annotate_one, config.max_in_flight)
    return [annotation for batch in results for annotation in batch]


def _parse_zooma_payload(payload, term: SourceTerm) -> list[RemoteAnnotation]:
    if not isinstance(payload, list):
        return []
    annotations = []
    for entry in payload:
        confidence = str(entry.get("confidence", "")).upper()
        score = ZOOMA_CONFIDENCE_SCORES.get(confidence)
        if score is None:
            log.warning(
                "unknown zooma confidence %r for %r; scoring %.2f",
                confidence,
                term.text,
                ZOOMA_UNKNOWN_CONFIDENCE_SCORE,
            )
            score = ZOOMA_UNKNOWN_CONFIDENCE_SCORE
        label = (entry.get("annotatedProperty") or {}).get("propertyValue", "") or term.text
        for iri in entry.get("semanticTags", []):
            curie = iri_to_curie(iri)
            annotations.append(
                RemoteAnnotation(
                    source_text=term.text,
                    term_iri=iri,
                    term_label=label,
                    ontology_acronym=curie.split(":", 1)[0] if ":" in curie else "",
                    score=score,
                    raw_payload=entry,
                )
            )
    return annotations
