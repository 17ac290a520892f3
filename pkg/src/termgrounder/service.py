"""HTTP API for interactive mapping: jobs, sessions, and term neighborhoods.

Jobs run on a bounded worker pool. A finished job materializes a curation
session under the same id; sessions hold the editable mapping table, are
persisted to disk as mapping-table CSV (so restarts keep curation work), and
serve the exact ``write_mapping_table`` bytes for download. Row edits use
last-writer-wins with a per-row version counter.
"""

from __future__ import annotations

import logging
import os
import tempfile
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from fastapi import FastAPI, File, Form, HTTPException, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from ._version import __version__
from .engine import (
    Approval,
    Mapping,
    MappingConfig,
    MappingTable,
    MappingType,
    map_terms,
    read_source_terms,
    resolve_ontology_source,
)
from .errors import TermGrounderError
from .hierarchy import HierarchyIndex, build_hierarchy
from .mapping_io import (
    export_term_graphs,
    parse_mapping_table,
    serialize_mapping_table,
)
from .ontology import Ontology
from .preprocess import SourceTerm

log = logging.getLogger(__name__)

DEFAULT_MAX_UPLOAD_BYTES = 50 * 1024 * 1024
SESSIONS_DIR_ENV = "TERMGROUNDER_SESSIONS"


class JobState(Enum):
    QUEUED = "Queued"
    RUNNING = "Running"
    DONE = "Done"
    FAILED = "Failed"


@dataclass
class MappingJob:
    job_id: str
    state: JobState = JobState.QUEUED
    config: MappingConfig = field(default_factory=MappingConfig)
    submitted_at: float = field(default_factory=time.time)
    result: MappingTable | None = None
    error: str | None = None
    ontology: Ontology | None = None
    hierarchy: HierarchyIndex | None = None


@dataclass
class Session:
    session_id: str
    table: MappingTable
    versions: list[int]
    lock: threading.Lock = field(default_factory=threading.Lock)


def _term_payload(term: SourceTerm) -> dict:
    return {"text": term.text, "id": term.id, "tags": list(term.tags)}


def _row_payload(row: Mapping, index: int, version: int) -> dict:
    return {
        "row": index,
        "version": version,
        "source_term": row.source.text,
        "source_term_id": row.source.id,
        "tags": list(row.source.tags),
        "iri": row.target_iri,
        "curie": row.target_curie,
        "label": row.target_label,
        "score": row.score,
        "rank": row.rank,
        "mapper": row.mapper.value if row.mapper else None,
        "matched_string": row.matched_string,
        "mapping_type": row.mapping_type.value,
        "approval": row.approval.value,
    }


def _grouped_result(session: Session) -> dict:
    """Group rows into per-source-term entries with their ranked alternates."""
    table = session.table
    groups: list[dict] = []
    current: dict | None = None
    for index, row in enumerate(table.rows):
        payload = _row_payload(row, index, session.versions[index])
        starts_group = row.rank is None or row.rank == 1 or current is None
        if starts_group:
            current = {
                "source_term": row.source.text,
                "source_term_id": row.source.id,
                "tags": list(row.source.tags),
                "mappings": [] if row.target_iri == "" else [payload],
            }
            groups.append(current)
        else:
            current["mappings"].append(payload)
    return {
        "session_id": session.session_id,
        "metadata": dict(table.metadata),
        "terms": groups,
        "unmapped": [_term_payload(t) for t in table.unmapped],
    }


class ServiceState:
    def __init__(
        self,
        worker_count: int = 2,
        sessions_dir: str | Path | None = None,
        max_upload_bytes: int = DEFAULT_MAX_UPLOAD_BYTES,
        cache_root: str | Path | None = None,
    ):
        self.executor = ThreadPoolExecutor(max_workers=worker_count)
        self.max_upload_bytes = max_upload_bytes
        self.cache_root = cache_root
        self.jobs: dict[str, MappingJob] = {}
        self.sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        env_dir = os.environ.get(SESSIONS_DIR_ENV)
        self.sessions_dir = Path(
            sessions_dir or env_dir or Path(tempfile.gettempdir()) / "termgrounder-sessions"
        )
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self._load_persisted_sessions()

    def _load_persisted_sessions(self) -> None:
        for path in sorted(self.sessions_dir.glob("*.csv")):
            try:
                table = parse_mapping_table(path.read_text(encoding="utf-8"))
            except TermGrounderError as exc:
                log.warning("skipping unreadable session file %s: %s", path, exc)
                continue
            session_id = path.stem
            self.sessions[session_id] = Session(
                session_id=session_id, table=table, versions=[0] * len(table.rows)
            )

    def persist_session(self, session: Session) -> None:
        target = self.sessions_dir / f"{session.session_id}.csv"
        staging = target.with_suffix(".csv.tmp")
        staging.write_text(serialize_mapping_table(session.table), encoding="utf-8")
        os.replace(staging, target)

    def create_session(self, session_id: str, table: MappingTable) -> Session:
        session = Session(session_id=session_id, table=table, versions=[0] * len(table.rows))
        with self._lock:
            self.sessions[session_id] = session
        self.persist_session(session)
        return session

    def submit_job(self, job: MappingJob, runner) -> None:
        with self._lock:
            self.jobs[job.job_id] = job
        self.executor.submit(runner)


def create_app(
    worker_count: int = 2,
    sessions_dir: str | Path | None = None,
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD_BYTES,
    cache_root: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="termgrounder service", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    state = ServiceState(
        worker_count=worker_count,
        sessions_dir=sessions_dir,
        max_upload_bytes=max_upload_bytes,
        cache_root=cache_root,
    )
    app.state.service = state

    def get_job(job_id: str) -> MappingJob:
        job = state.jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"unknown job {job_id!r}")
        return job

    def get_done_job(job_id: str) -> MappingJob:
        job = get_job(job_id)
        if job.state in (JobState.QUEUED, JobState.RUNNING):
            raise HTTPException(status_code=409, detail=f"job {job_id!r} is {job.state.value}")
        if job.state is JobState.FAILED:
            raise HTTPException(status_code=409, detail=f"job {job_id!r} failed: {job.error}")
        return job

    def get_session(session_id: str) -> Session:
        session = state.sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return session

    async def read_limited(upload: UploadFile | None) -> bytes | None:
        if upload is None:
            return None
        data = await upload.read()
        if len(data) > state.max_upload_bytes:
            raise HTTPException(status_code=413, detail="uploaded file exceeds the size limit")
        return data

    @app.post("/api/jobs", status_code=202)
    async def submit_job(
        source_file: UploadFile | None = File(default=None),
        source_text: str | None = Form(default=None),
        ontology_file: UploadFile | None = File(default=None),
        ontology_url: str | None = Form(default=None),
        ontology_acronym: str | None = Form(default=None),
        mapper: str = Form(default="tfidf"),
        max_mappings: int = Form(default=1),
        min_score: float = Form(default=0.3),
        excl_deprecated: bool = Form(default=False),
        base_iris: str = Form(default=""),
        term_type: str = Form(default="classes"),
        incl_unmapped: bool = Form(default=False),
        ngram_size: int = Form(default=3),
        include_broad_synonyms: bool = Form(default=False),
        csv_column: str | None = Form(default=None),
        source_terms_ids_column: str | None = Form(default=None),
        separator: str = Form(default=","),
    ):
        source_bytes = await read_limited(source_file)
        ontology_bytes = await read_limited(ontology_file)
        ontology_filename = ontology_file.filename if ontology_file else None
        if source_bytes is None and not source_text:
            raise HTTPException(status_code=400, detail="missing source: provide "
                                                        "'source_file' or 'source_text'")
        if source_text and len(source_text.encode()) > state.max_upload_bytes:
            raise HTTPException(status_code=413, detail="source_text exceeds the size limit")
        if ontology_bytes is None and not ontology_url and not ontology_acronym:
            raise HTTPException(
                status_code=400,
                detail="missing target: provide 'ontology_file', 'ontology_url' or "
                       "'ontology_acronym'",
            )

        try:
            config = MappingConfig(
                mapper=mapper,
                max_mappings=max_mappings,
                min_score=min_score,
                excl_deprecated=excl_deprecated,
                base_iris=tuple(p for p in base_iris.split(",") if p),
                term_type=term_type,
                incl_unmapped=incl_unmapped,
                ngram_size=ngram_size,
                include_broad_synonyms=include_broad_synonyms,
                csv_column=csv_column or None,
                source_terms_ids_column=source_terms_ids_column or None,
                separator=separator,
                use_cache=bool(ontology_acronym),
            )
        except (TermGrounderError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

        job = MappingJob(job_id=uuid.uuid4().hex, config=config)
        source_payload = (
            source_bytes.decode("utf-8") if source_bytes is not None else source_text
        )

        def run() -> None:
            job.state = JobState.RUNNING
            ontology_path = None
            try:
                if ontology_bytes is not None:
                    handle = tempfile.NamedTemporaryFile(
                        suffix=".ontology", delete=False, dir=state.sessions_dir
                    )
                    handle.write(ontology_bytes)
                    handle.close()
                    ontology_path = handle.name
                    ontology = resolve_ontology_source(ontology_path, separator=config.separator)
                    # record the upload's own name, not the temp path, so the
                    # output is byte-identical to a CLI run on the same file
                    upload_name = ontology_filename or "uploaded-ontology"
                    ontology.acronym = upload_name
                    ontology.source_locator = upload_name
                elif ontology_acronym:
                    from .cache import load_cached

                    ontology = load_cached(ontology_acronym, cache_root=state.cache_root)
                else:
                    ontology = resolve_ontology_source(ontology_url, separator=config.separator)
                terms = read_source_terms(source_payload, config)
                table = map_terms(terms, ontology, config)
                job.ontology = ontology
                job.hierarchy = build_hierarchy(ontology)
                job.result = table
                state.create_session(job.job_id, table)
                job.state = JobState.DONE
            except Exception as exc:  # surface anything as a failed job
                log.exception("job %s failed", job.job_id)
                job.error = str(exc)
                job.state = JobState.FAILED
            finally:
                if ontology_path:
                    Path(ontology_path).unlink(missing_ok=True)

        state.submit_job(job, run)
        return {"job_id": job.job_id}

    @app.get("/api/jobs/{job_id}")
    def job_state(job_id: str):
        job = get_job(job_id)
        return {
            "job_id": job.job_id,
            "state": job.state.value,
            "submitted_at": job.submitted_at,
            "error": job.error,
        }

    @app.get("/api/jobs/{job_id}/result")
    def job_result(job_id: str):
        get_done_job(job_id)
        return _grouped_result(get_session(job_id))

    @app.get("/api/jobs/{job_id}/result.csv")
    def job_result_csv(job_id: str):
        get_done_job(job_id)
        session = get_session(job_id)
        return Response(
            content=serialize_mapping_table(session.table),
            media_type="text/csv",
            headers={"Content-Disposition": f'attachment; filename="{job_id}.csv"'},
        )

    @app.get("/api/jobs/{job_id}/graphs")
    def job_graphs(job_id: str):
        job = get_done_job(job_id)
        session = get_session(job_id)
        if job.ontology is None or job.hierarchy is None:
            raise HTTPException(status_code=409, detail="job has no ontology loaded")
        return JSONResponse(export_term_graphs(session.table, job.ontology, job.hierarchy))

    @app.post("/api/sessions/resume")
    async def resume_session(table_file: UploadFile = File(...)):
        data = await read_limited(table_file)
        if not data:
            raise HTTPException(status_code=400, detail="uploaded mapping table is empty")
        try:
            table = parse_mapping_table(data.decode("utf-8"))
        except (TermGrounderError, UnicodeDecodeError) as exc:
            raise HTTPException(status_code=400, detail=f"unparsable mapping table: {exc}")
        session = state.create_session(uuid.uuid4().hex, table)
        return _grouped_result(session)

    @app.get("/api/sessions/{session_id}")
    def session_result(session_id: str):
        return _grouped_result(get_session(session_id))

    @app.get("/api/sessions/{session_id}/result.csv")
    def session_result_csv(session_id: str):
        session = get_session(session_id)
        return Response(
            content=serialize_mapping_table(session.table),
            media_type="text/csv",
            headers={"Content-Disposition": f'attachment; filename="{session_id}.csv"'},
        )

    @app.get("/api/terms/neighborhood")
    def neighborhood(iri: str, job: str):
        mapping_job = get_job(job)
        if mapping_job.ontology is None or mapping_job.hierarchy is None:
            raise HTTPException(status_code=409, detail="job has no ontology loaded")
        ontology, hierarchy = mapping_job.ontology, mapping_job.hierarchy
        term = ontology.terms.get(iri)
        if term is None:
            raise HTTPException(status_code=404, detail=f"unknown term IRI {iri!r}")

        def node(node_iri: str) -> dict:
            node_term = ontology.terms.get(node_iri)
            if node_term is None:
                return {"iri": node_iri, "curie": node_iri, "label": ""}
            return {
                "iri": node_iri,
                "curie": node_term.curie,
                "label": node_term.display_label,
            }

        ancestors = sorted(hierarchy.ancestors.get(iri, set()))
        children = sorted(c for c in term.children if c in ontology.terms)
        included = {iri, *ancestors, *children}
        edges = []
        for node_iri in sorted(included):
            for parent_iri in sorted(hierarchy.direct_parents.get(node_iri, ())):
                if parent_iri in included:
                    edges.append({"source": node_iri, "target": parent_iri})
        return {
            "iri": iri,
            "labels": list(term.labels),
            "ancestors": [node(a) for a in ancestors],
            "children": [node(c) for c in children],
            "instances": [node(i) for i in sorted(term.instances)],
            "edges": edges,
        }

    @app.patch("/api/sessions/{session_id}/rows/{row_index}")
    def patch_row(session_id: str, row_index: int, patch: dict):
        session = get_session(session_id)
        with session.lock:
            if row_index < 0 or row_index >= len(session.table.rows):
                raise HTTPException(status_code=404, detail=f"no row {row_index}")
            row = session.table.rows[row_index]

            if "mapping_type" in patch:
                try:
                    row.mapping_type = MappingType(patch["mapping_type"])
                except ValueError:
                    raise HTTPException(
                        status_code=422,
                        detail=f"invalid mapping_type {patch['mapping_type']!r}; "
                               f"expected one of {[t.value for t in MappingType]}",
                    )
            if "approval" in patch:
                try:
                    row.approval = Approval(patch["approval"])
                except ValueError:
                    raise HTTPException(
                        status_code=422,
                        detail=f"invalid approval {patch['approval']!r}; "
                               f"expected one of {[a.value for a in Approval]}",
                    )
            if "swap_with_iri" in patch:
                row_index = _swap_alternate(session, row_index, patch["swap_with_iri"])
                row = session.table.rows[row_index]

            session.versions[row_index] += 1
            state.persist_session(session)
            return _row_payload(row, row_index, session.versions[row_index])

    return app


def _starts_group(row: Mapping) -> bool:
    return row.rank is None or row.rank == 1


def _group_bounds(table: MappingTable, row_index: int) -> tuple[int, int]:
    """Start/stop row indices of the source-term group containing row_index."""
    start = row_index
    while start > 0 and not _starts_group(table.rows[start]):
        start -= 1
    stop = row_index + 1
    while stop < len(table.rows) and not _starts_group(table.rows[stop]):
        stop += 1
    return start, stop


def _swap_alternate(session: Session, row_index: int, alternate_iri: str) -> int:
    """Swap the group's rank-1 row with the named alternate; returns rank-1 index."""
    table = session.table
    start, stop = _group_bounds(table, row_index)
    group = list(range(start, stop))
    target = next(
        (i for i in group if table.rows[i].target_iri == alternate_iri), None
    )
    if target is None:
        raise HTTPException(
            status_code=422,
            detail=f"no alternate with IRI {alternate_iri!r} for this source term",
        )
    first = group[0]
    table.rows[first], table.rows[target] = table.rows[target], table.rows[first]
    table.rows[first].rank, table.rows[target].rank = (
        table.rows[target].rank,
        table.rows[first].rank,
    )
    session.versions[target] += 1
    return first


app = create_app()


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="127.0.0.1", port=8008)
