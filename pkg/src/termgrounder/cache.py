"""Persist processed ontologies under acronyms for reuse across runs.

Each entry is one directory under the cache root holding a small key-value
manifest plus the serialized term store. Writes land in a temp directory that
is renamed into place, so readers never observe a partially written entry.
The cache root comes from the ``TERMGROUNDER_CACHE`` environment variable
unless given explicitly.
"""

from __future__ import annotations

import logging
import os
import re
import shutil
import tempfile
import time
import uuid
from dataclasses import dataclass
from pathlib import Path

from .errors import CacheMissError, ConfigurationError
from .ontology import Ontology
from .termtable import parse_term_table, serialize_term_table

log = logging.getLogger(__name__)

_ACRONYM_RE = re.compile(r"^[A-Za-z0-9_-]+$")
_MANIFEST_NAME = "manifest.txt"
_STORE_NAME = "terms.csv"

DEFAULT_CACHE_ENV = "TERMGROUNDER_CACHE"


@dataclass
class CacheEntry:
    acronym: str
    path: Path
    created_at: float
    source_locator: str
    term_count: int


def default_cache_root() -> Path:
    env = os.environ.get(DEFAULT_CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "termgrounder"


def _validate_acronym(acronym: str) -> None:
    if not _ACRONYM_RE.match(acronym):
        raise ConfigurationError(
            f"invalid cache acronym {acronym!r}: must match [A-Za-z0-9_-]+"
        )


def _write_manifest(path: Path, entry: CacheEntry) -> None:
    lines = [
        f"acronym: {entry.acronym}",
        f"source_locator: {entry.source_locator}",
        f"created_at: {entry.created_at}",
        f"term_count: {entry.term_count}",
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _read_manifest(path: Path) -> dict[str, str]:
    values = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        if ": " in line:
            key, value = line.split(": ", 1)
            values[key] = value
    return values


def cache_ontology(
    source_locator: str | Path,
    acronym: str,
    cache_root: Path | None = None,
    ontology: Ontology | None = None,
) -> CacheEntry:
    """Parse ``source_locator`` (unless ``ontology`` is given) and store it.

    Re-caching an existing acronym replaces the previous entry; on parse
    failure no entry is created or clobbered.
    """
    from .engine import resolve_ontology_source  # local import to avoid a cycle

    _validate_acronym(acronym)
    root = Path(cache_root) if cache_root else default_cache_root()
    if ontology is None:
        ontology = resolve_ontology_source(str(source_locator))
    entry = CacheEntry(
        acronym=acronym,
        path=root / acronym,
        created_at=time.time(),
        source_locator=str(source_locator),
        term_count=len(ontology),
    )

    root.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=f".{acronym}-", dir=root))
    try:
        (staging / _STORE_NAME).write_text(serialize_term_table(ontology), encoding="utf-8")
        _write_manifest(staging / _MANIFEST_NAME, entry)
        target = root / acronym
        if target.exists():
            trash = root / f".trash-{acronym}-{uuid.uuid4().hex}"
            os.rename(target, trash)
            os.rename(staging, target)
            shutil.rmtree(trash, ignore_errors=True)
        else:
            os.rename(staging, target)
    except Exception:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    log.info("cached %s (%d terms) under %s", acronym, entry.term_count, entry.path)
    return entry


def cache_ontology_set(
    table: list[tuple[str, str]],
    cache_root: Path | None = None,
) -> tuple[list[CacheEntry], list[tuple[str, str]]]:
    """Cache a collection of (acronym, locator) rows.

    Failures are isolated per row; successful rows persist. Returns the
    created entries and a list of (acronym, reason) failures. When an acronym
    repeats, the last row wins.
    """
    if not table:
        raise ConfigurationError("cache_ontology_set requires a non-empty table")
    seen: dict[str, int] = {}
    for idx, (acronym, _) in enumerate(table):
        if acronym in seen:
            log.warning("duplicate acronym %r in cache table; last row wins", acronym)
        seen[acronym] = idx

    entries: list[CacheEntry] = []
    failures: list[tuple[str, str]] = []
    for idx, (acronym, locator) in enumerate(table):
        if seen[acronym] != idx:
            continue
        try:
            entries.append(cache_ontology(locator, acronym, cache_root=cache_root))
        except Exception as exc:
            log.error("caching %r from %r failed: %s", acronym, locator, exc)
            failures.append((acronym, str(exc)))
    return entries, failures


def list_cached(cache_root: Path | None = None) -> list[str]:
    root = Path(cache_root) if cache_root else default_cache_root()
    if not root.is_dir():
        return []
    return sorted(
        p.name
        for p in root.iterdir()
        if p.is_dir() and not p.name.startswith(".") and (p / _STORE_NAME).is_file()
    )


def load_cached(acronym: str, cache_root: Path | None = None) -> Ontology:
    """Load a previously cached ontology.

    Raises:
        CacheMissError: Unknown acronym; the message lists what is available.
    """
    root = Path(cache_root) if cache_root else default_cache_root()
    store = root / acronym / _STORE_NAME
    if not store.is_file():
        raise CacheMissError(acronym, list_cached(root))
    manifest = _read_manifest(root / acronym / _MANIFEST_NAME)
    ontology = parse_term_table(
        store.read_text(encoding="utf-8"),
        acronym=acronym,
        source_locator=manifest.get("source_locator", ""),
    )
    return ontology


def cache_entry_info(acronym: str, cache_root: Path | None = None) -> CacheEntry:
    root = Path(cache_root) if cache_root else default_cache_root()
    manifest_path = root / acronym / _MANIFEST_NAME
    if not manifest_path.is_file():
        raise CacheMissError(acronym, list_cached(root))
    manifest = _read_manifest(manifest_path)
    return CacheEntry(
        acronym=acronym,
        path=root / acronym,
        created_at=float(manifest.get("created_at", "0")),
        source_locator=manifest.get("source_locator", ""),
        term_count=int(manifest.get("term_count", "0")),
    )
