"""Source-term normalization, regex rewrite templates, and the blocklist."""

from __future__ import annotations

import logging
import re
import unicodedata
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ConfigurationError

log = logging.getLogger(__name__)

IGNORED_TAG = "ignored"
UNMAPPED_TAG = "unmapped"

_WHITESPACE_RUN = re.compile(r"\s+")


@dataclass
class SourceTerm:
    """One input string to be mapped, with its normalized form and tags."""

    text: str
    normalized: str = ""
    id: str | None = None
    tags: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.normalized:
            self.normalized = normalize(self.text)

    @property
    def is_ignored(self) -> bool:
        return IGNORED_TAG in self.tags


def normalize(text: str) -> str:
    """NFC-compose, lowercase, trim, and collapse internal whitespace runs.

    Punctuation is kept: character n-grams downstream can exploit it.
    Idempotent by construction.
    """
    composed = unicodedata.normalize("NFC", text)
    return _WHITESPACE_RUN.sub(" ", composed.lower().strip())


def _compile_patterns(
    patterns: list[str], require_group: bool = False, flags: int = 0
) -> list[re.Pattern]:
    compiled = []
    for idx, raw in enumerate(patterns):
        try:
            pattern = re.compile(raw, flags)
        except re.error as exc:
            raise ConfigurationError(f"pattern #{idx} {raw!r} does not compile: {exc}") from exc
        if require_group and pattern.groups != 1:
            raise ConfigurationError(
                f"pattern #{idx} {raw!r} must contain exactly one capture group"
            )
        compiled.append(pattern)
    return compiled


def apply_regex_templates(terms: list[SourceTerm], patterns: list[str]) -> list[SourceTerm]:
    """Rewrite terms to the capture group of the first fully matching template.

    Rewritten terms gain a ``rewritten:<pattern-index>`` tag and a freshly
    computed normalized form; terms no template matches pass through
    unchanged. All patterns are validated before any term is touched.
    """
    compiled = _compile_patterns(patterns, require_group=True)
    out = []
    for term in terms:
        for idx, pattern in enumerate(compiled):
            match = pattern.fullmatch(term.text)
            if match:
                rewritten = match.group(1)
                out.append(
                    replace(
                        term,
                        text=rewritten,
                        normalized=normalize(rewritten),
                        tags=term.tags + [f"rewritten:{idx}"],
                    )
                )
                break
        else:
            out.append(term)
    return out


def apply_blocklist(terms: list[SourceTerm], blocklist: list[str]) -> list[SourceTerm]:
    """Tag terms fully matching any blocklist pattern as ignored.

    Matching is case-insensitive against the raw text. Every input term is
    returned (ignored or not); downstream matching skips ignored ones.
    """
    compiled = _compile_patterns(blocklist, flags=re.IGNORECASE)
    out = []
    for term in terms:
        if any(p.fullmatch(term.text) for p in compiled) and not term.is_ignored:
            out.append(replace(term, tags=term.tags + [IGNORED_TAG]))
        else:
            out.append(term)
    return out


def read_pattern_file(path: str | Path) -> list[str]:
    """One regex per line; blank lines and ``#`` comment lines are skipped."""
    patterns = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            patterns.append(stripped)
    return patterns


def make_source_terms(
    inputs: "list[str] | list[SourceTerm] | dict[str, list[str]]",
    ids: list[str] | None = None,
) -> list[SourceTerm]:
    """Coerce the accepted source-term input shapes into SourceTerm objects.

    Accepts a list of strings, a list of SourceTerm (passed through), or a
    dict of term text to tag list. ``ids`` pairs positionally with list input.
    """
    if isinstance(inputs, dict):
        return [SourceTerm(text=text, tags=list(tags)) for text, tags in inputs.items()]
    terms = []
    for idx, item in enumerate(inputs):
        if isinstance(item, SourceTerm):
            terms.append(item)
        else:
            term_id = ids[idx] if ids and idx < len(ids) else None
            terms.append(SourceTerm(text=item, id=term_id))
    return terms
