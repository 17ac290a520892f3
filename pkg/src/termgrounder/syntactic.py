"""Pairwise string-similarity metrics and brute-force corpus matching.

All metrics return values in [0, 1] with 1 meaning the normalized strings
are equal (for Jaccard: equal token sets). Inputs are normalized before
comparison so scores are insensitive to case and whitespace noise.
"""

from __future__ import annotations

from . import _kernels
from .errors import ConfigurationError
from .ontology import OntologyTerm
from .preprocess import SourceTerm, normalize

MAX_JARO_WINKLER_PREFIX_WEIGHT = 0.25

SYNTACTIC_METRICS = ("levenshtein", "jaro", "jarowinkler", "jaccard", "indel")


def levenshtein_sim(a: str, b: str) -> float:
    """1 - editdistance(a, b) / max(|a|, |b|); two empty strings score 1."""
    a, b = normalize(a), normalize(b)
    if not a and not b:
        return 1.0
    dist = _kernels.levenshtein_distance(_kernels.text_codes(a), _kernels.text_codes(b))
    return 1.0 - dist / max(len(a), len(b))


def indel_sim(a: str, b: str) -> float:
    """1 - (|a| + |b| - 2 * LCS(a, b)) / (|a| + |b|); two empty strings score 1."""
    a, b = normalize(a), normalize(b)
    total = len(a) + len(b)
    if total == 0:
        return 1.0
    lcs = _kernels.lcs_length(_kernels.text_codes(a), _kernels.text_codes(b))
    return 1.0 - (total - 2 * lcs) / total


def jaro_sim(a: str, b: str) -> float:
    a, b = normalize(a), normalize(b)
    return _kernels.jaro_similarity(_kernels.text_codes(a), _kernels.text_codes(b))


def jaro_winkler_sim(
    a: str, b: str, prefix_weight: float = 0.1, max_prefix: int = 4
) -> float:
    """Jaro boosted by shared-prefix length: jaro + l * p * (1 - jaro)."""
    if prefix_weight > MAX_JARO_WINKLER_PREFIX_WEIGHT:
        raise ConfigurationError(
            f"prefix_weight {prefix_weight} > {MAX_JARO_WINKLER_PREFIX_WEIGHT}"
            " would allow scores above 1"
        )
    a, b = normalize(a), normalize(b)
    jaro = _kernels.jaro_similarity(_kernels.text_codes(a), _kernels.text_codes(b))
    prefix = 0
    for ca, cb in zip(a[:max_prefix], b[:max_prefix]):
        if ca != cb:
            break
        prefix += 1
    return jaro + prefix * prefix_weight * (1.0 - jaro)


def jaccard_sim(a: str, b: str) -> float:
    """Token-set Jaccard over whitespace tokens of the normalized strings."""
    tokens_a = set(normalize(a).split())
    tokens_b = set(normalize(b).split())
    if not tokens_a and not tokens_b:
        return 1.0
    union = tokens_a | tokens_b
    if not union:
        return 1.0
    return len(tokens_a & tokens_b) / len(union)


_METRIC_FUNCS = {
    "levenshtein": levenshtein_sim,
    "jaro": jaro_sim,
    "jarowinkler": jaro_winkler_sim,
    "jaccard": jaccard_sim,
    "indel": indel_sim,
}


def metric_function(name: str):
    try:
        return _METRIC_FUNCS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown syntactic metric {name!r}; expected one of {sorted(_METRIC_FUNCS)}"
        ) from None


def best_syntactic_match(
    query: SourceTerm,
    corpus: list[OntologyTerm],
    metric: str = "levenshtein",
    top_n: int = 1,
    include_broad: bool = False,
) -> list[tuple[OntologyTerm, float, str]]:
    """Scan the corpus pairwise and keep the best-scoring terms.

    A term's score is the maximum similarity over its labels and synonyms;
    the returned triples carry the label/synonym string that achieved it.
    Results are sorted by descending score, ties by ascending IRI, and
    truncated to ``top_n``.
    """
    if top_n < 1:
        raise ConfigurationError("top_n must be >= 1")
    sim = metric_function(metric)
    scored: list[tuple[float, str, str]] = []  # (score, iri, matched string)
    by_iri: dict[str, OntologyTerm] = {}
    for term in corpus:
        best, best_string = -1.0, ""
        for candidate in term.matchable_strings(include_broad):
            value = sim(query.normalized, candidate)
            if value > best:
                best, best_string = value, candidate
        if best >= 0.0:
            scored.append((best, term.iri, best_string))
            by_iri[term.iri] = term
    scored.sort(key=lambda item: (-item[0], item[1]))
    return [(by_iri[iri], score, matched) for score, iri, matched in scored[:top_n]]
