"""Character n-gram TF-IDF vectorization and sparse top-n cosine retrieval.

Documents are the normalized labels and exact synonyms (optionally broad
synonyms) of the corpus terms, padded with one boundary space per side
before n-gram extraction. Row vectors are L2-normalized tf*idf with
idf[g] = ln((1 + N) / (1 + df(g))) + 1, so cosine similarity reduces to a
sparse dot product. Only documents sharing at least one n-gram with a query
can become candidates; scores lie in [0, 1].

The sparse product runs on the kernels in :mod:`termgrounder._kernels`
(numba-jitted with a numpy fallback) and never materializes the full
query-by-document score matrix.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _kernels
from .errors import ConfigurationError, EmptyCorpusError
from .ontology import OntologyTerm
from .preprocess import SourceTerm, normalize

log = logging.getLogger(__name__)


class DocumentOrigin(Enum):
    LABEL = "label"
    EXACT_SYNONYM = "exact_synonym"
    BROAD_SYNONYM = "broad_synonym"


@dataclass
class Document:
    text: str
    owner_iri: str
    origin: DocumentOrigin


@dataclass
class CsrMatrix:
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray
    n_rows: int
    n_cols: int


@dataclass
class TfidfIndex:
    """Immutable vectorized corpus supporting top-n cosine retrieval."""

    documents: list[Document]
    vocabulary: dict[str, int]
    idf: np.ndarray
    ngram_size: int
    doc_matrix: CsrMatrix
    doc_matrix_csc: CsrMatrix = field(repr=False, default=None)
    terms_by_iri: dict[str, OntologyTerm] = field(default_factory=dict, repr=False)
    max_docs_per_term: int = 1


def char_ngrams(normalized: str, n: int) -> list[str]:
    """Sliding character windows over the boundary-padded string."""
    if not normalized:
        return []
    padded = f" {normalized} "
    if len(padded) < n:
        return []
    return [padded[i : i + n] for i in range(len(padded) - n + 1)]


def _ngram_counts(normalized: str, n: int) -> Counter:
    return Counter(char_ngrams(normalized, n))


def _rows_to_csr(
    row_counts: list[Counter], vocabulary: dict[str, int], idf: np.ndarray, n_cols: int
) -> CsrMatrix:
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for counts in row_counts:
        entries = sorted(
            (vocabulary[g], tf) for g, tf in counts.items() if g in vocabulary
        )
        if entries:
            values = [tf * idf[col] for col, tf in entries]
            norm = math.sqrt(sum(v * v for v in values))
            indices.extend(col for col, _ in entries)
            data.extend(v / norm for v in values)
        indptr.append(len(indices))
    return CsrMatrix(
        indptr=np.asarray(indptr, dtype=np.int64),
        indices=np.asarray(indices, dtype=np.int64),
        data=np.asarray(data, dtype=np.float64),
        n_rows=len(row_counts),
        n_cols=n_cols,
    )


def _csr_to_csc(csr: CsrMatrix) -> CsrMatrix:
    order = np.argsort(csr.indices, kind="stable")
    col_counts = np.bincount(csr.indices, minlength=csr.n_cols)
    col_indptr = np.zeros(csr.n_cols + 1, dtype=np.int64)
    np.cumsum(col_counts, out=col_indptr[1:])
    row_ids = np.repeat(np.arange(csr.n_rows, dtype=np.int64), np.diff(csr.indptr))
    return CsrMatrix(
        indptr=col_indptr,
        indices=row_ids[order],
        data=csr.data[order],
        n_rows=csr.n_cols,
        n_cols=csr.n_rows,
    )


def build_tfidf_index(
    corpus: list[OntologyTerm],
    ngram_size: int = 3,
    include_broad: bool = False,
) -> TfidfIndex:
    """Vectorize the corpus into an immutable index.

    Raises:
        ConfigurationError: ``ngram_size`` < 1 or empty corpus.
        EmptyCorpusError: No term contributed a usable document string.
    """
    if ngram_size < 1:
        raise ConfigurationError("ngram_size must be >= 1")
    if not corpus:
        raise ConfigurationError("corpus must not be empty")

    documents: list[Document] = []
    row_counts: list[Counter] = []
    docs_per_term: Counter = Counter()
    corpus = sorted(corpus, key=lambda t: t.iri)  # document order must follow IRI order
    for term in corpus:
        sources = [(label, DocumentOrigin.LABEL) for label in term.labels]
        sources += [(s, DocumentOrigin.EXACT_SYNONYM) for s in term.exact_synonyms]
        if include_broad:
            sources += [(s, DocumentOrigin.BROAD_SYNONYM) for s in term.broad_synonyms]
        for text, origin in sources:
            norm_text = normalize(text)
            if not norm_text:
                continue
            documents.append(Document(text=text, owner_iri=term.iri, origin=origin))
            row_counts.append(_ngram_counts(norm_text, ngram_size))
            docs_per_term[term.iri] += 1

    if not documents:
        raise EmptyCorpusError("corpus terms contributed no label or synonym strings")

    df: Counter = Counter()
    for counts in row_counts:
        df.update(counts.keys())
    vocabulary = {gram: col for col, gram in enumerate(sorted(df))}
    n_docs = len(documents)
    idf = np.empty(len(vocabulary), dtype=np.float64)
    for gram, col in vocabulary.items():
        idf[col] = math.log((1.0 + n_docs) / (1.0 + df[gram])) + 1.0

    doc_matrix = _rows_to_csr(row_counts, vocabulary, idf, len(vocabulary))
    index = TfidfIndex(
        documents=documents,
        vocabulary=vocabulary,
        idf=idf,
        ngram_size=ngram_size,
        doc_matrix=doc_matrix,
        doc_matrix_csc=_csr_to_csc(doc_matrix),
        terms_by_iri={term.iri: term for term in corpus},
        max_docs_per_term=max(docs_per_term.values()),
    )
    return index


def vectorize_queries(index: TfidfIndex, queries: list[str]) -> CsrMatrix:
    """Vectorize normalized query strings against the index vocabulary.

    N-grams absent from the vocabulary are dropped; a query whose n-grams
    are all out-of-vocabulary yields an empty row.
    """
    row_counts = [_ngram_counts(q, index.ngram_size) for q in queries]
    return _rows_to_csr(row_counts, index.vocabulary, index.idf, len(index.vocabulary))


def tfidf_topn(
    index: TfidfIndex,
    queries: list[str],
    top_n: int,
    min_score: float = 0.0,
) -> list[list[tuple[int, float]]]:
    """Per query, the ``top_n`` document candidates with cosine >= min_score.

    Candidates are ordered by descending cosine with ties broken by
    ascending document row index. A query with no in-vocabulary n-grams
    gets an empty candidate list.
    """
    if top_n < 1:
        raise ConfigurationError("top_n must be >= 1")
    q = vectorize_queries(index, queries)
    csc = index.doc_matrix_csc
    out_idx, out_score, out_count = _kernels.sparse_topn(
        q.indptr,
        q.indices,
        q.data,
        csc.indptr,
        csc.indices,
        csc.data,
        index.doc_matrix.n_rows,
        top_n,
        min_score,
    )
    return [
        [(int(out_idx[r, c]), float(out_score[r, c])) for c in range(out_count[r])]
        for r in range(len(queries))
    ]


def collapse_to_terms(
    index: TfidfIndex, candidates: list[tuple[int, float]], top_n: int
) -> list[tuple[OntologyTerm, float, str]]:
    """Collapse document-level candidates to term level.

    A term's score is the maximum over its documents; ordering is descending
    score with ties broken by ascending IRI, truncated to ``top_n``.
    """
    best: dict[str, tuple[float, str]] = {}
    for doc_idx, score in candidates:
        doc = index.documents[doc_idx]
        if doc.owner_iri not in best:
            best[doc.owner_iri] = (score, doc.text)
    ranked = sorted(best.items(), key=lambda item: (-item[1][0], item[0]))
    return [
        (index.terms_by_iri[iri], score, matched)
        for iri, (score, matched) in ranked[:top_n]
    ]


def tfidf_match(
    terms: list[SourceTerm],
    corpus: list[OntologyTerm],
    top_n: int = 1,
    min_score: float = 0.3,
    ngram_size: int = 3,
    include_broad: bool = False,
    index: TfidfIndex | None = None,
) -> list[list[tuple[OntologyTerm, float, str]]]:
    """Match source terms against the corpus; one candidate list per term.

    Document-level retrieval is over-fetched far enough that the term-level
    top ``top_n`` is exact even when high-scoring terms carry many synonyms.
    """
    if index is None:
        index = build_tfidf_index(corpus, ngram_size=ngram_size, include_broad=include_broad)
    doc_top_n = min(
        index.doc_matrix.n_rows,
        max(top_n, (top_n - 1) * index.max_docs_per_term + 1),
    )
    candidate_rows = tfidf_topn(
        index, [t.normalized for t in terms], doc_top_n, min_score
    )
    return [collapse_to_terms(index, row, top_n) for row in candidate_rows]
