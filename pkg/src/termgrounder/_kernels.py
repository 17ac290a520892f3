"""Hot numeric kernels with two interchangeable backends.

The JIT backend compiles the kernels with numba ``@njit``; the fallback
backend is pure numpy (anti-diagonal dynamic programming for the string
distances, vectorized accumulation for the sparse top-n product). The JIT
backend is used when numba imports cleanly, unless ``TERMGROUNDER_NO_NUMBA``
is set to a truthy value. ``benchmarks/bench_kernels.py`` compares the two.

All kernels receive plain numpy arrays: strings as uint32 code-point arrays,
sparse matrices as CSR/CSC triples (indptr, indices, data).
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("TERMGROUNDER_NO_NUMBA", "").strip().lower()
NUMBA_DISABLED = _FLAG in ("1", "true", "yes")

try:
    if NUMBA_DISABLED:
        raise ImportError("numba disabled by TERMGROUNDER_NO_NUMBA")
    from numba import njit, prange, get_num_threads

    NUMBA_ENABLED = True
except ImportError:
    NUMBA_ENABLED = False


def text_codes(text: str) -> np.ndarray:
    """Unicode code points of ``text`` as a uint32 array."""
    return np.frombuffer(text.encode("utf-32-le"), dtype=np.uint32)


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------

def levenshtein_distance_numpy(a: np.ndarray, b: np.ndarray) -> int:
    """Edit distance via anti-diagonal DP (diagonal cells are independent)."""
    m, n = len(a), len(b)
    if m == 0:
        return n
    if n == 0:
        return m
    prev2 = np.zeros(m + 1, dtype=np.int64)  # diagonal k-2, indexed by i
    prev = np.zeros(m + 1, dtype=np.int64)   # diagonal k-1
    cur = np.zeros(m + 1, dtype=np.int64)
    prev2[0] = 0
    prev[0] = 1
    if m >= 1:
        prev[1] = 1
    for k in range(2, m + n + 1):
        lo, hi = max(0, k - n), min(k, m)
        if lo == 0:
            cur[0] = k
        if hi == k:
            cur[k] = k
        i = np.arange(max(1, lo), min(hi, k - 1) + 1)
        if len(i):
            cost = (a[i - 1] != b[k - i - 1]).astype(np.int64)
            cur[i] = np.minimum(
                np.minimum(prev[i - 1], prev[i]) + 1,
                prev2[i - 1] + cost,
            )
        prev2, prev, cur = prev, cur, prev2
    return int(prev[m])  # after the final swap, prev holds diagonal m+n


def lcs_length_numpy(a: np.ndarray, b: np.ndarray) -> int:
    """Longest-common-subsequence length via anti-diagonal DP."""
    m, n = len(a), len(b)
    if m == 0 or n == 0:
        return 0
    prev2 = np.zeros(m + 1, dtype=np.int64)
    prev = np.zeros(m + 1, dtype=np.int64)
    cur = np.zeros(m + 1, dtype=np.int64)
    for k in range(2, m + n + 1):
        lo, hi = max(0, k - n), min(k, m)
        if lo == 0:
            cur[0] = 0
        if hi == k:
            cur[k] = 0
        i = np.arange(max(1, lo), min(hi, k - 1) + 1)
        if len(i):
            eq = a[i - 1] == b[k - i - 1]
            cur[i] = np.where(eq, prev2[i - 1] + 1, np.maximum(prev[i - 1], prev[i]))
        prev2, prev, cur = prev, cur, prev2
    return int(prev[m])


def _jaro_impl(a, b):
    la, lb = len(a), len(b)
    if la == 0 and lb == 0:
        return 1.0
    if la == 0 or lb == 0:
        return 0.0
    window = max(la, lb) // 2 - 1
    if window < 0:
        window = 0
    a_matched = np.zeros(la, dtype=np.uint8)
    b_matched = np.zeros(lb, dtype=np.uint8)
    matches = 0
    for i in range(la):
        lo = i - window if i - window > 0 else 0
        hi = i + window + 1 if i + window + 1 < lb else lb
        for j in range(lo, hi):
            if b_matched[j] == 0 and a[i] == b[j]:
                a_matched[i] = 1
                b_matched[j] = 1
                matches += 1
                break
    if matches == 0:
        return 0.0
    transpositions = 0
    j = 0
    for i in range(la):
        if a_matched[i] == 1:
            while b_matched[j] == 0:
                j += 1
            if a[i] != b[j]:
                transpositions += 1
            j += 1
    t = transpositions / 2.0
    m = float(matches)
    return (m / la + m / lb + (m - t) / m) / 3.0


jaro_similarity_numpy = _jaro_impl


def sparse_topn_numpy(
    q_indptr: np.ndarray,
    q_indices: np.ndarray,
    q_data: np.ndarray,
    d_indptr: np.ndarray,
    d_indices: np.ndarray,
    d_data: np.ndarray,
    n_docs: int,
    top_n: int,
    min_score: float,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Row-wise sparse product of queries against a CSC document matrix.

    For each query row, accumulates cosine contributions per document and
    keeps the top ``top_n`` scores that are at least ``min_score``, ordered
    by descending score with ties broken by ascending document index. Only
    documents sharing at least one n-gram with the query can be candidates.
    """
    n_queries = len(q_indptr) - 1
    out_idx = np.full((n_queries, top_n), -1, dtype=np.int64)
    out_score = np.zeros((n_queries, top_n), dtype=np.float64)
    out_count = np.zeros(n_queries, dtype=np.int64)
    acc = np.zeros(n_docs, dtype=np.float64)
    for q in range(n_queries):
        start, stop = q_indptr[q], q_indptr[q + 1]
        if start == stop:
            continue
        touched_slices = []
        for k in range(start, stop):
            col = q_indices[k]
            sl = slice(d_indptr[col], d_indptr[col + 1])
            acc[d_indices[sl]] += q_data[k] * d_data[sl]
            touched_slices.append(d_indices[sl])
        if not touched_slices:
            continue
        touched = np.unique(np.concatenate(touched_slices))
        scores = np.minimum(acc[touched], 1.0)
        acc[touched] = 0.0
        keep = scores >= min_score
        touched, scores = touched[keep], scores[keep]
        if len(touched) == 0:
            continue
        order = np.lexsort((touched, -scores))[:top_n]
        n_kept = len(order)
        out_idx[q, :n_kept] = touched[order]
        out_score[q, :n_kept] = scores[order]
        out_count[q] = n_kept
    return out_idx, out_score, out_count


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

if NUMBA_ENABLED:

    @njit(cache=True)
    def _levenshtein_nb(a, b):  # pragma: no cover - exercised via dispatch
        m, n = len(a), len(b)
        if m == 0:
            return n
        if n == 0:
            return m
        prev = np.arange(n + 1)
        cur = np.zeros(n + 1, dtype=np.int64)
        for i in range(1, m + 1):
            cur[0] = i
            ai = a[i - 1]
            for j in range(1, n + 1):
                cost = 0 if ai == b[j - 1] else 1
                best = prev[j - 1] + cost
                if prev[j] + 1 < best:
                    best = prev[j] + 1
                if cur[j - 1] + 1 < best:
                    best = cur[j - 1] + 1
                cur[j] = best
            prev, cur = cur, prev
        return prev[n]

    @njit(cache=True)
    def _lcs_nb(a, b):  # pragma: no cover
        m, n = len(a), len(b)
        if m == 0 or n == 0:
            return 0
        prev = np.zeros(n + 1, dtype=np.int64)
        cur = np.zeros(n + 1, dtype=np.int64)
        for i in range(1, m + 1):
            ai = a[i - 1]
            for j in range(1, n + 1):
                if ai == b[j - 1]:
                    cur[j] = prev[j - 1] + 1
                elif prev[j] >= cur[j - 1]:
                    cur[j] = prev[j]
                else:
                    cur[j] = cur[j - 1]
            prev, cur = cur, prev
            cur[:] = 0
        return prev[n]

    _jaro_nb = njit(cache=True)(_jaro_impl)

    @njit(cache=True, parallel=True)
    def _sparse_topn_nb(
        q_indptr, q_indices, q_data, d_indptr, d_indices, d_data,
        n_docs, top_n, min_score, n_chunks,
    ):  # pragma: no cover
        n_queries = len(q_indptr) - 1
        out_idx = np.full((n_queries, top_n), -1, dtype=np.int64)
        out_score = np.zeros((n_queries, top_n), dtype=np.float64)
        out_count = np.zeros(n_queries, dtype=np.int64)
        acc = np.zeros((n_chunks, n_docs), dtype=np.float64)
        touched = np.zeros((n_chunks, n_docs), dtype=np.int64)
        for c in prange(n_chunks):
            q_lo = c * n_queries // n_chunks
            q_hi = (c + 1) * n_queries // n_chunks
            for q in range(q_lo, q_hi):
                n_touched = 0
                for k in range(q_indptr[q], q_indptr[q + 1]):
                    col = q_indices[k]
                    w = q_data[k]
                    for p in range(d_indptr[col], d_indptr[col + 1]):
                        doc = d_indices[p]
                        if acc[c, doc] == 0.0:
                            touched[c, n_touched] = doc
                            n_touched += 1
                        acc[c, doc] += w * d_data[p]
                n_kept = 0
                for t in range(n_touched):
                    doc = touched[c, t]
                    score = acc[c, doc]
                    acc[c, doc] = 0.0
                    if score > 1.0:
                        score = 1.0
                    if score < min_score:
                        continue
                    # bounded insertion, ordered by (score desc, doc asc)
                    if n_kept == top_n:
                        worst = out_score[q, top_n - 1]
                        if score < worst or (score == worst and doc > out_idx[q, top_n - 1]):
                            continue
                    pos = n_kept if n_kept < top_n else top_n - 1
                    while pos > 0 and (
                        out_score[q, pos - 1] < score
                        or (out_score[q, pos - 1] == score and out_idx[q, pos - 1] > doc)
                    ):
                        out_score[q, pos] = out_score[q, pos - 1]
                        out_idx[q, pos] = out_idx[q, pos - 1]
                        pos -= 1
                    out_score[q, pos] = score
                    out_idx[q, pos] = doc
                    if n_kept < top_n:
                        n_kept += 1
                out_count[q] = n_kept
        return out_idx, out_score, out_count

    def levenshtein_distance(a: np.ndarray, b: np.ndarray) -> int:
        return int(_levenshtein_nb(a, b))

    def lcs_length(a: np.ndarray, b: np.ndarray) -> int:
        return int(_lcs_nb(a, b))

    def jaro_similarity(a: np.ndarray, b: np.ndarray) -> float:
        return float(_jaro_nb(a, b))

    def sparse_topn(
        q_indptr, q_indices, q_data, d_indptr, d_indices, d_data,
        n_docs, top_n, min_score,
    ):
        n_queries = len(q_indptr) - 1
        n_chunks = max(1, min(n_queries, get_num_threads() * 4))
        return _sparse_topn_nb(
            q_indptr, q_indices, q_data, d_indptr, d_indices, d_data,
            n_docs, top_n, min_score, n_chunks,
        )

    def warmup() -> None:
        """Trigger JIT compilation of every kernel on tiny inputs."""
        a = text_codes("ab")
        b = text_codes("ba")
        levenshtein_distance(a, b)
        lcs_length(a, b)
        jaro_similarity(a, b)
        ptr = np.array([0, 1], dtype=np.int64)
        idx = np.zeros(1, dtype=np.int64)
        val = np.ones(1, dtype=np.float64)
        sparse_topn(ptr, idx, val, ptr, idx, val, 1, 1, 0.0)

else:
    levenshtein_distance = lambda a, b: int(levenshtein_distance_numpy(a, b))  # noqa: E731
    lcs_length = lambda a, b: int(lcs_length_numpy(a, b))  # noqa: E731
    jaro_similarity = _jaro_impl

    def sparse_topn(
        q_indptr, q_indices, q_data, d_indptr, d_indices, d_data,
        n_docs, top_n, min_score,
    ):
        return sparse_topn_numpy(
            q_indptr, q_indices, q_data, d_indptr, d_indices, d_data,
            n_docs, top_n, min_score,
        )

    def warmup() -> None:
        return None
