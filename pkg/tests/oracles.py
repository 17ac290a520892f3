"""Independent reference implementations used as test oracles.

Everything here is written from first principles (full-matrix dynamic
programming, fixpoint iteration, dense linear algebra) and deliberately
shares no code with the package, so the two routes can check each other.
"""

from __future__ import annotations

import math
from collections import Counter

import numpy as np


# --- string metrics ---------------------------------------------------------

def levenshtein_distance(a: str, b: str) -> int:
    """Full-matrix edit-distance DP."""
    m, n = len(a), len(b)
    dist = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        dist[i][0] = i
    for j in range(n + 1):
        dist[0][j] = j
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            dist[i][j] = min(
                dist[i - 1][j] + 1,
                dist[i][j - 1] + 1,
                dist[i - 1][j - 1] + cost,
            )
    return dist[m][n]


def lcs_length(a: str, b: str) -> int:
    """Full-matrix longest-common-subsequence DP."""
    m, n = len(a), len(b)
    table = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            if a[i - 1] == b[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    return table[m][n]


def levenshtein_sim(a: str, b: str) -> float:
    if not a and not b:
        return 1.0
    return 1.0 - levenshtein_distance(a, b) / max(len(a), len(b))


def indel_sim(a: str, b: str) -> float:
    total = len(a) + len(b)
    if total == 0:
        return 1.0
    return 1.0 - (total - 2 * lcs_length(a, b)) / total


def jaro_sim(a: str, b: str) -> float:
    """Jaro similarity straight from the definition."""
    if a == b:
        return 1.0
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return 0.0
    window = max(max(la, lb) // 2 - 1, 0)
    matched_b = [False] * lb
    matched_pairs_a = []
    for i, ch in enumerate(a):
        for j in range(max(0, i - window), min(lb, i + window + 1)):
            if not matched_b[j] and b[j] == ch:
                matched_b[j] = True
                matched_pairs_a.append(i)
                break
    m = len(matched_pairs_a)
    if m == 0:
        return 0.0
    b_matches = [j for j in range(lb) if matched_b[j]]
    transposed = sum(
        1 for i, j in zip(matched_pairs_a, b_matches) if a[i] != b[j]
    )
    t = transposed / 2
    return (m / la + m / lb + (m - t) / m) / 3


def jaro_winkler_sim(a: str, b: str, p: float = 0.1, max_prefix: int = 4) -> float:
    jaro = jaro_sim(a, b)
    prefix = 0
    for ca, cb in zip(a, b):
        if ca != cb or prefix == max_prefix:
            break
        prefix += 1
    return jaro + prefix * p * (1 - jaro)


def jaccard_sim(a: str, b: str) -> float:
    ta, tb = set(a.split()), set(b.split())
    if not ta and not tb:
        return 1.0
    return len(ta & tb) / len(ta | tb)


# --- hierarchy --------------------------------------------------------------

def closure_fixpoint(parents: dict[str, set[str]]) -> dict[str, set[str]]:
    """Transitive closure by repeated expansion until nothing changes.

    Assumes an acyclic parent relation restricted to known nodes.
    """
    anc = {node: set(p for p in ps if p in parents) for node, ps in parents.items()}
    changed = True
    while changed:
        changed = False
        for node in anc:
            grown = set(anc[node])
            for parent in anc[node]:
                grown |= anc.get(parent, set())
            if grown != anc[node]:
                anc[node] = grown
                changed = True
    return anc


def categorize_bruteforce(t: str, h: str, parents: dict[str, set[str]]) -> str:
    anc = closure_fixpoint(parents)
    if t == h:
        return "Same"
    if h in anc.get(t, set()):
        return "MoreSpecific"
    if t in anc.get(h, set()):
        return "MoreGeneral"
    if parents.get(t, set()) & parents.get(h, set()):
        return "Sibling"
    return "Unrelated"


# --- dense tf-idf -----------------------------------------------------------

def padded_ngrams(normalized: str, n: int) -> list[str]:
    if not normalized:
        return []
    s = f" {normalized} "
    return [s[i : i + n] for i in range(len(s) - n + 1)] if len(s) >= n else []


def dense_tfidf(doc_strings: list[str], n: int):
    """Dense tf-idf rows over the corpus vocabulary, L2-normalized.

    Returns (matrix, vocabulary, idf, per-doc gram sets).
    """
    gram_counts = [Counter(padded_ngrams(doc, n)) for doc in doc_strings]
    df = Counter()
    for counts in gram_counts:
        df.update(counts.keys())
    vocab = {g: i for i, g in enumerate(sorted(df))}
    n_docs = len(doc_strings)
    idf = np.array(
        [math.log((1 + n_docs) / (1 + df[g])) + 1.0 for g in sorted(df)], dtype=np.float64
    )
    matrix = np.zeros((n_docs, len(vocab)), dtype=np.float64)
    for row, counts in enumerate(gram_counts):
        for gram, tf in counts.items():
            matrix[row, vocab[gram]] = tf * idf[vocab[gram]]
        norm = np.linalg.norm(matrix[row])
        if norm > 0:
            matrix[row] /= norm
    gram_sets = [set(c) for c in gram_counts]
    return matrix, vocab, idf, gram_sets


def dense_topn(
    doc_strings: list[str],
    queries: list[str],
    n: int,
    top_n: int,
    min_score: float,
) -> list[list[tuple[int, float]]]:
    """Brute-force cosine top-n: full dense matrix, no sparse tricks.

    A document qualifies only if it shares at least one n-gram with the
    query. Ordering is (score descending, document index ascending).
    """
    matrix, vocab, idf, gram_sets = dense_tfidf(doc_strings, n)
    results = []
    for query in queries:
        counts = Counter(g for g in padded_ngrams(query, n) if g in vocab)
        if not counts:
            results.append([])
            continue
        vec = np.zeros(matrix.shape[1], dtype=np.float64)
        for gram, tf in counts.items():
            vec[vocab[gram]] = tf * idf[vocab[gram]]
        norm = np.linalg.norm(vec)
        if norm == 0:
            results.append([])
            continue
        vec /= norm
        scores = matrix @ vec
        query_grams = set(counts)
        candidates = [
            (doc, min(float(scores[doc]), 1.0))
            for doc in range(len(doc_strings))
            if gram_sets[doc] & query_grams and min(float(scores[doc]), 1.0) >= min_score
        ]
        candidates.sort(key=lambda item: (-item[1], item[0]))
        results.append(candidates[:top_n])
    return results
