"""Benchmark the JIT kernels against the pure-numpy fallbacks.

Run directly:

    python3 benchmarks/bench_kernels.py [--docs 50000] [--queries 10000]

The numba backend must be importable for the comparison; the script times
both implementations on identical inputs and reports the speedup. Set
TERMGROUNDER_NO_NUMBA=1 to confirm the package itself runs on the fallback.
"""

import argparse
import random
import string
import time

import numpy as np

from termgrounder import _kernels
from termgrounder.ontology import OntologyTerm
from termgrounder.preprocess import normalize
from termgrounder.tfidf import build_tfidf_index, vectorize_queries


def timed(fn, *args, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def random_strings(seed, count, lo=8, hi=28):
    rng = random.Random(seed)
    alphabet = string.ascii_lowercase + "  "
    out = []
    for _ in range(count):
        s = normalize("".join(rng.choices(alphabet, k=rng.randint(lo, hi))))
        out.append(s or "pad")
    return out


def bench_string_kernels():
    print("-" * 64)
    print("string distance kernels (1000 pairs, length <= 40)")
    print("-" * 64)
    pairs = [
        (_kernels.text_codes(a), _kernels.text_codes(b))
        for a, b in zip(random_strings(1, 1000, 5, 40), random_strings(2, 1000, 5, 40))
    ]

    jit_time, _ = timed(lambda: [_kernels.levenshtein_distance(a, b) for a, b in pairs])
    np_time, _ = timed(lambda: [_kernels.levenshtein_distance_numpy(a, b) for a, b in pairs])
    print(f"levenshtein   jit {jit_time*1e3:8.1f} ms   numpy {np_time*1e3:8.1f} ms"
          f"   speedup {np_time/jit_time:5.1f}x")

    jit_time, _ = timed(lambda: [_kernels.lcs_length(a, b) for a, b in pairs])
    np_time, _ = timed(lambda: [_kernels.lcs_length_numpy(a, b) for a, b in pairs])
    print(f"lcs           jit {jit_time*1e3:8.1f} ms   numpy {np_time*1e3:8.1f} ms"
          f"   speedup {np_time/jit_time:5.1f}x")

    jit_time, _ = timed(lambda: [_kernels.jaro_similarity(a, b) for a, b in pairs])
    np_time, _ = timed(lambda: [_kernels.jaro_similarity_numpy(a, b) for a, b in pairs])
    print(f"jaro          jit {jit_time*1e3:8.1f} ms   numpy {np_time*1e3:8.1f} ms"
          f"   speedup {np_time/jit_time:5.1f}x")


def bench_sparse_topn(n_docs, n_queries, top_n):
    print("-" * 64)
    print(f"sparse top-n kernel ({n_queries} queries x {n_docs} documents, top_n={top_n})")
    print("-" * 64)
    docs = random_strings(11, n_docs)
    queries = random_strings(12, n_queries)
    corpus = [OntologyTerm(iri=f"T:{i:06d}", labels=[d]) for i, d in enumerate(docs)]
    index = build_tfidf_index(corpus, ngram_size=3)
    q = vectorize_queries(index, queries)
    csc = index.doc_matrix_csc
    args = (
        q.indptr, q.indices, q.data,
        csc.indptr, csc.indices, csc.data,
        index.doc_matrix.n_rows, top_n, 0.0,
    )

    np_time, np_result = timed(_kernels.sparse_topn_numpy, *args)
    print(f"numpy fallback: {np_time:8.3f} s")
    if _kernels.NUMBA_ENABLED:
        jit_time, jit_result = timed(_kernels.sparse_topn, *args)
        print(f"numba kernel:   {jit_time:8.3f} s   speedup {np_time/jit_time:5.1f}x")
        same = (
            np.array_equal(jit_result[0], np_result[0])
            and np.allclose(jit_result[1], np_result[1], atol=1e-9)
            and np.array_equal(jit_result[2], np_result[2])
        )
        print(f"results identical: {same}")
    else:
        print("numba backend disabled/unavailable; only the fallback was timed")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--docs", type=int, default=50_000)
    parser.add_argument("--queries", type=int, default=10_000)
    parser.add_argument("--top-n", type=int, default=3)
    args = parser.parse_args()

    print(f"numba backend enabled: {_kernels.NUMBA_ENABLED}")
    if _kernels.NUMBA_ENABLED:
        print("warming up JIT compilation...")
        _kernels.warmup()
    bench_string_kernels()
    bench_sparse_topn(args.docs, args.queries, args.top_n)


if __name__ == "__main__":
    main()
