"""Benchmark the state-space kernels: numba backend vs pure-numpy fallback.

Run from the repository root:

    python3 benchmarks/bench_kernels.py

Measures proper-colouring enumeration and recolouring-graph component
labelling on a few representative instances, plus the pure-Python
enumerator as a baseline on the smallest one.
"""

import time

import numpy as np

from circmix import kernels
from circmix.circular import CircularParams, enumerate_colourings
from circmix.graphs import build_graph


def cycle(n):
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def grid(rows, cols):
    vid = lambda r, c: r * cols + c
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    return build_graph(rows * cols, edges)


INSTANCES = [
    ("C10 @ (5,2)", cycle(10), 5, 2),
    ("C12 @ (5,2)", cycle(12), 5, 2),
    ("grid 3x3 @ (7,2)", grid(3, 3), 7, 2),
    ("grid 3x4 @ (7,2)", grid(3, 4), 7, 2),
]

BACKENDS = ["numba", "numpy"] if kernels.HAVE_NUMBA else ["numpy"]


def bench(fn, warmups=1, runs=3):
    for _ in range(warmups):
        fn()
    times = []
    for _ in range(runs):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def main():
    print(f"backends: {', '.join(BACKENDS)}"
          + ("" if kernels.HAVE_NUMBA else "  (numba unavailable)"))

    # pure-Python baseline on the smallest instance
    name, g, p, q = INSTANCES[0]
    t_py = bench(lambda: sum(1 for _ in enumerate_colourings(g, CircularParams(p, q))))
    print(f"\npure-python enumerate {name}: {t_py:.4f}s")

    for name, g, p, q in INSTANCES:
        print(f"\n{name}")
        reference = None
        times = {}
        for backend in BACKENDS:
            states = kernels.enumerate_states(g, p, q, backend=backend)
            codes = kernels.state_codes(states, p)
            t_enum = bench(lambda b=backend: kernels.enumerate_states(g, p, q, backend=b))
            t_comp = bench(
                lambda b=backend: kernels.component_labels(states, codes, g, p, q,
                                                           backend=b),
                warmups=1, runs=1 if states.shape[0] > 1_000_000 else 3)
            labels = kernels.component_labels(states, codes, g, p, q, backend=backend)
            if reference is None:
                reference = (states.copy(), labels.copy())
            else:
                assert np.array_equal(reference[0], states), "backends disagree"
                assert np.array_equal(reference[1], labels), "backends disagree"
            times[backend] = (t_enum, t_comp)
            print(f"  {backend:>5}: enumerate {t_enum:8.4f}s   "
                  f"components {t_comp:8.4f}s   "
                  f"({states.shape[0]} states, {labels.max() + 1} components)")
        if len(times) == 2:
            e = times["numpy"][0] / max(times["numba"][0], 1e-9)
            c = times["numpy"][1] / max(times["numba"][1], 1e-9)
            print(f"  numba speedup: enumerate {e:.1f}x, components {c:.1f}x")


if __name__ == "__main__":
    main()
