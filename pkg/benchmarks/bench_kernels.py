"""Compare the compiled and numpy valuation kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each workload is run through both backends via the ``impl`` hook of
``matcons.kernels``; results are checked for equality before timing.
"""

import argparse
import time

import numpy as np

from matcons import _pykernel, kernels
from matcons.atlas import product_atlas
from matcons.catalog import CL2, K3, L3
from matcons.language import Fragment, enumerate_fragment, parse_formula

try:
    from matcons import _ckernel
except ImportError:
    _ckernel = None


def chain(n):
    """(imp p0 (imp p1 ... (imp p{n-1} p0)))  -- valid in L3, so every valuation is visited."""
    text = "p0"
    for i in reversed(range(n)):
        text = f"(imp p{i} {text})"
    return parse_formula(text, L3.signature)


def workloads():
    # full scan: no countervaluation exists, so no early exit
    f = chain(11)
    prog = kernels.compile_program(L3.algebra, [f], sorted(f.variables, key=lambda v: int(v[1:])))
    yield "find_valuation, L3 tautology, 3^11 valuations", (
        lambda impl: kernels.find_valuation(prog, L3.filter, (), prog.roots, impl=impl))

    # many formulas, few valuations: the truth-set table of a depth-2 fragment
    frag = Fragment(("p", "q", "r"), 2)
    fs = enumerate_fragment(frag, L3.signature)
    prog2 = kernels.compile_program(L3.algebra, fs, frag.vars)
    yield f"designation_table, L3, {len(fs)} formulas x 27 valuations", (
        lambda impl: kernels.designation_table(prog2, L3.filter, prog2.roots, impl=impl))

    # product atlas of three matrices (carrier 18), one entailment per chart
    prod = product_atlas([CL2, L3, K3])
    x = parse_formula("(imp (and p q) (or r (neg s)))", L3.signature)
    a = parse_formula("(or (neg p) (or (neg q) (or r (neg s))))", L3.signature)
    prog3 = kernels.compile_program(prod.algebra, [x, a], ("p", "q", "r", "s"))
    yield "find_valuation, product atlas (18 elements), 18^4 valuations x 3 charts", (
        lambda impl: [kernels.find_valuation(prog3, d, prog3.roots[:1], prog3.roots[1:], impl=impl)
                      for d in prod.filters])

    yield many_small_checks()


def many_small_checks():
    # the shape of the conformity searches: thousands of tiny entailments
    from itertools import combinations

    from matcons.matrix import entails_matrix

    fs = enumerate_fragment(Fragment(("p", "q"), 1), L3.signature)
    sets = [c for r in range(3) for c in combinations(fs, r)]

    def go(impl):
        saved = kernels._impl
        kernels._impl = impl
        try:
            return [entails_matrix(L3, X, a) for X in sets for a in fs]
        finally:
            kernels._impl = saved

    return f"entails_matrix, L3, {len(sets) * len(fs)} small checks", go


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def same(a, b):
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _ckernel is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    print(f"{'workload':<72} {'cython':>10} {'numpy':>10} {'ratio':>7}")
    for name, run in workloads():
        assert same(run(_ckernel), run(_pykernel)), name
        tc = best_of(lambda: run(_ckernel), args.repeat)
        tp = best_of(lambda: run(_pykernel), args.repeat)
        print(f"{name:<72} {tc * 1e3:>8.2f}ms {tp * 1e3:>8.2f}ms {tp / tc:>6.1f}x")


if __name__ == "__main__":
    main()
