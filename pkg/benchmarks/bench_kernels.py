"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]
"""

import argparse
import json
import sys
import timeit

import numpy as np

from mralab.kernels import _pykernels

try:
    from mralab.kernels import _ckernels
except ImportError:
    _ckernels = None


def _cases(rng):
    z = np.ascontiguousarray((rng.uniform(0, 8, 20000) + 1j * rng.uniform(-1, 1, 20000)) ** 2 / 4)
    y = np.ascontiguousarray(rng.uniform(0, 50, 20000).astype(np.complex128))
    P = np.array([[4, 1, 2], [2, 4, 1], [1, 2, 4]], dtype=float) / 7
    cdf = np.ascontiguousarray(np.cumsum(P, axis=1))
    cdf[:, -1] = 1.0
    u = np.ascontiguousarray(rng.random(100_000))
    return {
        "bessel_sum (20k points)": lambda m: m.bessel_sum(1.0, z, 1e-14, 500),
        "q_bessel_sum (20k points)": lambda m: m.q_bessel_sum(0.0, 0.25, y, 1e-14, 500),
        "sample_chain (1e5 steps)": lambda m: m.sample_chain(cdf, 0, u),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json")
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    rng = np.random.default_rng(0)
    rows = []
    for name, fn in _cases(rng).items():
        # both backends must agree before timing means anything
        a, b = fn(_ckernels), fn(_pykernels)
        if isinstance(a, tuple):
            # normalised sums may cancel to ~1e-3, so compare on an absolute scale
            diff = np.abs(np.asarray(a[0]) - b[0])
            assert np.all(diff <= 1e-13 * np.maximum(1.0, np.abs(b[0]))) and a[1:] == b[1:]
        else:
            assert np.array_equal(np.asarray(a), b)
        tc = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat))
        tp = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        rows.append({"kernel": name, "cython_s": tc, "python_s": tp, "speedup": tp / tc})
    w = max(len(r["kernel"]) for r in rows)
    print(f"{'kernel':<{w}}  {'cython [ms]':>12}  {'python [ms]':>12}  {'speedup':>8}")
    for r in rows:
        print(f"{r['kernel']:<{w}}  {1e3 * r['cython_s']:12.2f}  {1e3 * r['python_s']:12.2f}  {r['speedup']:8.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
