"""Benchmark the compiled kernels against the pure-numpy fallback.

Usage:  python benchmarks/bench_kernels.py [--quick]

Both backends return bit-identical results (asserted here), so the only
difference is speed. Representative sizes match the sweeps: histogram
binning at the achievability scale (n = 1e5) and at the verification
scale (n = 5000), and the KSG neighbour kernels at the verification
scale in low and high dimension.
"""

import argparse
import time

import numpy as np

from caprob.kernels import numpy_backend

try:
    from caprob.kernels import _native as native
except ImportError:
    native = None


def timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench(name, make_args, native_fn, numpy_fn, repeats):
    args = make_args()
    t_np, r_np = timeit(lambda: numpy_fn(*args), repeats)
    if native is None:
        print(f"{name:<38} numpy {t_np * 1e3:8.2f} ms   (no compiled backend)")
        return
    t_nat, r_nat = timeit(lambda: native_fn(*args), repeats)
    assert np.array_equal(r_nat, r_np), f"{name}: backend results differ"
    print(
        f"{name:<38} native {t_nat * 1e3:8.2f} ms   numpy {t_np * 1e3:8.2f} ms"
        f"   speedup {t_np / t_nat:5.2f}x"
    )


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="smaller sizes")
    args = parser.parse_args()
    scale = 0.2 if args.quick else 1.0
    rng = np.random.default_rng(0)
    repeats = 3

    print(f"backends: native={'yes' if native else 'missing'}, numpy=yes\n")

    n_hist = int(100_000 * scale)
    u = rng.standard_normal(n_hist)
    v = 0.6 * u + rng.standard_normal(n_hist)
    bench(
        f"hist2d n={n_hist} K=32",
        lambda: (u, v, u.min(), u.max(), v.min(), v.max(), 32, 32),
        native.hist2d if native else None,
        numpy_backend.hist2d,
        repeats,
    )
    n_small = int(5000 * scale)
    us, vs = u[:n_small], v[:n_small]
    bench(
        f"hist2d n={n_small} K=16",
        lambda: (us, vs, us.min(), us.max(), vs.min(), vs.max(), 16, 16),
        native.hist2d if native else None,
        numpy_backend.hist2d,
        repeats,
    )
    bench(
        f"hist1d n={n_hist} K=32",
        lambda: (u, u.min(), u.max(), 32),
        native.hist1d if native else None,
        numpy_backend.hist1d,
        repeats,
    )

    for d in (4, 14, 32):
        n_knn = int(5000 * scale)
        data = np.ascontiguousarray(rng.standard_normal((n_knn, d)))
        bench(
            f"chebyshev_kth_radius n={n_knn} d={d} k=5",
            lambda data=data: (data, 5),
            native.chebyshev_kth_radius if native else None,
            numpy_backend.chebyshev_kth_radius,
            repeats,
        )
        radii = numpy_backend.chebyshev_kth_radius(data, 5)
        bench(
            f"chebyshev_count_within n={n_knn} d={d}",
            lambda data=data, radii=radii: (data, radii),
            native.chebyshev_count_within if native else None,
            numpy_backend.chebyshev_count_within,
            repeats,
        )


if __name__ == "__main__":
    main()
