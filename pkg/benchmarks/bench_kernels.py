"""Compare the numba and numpy backends on the hot kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--points 4000 8000 16000]

Three kernels are timed:

* frobenius: the Frobenius recurrence over a batch of parameter sets
  (the inner loop of the frequency scan);
* eigvals: lowest k eigenvalues of the oracle matrix by Sturm bisection;
* eigvecs: inverse iteration for those eigenvalues.

Each kernel is run once untimed first so numba compilation is excluded.
"""

import argparse
import time

import numpy as np

from heunbound import _kernels
from heunbound.oracle import RadialOperatorSpec, build_operator
from heunbound.params import PhysicalConfig


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def frobenius_case(batch, order):
    rng = np.random.default_rng(0)
    args = (2, rng.uniform(-4, 4, batch), rng.uniform(0, 2, batch), rng.uniform(0, 10, batch), order)
    return lambda backend: _kernels.frobenius_batch(*args, backend=backend)


def operator(points):
    spec = RadialOperatorSpec.from_config(PhysicalConfig(1.0, 0.5, 1.0, 0.2, 1, 1), n_points=points)
    sys_ = build_operator(spec)
    return sys_.diag, sys_.off


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, nargs="+", default=[4000, 8000, 16000])
    ap.add_argument("--k", type=int, default=6)
    ap.add_argument("--batch", type=int, default=4000)
    args = ap.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    nb, npy = _kernels.NUMBA, _kernels.NUMPY

    rows = []
    frob = frobenius_case(args.batch, 40)
    assert np.allclose(frob(nb), frob(npy), rtol=1e-13)
    rows.append((f"frobenius M={args.batch} K=40", best_of(lambda: frob(nb), args.repeat),
                 best_of(lambda: frob(npy), args.repeat)))

    for points in args.points:
        d, e = operator(points)
        lam_nb = _kernels.lowest_eigvals(d, e, args.k, backend=nb)
        lam_np = _kernels.lowest_eigvals(d, e, args.k, backend=npy)
        assert np.allclose(lam_nb, lam_np, rtol=1e-12)
        rows.append((f"eigvals N={points} k={args.k}",
                     best_of(lambda: _kernels.lowest_eigvals(d, e, args.k, backend=nb), args.repeat),
                     best_of(lambda: _kernels.lowest_eigvals(d, e, args.k, backend=npy), args.repeat)))
        rows.append((f"eigvecs N={points} k={args.k}",
                     best_of(lambda: _kernels.eigvecs(d, e, lam_nb, backend=nb), args.repeat),
                     best_of(lambda: _kernels.eigvecs(d, e, lam_nb, backend=npy), args.repeat)))

    print(f"{'kernel':<28} {'numba [ms]':>11} {'numpy [ms]':>11} {'speedup':>8}")
    for name, t_nb, t_np in rows:
        print(f"{name:<28} {1e3 * t_nb:11.3f} {1e3 * t_np:11.3f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
