"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 3] [--dim 256]

Times the dispersion sums behind a 101x101 scan at 2N = 600 and the dense
eigenvalue pipeline on a random complex matrix, checks that both backends give
the same numbers, and prints a small table.
"""

import argparse
import time

import numpy as np

from ptising import kernels
from ptising.oracle.eigen import eigenvalues_dense
from ptising.spectrum import finite_rule


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--dim", type=int, default=256, help="matrix size for the eigenvalue case")
    args = ap.parse_args()

    g = np.linspace(-2, 2, 101)
    eta, xi = (a.ravel() for a in np.meshgrid(g, g, indexing="ij"))
    k, w = finite_rule(600)
    rng = np.random.default_rng(7)
    m = rng.standard_normal((args.dim, args.dim)) + 1j * rng.standard_normal((args.dim, args.dim))

    cases = {
        "eps1_sums 101x101x150": lambda: kernels.eps1_sums(eta, xi, k, w, 2),
        f"eigenvalues {args.dim}x{args.dim}": lambda: eigenvalues_dense(m),
    }
    backends = kernels.available_backends()
    results = {}
    for name, fn in cases.items():
        for b in backends:
            with kernels.use_backend(b):
                results[name, b] = best_of(fn, args.repeat)

    print(f"{'case':28s}" + "".join(f"{b:>12s}" for b in backends) + "   speedup   max|diff|")
    for name in cases:
        row = f"{name:28s}" + "".join(f"{results[name, b][0]:11.4f}s" for b in backends)
        if len(backends) == 2:
            t_c, out_c = results[name, "compiled"]
            t_p, out_p = results[name, "python"]
            if out_c.ndim == 1:  # eigenvalues: compare as sorted spectra
                diff = np.abs(np.sort_complex(out_c) - np.sort_complex(out_p)).max()
            else:
                diff = np.abs(out_c - out_p).max()
            row += f"{t_p / t_c:9.1f}x {diff:11.2e}"
        print(row)
    ref = np.linalg.eigvals(m)
    t_ref, _ = best_of(lambda: np.linalg.eigvals(m), args.repeat)
    print(f"{'LAPACK eigvals (reference)':28s}{t_ref:11.4f}s")
    got = results[f"eigenvalues {args.dim}x{args.dim}", backends[0]][1]
    print(f"trace check: |sum(lambda) - tr M| = {abs(got.sum() - np.trace(m)):.2e}, "
          f"max dist to LAPACK = {max(np.abs(ref - x).min() for x in got):.2e}")


if __name__ == "__main__":
    main()
