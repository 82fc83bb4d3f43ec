"""Compare the compiled and pure-numpy kernel backends.

Times the Hermitian Jacobi eigensolver across matrix sizes and the
simplex pivot on a representative tableau, then a short end-to-end
search per backend.  Run after installing the package:

    python benchmarks/bench_kernels.py
"""

import os
import subprocess
import sys
import time

import numpy as np

from extpovm import _kernels_py

try:
    from extpovm import _kernels_cy
except ImportError:
    _kernels_cy = None


def time_call(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_eigh():
    print(f"\n{'dim':>5} {'python':>12} {'cython':>12} {'speedup':>9}")
    rng = np.random.default_rng(0)
    for dim in (8, 16, 32, 64, 70):
        a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        h = a + a.conj().T
        t_py = time_call(_kernels_py.jacobi_eigh, h)
        if _kernels_cy is None:
            print(f"{dim:>5} {t_py * 1e3:>10.2f}ms {'n/a':>12}")
            continue
        t_cy = time_call(_kernels_cy.jacobi_eigh, h)
        print(f"{dim:>5} {t_py * 1e3:>10.2f}ms {t_cy * 1e3:>10.2f}ms "
              f"{t_py / t_cy:>8.1f}x")


def bench_pivot():
    rng = np.random.default_rng(1)
    base = rng.standard_normal((50, 120))
    n_pivots = 2000

    def run(impl):
        t = base.copy()
        start = time.perf_counter()
        for k in range(n_pivots):
            row, col = k % 49, k % 119
            if abs(t[row, col]) < 1e-9:
                t[row, col] = 1.0
            impl.pivot_inplace(t, row, col)
        return time.perf_counter() - start

    t_py = run(_kernels_py)
    line = f"\nsimplex pivot x{n_pivots} (50x120): python {t_py * 1e3:.1f}ms"
    if _kernels_cy is not None:
        t_cy = run(_kernels_cy)
        line += f", cython {t_cy * 1e3:.1f}ms ({t_py / t_cy:.1f}x)"
    print(line)


def bench_end_to_end():
    script = (
        "import time, numpy as np\n"
        "from extpovm import CostFunction, QubitPhaseModel, SearchConfig, "
        "run_search, backend_name\n"
        "cost = CostFunction.fisher_at(QubitPhaseModel(np.pi/3), 0.7)\n"
        "cfg = SearchConfig(dim=2, n_outcomes=4, n_samples=300, master_seed=5,"
        " cost=cost, method='resm')\n"
        "start = time.perf_counter()\n"
        "res = run_search(cfg)\n"
        "print(f'{backend_name()}: 300-sample search "
        "{time.perf_counter()-start:.2f}s, best {res.best_value:.6f}')\n"
    )
    print("\nend-to-end (same seed, both backends):")
    for backend in ("python", "cython"):
        if backend == "cython" and _kernels_cy is None:
            continue
        env = dict(os.environ, EXTPOVM_BACKEND=backend)
        out = subprocess.run([sys.executable, "-c", script], env=env,
                             capture_output=True, text=True)
        print("  " + (out.stdout.strip() or out.stderr.strip()))


if __name__ == "__main__":
    if _kernels_cy is None:
        print("compiled extension not built; showing pure-python timings only")
    bench_eigh()
    bench_pivot()
    bench_end_to_end()
