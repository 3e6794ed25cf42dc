"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5] [--end-to-end]

Each kernel is run on both paths with the same input; the outputs are
compared before any timing is reported.  ``--end-to-end`` additionally runs
two corpus suites in subprocesses with and without ``LOGALG_NO_NUMBA``.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from logalg import _accel


def _hilbert_system(m: int) -> np.ndarray:
    # one row, alternating signs: a cone with many minimal solutions
    return np.array([[(i % 3 + 1) * (1 if i % 2 == 0 else -1) for i in range(m)]], dtype=np.int64)


def _table(n: int) -> np.ndarray:
    # Z/n as an additive multiplication table
    i = np.arange(n, dtype=np.int64)
    return (i[:, None] + i[None, :]) % n


def cases(rng: np.random.Generator):
    A = _hilbert_system(6)
    sols = _accel._box_solutions_np(A, 6)
    cands = rng.integers(0, 7, size=(4000, 5), dtype=np.int64)
    basis = rng.integers(1, 7, size=(60, 5), dtype=np.int64)
    M = rng.integers(0, 101, size=(80, 80), dtype=np.int64)
    T = _table(12)
    yield "box_solutions m=6 b=6", (_accel._box_solutions_np, A, 6), ("_box_solutions_nb", A, 6)
    yield "minimal_nonzero", (_accel._minimal_nonzero_np, sols), ("_minimal_nonzero_nb", sols)
    yield "dominated 4000x60", (_accel._dominated_np, cands, basis), ("_dominated_nb", cands, basis)
    yield "rank_mod_p 80x80", (_accel._rank_mod_p_np, M, 101), ("_rank_mod_p_nb", M, np.int64(101))
    yield "bar_boundary |M|=12 k=3", (_accel._bar_boundary_np, T, 3), ("_bar_boundary_nb", T, 3)


def best_of(fn, args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def same(a, b) -> bool:
    if isinstance(a, np.ndarray):
        return a.shape == np.asarray(b).shape and bool(np.array_equal(a, b))
    return int(a) == int(b)


def bench_kernels(repeat: int) -> None:
    rng = np.random.default_rng(0)
    print(f"{'kernel':28s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for label, (np_fn, *np_args), (nb_name, *nb_args) in cases(rng):
        t_np = best_of(np_fn, np_args, repeat)
        nb_fn = getattr(_accel, nb_name, None) if _accel.HAVE_NUMBA else None
        if nb_fn is None:
            print(f"{label:28s} {t_np * 1e3:10.3f} {'n/a':>10s} {'':>8s}")
            continue
        nb_fn(*nb_args)  # compile outside the timed region
        if not same(np_fn(*np_args), nb_fn(*nb_args)):
            raise SystemExit(f"{label}: numba and numpy results differ")
        t_nb = best_of(nb_fn, nb_args, repeat)
        print(f"{label:28s} {t_np * 1e3:10.3f} {t_nb * 1e3:10.3f} {t_np / t_nb:7.1f}x")


def bench_end_to_end(suites=("hilbert-basis", "group-completion")) -> None:
    code = "import sys; from logalg.corpus import verify_corpus; [verify_corpus(s) for s in sys.argv[1:]]"
    for flag in ("0", "1"):
        env = dict(os.environ, LOGALG_NO_NUMBA=flag)
        t0 = time.perf_counter()
        subprocess.run([sys.executable, "-c", code, *suites], env=env, check=True)
        name = "numpy" if flag == "1" else "numba"
        print(f"suites {', '.join(suites)} [{name}]: {time.perf_counter() - t0:.2f} s (includes startup and JIT)")


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args(argv)
    print(f"backend: {_accel.backend()}")
    bench_kernels(args.repeat)
    if args.end_to_end:
        bench_end_to_end()


if __name__ == "__main__":
    main()
