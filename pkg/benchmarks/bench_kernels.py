"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5] [--size 4000]

The first numba call compiles (or loads from cache) and is excluded.
"""

import argparse
import timeit

import numpy as np

from ewens_cesaro import _accel, _kernels


def cases(size):
    rng = np.random.default_rng(0)
    a = rng.normal(size=size) + 1j * rng.normal(size=size)
    b = rng.normal(size=size)
    g = np.zeros(size, dtype=np.complex128)
    g[1:60] = rng.normal(size=59) / np.arange(1, 60)  # degree-59 exponent, like exp(theta L_n)
    dense = np.zeros(size // 4, dtype=np.complex128)
    dense[1:] = rng.normal(size=size // 4 - 1) / np.arange(1, size // 4) ** 2
    u_new = rng.random((8192, 50))
    u_pick = rng.random((8192, 50))
    return {
        f"conv {size}x{size}": (_kernels.conv_numba, _kernels.conv_numpy, (a, b, size)),
        f"exp sparse deg 59, N={size}": (_kernels.exp_numba, _kernels.exp_numpy, (g, size)),
        f"exp dense, N={size // 4}": (_kernels.exp_numba, _kernels.exp_numpy, (dense, size // 4)),
        "crp 8192 x n=50": (_kernels.crp_numba, _kernels.crp_numpy, (u_new, u_pick, 1.5)),
    }


def best_of(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--size", type=int, default=4000)
    args = parser.parse_args()
    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    print(f"{'kernel':<28} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8}")
    for name, (fast, slow, fargs) in cases(args.size).items():
        fast(*fargs)  # compile
        same = np.allclose(fast(*fargs), slow(*fargs), rtol=1e-10, atol=1e-12)
        t_fast = best_of(fast, fargs, args.repeat)
        t_slow = best_of(slow, fargs, args.repeat)
        flag = "" if same else "  MISMATCH"
        print(f"{name:<28} {1e3 * t_fast:>10.2f} {1e3 * t_slow:>10.2f} {t_slow / t_fast:>7.1f}x{flag}")


if __name__ == "__main__":
    main()
