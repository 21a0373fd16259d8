"""Benchmark the numba kernels against their pure-numpy fallbacks.

Times the two hot paths that carry the compiled kernels: the per-AP LP-MMSE
precoder solve and the pilot reassignment sweep. Both lanes are checked for
agreement before timing, so a reported speedup is never a divergent kernel.

    python3 scripts/benchmark_kernels.py [--reps 7]
"""

import argparse
import time

import numpy as np

from cfiama import accel
from cfiama.access import assign_pilots, select_masters
from cfiama.config import SimulationConfig
from cfiama.network import generate_network, large_scale_coefficients


def median_time(fn, reps):
    times = []
    for _ in range(reps):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return float(np.median(times))


def bench_lpmmse(reps):
    rng = np.random.default_rng(1)
    K, L, N = 50, 50, 4
    hhat = rng.standard_normal((K, L, N)) + 1j * rng.standard_normal((K, L, N))
    Craw = rng.standard_normal((K, L, N, N)) + 1j * rng.standard_normal((K, L, N, N))
    C = Craw @ np.conj(np.swapaxes(Craw, -1, -2))
    assoc = (rng.uniform(size=(K, L)) < 0.1).astype(np.int8)
    assoc[np.arange(K), rng.integers(0, L, size=K)] = 1
    idx, ptr = accel.served_csr(assoc)

    lanes = {}
    out = {}
    for backend in ("numpy", "numba"):
        if backend == "numba" and not accel.HAS_NUMBA:
            continue
        lanes[backend] = accel.lpmmse_raw_precoders(hhat, C, idx, ptr, 0.05,
                                                    backend=backend)
        out[backend] = median_time(
            lambda b=backend: accel.lpmmse_raw_precoders(hhat, C, idx, ptr, 0.05,
                                                         backend=b), reps)
    if "numba" in lanes:
        assert np.allclose(lanes["numpy"], lanes["numba"], rtol=1e-10, atol=1e-12)
    return out


def bench_pilot_sweep(reps):
    config = SimulationConfig(L=50, K=50, tau_p=5)
    rng = np.random.default_rng(2)
    net = generate_network(config, rng)
    beta = large_scale_coefficients(net, config, rng) / config.noise_power
    masters, _, _ = select_masters(beta, config.tau_p)

    lanes = {}
    out = {}
    for backend in ("numpy", "numba"):
        if backend == "numba" and not accel.HAS_NUMBA:
            continue
        saved = accel.BACKEND
        accel.BACKEND = backend
        try:
            lanes[backend] = assign_pilots(beta, masters, config,
                                           np.random.default_rng(3)).pilots
            out[backend] = median_time(
                lambda: assign_pilots(beta, masters, config,
                                      np.random.default_rng(3)), reps)
        finally:
            accel.BACKEND = saved
    if "numba" in lanes:
        assert np.array_equal(lanes["numpy"], lanes["numba"])
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--reps", type=int, default=7,
                        help="repetitions per timing (median reported)")
    args = parser.parse_args()

    if not accel.HAS_NUMBA:
        print("numba not importable; only the numpy lane will be timed")

    print(f"{'kernel':<24} {'numpy':>10} {'numba':>10} {'speedup':>9}")
    for name, results in (("lpmmse K=L=50 N=4", bench_lpmmse(args.reps)),
                          ("pilot sweep K=L=50", bench_pilot_sweep(args.reps))):
        t_np = results["numpy"]
        if "numba" in results:
            t_nb = results["numba"]
            print(f"{name:<24} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms "
                  f"{t_np / t_nb:>8.1f}x")
        else:
            print(f"{name:<24} {t_np * 1e3:>8.2f}ms {'-':>10} {'-':>9}")


if __name__ == "__main__":
    main()
