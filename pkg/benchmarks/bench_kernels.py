"""Time the numba kernels against their numpy twins.

    python benchmarks/bench_kernels.py [--pairs 1000000] [--grid 10000] [--repeat 3]

Compilation is excluded: each numba kernel is warmed up once first.
"""

import argparse
import time

import numpy as np

from pearle import appendix, kernels
from pearle.estimators import SweepConfig, sweep_states
from pearle.model import equatorial_setting


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--pairs", type=int, default=1_000_000)
    parser.add_argument("--grid", type=int, default=10_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    st = sweep_states(SweepConfig(pairs=args.pairs, seed=9875))
    settings = np.array([tuple(equatorial_setting(a)) for a in range(360)])
    b = equatorial_setting(0.0)
    z = appendix.Grid(args.grid).points
    mu = np.ones_like(z)

    cases = {
        "sweep 360 angles": lambda be: kernels.sweep_tally(st.ux, st.uy, st.uz, st.s, settings, b, be),
        "masked kernel": lambda be: kernels.masked_kernel_sums(z, mu, be),
    }
    print(f"pairs={args.pairs} grid={args.grid} best of {args.repeat}")
    print(f"{'kernel':<20}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}  agree")
    for name, fn in cases.items():
        fn("numba")  # compile
        t_np, out_np = best_of(lambda: fn("numpy"), args.repeat)
        t_nb, out_nb = best_of(lambda: fn("numba"), args.repeat)
        if out_np.dtype.kind == "i":
            agree = "exact" if np.array_equal(out_np, out_nb) else "DIFFER"
        else:
            agree = f"{np.max(np.abs(out_np - out_nb) / np.maximum(np.abs(out_np), 1e-300)):.1e} rel"
        print(f"{name:<20}{t_np:>12.3f}{t_nb:>12.3f}{t_np / t_nb:>10.1f}  {agree}")


if __name__ == "__main__":
    main()
