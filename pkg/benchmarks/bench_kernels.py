"""Time the per-UAV step loop on both kernel backends.

    python3 benchmarks/bench_kernels.py [--tile 1] [--repeat 5]
"""

import argparse
import time

import numpy as np

from aerocell import kernel
from aerocell.config import load_config
from aerocell.power_models import package_mass
from aerocell.sim_engine import build_horizon, run_simulation


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tile", type=int, default=1, help="repeat the four-day horizon this many times")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    cfg = load_config()
    hz = build_horizon(cfg)
    T, p0, G = (np.tile(hz.column(c), max(1, args.tile)) for c in ("T_ws", "p_0", "G_T"))
    m_pkg = package_mass(cfg.mimo, cfg.ris, cfg.pv, cfg.airframe)
    prm = kernel.KernelParams.build(cfg, m_pkg, 150.0, True, hz.step_s / 3600.0)

    backends = ["python"] + (["cython"] if kernel._ckernel is not None else [])
    print(f"{len(T)} steps per UAV, best of {args.repeat}")
    loop = {}
    for b in backends:
        loop[b] = best_of(lambda: kernel.simulate_uav(T, p0, G, prm, backend=b), args.repeat)
        print(f"  kernel   {b:7s} {loop[b] * 1e3:9.2f} ms  ({len(T) / loop[b] / 1e6:6.2f} Msteps/s)")
    full = {}
    for b in backends:
        full[b] = best_of(lambda: run_simulation(cfg, backend=b, log_run=None), 1)
        print(f"  10 runs  {b:7s} {full[b]:9.3f} s")
    if len(backends) == 2:
        print(f"speedup: kernel x{loop['python'] / loop['cython']:.1f}, "
              f"full simulation x{full['python'] / full['cython']:.1f}")


if __name__ == "__main__":
    main()
