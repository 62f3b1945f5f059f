"""Compare the compiled and NumPy spectral-sum kernels.

Run with ``python3 benchmarks/bench_kernels.py``. Shapes match a typical
12D-1S evaluation: a few hundred pseudo-states, 18 real weight columns and an
imaginary-axis rule of a few hundred nodes.
"""

import argparse
import timeit

import numpy as np

from hvdw import _kernels_py

try:
    from hvdw import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None


def _inputs(states, columns, nodes, seed=0):
    rng = np.random.default_rng(seed)
    gaps = np.sort(rng.uniform(1e-3, 50.0, states))
    weights = rng.normal(size=(states, columns))
    u = np.geomspace(1e-6, 1e4, nodes)
    omega = rng.uniform(0.0, 1e-3, nodes)
    return gaps, weights, u, omega


def run(states=240, columns=18, nodes=400, repeat=5):
    gaps, weights, u, omega = _inputs(states, columns, nodes)
    cases = {
        "imag_axis_sum": lambda m: m.imag_axis_sum(gaps, weights, u),
        "real_axis_sum": lambda m: m.real_axis_sum(gaps, weights, omega),
        "pair_sum": lambda m: m.pair_sum(gaps, weights, gaps[: states // 2], weights[: states // 2]),
    }
    backends = {"python": _kernels_py}
    if _compiled is not None:
        backends["cython"] = _compiled
    rows = []
    for name, call in cases.items():
        ref = call(_kernels_py)
        timings = {}
        for label, module in backends.items():
            diff = float(np.max(np.abs(call(module) - ref)) / np.max(np.abs(ref)))
            number = max(1, int(0.2 / max(timeit.timeit(lambda: call(module), number=1), 1e-6)))
            best = min(timeit.repeat(lambda: call(module), number=number, repeat=repeat)) / number
            timings[label] = (best, diff)
        rows.append((name, timings))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--states", type=int, default=240)
    parser.add_argument("--nodes", type=int, default=400)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _compiled is None:
        print("compiled extension not available; timing the NumPy kernels only")
    print(f"{'kernel':<16}{'backend':<9}{'time [ms]':>12}{'max rel diff':>15}{'speedup':>10}")
    for name, timings in run(args.states, 18, args.nodes, args.repeat):
        base = timings["python"][0]
        for label, (t, diff) in timings.items():
            print(f"{name:<16}{label:<9}{1e3 * t:>12.4f}{diff:>15.2e}{base / t:>10.2f}")


if __name__ == "__main__":
    main()
