"""Compare the compiled and pure-Python kernels on representative workloads.

Run with ``python3 benchmarks/bench_kernels.py``; add ``--repeat N`` for more samples.
"""

import argparse
import timeit

from bandknot import kernels
from bandknot.forms import direct_sum, from_cyclic, hyperbolic, negate

F_ISO = direct_sum(from_cyclic(2, 27), negate(from_cyclic(2, 27)), hyperbolic(3))
F_SMALL = direct_sum(from_cyclic(1, 7), from_cyclic(3, 7), from_cyclic(1, 25))


def workloads(b):
    iso = (F_ISO.group.invariant_factors, F_ISO.int_gram, F_ISO.modulus)
    small = (F_SMALL.group.invariant_factors, F_SMALL.int_gram, F_SMALL.modulus)
    return {
        "jacobi, odd n < 3000": lambda: [b.jacobi(x, n) for n in range(3, 3000, 2)
                                         for x in range(0, n, 97)],
        "sqrt scan mod 1319": lambda: [b.sqrt_scan(x, 1319) for x in range(200)],
        "pm square scan mod 4095": lambda: [b.pm_square_scan(c, 4095) for c in (2, 8, 32)],
        "isotropic elements, order 6561": lambda: b.isotropic_elements(*iso),
        "first isotropic, order 1225": lambda: b.first_isotropic(*small),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.backends()
    if "compiled" not in backends:
        print("compiled extension not built; only the Python kernels are available")
    timings = {}
    for name, b in backends.items():
        for label, fn in workloads(b).items():
            timings[label, name] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
    labels = list(workloads(backends["python"]))
    print(f"{'workload':<36}" + "".join(f"{n:>12}" for n in backends) + "   speedup")
    for label in labels:
        row = [timings[label, n] for n in backends]
        speed = (f"{row[0] / row[-1]:8.1f}x" if len(row) > 1 and row[-1] else "")
        print(f"{label:<36}" + "".join(f"{t * 1e3:10.2f}ms" for t in row) + "  " + speed)


if __name__ == "__main__":
    main()
