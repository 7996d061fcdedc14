"""Time the pair kernels under both backends.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]

Reports best-of-N wall times for the modular sum, the weak pairing and the
modular gradient on a 1D and a 2D workload, for the NumPy kernels and (when
built) the compiled extension.
"""

import argparse
import time

import numpy as np

from fracorlicz import Domain, FracParams, NFunction, make_test_function
from fracorlicz._backend import available_backends
from fracorlicz._pairs import workspace_for


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run(repeats):
    cases = [
        ("1d-129", Domain(((0.0, 1.0),), (129,), halo=1.0), 0.4),
        ("2d-17x17", Domain(((0.0, 1.0), (0.0, 1.0)), (17, 17), halo=0.5), 0.4),
    ]
    mfun = NFunction.power(3.0)
    backends = available_backends()
    print("backends:", ", ".join(sorted(backends)))
    header = "%-10s %-9s %10s %10s %10s   pairs" % (
        "case", "backend", "modular", "pairing", "gradient")
    print(header)
    print("-" * len(header))
    for label, dom, s in cases:
        pr = FracParams(s=s, mfun=mfun)
        ws = workspace_for(dom, True, s, mfun, pr.rule)
        u = make_test_function(dom, kind="bump", seed=0).flat(extended=True)
        v = make_test_function(dom, kind="bump", seed=1).flat(extended=True)
        npairs = sum(len(r["wp"]) for r in ws.rings)
        times = {}
        for name, eng in sorted(backends.items()):
            tm = _time(lambda: ws.modular(u, 1.0, backend=eng), repeats)
            tp = _time(lambda: ws.pairing(u, v, 1.0, backend=eng), repeats)
            tg = _time(lambda: ws.gradient(u, 1.0, backend=eng), repeats)
            times[name] = (tm, tp, tg)
            print("%-10s %-9s %9.3fms %9.3fms %9.3fms   %d"
                  % (label, name, 1e3 * tm, 1e3 * tp, 1e3 * tg, npairs))
        if "compiled" in times and "numpy" in times:
            speed = [tn / tc if tc > 0 else float("nan")
                     for tn, tc in zip(times["numpy"], times["compiled"])]
            print("%-10s %-9s %9.2fx %9.2fx %9.2fx"
                  % (label, "speedup", *speed))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    run(args.repeats)


if __name__ == "__main__":
    main()
