"""Time the compiled and numpy kernels on identical batches.

    python3 benchmarks/bench_kernels.py [--n 200000] [--repeat 5]
"""
import argparse
import timeit

from meanmetrics import _kernels, sampling
from meanmetrics.geometry import Domain
from meanmetrics.means import ARITHMETIC, LOGARITHMIC, power
from meanmetrics.metrics import MetricForm, MetricSpec, domain_code

CASES = [
    ("arith th, B^2", MetricSpec(ARITHMETIC, 1.0, MetricForm.TH), Domain.ball(2)),
    ("log-mean th, H^2", MetricSpec(LOGARITHMIC, 1.0, MetricForm.TH), Domain.half_space(2)),
    ("power(0.2) raw, R^3\\{0}", MetricSpec(power(0.2), 1.0, MetricForm.RAW), Domain.punctured(3)),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = _kernels.available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the numpy backend is available")
    print(f"triangle defect on {args.n} triples, best of {args.repeat}")
    print(f"{'case':28s}" + "".join(f"{name:>12s}" for name in backends) + "   speedup")
    for label, spec, dom in CASES:
        x, y, z = sampling.sample_tuple_block(dom, 1, 0, args.n, 3)
        code = domain_code(dom)
        times = {}
        for name, mod in backends.items():
            times[name] = min(timeit.repeat(lambda mod=mod: mod.triangle_defect(code, *spec.kernel_args, x, y, z),
                                            number=1, repeat=args.repeat))
        speed = f"{times['numpy'] / times['cython']:9.1f}x" if "cython" in times else ""
        print(f"{label:28s}" + "".join(f"{t * 1e3:10.1f}ms" for t in times.values()) + speed)


if __name__ == "__main__":
    main()
