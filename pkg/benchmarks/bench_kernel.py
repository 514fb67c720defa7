"""Compare the compiled and pure-Python evaluators on quantifier-heavy formulas.

    python3 benchmarks/bench_kernel.py [--repeat N]
"""

from __future__ import annotations

import argparse
import timeit

from ddl_kant.harness import NO_CONTRADICTORY_OBLIGATIONS, OBLIGATION_UNIVERSALIZES
from ddl_kant.kantian import custom_ful, distributive_background, kroy_ful
from ddl_kant.kernel import Model, _pykernel, compile_formula, default_subjects, default_worlds, enumerate_frames

try:
    from ddl_kant.kernel import _ckernel
except ImportError:
    _ckernel = None

CASES = {
    "universal law (maxims)": custom_ful,
    "kroy (open sentences)": kroy_ful,
    "distributive (terms)": distributive_background,
    "obligation universalizes": lambda: OBLIGATION_UNIVERSALIZES,
    "no contradictions": lambda: NO_CONTRADICTORY_OBLIGATIONS,
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--worlds", type=int, default=3)
    ap.add_argument("--subjects", type=int, default=2)
    args = ap.parse_args()

    frames = enumerate_frames(args.worlds)
    models = [Model(default_worlds(args.worlds), default_subjects(args.subjects), f) for f in frames]
    print(f"{len(models)} frames at w={args.worlds}, s={args.subjects}; best of {args.repeat}")
    print(f"{'formula':<28}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for name, make in CASES.items():
        f = make()
        progs = [(compile_formula(f, m.shape), m.arrays) for m in models]

        def run(kernel):
            return [kernel.run(p, *arrs) for p, arrs in progs]

        py = min(timeit.repeat(lambda: run(_pykernel), number=1, repeat=args.repeat)) * 1000
        if _ckernel is None:
            print(f"{name:<28}{py:>12.2f}{'n/a':>12}{'':>10}")
            continue
        assert run(_pykernel) == run(_ckernel)
        c = min(timeit.repeat(lambda: run(_ckernel), number=1, repeat=args.repeat)) * 1000
        print(f"{name:<28}{py:>12.2f}{c:>12.3f}{py / c:>9.0f}x")


if __name__ == "__main__":
    main()
