"""Time the compiled and pure-Python fundamental-function kernels on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import timeit

from em_lab import _kernels_py
from em_lab.specialize import SpecializationId, _colors_and_strict, build_table
from em_lab.wreath import enumerate_group

try:
    from em_lab import _kernels as _compiled
except ImportError:
    _compiled = None

CASES = [
    ("psi_m r=2 n=5 m=5, all of S_{5,2}", 2, 5, SpecializationId("psi_m", r=2, m=5)),
    ("ps_m~ r=3 n=4 m=6, all of S_{4,3}", 3, 4, SpecializationId("ps_m_tilde", r=3, m=6)),
    ("ps_m r=1 n=7 m=8, all of S_7", 1, 7, SpecializationId("ps_m", r=1, m=8)),
]


def inputs(r, n, spec):
    table = build_table(spec).dense()
    out = []
    for w in enumerate_group(n, r):
        _, colors, strict = _colors_and_strict(w, "color")
        out.append((list(colors), strict, table))
    return out


def run(fn, args):
    for a in args:
        fn(*a)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    opts = ap.parse_args(argv)
    print(f"{'case':<38} {'pure (s)':>9} {'compiled (s)':>13} {'speedup':>8}")
    for label, r, n, spec in CASES:
        args = inputs(r, n, spec)
        for a in args:
            if _compiled is not None:
                assert list(_compiled.fundamental_counts(*a)) == _kernels_py.fundamental_counts(*a)
        pure = min(timeit.repeat(lambda: run(_kernels_py.fundamental_counts, args), number=1, repeat=opts.repeat))
        if _compiled is None:
            print(f"{label:<38} {pure:9.3f} {'n/a':>13} {'':>8}")
            continue
        comp = min(timeit.repeat(lambda: run(_compiled.fundamental_counts, args), number=1, repeat=opts.repeat))
        print(f"{label:<38} {pure:9.3f} {comp:13.3f} {pure / comp:7.1f}x")


if __name__ == "__main__":
    main()
