"""Time the numba and numpy intersection kernels on the same polylines.

    python3 benchmarks/bench_intersect.py [--orders 8 10 12 14] [--repeat 3]

Both backends must report identical events; the script exits nonzero if not.
"""

from __future__ import annotations

import argparse
import sys

from dragoncurve.ifs import curve, make_params
from dragoncurve.intersect import BRUTE_MAX_SEGMENTS, _numba_kernels, brute_force, sweep

# A clean angle, one just past the critical angle, and a heavily self-overlapping one.
CASES = {"clean (xi=0.5)": 0.5, "near critical (xi=0.72)": 0.72, "messy (xi=0.95)": 0.95}


def best_of(fn, repeat: int):
    """Fastest kernel time over ``repeat`` runs; the shared event description step is not timed."""
    reports = [fn() for _ in range(repeat)]
    return min(r.elapsed_s for r in reports), reports[-1]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--orders", type=int, nargs="+", default=[8, 10, 12, 14])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _numba_kernels is None:
        print("numba kernels unavailable (numba missing or DRAGONCURVE_NO_NUMBA set)", file=sys.stderr)
        return 1

    # Compile once up front so the first timing is not a JIT measurement.
    warm = curve(make_params(0.5), 4)
    brute_force(warm, backend="numba")
    sweep(warm, backend="numba")

    print(f"{'case':<26}{'k':>3}{'engine':>8}{'numba s':>11}{'numpy s':>11}{'speedup':>9}{'events':>9}")
    ok = True
    for label, xi in CASES.items():
        p = make_params(xi)
        for k in args.orders:
            poly = curve(p, k)
            for name, run in (("brute", brute_force), ("sweep", sweep)):
                if name == "brute" and poly.n_segments > BRUTE_MAX_SEGMENTS:
                    continue
                t_nb, r_nb = best_of(lambda: run(poly, backend="numba"), args.repeat)
                t_np, r_np = best_of(lambda: run(poly, backend="numpy"), args.repeat)
                same = r_nb.pairs() == r_np.pairs()
                ok &= same
                print(f"{label:<26}{k:>3}{name:>8}{t_nb:>11.4f}{t_np:>11.4f}{t_np / max(t_nb, 1e-9):>8.1f}x"
                      f"{len(r_nb.events):>9}{'' if same else '  MISMATCH'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
