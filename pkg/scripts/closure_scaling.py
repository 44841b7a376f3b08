"""Time the tensor closure as the degree bound grows.

    python3 scripts/closure_scaling.py --max-degree 3
"""

from __future__ import annotations

import argparse
import time

from invariant_forge import catalog
from invariant_forge.closure import DegreeBound, compute_closure
from invariant_forge.scalars import cyclotomic_field


def structures():
    F8 = cyclotomic_field(8)
    return {
        "empty dim 2": catalog.empty_structure(2),
        "empty dim 3": catalog.empty_structure(3),
        "diag(zeta8, 0)": catalog.diagonal_operator([F8.zeta, 0], F8),
        "sqrt2 operator": catalog.sqrt2_operator(),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-degree", type=int, default=3)
    ap.add_argument("--budget", type=int, default=2_000_000)
    args = ap.parse_args()
    print(f"{'structure':<16} {'bound':>6} {'X^{d,d}':>8} {'X^{0,0}':>8} {'rounds':>6} {'seconds':>8}")
    for name, s in structures().items():
        for d in range(1, args.max_degree + 1):
            start = time.perf_counter()
            st = compute_closure(s, DegreeBound(d, d), budget=args.budget)
            dt = time.perf_counter() - start
            print(f"{name:<16} {d},{d:<4} {st.dimension(d, d):>8} {st.dimension(0, 0):>8} {st.rounds:>6} {dt:>8.2f}")


if __name__ == "__main__":
    main()
