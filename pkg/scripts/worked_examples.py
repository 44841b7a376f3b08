"""Run the shipped example jobs through the CLI driver and print one line each.

    python3 scripts/worked_examples.py
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from invariant_forge.cli import build_parser, run

DATA = Path(__file__).resolve().parent.parent / "data"

# (command line, key path into the JSON report, expected value)
EXAMPLES = [
    ("eval --job pairing_eval.json", ["trace"], "t + 1"),
    ("eval --job sqrt2_eval.json", ["trace"], "z^3 - z"),
    ("invariant-field --job sqrt2_closure.json", ["x00_basis"], ["1"]),
    ("identities --degree 4 --structure m2.json", ["dimension"], 1),
    ("identities --degree 2 --structure comm2.json", ["polynomials"], ["X1*X2 - X2*X1"]),
    ("graded-identities --structure c3c3_twisted.json --grades 3,1", ["dimension"], 1),
    ("generic-form --job twisted_c3c3.json", ["k0_degree"], 2),
    ("twisted-group --job twisted_c4c4.json", ["alpha_tilde"], ["-z"]),
    ("galois-twist --job twisted_c4c4.json --k 3", ["mu_twisted"], "-z"),
    ("taft-extract --job taft3_extract.json", ["b"], "5"),
    ("taft-product --job taft_product_z2.json", ["invariants", "Lambda", "1,2"], "-1"),
    ("formanek --job formanek_basis.json", ["basis"], True),
    ("formanek --job formanek_D.json", ["basis"], True),
    ("aut-lie --structure m2.json", ["dimension"], 3),
    ("closure --bound 2,2 --structure empty2.json", ["dimensions", "2,2"], 2),
]


def resolve(line):
    return [str(DATA / w) if w.endswith(".json") else w for w in line.split()]


def main():
    argparse.ArgumentParser(description=__doc__).parse_args()
    parser = build_parser()
    failures = 0
    for line, path, expected in EXAMPLES:
        argv = resolve(line)
        start = time.perf_counter()
        code, report = run(argv[0], parser.parse_args(argv))
        elapsed = time.perf_counter() - start
        got = report
        for key in path:
            got = got.get(key) if isinstance(got, dict) else None
        ok = code == 0 and got == expected
        failures += not ok
        print(f"{'ok ' if ok else 'BAD'} {elapsed:6.2f}s  {line}  ->  {got!r}")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
