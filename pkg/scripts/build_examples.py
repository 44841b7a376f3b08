"""Regenerate the example structures and job files under data/.

Run from the repository root:  python3 scripts/build_examples.py
"""

from __future__ import annotations

import json
from pathlib import Path

from invariant_forge import catalog
from invariant_forge.fileio import dump_structure
from invariant_forge.scalars import QQ, cyclotomic_field
from invariant_forge.structures import (
    TaftParams,
    build_taft,
    build_twisted_group_algebra,
    zeta_cocycle,
)

DATA = Path(__file__).resolve().parent.parent / "data"


def job(**kw):
    return json.dumps({"schema_version": 1, **kw}, indent=2) + "\n"


def main():
    DATA.mkdir(exist_ok=True)
    F8, F3 = cyclotomic_field(8), cyclotomic_field(3)
    G, alpha = zeta_cocycle(3, F3)
    G2, alpha2 = zeta_cocycle(2, QQ)
    structures = {
        "pairing.json": catalog.nilpotent_pairing_algebra(),
        "sqrt2.json": catalog.sqrt2_operator(),
        "m2.json": catalog.matrix_algebra(2),
        "m3.json": catalog.matrix_algebra(3),
        "comm2.json": catalog.split_algebra(2),
        "empty2.json": catalog.empty_structure(2),
        "empty3.json": catalog.empty_structure(3),
        "diag_zeta8.json": catalog.diagonal_operator([F8.root(8), 0], F8),
        "c3c3_twisted.json": build_twisted_group_algebra(G, alpha, F3).structure,
        "c2c2_twisted.json": build_twisted_group_algebra(G2, alpha2, QQ).structure,
        "taft2.json": build_taft(TaftParams(2, 1, 1), cyclotomic_field(2)).structure,
        "taft3.json": build_taft(TaftParams(3, 2, 5), F3).structure,
    }
    for name, s in structures.items():
        (DATA / name).write_text(dump_structure(s), encoding="utf-8")

    jobs = {
        "pairing_eval.json": job(
            structure="pairing.json",
            bindings=[
                ["W2", "image(m)"],
                ["Q", "quotient(whole, W2)"],
                ["ind", "induced(m, tensor(Q,Q), W2)"],
            ],
            expression="trace(compose(invert(gramR(ind)), gramL(ind)))",
            specialize=["2", "3", "-1/2", "7/3", "10"],
        ),
        "sqrt2_eval.json": job(
            structure="sqrt2.json",
            bindings=[["N", "image(sub(compose(T,T), scale(2,id)))"]],
            expression="trace(induced(T, N, N))",
        ),
        "sqrt2_closure.json": job(structure="sqrt2.json", bound="2,2"),
        "twisted_c2c2.json": job(
            field={"kind": "rational"},
            group={"cyclic_orders": [2, 2]},
            cocycle={"zeta_power": 1},
        ),
        "twisted_c3c3.json": job(
            field={"kind": "cyclotomic", "order": 3},
            group={"cyclic_orders": [3, 3]},
            cocycle={"zeta_power": 1},
        ),
        "twisted_c4c4.json": job(
            field={"kind": "cyclotomic", "order": 4},
            group={"cyclic_orders": [4, 4]},
            cocycle={"zeta_power": 1},
            words=[[["1,0", "0,1"]]],
        ),
        "taft3_build.json": job(field={"kind": "cyclotomic", "order": 3}, n=3, a="2", b="5"),
        "taft3_extract.json": job(structure="taft3.json", n=3),
        "taft_product_z2.json": job(
            field={"kind": "cyclotomic", "order": 2},
            factors=[{"n": 2, "c": 1, "a": "1", "b": "0"}, {"n": 2, "c": 1, "a": "1", "b": "0"}],
            b_exponents=[[0, 1], [1, 0]],
            **{"lambda": [["0", "1"], ["1", "0"]]},
        ),
        "procesi.json": job(
            field={"kind": "rational"},
            cycles="(1 2)(3)",
            matrices=[[["1", "2"], ["0", "1"]], [["0", "1"], ["1", "0"]], [["3", "0"], ["0", "-1"]]],
        ),
        "formanek_basis.json": job(
            field={"kind": "rational"},
            matrices=[
                [["1", "0"], ["0", "0"]],
                [["0", "1"], ["0", "0"]],
                [["0", "0"], ["1", "0"]],
                [["0", "0"], ["0", "1"]],
            ],
        ),
        "formanek_D.json": job(
            field={"kind": "rational"},
            X=[["0", "1"], ["1", "0"]],
            Y=[["1", "0"], ["0", "-1"]],
        ),
    }
    for name, text in jobs.items():
        (DATA / name).write_text(text, encoding="utf-8")
    print(f"wrote {len(structures) + len(jobs)} files to {DATA}")


if __name__ == "__main__":
    main()
