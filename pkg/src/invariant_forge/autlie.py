"""Lie algebra of the stabilizer {g in GL(W) : g(x_i) = x_i for all i}.

D acts on W^{p,q} as a derivation: D in each up slot minus D^T in each
down slot.  The Lie algebra is the common kernel of these actions on the
structure tensors, a linear system in the n^2 entries of D.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .scalars import scalar_str
from .tensors import Tensor


@dataclass
class AutLieResult:
    dimension: int
    basis: list  # n x n matrices (lists of rows)

    def to_json(self):
        return {
            "dimension": self.dimension,
            "basis": [[[scalar_str(v) for v in row] for row in D] for D in self.basis],
        }


def derivation_action(D, x: Tensor) -> Tensor:
    """rho(D)(x) = sum over up slots of D - sum over down slots of D^T."""
    n = x.dim
    Da = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            Da[i, j] = x.field.coerce(D[i][j])
    total = None
    for s in range(x.p + x.q):
        if s < x.p:
            term = np.moveaxis(np.tensordot(Da, x.arr, axes=([1], [s])), 0, s)
        else:
            # (f D)(e_j) = sum_i f_i D[i][j]: contract the down slot with D's row index
            term = np.moveaxis(np.tensordot(Da.T, x.arr, axes=([1], [s])), 0, s)
            term = -term
        total = term if total is None else total + term
    if total is None:
        total = np.empty((), dtype=object)
        total[()] = x.field.zero()
    return Tensor(x.p, x.q, n, x.field, np.asarray(total, dtype=object))


def _elementary_action(a, b, x: Tensor) -> list:
    """Flattened rho(E_ab)(x) using slices instead of products.

    On an up slot E_ab moves the b-th slice to position a; on a down slot
    -E_ab^T moves the a-th slice, negated, to position b.
    """
    zero = x.field.zero()
    total = np.full(x.arr.shape, zero, dtype=object)
    for s in range(x.p + x.q):
        src = [slice(None)] * (x.p + x.q)
        dst = [slice(None)] * (x.p + x.q)
        if s < x.p:
            src[s], dst[s] = b, a
            total[tuple(dst)] = total[tuple(dst)] + x.arr[tuple(src)]
        else:
            src[s], dst[s] = a, b
            total[tuple(dst)] = total[tuple(dst)] - x.arr[tuple(src)]
    return list(total.reshape(-1)) if total.ndim else [total[()]]


def aut_lie_algebra(structure) -> AutLieResult:
    n, F = structure.dim, structure.field
    zero, one = F.zero(), F.one()
    # column (a, b) of the system is rho(E_ab) applied to every tensor
    columns = []
    for a in range(n):
        for b in range(n):
            col = []
            for t in structure.tensors.values():
                col.extend(_elementary_action(a, b, t))
            columns.append(col)
    rows = linalg.transpose(columns) if columns and columns[0] else []
    rows = [r for r in rows if any(r)]
    if rows:
        ns = linalg.nullspace(rows)
    else:
        ns = [[one if i == j else zero for i in range(n * n)] for j in range(n * n)]
    basis = [[[F.coerce(v[a * n + b]) for b in range(n)] for a in range(n)] for v in ns]
    return AutLieResult(len(basis), basis)


def bracket(D1, D2):
    A = linalg.matmul(D1, D2)
    B = linalg.matmul(D2, D1)
    return [[x - y for x, y in zip(r, s)] for r, s in zip(A, B)]


def in_lie_span(result: AutLieResult, D) -> bool:
    flat = [x for row in D for x in row]
    return linalg.in_span([[x for row in B for x in row] for B in result.basis], flat)
