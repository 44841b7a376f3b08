"""Small named structures used by the examples, tests and scripts."""

from __future__ import annotations

from .scalars import QQ, cyclotomic_field, rational_function_field
from .tensors import Structure, Tensor


def matrix_algebra(n: int, field=QQ, with_unit: bool = True) -> Structure:
    """M_n with basis E_ij at index i*n + j."""
    N = n * n
    m = Tensor.zeros(1, 2, N, field)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                m.arr[i * n + k, i * n + j, j * n + k] = field.one()
    tensors = {"m": m}
    if with_unit:
        u = Tensor.zeros(1, 0, N, field)
        for i in range(n):
            u.arr[i * n + i] = field.one()
        tensors["unit"] = u
    return Structure(N, field, tensors)


def split_algebra(k: int = 2, field=QQ) -> Structure:
    """K x ... x K (k copies) with orthogonal idempotent basis."""
    m = Tensor.zeros(1, 2, k, field)
    for i in range(k):
        m.arr[i, i, i] = field.one()
    return Structure(k, field, {"m": m})


def nilpotent_pairing_algebra(a=None, field=None) -> Structure:
    """Basis x, y, z with x^2 = y^2 = xy = z, yx = a z, z W = W z = 0.

    With no arguments a is the generator t of Q(t).
    """
    if field is None:
        field = rational_function_field("t") if a is None else QQ
    if a is None:
        a = field.gen
    m = Tensor.zeros(1, 2, 3, field)
    m.arr[2, 0, 0] = field.one()
    m.arr[2, 1, 1] = field.one()
    m.arr[2, 0, 1] = field.one()
    m.arr[2, 1, 0] = field.coerce(a)
    return Structure(3, field, {"m": m})


def sqrt2_operator(field=None) -> Structure:
    """4x4 operator diag(r, r) (+) [[-r, 1], [0, -r]] with r = zeta_8 + zeta_8^{-1}.

    T^2 - 2 has rank one (image spanned by e_3) and T acts on that image
    as -r.
    """
    field = field or cyclotomic_field(8)
    r = field.root(8) + field.root(8).inverse()
    T = Tensor.zeros(1, 1, 4, field)
    T.arr[0, 0] = r
    T.arr[1, 1] = r
    T.arr[2, 2] = -r
    T.arr[2, 3] = field.one()
    T.arr[3, 3] = -r
    return Structure(4, field, {"T": T})


def diagonal_operator(values, field) -> Structure:
    n = len(values)
    T = Tensor.zeros(1, 1, n, field)
    for i, v in enumerate(values):
        T.arr[i, i] = field.coerce(v)
    return Structure(n, field, {"T": T})


def empty_structure(dim: int, field=QQ) -> Structure:
    return Structure(dim, field, {})
