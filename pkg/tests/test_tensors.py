import random
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from invariant_forge import catalog
from invariant_forge.errors import DegreeMismatch, DimensionOverflow, SlotOutOfRange, TypeArithmeticMismatch
from invariant_forge.scalars import QQ, cyclotomic_field
from invariant_forge.tensors import (
    Tensor,
    TensorType,
    antisym_image,
    as_map,
    basis_vector,
    compose_perm,
    contract,
    dual_vector,
    from_q_coords,
    identity_tensor,
    permute,
    reshape,
    tensor_product,
    to_q_coords,
    unreshape,
)


@st.composite
def tensors(draw, max_dim=3, max_order=3):
    dim = draw(st.integers(1, max_dim))
    p = draw(st.integers(0, max_order))
    q = draw(st.integers(0, max_order - p))
    vals = draw(st.lists(st.integers(-3, 3), min_size=dim ** (p + q), max_size=dim ** (p + q)))
    arr = np.array(vals, dtype=object).reshape((dim,) * (p + q))
    return Tensor.from_array(p, q, dim, QQ, arr)


def perms_of(k):
    return st.permutations(list(range(k)))


# examples -----------------------------------------------------------------


def test_tensor_product_examples():
    I = identity_tensor(2)
    II = tensor_product(I, I)
    assert (II.p, II.q) == (2, 2)
    assert as_map(II) == [[int(i == j) for j in range(4)] for i in range(4)]
    x = basis_vector(1, 2)
    c = Tensor.scalar(Fraction(3, 2), 2, QQ)
    assert tensor_product(c, x) == x.scale(Fraction(3, 2))
    r1 = tensor_product(basis_vector(0, 2), dual_vector(0, 2))
    assert list(r1.items()) == [(((0,), (0,)), 1)]


def test_contract_examples():
    for n in (1, 2, 3):
        assert contract(identity_tensor(n), 0, 0).value == n
    assert contract(tensor_product(basis_vector(0, 2), dual_vector(0, 2)), 0, 0).value == 1
    with pytest.raises(SlotOutOfRange):
        contract(identity_tensor(2), 1, 0)


@pytest.mark.parametrize("n", [2, 3])
def test_regular_representation_trace(n):
    m = catalog.matrix_algebra(n)["m"]
    f = contract(m, 0, 0)
    assert (f.p, f.q) == (0, 1)
    for i in range(n):
        for j in range(n):
            assert f.arr[i * n + j] == (n if i == j else 0)


def test_permute_examples():
    u, v = basis_vector(0, 2), basis_vector(1, 2)
    uv = tensor_product(u, v)
    assert permute(uv, [1, 0]) == tensor_product(v, u)
    assert permute(permute(uv, [1, 0]), [1, 0]) == uv
    assert permute(uv) == uv
    with pytest.raises(DegreeMismatch):
        permute(uv, [0])


def test_reshape_pairing_multiplication():
    s = catalog.nilpotent_pairing_algebra()
    M = reshape(s["m"], TensorType(2, 0), TensorType(1, 0))
    assert len(M) == 3 and len(M[0]) == 9
    t = s.field.gen
    x, y, z = 0, 1, 2
    assert M[z][x * 3 + y] == 1
    assert M[z][y * 3 + x] == t
    assert M[z][x * 3 + x] == 1 and M[z][y * 3 + y] == 1
    with pytest.raises(TypeArithmeticMismatch):
        reshape(s["m"], TensorType(1, 0), TensorType(1, 0))


def test_identity_reshapes_to_identity_matrix():
    assert as_map(identity_tensor(3)) == [[int(i == j) for j in range(3)] for i in range(3)]


# properties -----------------------------------------------------------------


@given(tensors(), st.data())
def test_reshape_roundtrip(x, data):
    fp = data.draw(st.integers(0, x.q))
    fq = data.draw(st.integers(0, x.p))
    src, dst = TensorType(fp, fq), TensorType(x.p - fq, x.q - fp)
    assert unreshape(reshape(x, src, dst), src, dst, x.dim, x.field) == x


@given(tensors())
def test_contract_against_adjoined_identity(x):
    y = tensor_product(x, identity_tensor(x.dim))
    for j in range(x.q):
        tau = [i if i < j else i - 1 for i in range(x.q)]
        tau[j] = x.q - 1
        assert contract(y, x.p, j) == permute(x, None, tau)
    for i in range(x.p):
        sigma = [k if k < i else k - 1 for k in range(x.p)]
        sigma[i] = x.p - 1
        assert contract(y, i, x.q) == permute(x, sigma, None)


@given(tensors(), st.data())
def test_permute_is_left_action(x, data):
    s1, s2 = data.draw(perms_of(x.p)), data.draw(perms_of(x.p))
    t1, t2 = data.draw(perms_of(x.q)), data.draw(perms_of(x.q))
    lhs = permute(permute(x, s1, t1), s2, t2)
    assert lhs == permute(x, compose_perm(s2, s1), compose_perm(t2, t1))


@given(tensors(max_order=3))
def test_adjacent_transpositions_generate_reversal(x):
    p = x.p
    y = x
    # bubble the reversal out of adjacent swaps
    target = list(reversed(range(p)))
    acc = tuple(range(p))
    for i in range(p):
        for j in range(p - 1 - i):
            sw = list(range(p))
            sw[j], sw[j + 1] = j + 1, j
            y = permute(y, sw, None)
            acc = compose_perm(sw, acc)
    assert list(acc) == target
    assert y == permute(x, target, None)


@given(tensors())
def test_q_coords_roundtrip(x):
    assert from_q_coords(to_q_coords(x), x.p, x.q, x.dim, x.field) == x


def test_q_coords_roundtrip_cyclotomic():
    F = cyclotomic_field(8)
    t = catalog.sqrt2_operator(F)["T"]
    assert from_q_coords(to_q_coords(t), 1, 1, 4, F) == t


# K_T -------------------------------------------------------------------------


def _span_rank(vs, a):
    return sp.Matrix(vs).rank() if vs else 0


def _same_span(vs, ws, a):
    r1, r2 = _span_rank(vs, a), _span_rank(ws, a)
    if r1 != r2:
        return False
    return r1 == 0 or _span_rank(list(vs) + list(ws), a) == r1


def kt_expected(T, k):
    """U, Ker(T) or 0 from an independent sympy elimination."""
    M = sp.Matrix(T)
    a = M.cols
    r = M.rank()
    if k < r:
        return [[int(i == j) for j in range(a)] for i in range(a)]
    if k == r:
        return [list(v) for v in M.nullspace()]
    return []


def test_antisym_examples():
    Z = [[0, 0], [0, 0]]
    I = [[1, 0], [0, 1]]
    assert antisym_image(Z, 1) == []
    assert antisym_image(I, 2) == []
    assert _same_span(antisym_image(I, 1), I, 2)


def test_antisym_minors_agree_with_naive():
    rng = random.Random(5)
    for _ in range(25):
        a, b = rng.randint(1, 3), rng.randint(1, 3)
        T = [[rng.randint(-2, 2) for _ in range(a)] for _ in range(b)]
        for k in range(1, a + 1):
            assert _same_span(antisym_image(T, k), antisym_image(T, k, method="naive"), a)


def test_antisym_budget():
    T = [[1] * 6 for _ in range(6)]
    with pytest.raises(DimensionOverflow):
        antisym_image(T, 3, budget=10)


@settings(max_examples=200)
@given(st.integers(1, 4).flatmap(
    lambda a: st.integers(1, 4).flatmap(
        lambda b: st.lists(st.lists(st.integers(-2, 2), min_size=a, max_size=a), min_size=b, max_size=b))))
def test_antisym_image_matches_rank_trichotomy(T):
    a = len(T[0])
    for k in range(1, a + 2):
        assert _same_span(antisym_image(T, k), kt_expected(T, k), a)
