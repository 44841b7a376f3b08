import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from invariant_forge import catalog, linalg
from invariant_forge.errors import (
    ExpressionTypeError,
    NotWellDefined,
    ParseError,
    SingularMatrix,
    TargetNotLine,
)
from invariant_forge.morphcalc import (
    AmbientMap,
    PresentedMap,
    PresentedSpace,
    eval_program,
    gram,
    induced_map,
    kernel_image,
    parse_expression,
    tensor_spaces,
    whole_space,
)
from invariant_forge.scalars import QQ, cyclotomic_field

PAIRING = [
    ("W2", "image(m)"),
    ("Q", "quotient(whole, W2)"),
    ("ind", "induced(m, tensor(Q,Q), W2)"),
]
PAIRING_TRACE = "trace(compose(invert(gramR(ind)), gramL(ind)))"


def qmap(M):
    n = len(M)
    return AmbientMap([[Fraction(x) for x in r] for r in M], 1, 1, n, QQ)


def test_zero_map_kernel_and_image():
    f = qmap([[0] * 3 for _ in range(3)])
    assert kernel_image(f, "kernel").qdim == 3
    assert kernel_image(f, "image").qdim == 0


def test_pairing_image_is_span_of_z():
    s = catalog.nilpotent_pairing_algebra()
    W2 = eval_program([], "image(m)", s)
    assert W2.qdim == 1
    assert W2.in_S([0, 0, 1]) and not W2.in_S([1, 0, 0])


def test_sqrt2_image_is_span_of_e3():
    s = catalog.sqrt2_operator()
    N = eval_program([], "image(sub(compose(T,T), scale(2,id)))", s)
    F = s.field
    assert N.qdim == 1
    assert N.in_S([F.zero(), F.zero(), F.one(), F.zero()])


def test_sqrt2_induced_is_minus_sqrt2():
    s = catalog.sqrt2_operator()
    F = s.field
    r = F.root(8) + F.root(8).inverse()
    g = eval_program([("N", "image(sub(compose(T,T), scale(2,id)))")], "induced(T, N, N)", s)
    assert g.matrix == [[-r]]
    assert eval_program([("N", "image(sub(compose(T,T), scale(2,id)))")], "trace(induced(T, N, N))", s) == -r


def test_identity_induces_identity():
    f = qmap([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    S = [[1, 1, 0], [0, 1, 1]]
    dom = PresentedSpace(3, 1, QQ, S, [[1, 2, 1]])
    g = induced_map(f, dom, dom)
    assert g.matrix == [[1]]


def test_induced_rejects_bad_maps():
    f = qmap([[0, 1], [1, 0]])
    dom = PresentedSpace(2, 1, QQ, [[1, 0]])
    with pytest.raises(NotWellDefined) as exc:
        induced_map(f, dom, dom)
    assert exc.value.witness is not None


def test_pairing_beta_and_gram_matrices():
    s = catalog.nilpotent_pairing_algebra()
    t = s.field.gen
    ind = eval_program(PAIRING, "ind", s)
    assert ind.matrix == [[1, 1, t, 1]]
    L = eval_program(PAIRING, "gramL(ind)", s)
    R = eval_program(PAIRING, "gramR(ind)", s)
    assert L.matrix == [[1, 1], [t, 1]]
    assert R.matrix == [[1, t], [1, 1]]


def test_symmetric_and_zero_pairings():
    s = catalog.split_algebra(2)
    P = eval_program([], "induced(m, tensor(whole, whole), whole)", s)
    with pytest.raises(TargetNotLine):
        gram(P, "left")
    sym = PresentedSpace(2, 1, QQ, [[1, 1]])
    W = whole_space(2, 1, QQ)
    f = AmbientMap([[Fraction(1), 0, 0, 1], [Fraction(1), 0, 0, 1]], 2, 1, 2, QQ)
    g = induced_map(f, tensor_spaces(W, W), sym)
    assert gram(g, "left").matrix == gram(g, "right").matrix
    zero = AmbientMap([[Fraction(0)] * 4, [Fraction(0)] * 4], 2, 1, 2, QQ)
    gz = induced_map(zero, tensor_spaces(W, W), sym)
    assert gram(gz, "left").matrix == [[0, 0], [0, 0]]


def test_pairing_trace_is_t_plus_one():
    s = catalog.nilpotent_pairing_algebra()
    t = s.field.gen
    v = eval_program(PAIRING, PAIRING_TRACE, s)
    assert v == t + 1
    assert str(v) == "t + 1"


def test_pairing_trace_specializations():
    s = catalog.nilpotent_pairing_algebra()
    v = eval_program(PAIRING, PAIRING_TRACE, s)
    for a in (Fraction(2), Fraction(3), Fraction(-1, 2), Fraction(7, 3), Fraction(10)):
        direct = eval_program(PAIRING, PAIRING_TRACE, catalog.nilpotent_pairing_algebra(a, QQ))
        assert direct == v(a) == a + 1


def test_gram_order_independence():
    s = catalog.nilpotent_pairing_algebra()
    a = eval_program(PAIRING, "trace(compose(invert(gramR(ind)), gramL(ind)))", s)
    b = eval_program(PAIRING, "trace(compose(invert(gramL(ind)), gramR(ind)))", s)
    assert a == b


def test_pairing_degenerate_parameter_reports_determinant():
    s = catalog.nilpotent_pairing_algebra(Fraction(1), QQ)
    with pytest.raises(SingularMatrix) as exc:
        eval_program(PAIRING, PAIRING_TRACE, s)
    assert exc.value.determinant == 0


def test_trace_of_square_of_semisimple_operator():
    F = cyclotomic_field(8)
    r = F.root(8) + F.root(8).inverse()
    s = catalog.diagonal_operator([r, -r], F)
    assert eval_program([], "trace(compose(T,T))", s) == 4


def test_parse_errors():
    for bad in ("trace(", "frobnicate(m)", "compose(m)", "1 + "):
        with pytest.raises((ParseError, ExpressionTypeError)):
            parse_expression(bad)


def test_type_errors():
    s = catalog.nilpotent_pairing_algebra()
    with pytest.raises(ExpressionTypeError):
        eval_program([], "trace(m)", s)
    with pytest.raises(ExpressionTypeError):
        eval_program([], "compose(m, m)", s)


# properties -------------------------------------------------------------------


@given(st.integers(1, 4).flatmap(
    lambda a: st.integers(1, 4).flatmap(
        lambda b: st.lists(st.lists(st.integers(-2, 2), min_size=a, max_size=a), min_size=b, max_size=b))))
def test_rank_nullity(M):
    a, b = len(M[0]), len(M)
    dom = PresentedSpace(a, 1, QQ, [[int(i == j) for i in range(a)] for j in range(a)])
    cod = PresentedSpace(b, 1, QQ, [[int(i == j) for i in range(b)] for j in range(b)])
    pm = PresentedMap(dom, cod, [[Fraction(x) for x in r] for r in M])
    ker, im = kernel_image(pm, "kernel"), kernel_image(pm, "image")
    assert ker.qdim + im.qdim == a
    assert im.qdim == sp.Matrix(M).rank()


def _flag_problem(rng, n):
    """Conjugated upper-triangular map with invariant flag subspaces S > R."""
    U = [[Fraction(rng.randint(-3, 3)) if j >= i else Fraction(0) for j in range(n)] for i in range(n)]
    while True:
        P = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        if linalg.det(P):
            break
    Pinv = linalg.inverse(P)
    f = linalg.matmul(linalg.matmul(P, U), Pinv)
    k = rng.randint(1, n)
    j = rng.randint(0, k - 1)
    cols = linalg.transpose(P)
    S = [cols[i] for i in range(k)]
    R = [cols[i] for i in range(j)]
    # redundant spanning vectors
    S = S + [[x + y for x, y in zip(S[0], S[-1])]]
    expected_trace = sum((U[i][i] for i in range(j, k)), Fraction(0))
    return AmbientMap(f, 1, 1, n, QQ), S, R, expected_trace


@settings(max_examples=60)
@given(st.integers(0, 10**6), st.integers(2, 4))
def test_induced_square_commutes_and_trace_is_presentation_independent(seed, n):
    rng = random.Random(seed)
    f, S, R, expected = _flag_problem(rng, n)
    sp_ = PresentedSpace(n, 1, QQ, S, R)
    g = induced_map(f, sp_, sp_)
    for v in sp_.span_S:
        lhs = sp_.coords(f.apply(v))
        rhs = linalg.matvec(g.matrix, sp_.coords(v)) if g.matrix else []
        assert lhs == rhs
    tr = sum((g.matrix[i][i] for i in range(len(g.matrix))), Fraction(0))
    assert tr == expected
    order = list(range(len(S)))
    rng.shuffle(order)
    g2 = induced_map(f, sp_.shuffled(order), sp_.shuffled(order))
    assert sum((g2.matrix[i][i] for i in range(len(g2.matrix))), Fraction(0)) == tr
