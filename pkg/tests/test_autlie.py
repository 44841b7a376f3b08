import random
from fractions import Fraction

import pytest
import sympy as sp

from invariant_forge import catalog, linalg
from invariant_forge.autlie import aut_lie_algebra, bracket, derivation_action, in_lie_span
from invariant_forge.scalars import QQ
from invariant_forge.structures import build_twisted_group_algebra, zeta_cocycle


def derivation_dim_oracle(n):
    """dim Der(M_n) by solving D(E_ij E_kl) = D(E_ij) E_kl + E_ij D(E_kl) with sympy."""
    N = n * n
    D = sp.Matrix(N, N, lambda i, j: sp.Symbol(f"d{i}_{j}"))

    def E(i, j):
        M = sp.zeros(n, n)
        M[i, j] = 1
        return M

    def vec(M):
        return sp.Matrix([M[i, j] for i in range(n) for j in range(n)])

    def mat(v):
        return sp.Matrix(n, n, lambda i, j: v[i * n + j])

    eqs = []
    basis = [E(i, j) for i in range(n) for j in range(n)]
    for a in range(N):
        for b in range(N):
            lhs = D * vec(basis[a] * basis[b])
            rhs = vec(mat(D[:, a]) * basis[b] + basis[a] * mat(D[:, b]))
            eqs.extend(list(lhs - rhs))
    eqs.extend(list(D * vec(sp.eye(n))))
    A, _ = sp.linear_eq_to_matrix(eqs, list(D))
    return N * N - A.rank()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_empty_structure_is_gl(n):
    assert aut_lie_algebra(catalog.empty_structure(n)).dimension == n * n


def test_matrix_algebra_matches_oracle():
    assert aut_lie_algebra(catalog.matrix_algebra(2)).dimension == derivation_dim_oracle(2) == 3


def test_matrix_algebra_three_is_pgl3():
    assert aut_lie_algebra(catalog.matrix_algebra(3)).dimension == 8


def test_twisted_klein_four_with_projections_is_zero():
    G, alpha = zeta_cocycle(2, QQ)
    W = build_twisted_group_algebra(G, alpha, QQ)
    assert aut_lie_algebra(W.structure).dimension == 0


def test_split_algebra_has_no_derivations():
    assert aut_lie_algebra(catalog.split_algebra(3)).dimension == 0


@pytest.mark.parametrize("make", [
    lambda: catalog.matrix_algebra(2),
    lambda: catalog.empty_structure(2),
    lambda: catalog.nilpotent_pairing_algebra(Fraction(3), QQ),
    catalog.sqrt2_operator,
])
def test_basis_annihilates_and_is_bracket_closed(make):
    s = make()
    res = aut_lie_algebra(s)
    for D in res.basis:
        for t in s.tensors.values():
            assert derivation_action(D, t).is_zero()
    for D1 in res.basis:
        for D2 in res.basis:
            assert in_lie_span(res, bracket(D1, D2))


@pytest.mark.parametrize("seed", range(5))
def test_dimension_invariant_under_basis_change(seed):
    rng = random.Random(seed)
    for s in (catalog.matrix_algebra(2), catalog.nilpotent_pairing_algebra(Fraction(2), QQ)):
        n = s.dim
        while True:
            P = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
            if linalg.det(P):
                break
        assert aut_lie_algebra(s.transform(P)).dimension == aut_lie_algebra(s).dimension


def test_elementary_fast_path_matches_general_action():
    from invariant_forge.autlie import _elementary_action

    s = catalog.nilpotent_pairing_algebra(Fraction(5, 2), QQ)
    t = s["m"]
    for a in range(3):
        for b in range(3):
            E = [[Fraction(int((i, j) == (a, b))) for j in range(3)] for i in range(3)]
            assert _elementary_action(a, b, t) == derivation_action(E, t).flat()
