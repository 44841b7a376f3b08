import itertools

import pytest

from invariant_forge import linalg
from invariant_forge.closure import DegreeBound, compute_closure, fixed_field_degree
from invariant_forge.errors import (
    CocycleInvalid,
    MissingDecomposition,
    NotAbelian,
    ParamInvalid,
    WordNotRelator,
)
from invariant_forge.scalars import QQ, cyclotomic_field, totient, units_mod
from invariant_forge.structures import (
    Cocycle2,
    GroupTable,
    abelian_group,
    alpha_tilde,
    build_twisted_group_algebra,
    check_associative,
    check_cocycle,
    cocycle_from_function,
    commutator_element,
    commutator_scalar,
    find_unit,
    galois_twist,
    mu_and_generic_form,
    root_order,
    twisted_from_structure,
    zeta_cocycle,
)
from oracles import tensor_commutator


def twisted(n, power=1, field=None):
    F = field or cyclotomic_field(n)
    G, alpha = zeta_cocycle(n, F, power)
    return build_twisted_group_algebra(G, alpha, F)


def s3():
    perms = list(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[tuple(a[b[k]] for k in range(3))] for b in perms] for a in perms]
    return GroupTable(table, idx[(0, 1, 2)])


# --- cocycles and algebras -------------------------------------------------


def test_cocycle_checks():
    G = abelian_group([2, 3])
    assert check_cocycle(G, cocycle_from_function(G, lambda x, y: 1, QQ))
    for n in (2, 3, 4):
        Gn, alpha = zeta_cocycle(n, cyclotomic_field(n))
        assert check_cocycle(Gn, alpha)
    G3, alpha = zeta_cocycle(3, cyclotomic_field(3))
    vals = [list(r) for r in alpha.values]
    vals[1][2] = vals[1][2] * 2
    res = check_cocycle(G3, Cocycle2(vals))
    assert not res and res.witness is not None
    with pytest.raises(CocycleInvalid):
        build_twisted_group_algebra(G3, Cocycle2(vals), cyclotomic_field(3))


def test_group_table_validation():
    with pytest.raises(ParamInvalid):
        GroupTable([[0, 1], [1, 1]])
    with pytest.raises(ParamInvalid):
        GroupTable([[0, 1], [1, 0]], 0, [(1, 3)])


def test_trivial_cocycle_on_c2_is_commutative():
    G = abelian_group([2])
    W = build_twisted_group_algebra(G, cocycle_from_function(G, lambda x, y: 1, QQ), QQ)
    m = W.structure["m"]
    for i in range(2):
        for j in range(2):
            assert all(m.arr[k, i, j] == m.arr[k, j, i] for k in range(2))


def test_klein_four_anticommutes():
    W = twisted(2, field=cyclotomic_field(4))
    m = W.structure["m"]
    g, h = [x for x, _ in W.group.decomposition]
    gh = W.group.mul(g, h)
    assert m.arr[gh, h, g] == -m.arr[gh, g, h]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_builder_is_associative_with_unit(n):
    W = twisted(n)
    assert check_associative(W.structure["m"]) is None
    u = find_unit(W.structure)
    assert u is not None
    assert W.structure["unit"].flat() == u


# --- commutators and alpha tilde --------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4])
def test_commutator_scalar_matches_tensor_oracle(n):
    W = twisted(n)
    F = W.field
    g, h = [x for x, _ in W.group.decomposition]
    assert commutator_scalar(W, g, h) == F.zeta.inverse() == tensor_commutator(W, g, h)
    if n > 3:
        return
    for x in range(W.group.order):
        for y in range(0, W.group.order, 2):
            assert W.scalar_value(commutator_element(W, x, y)) == tensor_commutator(W, x, y)
        assert commutator_scalar(W, x, x) == 1


def test_trivial_cocycle_commutators_are_one():
    G = abelian_group([2, 2])
    W = build_twisted_group_algebra(G, cocycle_from_function(G, lambda x, y: 1, QQ), QQ)
    assert all(commutator_scalar(W, g, h) == 1 for g in range(4) for h in range(4))


def test_alpha_tilde_examples():
    W = twisted(3)
    g, h = [x for x, _ in W.group.decomposition]
    z = W.field.zeta
    assert alpha_tilde(W, []) == 1
    assert alpha_tilde(W, [(g, h)]) == z.inverse()
    assert alpha_tilde(W, [(g, h), (h, g)]) == 1


def test_alpha_tilde_multiplicative_on_relators():
    W = twisted(4)
    N = W.group.order
    words = [[(x, y)] for x in range(0, N, 3) for y in range(0, N, 5)]
    for w1 in words:
        for w2 in words:
            assert alpha_tilde(W, w1 + w2) == alpha_tilde(W, w1) * alpha_tilde(W, w2)


def test_alpha_tilde_rejects_non_relators():
    G = s3()
    W = build_twisted_group_algebra(G, cocycle_from_function(G, lambda x, y: 1, QQ), QQ)
    a, b = 1, 2
    assert G.commutator(a, b) != G.identity
    with pytest.raises(WordNotRelator):
        alpha_tilde(W, [(a, b)])


# --- mu and the generic form -------------------------------------------------


def test_mu_trivial_cocycle():
    G = abelian_group([2, 3])
    W = build_twisted_group_algebra(G, cocycle_from_function(G, lambda x, y: 1, QQ), QQ)
    rep = mu_and_generic_form(W)
    assert rep.mu == 1 and rep.k0_degree == 1


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_mu_is_primitive_root(n):
    rep = mu_and_generic_form(twisted(n))
    F = cyclotomic_field(n)
    assert rep.mu_order == n
    assert root_order(rep.mu, F) == n
    assert rep.k0_degree == totient(n)


def test_klein_four_rational_generic_form():
    rep = mu_and_generic_form(twisted(2, field=QQ))
    assert rep.mu == -1
    assert rep.k0_degree == 1
    assert rep.base_ring() == "Q[a1^(+-1), a2^(+-1)]"
    assert "U2*U1 = -1 * U1*U2" in rep.render()


def test_generic_form_errors():
    G = s3()
    W = build_twisted_group_algebra(G, cocycle_from_function(G, lambda x, y: 1, QQ), QQ)
    with pytest.raises(NotAbelian):
        mu_and_generic_form(W)
    table = abelian_group([2, 2]).table
    G2 = GroupTable(table, 0)
    W2 = build_twisted_group_algebra(G2, cocycle_from_function(G2, lambda x, y: 1, QQ), QQ)
    with pytest.raises(MissingDecomposition):
        mu_and_generic_form(W2)


# --- Galois coherence -------------------------------------------------------------


@pytest.mark.parametrize("n", [3, 4, 5])
def test_galois_twist_moves_mu(n):
    W = twisted(n)
    F = W.field
    base = mu_and_generic_form(W)
    fixed = []
    for k in units_mod(n):
        tw = twisted_from_structure(W, galois_twist(W.structure, k))
        rep = mu_and_generic_form(tw)
        assert rep.mu == F.galois(k, base.mu)
        if rep.mu == base.mu and rep.commutation == base.commutation:
            fixed.append(k)
    assert fixed == base.stabilizer
    assert len(fixed) * base.k0_degree == totient(n)


@pytest.mark.parametrize("n", [2, 3])
def test_closure_scalars_lie_in_k0(n):
    """The truncated closure is a lower bound: its scalars sit inside Q(mu)."""
    W = twisted(n)
    F = W.field
    rep = mu_and_generic_form(W)
    st = compute_closure(W.structure, DegreeBound(1, 2))
    span = [F.to_q(rep.mu**e) for e in range(rep.mu_order)]
    for v in st.scalars():
        assert linalg.in_span(span, F.to_q(v))
    assert rep.k0_degree % fixed_field_degree(st.scalars(), F) == 0
