"""Independent reference computations shared by several test files."""

from invariant_forge import linalg
from invariant_forge.identities import multiply
from invariant_forge.structures import find_unit


def _left_matrix(m, u):
    n, F = m.dim, m.field
    cols = [multiply(m, u, [F.one() if k == j else F.zero() for k in range(n)]) for j in range(n)]
    return linalg.transpose(cols)


def tensor_commutator(W, g, h):
    """Scalar of U_g U_h U_g^-1 U_h^-1 using only the m tensor; inverses come from linear solves."""
    m, F, N = W.structure["m"], W.field, W.structure.dim
    unit = find_unit(W.structure)

    def U(x):
        return [F.one() if k == x else F.zero() for k in range(N)]

    def inv(u):
        return linalg.solve(_left_matrix(m, u), unit)

    w = multiply(m, multiply(m, multiply(m, U(g), U(h)), inv(U(g))), inv(U(h)))
    i = next(j for j, x in enumerate(unit) if x)
    assert [w[i] / unit[i] * x for x in unit] == w
    return w[i] / unit[i]
