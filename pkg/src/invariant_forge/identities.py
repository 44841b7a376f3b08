"""Multilinear and group-graded polynomial identities of an algebra.

Permutations of {0..d-1} are listed lexicographically (``itertools``); the
column of sigma is the map (v_1, ..., v_d) -> v_{sigma(1)} v_{sigma(2)} ...
v_{sigma(d)} built from the left-normed product ((v v) v) ...  A coefficient
vector (a_sigma) is an identity when the corresponding combination of maps
vanishes; it is rendered as sum a_sigma X_{sigma(1)}*...*X_{sigma(d)}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial

import numpy as np

from . import linalg
from .errors import BudgetExceeded, NotAGrading, WrongTensorType
from .scalars import scalar_str
from .tensors import Tensor

DEFAULT_BUDGET = 10**7


@dataclass
class IdentitySpace:
    degree: int
    perms: list  # one-line notation, 0-based, lexicographic
    basis: list  # coefficient vectors indexed like perms
    grades: tuple | None = None

    @property
    def dimension(self):
        return len(self.basis)

    def render(self, vec) -> str:
        return render_identity(vec, self.perms)

    def to_json(self):
        out = {
            "degree": self.degree,
            "dimension": self.dimension,
            "permutations": [[i + 1 for i in p] for p in self.perms],
            "basis": [[scalar_str(v) for v in vec] for vec in self.basis],
            "polynomials": [self.render(v) for v in self.basis],
        }
        if self.grades is not None:
            out["grades"] = list(self.grades)
        return out


def render_identity(vec, perms) -> str:
    terms = []
    for c, p in zip(vec, perms):
        if not c:
            continue
        mono = "*".join(f"X{i + 1}" for i in p)
        s = scalar_str(c)
        neg = False
        if s == "1":
            coef = ""
        elif s == "-1":
            coef, neg = "", True
        elif s.startswith("-") and not any(ch in s[1:] for ch in "+-"):
            coef, neg = s[1:] + "*", True
        elif any(ch in s.lstrip("-") for ch in "+-"):
            coef = f"({s})*"
        else:
            coef = s + "*"
        terms.append((neg, coef + mono))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] else "") + terms[0][1]
    for neg, body in terms[1:]:
        out += (" - " if neg else " + ") + body
    return out


def _mult_tensor(structure, name="m"):
    if name not in structure.tensors:
        raise WrongTensorType(f"structure has no tensor named {name!r}")
    m = structure.tensors[name]
    if (m.p, m.q) != (1, 2):
        raise WrongTensorType(f"{name!r} has type ({m.p},{m.q}), expected (1,2)")
    return m


def left_normed(m: Tensor, d: int) -> np.ndarray:
    """Array P[o, i_1, ..., i_d] of the left-normed d-fold product."""
    P = m.arr
    for _ in range(d - 2):
        # new[o, j, i_1..i_k] = sum_a m[o, a, j] P[a, i_1..i_k]
        P = np.tensordot(m.arr, P, axes=([1], [0]))
        P = np.moveaxis(P, 1, -1)
    return P


def _normalize(vec):
    lead = next((x for x in vec if x), None)
    if lead is None:
        return vec
    inv = 1 / lead
    return [x * inv for x in vec]


def perm_columns(m: Tensor, d: int):
    """Flattened maps sigma . m^{d-1} for all sigma, in lexicographic order."""
    P = left_normed(m, d) if d >= 2 else None
    perms = list(itertools.permutations(range(d)))
    cols = []
    for sigma in perms:
        inv = [0] * d
        for k, l in enumerate(sigma):
            inv[l] = k
        axes = [0] + [1 + inv[l] for l in range(d)]
        cols.append(list(np.transpose(P, axes).reshape(-1)))
    return perms, cols


def multilinear_identity_space(structure, d: int, budget: int = DEFAULT_BUDGET, name="m") -> IdentitySpace:
    m = _mult_tensor(structure, name)
    if d < 2:
        raise WrongTensorType("degree must be at least 2")
    n = structure.dim
    cost = factorial(d) * n ** (d + 1)
    if cost > budget:
        raise BudgetExceeded(f"{cost} entries exceed budget {budget}")
    perms, cols = perm_columns(m, d)
    rows = [r for r in linalg.transpose(cols) if any(r)]
    F = structure.field
    if rows:
        ns = linalg.nullspace(rows)
    else:
        ns = [[F.one() if i == j else F.zero() for i in range(len(perms))] for j in range(len(perms))]
    basis = [[F.coerce(x) for x in _normalize(v)] for v in ns]
    return IdentitySpace(d, perms, basis)


# ---------------------------------------------------------------------------
# graded identities


def grading_projections(structure, prefix="e_") -> dict:
    """Tensors named e_<label> of type (1,1), keyed by label."""
    return {
        name[len(prefix):]: t
        for name, t in structure.tensors.items()
        if name.startswith(prefix) and (t.p, t.q) == (1, 1)
    }


def check_grading(structure, projections: dict):
    n, F = structure.dim, structure.field
    if not projections:
        raise NotAGrading("no grading projections e_<g> present")
    mats = {g: [list(r) for r in t.arr] for g, t in projections.items()}
    total = [[F.zero()] * n for _ in range(n)]
    for g, E in mats.items():
        if linalg.matmul(E, E) != E:
            raise NotAGrading(f"projection e_{g} is not idempotent")
        total = [[a + b for a, b in zip(r, s)] for r, s in zip(total, E)]
    if total != linalg.identity(n, F.one(), F.zero()):
        raise NotAGrading("projections do not sum to the identity")
    keys = list(mats)
    for i, g in enumerate(keys):
        for h in keys[i + 1 :]:
            if any(any(x) for x in linalg.matmul(mats[g], mats[h])):
                raise NotAGrading(f"projections e_{g} and e_{h} are not orthogonal")
    return mats


def _component_basis(E):
    cols = linalg.transpose(E)
    idx = linalg.independent_subset(cols)
    return [cols[i] for i in idx]


def multiply(m: Tensor, u, v):
    """Product of two vectors under the (1,2) tensor m."""
    n = m.dim
    out = []
    for o in range(n):
        acc = 0
        for i in range(n):
            if not u[i]:
                continue
            for j in range(n):
                c = m.arr[o, i, j]
                if c and v[j]:
                    acc = acc + c * u[i] * v[j]
        out.append(m.field.coerce(acc))
    return out


def evaluate_word(m: Tensor, args, sigma):
    """Left-normed product args[sigma[0]] args[sigma[1]] ..."""
    acc = args[sigma[0]]
    for k in sigma[1:]:
        acc = multiply(m, acc, args[k])
    return acc


def evaluate_identity(m: Tensor, vec, perms, args):
    """sum_sigma a_sigma * (args permuted by sigma, multiplied left-normed)."""
    total = [m.field.zero()] * m.dim
    for c, sigma in zip(vec, perms):
        if c:
            w = evaluate_word(m, args, sigma)
            total = [t + c * x for t, x in zip(total, w)]
    return total


def graded_identity_space(structure, grades, budget: int = DEFAULT_BUDGET, name="m") -> GradedIdentitySpace:
    m = _mult_tensor(structure, name)
    proj = grading_projections(structure)
    mats = check_grading(structure, proj)
    grades = tuple(str(g) for g in grades)
    for g in grades:
        if g not in mats:
            raise NotAGrading(f"no projection e_{g}")
    comps = [_component_basis(mats[g]) for g in grades]
    d = len(grades)
    perms = list(itertools.permutations(range(d)))
    choices = list(itertools.product(*comps))
    cost = len(perms) * len(choices) * structure.dim
    if cost > budget:
        raise BudgetExceeded(f"{cost} entries exceed budget {budget}")
    F = structure.field
    rows = []
    for args in choices:
        words = [evaluate_word(m, list(args), sigma) for sigma in perms]
        for o in range(structure.dim):
            row = [w[o] for w in words]
            if any(row):
                rows.append(row)
    if rows:
        ns = linalg.nullspace(rows)
    else:
        ns = [[F.one() if i == j else F.zero() for i in range(len(perms))] for j in range(len(perms))]
    basis = [[F.coerce(x) for x in _normalize(v)] for v in ns]
    return GradedIdentitySpace(d, perms, basis, grades)


class GradedIdentitySpace(IdentitySpace):
    pass
