"""Truncated closure X^{p,q} of a structure and the field of invariants.

X^{p,q} is the smallest family of Q-subspaces of W^{p,q} that contains the
structure tensors and Id_W and is stable under tensor products, contractions
and slot permutations.  Only types with p <= P and q <= Q are tracked, so the
computed spaces are lower bounds for the untruncated ones.

Each space is kept as a Q-echelon basis over flattened Q-coordinates
(cyclotomic entries expanded over powers of zeta).  Rounds are semi-naive:
a round only forms operations that involve at least one element found in
the previous round.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import BudgetExceeded, ParamInvalid, UnsupportedField
from .linalg import QEchelon
from .scalars import invert_scalar, scalar_str, units_mod
from .tensors import (
    Tensor,
    contract,
    from_q_coords,
    identity_tensor,
    permute,
    tensor_product,
    to_q_coords,
)


@dataclass(frozen=True)
class DegreeBound:
    P: int
    Q: int
    max_rounds: int = 64

    def __post_init__(self):
        if self.P < 0 or self.Q < 0:
            raise ParamInvalid("degree bounds must be non-negative")
        if self.max_rounds < 1:
            raise ParamInvalid("max_rounds must be >= 1")

    def types(self):
        return [(p, q) for p in range(self.P + 1) for q in range(self.Q + 1)]

    def admits(self, p, q):
        return p <= self.P and q <= self.Q


@dataclass
class ClosureState:
    bound: DegreeBound
    dim: int
    field: object
    spaces: dict = dc_field(default_factory=dict)  # (p,q) -> QEchelon
    elements: dict = dc_field(default_factory=dict)  # (p,q) -> list[Tensor]
    converged: bool = False
    rounds: int = 0
    evaluations: int = 0

    def dimension(self, p, q) -> int:
        return len(self.spaces[(p, q)])

    def dimensions(self) -> dict:
        return {t: len(e) for t, e in sorted(self.spaces.items())}

    def contains(self, x: Tensor) -> bool:
        key = (x.p, x.q)
        if key not in self.spaces:
            return False
        return self.spaces[key].contains(to_q_coords(x))

    def basis(self, p, q) -> list:
        """The echelon basis of X^{p,q} as tensors."""
        return [
            from_q_coords(row, p, q, self.dim, self.field)
            for _, row in sorted(self.spaces[(p, q)].rows.items())
        ]

    def scalars(self) -> list:
        """Echelon Q-basis of X^{0,0} as field elements."""
        return [t.value for t in self.basis(0, 0)]


def _check_field(field):
    if field.kind == "rational_function":
        raise UnsupportedField(
            "closure over Q(t) may not terminate; use the morphism calculus instead"
        )


def compute_closure(structure, bound: DegreeBound, seeds=None, budget: int = 2_000_000) -> ClosureState:
    """Fixpoint of the generating operations within ``bound``.

    ``seeds`` (a list of tensors) replaces the default seeds (structure
    tensors plus Id_W); ``budget`` caps the number of candidate tensors.
    """
    field = structure.field
    _check_field(field)
    dim = structure.dim
    st = ClosureState(bound, dim, field)
    for t in bound.types():
        st.spaces[t] = QEchelon()
        st.elements[t] = []
    if seeds is None:
        seeds = list(structure.tensors.values()) + [identity_tensor(dim, field)]
    new = {t: [] for t in bound.types()}

    def offer(x):
        key = (x.p, x.q)
        st.evaluations += 1
        if st.evaluations > budget:
            raise BudgetExceeded(f"more than {budget} candidate tensors")
        if st.spaces[key].insert(to_q_coords(x)):
            st.elements[key].append(x)
            fresh[key].append(x)

    fresh = new
    for x in seeds:
        if not bound.admits(x.p, x.q):
            raise ParamInvalid(f"seed of type ({x.p},{x.q}) exceeds the bound ({bound.P},{bound.Q})")
        offer(x)

    types = bound.types()
    for rnd in range(bound.max_rounds):
        current = fresh
        if not any(current.values()):
            st.converged = True
            break
        fresh = {t: [] for t in types}
        st.rounds = rnd + 1
        old = {t: st.elements[t][: len(st.elements[t]) - len(current[t])] for t in types}
        # unary operations on new elements
        for t in types:
            p, q = t
            for x in current[t]:
                for i in range(p):
                    for j in range(q):
                        offer(contract(x, i, j))
                for i in range(p - 1):
                    sigma = list(range(p))
                    sigma[i], sigma[i + 1] = i + 1, i
                    offer(permute(x, sigma, None))
                for j in range(q - 1):
                    tau = list(range(q))
                    tau[j], tau[j + 1] = j + 1, j
                    offer(permute(x, None, tau))
        # binary products: new x all, then old x new
        for ta in types:
            for tb in types:
                if not bound.admits(ta[0] + tb[0], ta[1] + tb[1]):
                    continue
                all_b = old[tb] + current[tb]
                for x in current[ta]:
                    for y in all_b:
                        offer(tensor_product(x, y))
                for x in old[ta]:
                    for y in current[tb]:
                        offer(tensor_product(x, y))
    else:
        st.converged = not any(fresh.values())
    return st


@dataclass
class InvariantFieldReport:
    q_basis: list
    field_closed: bool
    galois_stabilizer: list
    fixed_field_degree: int
    field_order: int
    bound: DegreeBound
    converged: bool
    dimensions: dict

    def to_json(self):
        return {
            "bound": [self.bound.P, self.bound.Q],
            "converged": self.converged,
            "dimensions": {f"{p},{q}": d for (p, q), d in sorted(self.dimensions.items())},
            "x00_basis": [scalar_str(s) for s in self.q_basis],
            "field_closed": self.field_closed,
            "field_order": self.field_order,
            "galois_stabilizer": list(self.galois_stabilizer),
            "fixed_field_degree": self.fixed_field_degree,
            "note": "computed spaces are lower bounds for the untruncated closure",
        }


def invariant_field_report(st: ClosureState) -> InvariantFieldReport:
    """Check that X^{0,0} is a field and identify it by its Galois stabilizer."""
    field = st.field
    basis = st.scalars()
    span = st.spaces[(0, 0)]

    def member(s):
        return span.contains({k: c for k, c in enumerate(field.to_q(s)) if c})

    closed = bool(basis) and member(field.one())
    if closed:
        for i, a in enumerate(basis):
            for b in basis[i:]:
                if not member(a * b):
                    closed = False
                    break
            if not closed:
                break
    if closed:
        closed = all(member(invert_scalar(a)) for a in basis)
    n = getattr(field, "order", 1)
    if field.kind == "cyclotomic":
        units = units_mod(n)
        H = [k for k in units if all(field.galois(k, b) == b for b in basis)]
        degree = len(units) // len(H)
    else:
        H, degree = [1], 1
    return InvariantFieldReport(
        q_basis=basis,
        field_closed=closed,
        galois_stabilizer=H,
        fixed_field_degree=degree,
        field_order=n,
        bound=st.bound,
        converged=st.converged,
        dimensions=st.dimensions(),
    )


def stabilizer_of(values, field) -> list:
    """{k in (Z/n)^x : sigma_k fixes every value}."""
    if field.kind != "cyclotomic":
        return [1]
    return [k for k in units_mod(field.order) if all(field.galois(k, v) == v for v in values)]


def fixed_field_degree(values, field) -> int:
    if field.kind != "cyclotomic":
        return 1
    return len(units_mod(field.order)) // len(stabilizer_of(values, field))
