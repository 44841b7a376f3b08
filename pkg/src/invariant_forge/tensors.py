"""Dense tensors on W^{p,q} = W^{(x)p} (x) (W*)^{(x)q} with exact entries.

Index convention: the p "up" indices come first, then the q "down" indices,
row-major.  A tensor of type (p, q) is read as a linear map W^{(x)q} -> W^{(x)p}
unless stated otherwise, and the general map/tensor identification is
:func:`reshape` ("output factors first").
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb

import numpy as np

from .errors import (
    DegreeMismatch,
    DimensionOverflow,
    DimMismatch,
    FieldMismatch,
    SlotOutOfRange,
    TypeArithmeticMismatch,
)
from .linalg import det
from .scalars import QQ


@dataclass(frozen=True)
class TensorType:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError("tensor type entries must be non-negative")

    def __add__(self, other):
        return TensorType(self.p + other.p, self.q + other.q)

    def __iter__(self):
        return iter((self.p, self.q))


class Tensor:
    """An element of W^{p,q}; immutable by convention."""

    __slots__ = ("p", "q", "dim", "field", "arr")

    def __init__(self, p, q, dim, field, arr):
        self.p, self.q, self.dim, self.field = p, q, dim, field
        self.arr = arr

    # constructors ---------------------------------------------------------
    @classmethod
    def zeros(cls, p, q, dim, field=QQ):
        arr = np.empty((dim,) * (p + q), dtype=object)
        z = field.zero()
        for idx in np.ndindex(arr.shape):
            arr[idx] = z
        return cls(p, q, dim, field, arr)

    @classmethod
    def from_array(cls, p, q, dim, field, values):
        arr = np.empty((dim,) * (p + q), dtype=object)
        src = np.asarray(values, dtype=object)
        if src.shape != arr.shape:
            raise DimMismatch(f"expected shape {arr.shape}, got {src.shape}")
        for idx in np.ndindex(arr.shape):
            arr[idx] = field.coerce(src[idx])
        return cls(p, q, dim, field, arr)

    @classmethod
    def from_entries(cls, p, q, dim, field, entries):
        """entries: mapping (up tuple, down tuple) -> scalar."""
        t = cls.zeros(p, q, dim, field)
        for (up, down), v in entries.items():
            t.arr[tuple(up) + tuple(down)] = field.coerce(v)
        return t

    @classmethod
    def scalar(cls, value, dim, field):
        arr = np.empty((), dtype=object)
        arr[()] = field.coerce(value)
        return cls(0, 0, dim, field, arr)

    # basic properties -----------------------------------------------------
    @property
    def ttype(self):
        return TensorType(self.p, self.q)

    @property
    def value(self):
        """The scalar held by a (0,0) tensor."""
        if self.p or self.q:
            raise TypeArithmeticMismatch("not a (0,0) tensor")
        return self.arr[()]

    def items(self):
        """Nonzero entries as ((up, down), value) pairs in index order."""
        for idx in np.ndindex(self.arr.shape):
            v = self.arr[idx]
            if v:
                yield (idx[: self.p], idx[self.p :]), v

    def flat(self):
        return list(self.arr.reshape(-1)) if self.arr.ndim else [self.arr[()]]

    def map(self, fn):
        out = np.empty(self.arr.shape, dtype=object)
        for idx in np.ndindex(out.shape):
            out[idx] = fn(self.arr[idx])
        return Tensor(self.p, self.q, self.dim, self.field, out)

    def _check(self, other):
        if self.field is not other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if self.dim != other.dim:
            raise DimMismatch(f"dim {self.dim} vs {other.dim}")

    def __add__(self, other):
        self._check(other)
        if self.ttype != other.ttype:
            raise TypeArithmeticMismatch("cannot add tensors of different types")
        return Tensor(self.p, self.q, self.dim, self.field, self.arr + other.arr)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self.map(lambda v: -v)

    def scale(self, c):
        c = self.field.coerce(c)
        return self.map(lambda v: c * v)

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return (
            self.ttype == other.ttype
            and self.dim == other.dim
            and self.field is other.field
            and all(a == b for a, b in zip(self.flat(), other.flat()))
        )

    __hash__ = None

    def is_zero(self):
        return not any(self.flat())

    def __repr__(self):
        nz = sum(1 for _ in self.items())
        return f"Tensor(type=({self.p},{self.q}), dim={self.dim}, {self.field}, nnz={nz})"


def identity_tensor(dim, field=QQ) -> Tensor:
    t = Tensor.zeros(1, 1, dim, field)
    for i in range(dim):
        t.arr[i, i] = field.one()
    return t


def basis_vector(i, dim, field=QQ) -> Tensor:
    t = Tensor.zeros(1, 0, dim, field)
    t.arr[i] = field.one()
    return t


def dual_vector(i, dim, field=QQ) -> Tensor:
    t = Tensor.zeros(0, 1, dim, field)
    t.arr[i] = field.one()
    return t


@dataclass
class Structure:
    """A vector space of dimension ``dim`` with named structure tensors."""

    dim: int
    field: object = QQ
    tensors: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        for name, t in self.tensors.items():
            if t.dim != self.dim:
                raise DimMismatch(f"tensor {name!r} has dim {t.dim}, structure {self.dim}")
            if t.field is not self.field:
                raise FieldMismatch(f"tensor {name!r} lives over {t.field}")

    def __getitem__(self, name):
        return self.tensors[name]

    def with_tensors(self, tensors):
        return Structure(self.dim, self.field, dict(tensors))

    def transform(self, P, P_inv=None):
        """Apply the basis change w -> P w to every tensor (an isomorphic copy)."""
        from .linalg import inverse

        if P_inv is None:
            P_inv = inverse(P)
        Pa = _matrix_array(P, self.field)
        Qt = _matrix_array(P_inv, self.field).T
        out = {}
        for name, t in self.tensors.items():
            arr = t.arr
            for s in range(t.p):
                arr = np.moveaxis(np.tensordot(Pa, arr, axes=([1], [s])), 0, s)
            for s in range(t.q):
                ax = t.p + s
                arr = np.moveaxis(np.tensordot(Qt, arr, axes=([1], [ax])), 0, ax)
            out[name] = Tensor(t.p, t.q, t.dim, t.field, np.asarray(arr, dtype=object))
        return self.with_tensors(out)


def _matrix_array(m, field):
    n = len(m)
    arr = np.empty((n, len(m[0]) if n else 0), dtype=object)
    for i, row in enumerate(m):
        for j, v in enumerate(row):
            arr[i, j] = field.coerce(v)
    return arr


# ---------------------------------------------------------------------------
# the generating operations


def tensor_product(x: Tensor, y: Tensor) -> Tensor:
    """x (x) y with up slots of x, up slots of y, down slots of x, down slots of y."""
    x._check(y)
    outer = np.multiply.outer(x.arr, y.arr)
    if not isinstance(outer, np.ndarray):
        val = np.empty((), dtype=object)
        val[()] = outer
        outer = val
    px, qx, py = x.p, x.q, y.p
    axes = (
        list(range(px))
        + list(range(px + qx, px + qx + py))
        + list(range(px, px + qx))
        + list(range(px + qx + py, outer.ndim))
    )
    arr = np.transpose(outer, axes) if outer.ndim else outer
    return Tensor(x.p + y.p, x.q + y.q, x.dim, x.field, np.asarray(arr, dtype=object))


def contract(x: Tensor, up: int = 0, down: int = 0) -> Tensor:
    """Evaluate down slot ``down`` against up slot ``up``."""
    if not (0 <= up < x.p and 0 <= down < x.q):
        raise SlotOutOfRange(f"slots ({up},{down}) out of range for type ({x.p},{x.q})")
    res = np.trace(x.arr, axis1=up, axis2=x.p + down)
    if x.p + x.q == 2:
        arr = np.empty((), dtype=object)
        arr[()] = x.field.coerce(res)
    else:
        arr = np.asarray(res, dtype=object)
    return Tensor(x.p - 1, x.q - 1, x.dim, x.field, arr)


def permute(x: Tensor, sigma=None, tau=None) -> Tensor:
    """Move up factor i to position sigma[i] and down factor j to tau[j].

    This is a left action: permute(permute(x, s, t), s2, t2) equals
    permute(x, s2 o s, t2 o t).
    """
    sigma = tuple(range(x.p)) if sigma is None else tuple(sigma)
    tau = tuple(range(x.q)) if tau is None else tuple(tau)
    if sorted(sigma) != list(range(x.p)) or sorted(tau) != list(range(x.q)):
        raise DegreeMismatch(f"permutations do not match type ({x.p},{x.q})")
    axes = [0] * (x.p + x.q)
    for i, s in enumerate(sigma):
        axes[s] = i
    for j, t in enumerate(tau):
        axes[x.p + t] = x.p + j
    if not axes:
        return x
    return Tensor(x.p, x.q, x.dim, x.field, np.transpose(x.arr, axes))


def compose_perm(s2, s1):
    """(s2 o s1)(i) = s2[s1[i]]."""
    return tuple(s2[i] for i in s1)


def reshape(x: Tensor, as_map_from: TensorType, as_map_to: TensorType):
    """Matrix (list of rows) of x read as a map W^{from} -> W^{to}.

    Requires type(x) = (to.p + from.q, to.q + from.p); rows are indexed by
    the output (up then down indices), columns by the input.
    """
    fp, fq = as_map_from
    tp, tq = as_map_to
    if (x.p, x.q) != (tp + fq, tq + fp):
        raise TypeArithmeticMismatch(
            f"type ({x.p},{x.q}) cannot be a map ({fp},{fq}) -> ({tp},{tq})"
        )
    n = x.dim
    axes = (
        list(range(tp))
        + list(range(x.p, x.p + tq))
        + list(range(x.p + tq, x.p + x.q))
        + list(range(tp, x.p))
    )
    arr = np.transpose(x.arr, axes) if axes else x.arr
    m = np.asarray(arr, dtype=object).reshape(n ** (tp + tq), n ** (fp + fq))
    return [list(row) for row in m]


def unreshape(matrix, as_map_from: TensorType, as_map_to: TensorType, dim, field) -> Tensor:
    """Inverse of :func:`reshape`."""
    fp, fq = as_map_from
    tp, tq = as_map_to
    p, q = tp + fq, tq + fp
    rows, cols = dim ** (tp + tq), dim ** (fp + fq)
    if len(matrix) != rows or any(len(r) != cols for r in matrix):
        raise TypeArithmeticMismatch(f"matrix must be {rows}x{cols}")
    src = np.empty((rows, cols), dtype=object)
    for i, r in enumerate(matrix):
        for j, v in enumerate(r):
            src[i, j] = field.coerce(v)
    arr = src.reshape((dim,) * (p + q))
    axes = (
        list(range(tp))
        + list(range(p + q - fq, p + q))
        + list(range(tp, tp + tq))
        + list(range(tp + tq, tp + tq + fp))
    )
    # arr currently ordered [to_up, to_down, from_up, from_down]; move to
    # [to_up, from_down | to_down, from_up]
    arr = np.transpose(arr, axes) if axes else arr
    return Tensor(p, q, dim, field, np.asarray(arr, dtype=object))


def as_map(x: Tensor):
    """Default map reading: W^{(x)q} -> W^{(x)p}."""
    return reshape(x, TensorType(x.q, 0), TensorType(x.p, 0))


def from_map(matrix, inputs: int, outputs: int, dim, field) -> Tensor:
    return unreshape(matrix, TensorType(inputs, 0), TensorType(outputs, 0), dim, field)


# ---------------------------------------------------------------------------
# Q-coordinates (cyclotomic entries expanded over the zeta-power basis)


def to_q_coords(x: Tensor) -> dict:
    qd = x.field.q_dim
    out = {}
    for pos, v in enumerate(x.flat()):
        if v:
            for k, c in enumerate(x.field.to_q(v)):
                if c:
                    out[pos * qd + k] = c
    return out


def from_q_coords(coords: dict, p, q, dim, field) -> Tensor:
    qd = field.q_dim
    t = Tensor.zeros(p, q, dim, field)
    flat = t.arr.reshape(-1) if t.arr.ndim else None
    buckets = {}
    for key, c in coords.items():
        pos, k = divmod(key, qd)
        buckets.setdefault(pos, [Fraction(0)] * qd)[k] = Fraction(c)
    for pos, cs in buckets.items():
        val = field.from_q(cs)
        if flat is None:
            t.arr[()] = val
        else:
            flat[pos] = val
    return t


# ---------------------------------------------------------------------------
# the antisymmetrizer map K_T


def _sign(perm):
    perm = list(perm)
    s = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            s = -s
    return s


def antisym_apply(T, k, fs, vs):
    """K_T(f_1 (x) ... (x) f_k (x) v_1 (x) ... (x) v_{k+1}) by the defining sum.

    T is a b x a matrix (U = K^a, V = K^b); fs are k covectors on V, vs are
    k + 1 vectors in U.
    """
    Tv = [[sum((T[r][c] * v[c] for c in range(len(v)) if v[c]), 0) for r in range(len(T))] for v in vs]
    a = len(vs[0])
    out = [0] * a
    for perm in itertools.permutations(range(k + 1)):
        coef = _sign(perm)
        for i in range(k):
            coef = coef * sum(
                (fs[i][r] * Tv[perm[i]][r] for r in range(len(T)) if fs[i][r]), 0
            )
            if not coef:
                break
        if coef:
            last = vs[perm[k]]
            out = [o + coef * x for o, x in zip(out, last)]
    return out


DEFAULT_BUDGET = 10**7


def antisym_image(T, k: int, budget: int = DEFAULT_BUDGET, method: str = "minors"):
    """Spanning set of Image(K_T) inside U = K^a, T given as a b x a matrix.

    ``method="minors"`` evaluates K_T on all basis inputs f = e^J, v = e_L with
    J a k-subset of rows and L a (k+1)-subset of columns; since K_T is
    alternating in the f's and in the v's, other basis inputs give 0 or the
    same vectors up to sign.  On such an input the defining signed sum is the
    Laplace expansion of a (k+1) x (k+1) determinant along its vector row.
    ``method="naive"`` runs the literal sum over every basis input.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    b = len(T)
    a = len(T[0]) if b else 0
    if method == "naive":
        count = (b**k) * (a ** (k + 1))
        if count > budget:
            raise DimensionOverflow(f"{count} basis evaluations exceed budget {budget}")
        out = []
        eye_b = [[1 if i == j else 0 for j in range(b)] for i in range(b)]
        eye_a = [[1 if i == j else 0 for j in range(a)] for i in range(a)]
        for J in itertools.product(range(b), repeat=k):
            for L in itertools.product(range(a), repeat=k + 1):
                v = antisym_apply(T, k, [eye_b[j] for j in J], [eye_a[l] for l in L])
                if any(v):
                    out.append(v)
        return out
    if method != "minors":
        raise ValueError(f"unknown method {method!r}")
    count = comb(b, k) * comb(a, k + 1)
    if count > budget:
        raise DimensionOverflow(f"{count} basis evaluations exceed budget {budget}")
    out = []
    for J in itertools.combinations(range(b), k):
        for L in itertools.combinations(range(a), k + 1):
            v = [0] * a
            for s in range(k + 1):
                cols = L[:s] + L[s + 1 :]
                minor = det([[T[j][c] for c in cols] for j in J])
                if minor:
                    v[L[s]] = minor if (k + s) % 2 == 0 else -minor
            if any(v):
                out.append(v)
    return out
