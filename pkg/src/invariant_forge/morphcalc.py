"""Presented subquotients of tensor powers and a small expression language.

A :class:`PresentedSpace` is S/R with S, R subspaces of W^{(x)k} given by
spanning sets.  Ambient linear maps are matrices between tensor powers;
maps between presented spaces are matrices in the cached quotient bases.
Expressions are trees of nodes evaluated against a :class:`Structure`.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass

from . import linalg
from .errors import (
    ExpressionTypeError,
    NotWellDefined,
    ParseError,
    SingularMatrix,
    TargetNotLine,
)
from .scalars import parse_scalar
from .tensors import Tensor, as_map, contract, from_map, permute


def _kron_vec(u, v):
    return [a * b for a in u for b in v]


def _kron(A, B):
    return [[a * b for a in ra for b in rb] for ra in A for rb in B]


class PresentedSpace:
    """The quotient S/R inside W^{(x)arity}.

    The quotient basis is a deterministic subset of ``span_S`` extending a
    basis of R (or, for tensor-product spaces, the products q_i (x) q_j in
    lexicographic order).
    """

    def __init__(self, dim, arity, field, span_S, span_R=(), q_basis=None, factors=None):
        self.dim, self.arity, self.field = dim, arity, field
        self.size = dim**arity
        zero = field.zero()
        self.span_S = [list(v) for v in span_S if any(v)]
        self.span_R = [list(v) for v in span_R if any(v)]
        idx_R = linalg.independent_subset(self.span_R)
        self.r_basis = [self.span_R[i] for i in idx_R]
        if q_basis is None:
            cand = self.r_basis + self.span_S
            idx = linalg.independent_subset(cand) if cand else []
            q_basis = [cand[i] for i in idx if i >= len(self.r_basis)]
        self.q_basis = [list(v) for v in q_basis]
        self.factors = factors
        self._zero = zero
        for v in self.r_basis:
            if not linalg.in_span(self.span_S, v):
                raise NotWellDefined("R is not contained in S", witness=v)

    @property
    def qdim(self):
        return len(self.q_basis)

    @property
    def key(self):
        return ("space", self.arity, _freeze(self.q_basis), _freeze(self.r_basis))

    def coords(self, v):
        """Coordinates of v (an element of S) in the quotient basis, else None."""
        basis = self.r_basis + self.q_basis
        if not any(v):
            return [self._zero] * self.qdim
        if not basis:
            return None
        sol = linalg.solve(linalg.transpose(basis), list(v))
        if sol is None:
            return None
        return [self.field.coerce(x) for x in sol[len(self.r_basis):]]

    def in_S(self, v):
        return linalg.in_span(self.r_basis + self.q_basis, v)

    def in_R(self, v):
        return linalg.in_span(self.r_basis, v)

    def lift(self, c):
        """Ambient representative of the quotient vector with coordinates c."""
        out = [self._zero] * self.size
        for ci, q in zip(c, self.q_basis):
            if ci:
                out = [o + ci * x for o, x in zip(out, q)]
        return out

    def shuffled(self, order):
        """Same space, re-presented with its spanning set of S permuted."""
        return PresentedSpace(
            self.dim, self.arity, self.field, [self.span_S[i] for i in order], self.span_R
        )

    def __repr__(self):
        return f"PresentedSpace(arity={self.arity}, dim={self.qdim}, R={len(self.r_basis)})"


def _freeze(vs):
    return tuple(tuple(v) for v in vs)


def whole_space(dim, arity, field):
    n = dim**arity
    one, zero = field.one(), field.zero()
    return PresentedSpace(dim, arity, field, [[one if i == j else zero for i in range(n)] for j in range(n)])


def tensor_spaces(A: PresentedSpace, B: PresentedSpace) -> PresentedSpace:
    """(S_A/R_A) (x) (S_B/R_B) with R = R_A (x) S_B + S_A (x) R_B."""
    if A.dim != B.dim or A.field is not B.field:
        raise ExpressionTypeError("tensor product of spaces over different W")
    SA = A.r_basis + A.q_basis
    SB = B.r_basis + B.q_basis
    S = [_kron_vec(a, b) for a in SA for b in SB]
    R = [_kron_vec(r, b) for r in A.r_basis for b in SB] + [
        _kron_vec(a, r) for a in SA for r in B.r_basis
    ]
    Q = [_kron_vec(a, b) for a in A.q_basis for b in B.q_basis]
    return PresentedSpace(A.dim, A.arity + B.arity, A.field, S, R, q_basis=Q, factors=(A, B))


class DualSpace:
    """Formal dual of a presented space, used only as a Gram target."""

    def __init__(self, space):
        self.space = space
        self.qdim = space.qdim

    @property
    def key(self):
        return ("dual", self.space.key)

    def __repr__(self):
        return f"DualSpace({self.space!r})"


@dataclass
class AmbientMap:
    """A linear map W^{(x)inputs} -> W^{(x)outputs} as a matrix."""

    matrix: list
    inputs: int
    outputs: int
    dim: int
    field: object

    @classmethod
    def of_tensor(cls, t: Tensor):
        return cls(as_map(t), t.q, t.p, t.dim, t.field)

    def to_tensor(self):
        return from_map(self.matrix, self.inputs, self.outputs, self.dim, self.field)

    def apply(self, v):
        return linalg.matvec(self.matrix, v) if self.matrix else []


@dataclass
class PresentedMap:
    dom: object
    cod: object
    matrix: list  # rows: cod basis, columns: dom basis

    def __post_init__(self):
        if len(self.matrix) != self.cod.qdim or any(len(r) != self.dom.qdim for r in self.matrix):
            raise ExpressionTypeError("matrix shape does not match the presented spaces")


# ---------------------------------------------------------------------------
# operations


def kernel_image(f, which: str) -> PresentedSpace:
    """Kernel or image of an ambient or presented map, as a presented space."""
    if isinstance(f, AmbientMap):
        dom = whole_space(f.dim, f.inputs, f.field)
        cod = whole_space(f.dim, f.outputs, f.field)
        f = PresentedMap(dom, cod, f.matrix)
    if not isinstance(f, PresentedMap):
        raise ExpressionTypeError("kernel/image need a map")
    dom, cod = f.dom, f.cod
    if isinstance(dom, DualSpace) or isinstance(cod, DualSpace):
        raise ExpressionTypeError("kernel/image of Gram maps are not supported")
    if which == "kernel":
        ns = linalg.nullspace(f.matrix, dom.qdim, dom.field.zero(), dom.field.one()) if f.matrix else [
            [dom.field.one() if i == j else dom.field.zero() for i in range(dom.qdim)] for j in range(dom.qdim)
        ]
        S = [dom.lift(c) for c in ns] + dom.r_basis
        return PresentedSpace(dom.dim, dom.arity, dom.field, S, dom.r_basis)
    if which == "image":
        cols = linalg.transpose(f.matrix) if f.matrix else [[] for _ in range(dom.qdim)]
        S = [cod.lift(c) for c in cols] + cod.r_basis
        return PresentedSpace(cod.dim, cod.arity, cod.field, S, cod.r_basis)
    raise ValueError("which must be 'kernel' or 'image'")


def induced_map(f: AmbientMap, dom: PresentedSpace, cod: PresentedSpace) -> PresentedMap:
    """The map S_dom/R_dom -> S_cod/R_cod induced by the ambient map f."""
    if f.inputs != dom.arity or f.outputs != cod.arity:
        raise ExpressionTypeError(
            f"map W^{f.inputs} -> W^{f.outputs} cannot act on spaces of arity "
            f"{dom.arity} -> {cod.arity}"
        )
    for v in dom.r_basis:
        if not cod.in_R(f.apply(v)):
            raise NotWellDefined("f does not send R_dom into R_cod", witness=v)
    cols = []
    for v in dom.q_basis:
        c = cod.coords(f.apply(v))
        if c is None:
            raise NotWellDefined("f does not send S_dom into S_cod", witness=v)
        cols.append(c)
    for v in dom.span_S:
        if not cod.in_S(f.apply(v)):
            raise NotWellDefined("f does not send S_dom into S_cod", witness=v)
    matrix = linalg.transpose(cols) if cols else [[] for _ in range(cod.qdim)]
    return PresentedMap(dom, cod, matrix)


def gram_matrix(f: PresentedMap):
    """beta[i][j] = coefficient of the line basis vector in f(q_i (x) q_j)."""
    if f.cod.qdim != 1:
        raise TargetNotLine(f"target has dimension {f.cod.qdim}, expected 1")
    if not isinstance(f.dom, PresentedSpace) or f.dom.factors is None:
        raise ExpressionTypeError("Gram currying needs a pairing on a tensor product space")
    A, B = f.dom.factors
    row = f.matrix[0]
    nb = B.qdim
    return [[row[i * nb + j] for j in range(nb)] for i in range(A.qdim)], A, B


def gram(f: PresentedMap, side: str) -> PresentedMap:
    """Curry a pairing Q (x) Q -> line into a map Q -> Q*.

    ``left`` has matrix beta (q_j goes to the functional q_i -> beta[i][j]),
    ``right`` has matrix beta transposed.
    """
    beta, A, B = gram_matrix(f)
    if side == "left":
        return PresentedMap(B, DualSpace(A), beta)
    if side == "right":
        return PresentedMap(A, DualSpace(B), linalg.transpose(beta) if beta else [])
    raise ValueError("side must be 'left' or 'right'")


# ---------------------------------------------------------------------------
# expressions


class Expr:
    pass


@dataclass(frozen=True)
class TensorRef(Expr):
    name: str


@dataclass(frozen=True)
class Identity(Expr):
    arity: int = 1


@dataclass(frozen=True)
class Whole(Expr):
    arity: int = 1


@dataclass(frozen=True)
class Const(Expr):
    value: object  # scalar literal text or number


@dataclass(frozen=True)
class Compose(Expr):
    outer: Expr
    inner: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class ScalarMul(Expr):
    c: object
    e: Expr


@dataclass(frozen=True)
class TensorProd(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Contract(Expr):
    e: Expr
    up: int
    down: int


@dataclass(frozen=True)
class Permute(Expr):
    e: Expr
    sigma: tuple
    tau: tuple


@dataclass(frozen=True)
class Kernel(Expr):
    e: Expr


@dataclass(frozen=True)
class Image(Expr):
    e: Expr


@dataclass(frozen=True)
class Quotient(Expr):
    space: Expr
    sub: Expr


@dataclass(frozen=True)
class InducedMap(Expr):
    e: Expr
    dom: Expr
    cod: Expr


@dataclass(frozen=True)
class GramLeft(Expr):
    e: Expr


@dataclass(frozen=True)
class GramRight(Expr):
    e: Expr


@dataclass(frozen=True)
class Invert(Expr):
    e: Expr


@dataclass(frozen=True)
class Trace(Expr):
    e: Expr


def _scalar(c, field):
    if isinstance(c, str):
        return parse_scalar(c, field)
    return field.coerce(c)


def _same(a, b):
    return a.key == b.key


def eval_expression(e: Expr, s, env=None):
    """Evaluate e against structure s; returns Tensor, PresentedMap, PresentedSpace or scalar."""
    v = _eval(e, s, env or {})
    if isinstance(v, AmbientMap):
        return v.to_tensor()
    return v


def _eval(e, s, env):
    F = s.field
    if isinstance(e, TensorRef):
        if e.name in env:
            return env[e.name]
        if e.name not in s.tensors:
            raise ExpressionTypeError(f"unknown tensor or binding {e.name!r}")
        return AmbientMap.of_tensor(s.tensors[e.name])
    if isinstance(e, Identity):
        n = s.dim**e.arity
        return AmbientMap(linalg.identity(n, F.one(), F.zero()), e.arity, e.arity, s.dim, F)
    if isinstance(e, Whole):
        return whole_space(s.dim, e.arity, F)
    if isinstance(e, Const):
        return _scalar(e.value, F)
    if isinstance(e, Compose):
        f, g = _eval(e.outer, s, env), _eval(e.inner, s, env)
        if isinstance(f, AmbientMap) and isinstance(g, AmbientMap):
            if f.inputs != g.outputs:
                raise ExpressionTypeError(f"compose: W^{g.outputs} fed into W^{f.inputs}")
            return AmbientMap(linalg.matmul(f.matrix, g.matrix), g.inputs, f.outputs, s.dim, F)
        if isinstance(f, PresentedMap) and isinstance(g, PresentedMap):
            if not _same(f.dom, g.cod):
                raise ExpressionTypeError("compose: codomain and domain differ")
            return PresentedMap(g.dom, f.cod, linalg.matmul(f.matrix, g.matrix) if f.matrix else [])
        raise ExpressionTypeError("compose needs two maps of the same kind")
    if isinstance(e, Add):
        f, g = _eval(e.left, s, env), _eval(e.right, s, env)
        if isinstance(f, AmbientMap) and isinstance(g, AmbientMap):
            if (f.inputs, f.outputs) != (g.inputs, g.outputs):
                raise ExpressionTypeError("add: map arities differ")
            return AmbientMap(_madd(f.matrix, g.matrix), f.inputs, f.outputs, s.dim, F)
        if isinstance(f, PresentedMap) and isinstance(g, PresentedMap):
            if not (_same(f.dom, g.dom) and _same(f.cod, g.cod)):
                raise ExpressionTypeError("add: maps between different spaces")
            return PresentedMap(f.dom, f.cod, _madd(f.matrix, g.matrix))
        if not isinstance(f, (AmbientMap, PresentedMap, PresentedSpace)) and not isinstance(
            g, (AmbientMap, PresentedMap, PresentedSpace)
        ):
            return f + g
        raise ExpressionTypeError("add needs two maps of the same kind")
    if isinstance(e, ScalarMul):
        c = _scalar(e.c, F) if not isinstance(e.c, Expr) else _eval(e.c, s, env)
        f = _eval(e.e, s, env)
        if isinstance(f, AmbientMap):
            return AmbientMap(_mscale(f.matrix, c), f.inputs, f.outputs, s.dim, F)
        if isinstance(f, PresentedMap):
            return PresentedMap(f.dom, f.cod, _mscale(f.matrix, c))
        if isinstance(f, (PresentedSpace, DualSpace)):
            raise ExpressionTypeError("cannot scale a space")
        return c * f
    if isinstance(e, TensorProd):
        f, g = _eval(e.left, s, env), _eval(e.right, s, env)
        if isinstance(f, PresentedSpace) and isinstance(g, PresentedSpace):
            return tensor_spaces(f, g)
        if isinstance(f, AmbientMap) and isinstance(g, AmbientMap):
            return AmbientMap(_kron(f.matrix, g.matrix), f.inputs + g.inputs, f.outputs + g.outputs, s.dim, F)
        if isinstance(f, PresentedMap) and isinstance(g, PresentedMap):
            if isinstance(f.dom, DualSpace) or isinstance(f.cod, DualSpace) or isinstance(
                g.dom, DualSpace
            ) or isinstance(g.cod, DualSpace):
                raise ExpressionTypeError("tensor product of Gram maps is not supported")
            return PresentedMap(
                tensor_spaces(f.dom, g.dom), tensor_spaces(f.cod, g.cod), _kron(f.matrix, g.matrix)
            )
        raise ExpressionTypeError("tensor needs two spaces or two maps of the same kind")
    if isinstance(e, (Contract, Permute)):
        f = _eval(e.e, s, env)
        if not isinstance(f, AmbientMap):
            raise ExpressionTypeError("contract/permute act on ambient maps")
        t = f.to_tensor()
        t = contract(t, e.up, e.down) if isinstance(e, Contract) else permute(t, e.sigma, e.tau)
        return AmbientMap.of_tensor(t)
    if isinstance(e, Kernel):
        return kernel_image(_eval(e.e, s, env), "kernel")
    if isinstance(e, Image):
        return kernel_image(_eval(e.e, s, env), "image")
    if isinstance(e, Quotient):
        A, B = _eval(e.space, s, env), _eval(e.sub, s, env)
        if not (isinstance(A, PresentedSpace) and isinstance(B, PresentedSpace)):
            raise ExpressionTypeError("quotient needs two spaces")
        if A.arity != B.arity:
            raise ExpressionTypeError("quotient: arities differ")
        for v in B.r_basis + B.q_basis:
            if not A.in_S(v):
                raise NotWellDefined("subspace is not contained in the space", witness=v)
        return PresentedSpace(A.dim, A.arity, F, A.span_S, A.r_basis + B.r_basis + B.q_basis)
    if isinstance(e, InducedMap):
        f = _eval(e.e, s, env)
        dom, cod = _eval(e.dom, s, env), _eval(e.cod, s, env)
        if not isinstance(f, AmbientMap):
            raise ExpressionTypeError("induced needs an ambient map")
        if not (isinstance(dom, PresentedSpace) and isinstance(cod, PresentedSpace)):
            raise ExpressionTypeError("induced needs presented domain and codomain")
        return induced_map(f, dom, cod)
    if isinstance(e, (GramLeft, GramRight)):
        f = _eval(e.e, s, env)
        if not isinstance(f, PresentedMap):
            raise ExpressionTypeError("Gram currying needs an induced pairing")
        return gram(f, "left" if isinstance(e, GramLeft) else "right")
    if isinstance(e, Invert):
        f = _eval(e.e, s, env)
        if isinstance(f, AmbientMap):
            if f.inputs != f.outputs:
                raise ExpressionTypeError("invert needs a square map")
            return AmbientMap(linalg.inverse(f.matrix), f.outputs, f.inputs, s.dim, F)
        if isinstance(f, PresentedMap):
            if f.dom.qdim != f.cod.qdim:
                raise SingularMatrix("map between spaces of different dimension")
            inv = linalg.inverse(f.matrix) if f.matrix else []
            return PresentedMap(f.cod, f.dom, inv)
        if isinstance(f, (PresentedSpace, DualSpace)):
            raise ExpressionTypeError("cannot invert a space")
        from .scalars import invert_scalar

        return invert_scalar(f)
    if isinstance(e, Trace):
        f = _eval(e.e, s, env)
        if isinstance(f, AmbientMap):
            if f.inputs != f.outputs:
                raise ExpressionTypeError("trace needs an endomorphism")
            m = f.matrix
        elif isinstance(f, PresentedMap):
            if not _same(f.dom, f.cod):
                raise ExpressionTypeError("trace needs an endomorphism")
            m = f.matrix
        else:
            raise ExpressionTypeError("trace needs a map")
        acc = F.zero()
        for i in range(len(m)):
            acc = acc + m[i][i]
        return acc
    raise ExpressionTypeError(f"unknown expression node {e!r}")


def _madd(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def _mscale(A, c):
    return [[c * a for a in r] for r in A]


# ---------------------------------------------------------------------------
# textual syntax


_UNARY = {
    "kernel": Kernel,
    "image": Image,
    "gramL": GramLeft,
    "gramR": GramRight,
    "invert": Invert,
    "trace": Trace,
}
_BINARY = {"compose": Compose, "add": Add, "tensor": TensorProd, "quotient": Quotient}


def parse_expression(text: str) -> Expr:
    """Parse function-call syntax, e.g. ``trace(compose(invert(gramR(p)), gramL(p)))``.

    Recognised calls: id(k), whole(k), compose, add, sub, neg, scale(c, e),
    tensor, contract(e, up, down), permute(e, [..], [..]), kernel, image,
    quotient(space, sub), induced(f, dom, cod), gramL, gramR, invert, trace.
    Bare names refer to structure tensors or bindings.
    """
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"bad expression {text!r}: {exc.msg}") from None
    return _build(tree.body, text)


def _ints(node, text):
    if not isinstance(node, (ast.List, ast.Tuple)):
        raise ParseError(f"expected a list of integers in {text!r}")
    return tuple(_int(x, text) for x in node.elts)


def _int(node, text):
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    raise ParseError(f"expected an integer in {text!r}")


def _build(node, text):
    if isinstance(node, ast.Name):
        if node.id in ("id", "identity"):
            return Identity(1)
        if node.id == "whole":
            return Whole(1)
        return TensorRef(node.id)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, str)):
        return Const(node.value)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return ScalarMul(-1, _build(node.operand, text))
    if not isinstance(node, ast.Call) or not isinstance(node.func, ast.Name):
        raise ParseError(f"unsupported syntax {ast.unparse(node)!r} in {text!r}")
    name, args = node.func.id, node.args
    if node.keywords:
        raise ParseError(f"keyword arguments are not supported in {text!r}")

    def need(k):
        if len(args) != k:
            raise ParseError(f"{name} takes {k} argument(s) in {text!r}")

    if name in ("id", "identity", "whole"):
        if len(args) > 1:
            raise ParseError(f"{name} takes at most one argument")
        k = _int(args[0], text) if args else 1
        return Identity(k) if name != "whole" else Whole(k)
    if name in _UNARY:
        need(1)
        return _UNARY[name](_build(args[0], text))
    if name in _BINARY:
        need(2)
        return _BINARY[name](_build(args[0], text), _build(args[1], text))
    if name == "sub":
        need(2)
        return Add(_build(args[0], text), ScalarMul(-1, _build(args[1], text)))
    if name == "neg":
        need(1)
        return ScalarMul(-1, _build(args[0], text))
    if name == "scale":
        need(2)
        c = args[0]
        if isinstance(c, ast.Constant) and isinstance(c.value, (int, str)):
            coef = c.value
        else:
            coef = ast.unparse(c)
        return ScalarMul(coef, _build(args[1], text))
    if name == "contract":
        need(3)
        return Contract(_build(args[0], text), _int(args[1], text), _int(args[2], text))
    if name == "permute":
        need(3)
        return Permute(_build(args[0], text), _ints(args[1], text), _ints(args[2], text))
    if name == "induced":
        need(3)
        return InducedMap(*(_build(a, text) for a in args))
    raise ParseError(f"unknown operation {name!r} in {text!r}")


def eval_program(bindings, expression, s):
    """Evaluate named bindings in order, then the final expression."""
    env = {}
    for name, text in bindings:
        env[name] = _eval(parse_expression(text), s, env)
    v = _eval(parse_expression(expression), s, env)
    if isinstance(v, AmbientMap):
        return v.to_tensor()
    return v
