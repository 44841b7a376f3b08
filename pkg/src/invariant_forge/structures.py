"""Builders and invariant extractors for twisted group algebras and Taft-type
comodule algebras, Galois twisting of structures, and unit finding.

Twisted group algebras have basis U_g with U_x U_y = alpha(x, y) U_{xy}.
Taft-type algebras are generated by g~_i, t_i (one pair per Taft factor)
with the relations

    g~_i^{n_i} = a_i,   t_i^{n_i} = b_i,   g~_i t_i = zeta^{c_i} t_i g~_i,
    g~_i g~_j = zeta^{b_ij} g~_j g~_i,   g~_i t_j = t_j g~_i  (i != j),
    t_i t_j - t_j t_i = lambda_ij g~_i^{-1} g~_j^{-1},

and the coaction rho(g~_i) = g~_i (x) g_i, rho(t_i) = t_i (x) g_i^{-1} +
1 (x) g_i^{-1} x_i into the tensor product of Taft Hopf algebras.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from functools import reduce

from . import linalg
from .errors import (
    BadGaloisIndex,
    CocycleInvalid,
    InternalCheckFailed,
    MissingDecomposition,
    NotAbelian,
    NotCyclotomic,
    NotTaftShaped,
    ParamInvalid,
    WordNotRelator,
)
from .identities import multiply
from .scalars import invert_scalar, scalar_str, totient, units_mod
from .tensors import Structure, Tensor

# ---------------------------------------------------------------------------
# groups and cocycles


@dataclass
class GroupTable:
    """Finite group given by its multiplication table on indices 0..N-1."""

    table: list
    identity: int = 0
    decomposition: list | None = None  # [(generator index, order), ...]
    labels: list | None = None
    inverse: list = dc_field(init=False)

    def __post_init__(self):
        N = len(self.table)
        if any(len(r) != N for r in self.table):
            raise ParamInvalid("group table must be square")
        for x in range(N):
            if self.table[self.identity][x] != x or self.table[x][self.identity] != x:
                raise ParamInvalid("identity element does not act trivially")
        inv = []
        for x in range(N):
            y = next((y for y in range(N) if self.table[x][y] == self.identity), None)
            if y is None or self.table[y][x] != self.identity:
                raise ParamInvalid(f"element {x} has no two-sided inverse")
            inv.append(y)
        self.inverse = inv
        for x, y, z in itertools.product(range(N), repeat=3):
            if self.table[self.table[x][y]][z] != self.table[x][self.table[y][z]]:
                raise ParamInvalid(f"table is not associative at {(x, y, z)}")
        if self.labels is None:
            self.labels = [str(i) for i in range(N)]
        if self.decomposition is not None:
            prod = math.prod(o for _, o in self.decomposition)
            if prod != N:
                raise ParamInvalid("orders in the decomposition do not multiply to |G|")
            reach = {self.identity}
            for g, o in self.decomposition:
                if self.power(g, o) != self.identity:
                    raise ParamInvalid(f"generator {g} does not have order dividing {o}")
                reach = {self.mul(x, self.power(g, e)) for x in reach for e in range(o)}
            if len(reach) != N:
                raise ParamInvalid("decomposition generators do not generate the group")

    @property
    def order(self):
        return len(self.table)

    def mul(self, x, y):
        return self.table[x][y]

    def power(self, x, e):
        r = self.identity
        for _ in range(e):
            r = self.table[r][x]
        return r

    def commutator(self, g, h):
        """g h g^{-1} h^{-1}."""
        t, inv = self.table, self.inverse
        return t[t[t[g][h]][inv[g]]][inv[h]]

    def is_abelian(self):
        N = self.order
        return all(self.table[x][y] == self.table[y][x] for x in range(N) for y in range(N))


def abelian_group(orders) -> GroupTable:
    """Product of cyclic groups; element (e_1, ..., e_r) has index in lexicographic order."""
    orders = list(orders)
    elems = list(itertools.product(*(range(o) for o in orders)))
    index = {e: i for i, e in enumerate(elems)}
    table = [
        [index[tuple((a + b) % o for a, b, o in zip(x, y, orders))] for y in elems] for x in elems
    ]
    gens = []
    for k, o in enumerate(orders):
        gens.append((index[tuple(1 if i == k else 0 for i in range(len(orders)))], o))
    labels = [",".join(map(str, e)) for e in elems]
    return GroupTable(table, index[tuple(0 for _ in orders)], gens, labels)


def element_index(G: GroupTable, exps) -> int:
    """Index of prod x_i^{e_i} for the decomposition generators x_i."""
    if G.decomposition is None:
        raise MissingDecomposition("group has no cyclic decomposition")
    r = G.identity
    for (g, o), e in zip(G.decomposition, exps):
        r = G.mul(r, G.power(g, e % o))
    return r


@dataclass
class Cocycle2:
    values: list  # N x N scalars

    def __call__(self, x, y):
        return self.values[x][y]


def cocycle_from_function(G: GroupTable, fn, field) -> Cocycle2:
    N = G.order
    return Cocycle2([[field.coerce(fn(x, y)) for y in range(N)] for x in range(N)])


def zeta_cocycle(n: int, field, power: int = 1) -> tuple:
    """C_n x C_n with alpha(g^i h^j, g^k h^l) = zeta_n^{power * j * k}."""
    G = abelian_group([n, n])
    z = field.root(n) if field.kind == "cyclotomic" else _rational_root(n)
    elems = list(itertools.product(range(n), range(n)))
    alpha = cocycle_from_function(G, lambda x, y: z ** ((power * elems[x][1] * elems[y][0]) % n), field)
    return G, alpha


def _rational_root(n):
    if n == 1:
        return 1
    if n == 2:
        return -1
    raise ParamInvalid(f"a primitive {n}-th root of unity is not rational")


@dataclass
class CocycleCheck:
    ok: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def check_cocycle(G: GroupTable, alpha: Cocycle2) -> CocycleCheck:
    N = G.order
    if len(alpha.values) != N or any(len(r) != N for r in alpha.values):
        raise CocycleInvalid("cocycle size does not match the group")
    for x in range(N):
        for y in range(N):
            if not alpha(x, y):
                return CocycleCheck(False, (x, y, None))
    t = G.table
    for x, y, z in itertools.product(range(N), repeat=3):
        if alpha(x, y) * alpha(t[x][y], z) != alpha(y, z) * alpha(x, t[y][z]):
            return CocycleCheck(False, (x, y, z))
    return CocycleCheck(True)


# ---------------------------------------------------------------------------
# associativity and units


def sparse_products(m: Tensor):
    """(i, j) -> {k: coeff} for the nonzero products e_i e_j."""
    out = {}
    for (up, down), v in m.items():
        out.setdefault((down[0], down[1]), {})[up[0]] = v
    return out


def check_associative(m: Tensor):
    """First basis triple (i, j, k) with (e_i e_j) e_k != e_i (e_j e_k), else None."""
    prods = sparse_products(m)
    n = m.dim

    def times(vec, k, left):
        out = {}
        for a, c in vec.items():
            for o, d in prods.get((a, k) if left else (k, a), {}).items():
                out[o] = out.get(o, 0) + c * d
        return {o: c for o, c in out.items() if c}

    for i in range(n):
        for j in range(n):
            ij = prods.get((i, j), {})
            for k in range(n):
                lhs = times(ij, k, True)
                rhs = times(prods.get((j, k), {}), i, False)
                if lhs != rhs:
                    return (i, j, k)
    return None


def find_unit(structure, name="m"):
    """The two-sided unit of the multiplication ``name`` as a vector, or None."""
    m = structure.tensors[name]
    n, F = structure.dim, structure.field
    rows, rhs = [], []
    for o in range(n):
        for i in range(n):
            target = F.one() if o == i else F.zero()
            rows.append([m.arr[o, a, i] for a in range(n)])
            rhs.append(target)
            rows.append([m.arr[o, i, a] for a in range(n)])
            rhs.append(target)
    sol = linalg.solve(rows, rhs)
    if sol is None:
        return None
    return [F.coerce(x) for x in sol]


# ---------------------------------------------------------------------------
# twisted group algebras


@dataclass
class TwistedGroupAlgebra:
    group: GroupTable
    alpha: Cocycle2
    field: object
    structure: Structure

    # elements of the form c * U_g are pairs (c, g)
    def mul(self, x, y):
        (c1, g1), (c2, g2) = x, y
        return (c1 * c2 * self.alpha(g1, g2), self.group.mul(g1, g2))

    def U(self, g):
        return (self.field.one(), g)

    def inv(self, g):
        """U_g^{-1} = U_{g^{-1}} / (alpha(g, g^{-1}) alpha(1, 1))."""
        G, e = self.group, self.group.identity
        gi = G.inverse[g]
        return (invert_scalar(self.alpha(g, gi) * self.alpha(e, e)), gi)

    def scalar_value(self, x):
        """x = c U_1 as a multiple of the unit alpha(1,1)^{-1} U_1."""
        c, g = x
        if g != self.group.identity:
            raise ValueError("element is not a scalar")
        e = self.group.identity
        return c * self.alpha(e, e)


def build_twisted_group_algebra(G: GroupTable, alpha: Cocycle2, field) -> TwistedGroupAlgebra:
    chk = check_cocycle(G, alpha)
    if not chk:
        raise CocycleInvalid(f"cocycle identity fails at {chk.witness}")
    N = G.order
    m = Tensor.zeros(1, 2, N, field)
    for x in range(N):
        for y in range(N):
            m.arr[G.mul(x, y), x, y] = field.coerce(alpha(x, y))
    e = G.identity
    unit = Tensor.zeros(1, 0, N, field)
    unit.arr[e] = invert_scalar(field.coerce(alpha(e, e)))
    tensors = {"m": m, "unit": unit}
    for g in range(N):
        P = Tensor.zeros(1, 1, N, field)
        P.arr[g, g] = field.one()
        tensors[f"e_{g}"] = P
    bad = check_associative(m)
    if bad is not None:
        raise InternalCheckFailed(f"associativity fails at {bad}")
    return TwistedGroupAlgebra(G, alpha, field, Structure(N, field, tensors))


def commutator_scalar(W: TwistedGroupAlgebra, g, h):
    """c_{g,h} with U_g U_h U_g^{-1} U_h^{-1} = c_{g,h} U_{[g,h]}."""
    w = W.mul(W.mul(W.mul(W.U(g), W.U(h)), W.inv(g)), W.inv(h))
    return w[0]


def commutator_element(W: TwistedGroupAlgebra, g, h):
    return W.mul(W.mul(W.mul(W.U(g), W.U(h)), W.inv(g)), W.inv(h))


def alpha_tilde(W: TwistedGroupAlgebra, word):
    """Scalar value of w_{g_1,h_1} ... w_{g_r,h_r} for a relator word."""
    G = W.group
    acc = (W.field.one() / W.alpha(G.identity, G.identity), G.identity)  # the unit
    for g, h in word:
        acc = W.mul(acc, commutator_element(W, g, h))
    if acc[1] != G.identity:
        raise WordNotRelator(f"product of commutators is {G.labels[acc[1]]}, not the identity")
    return W.scalar_value(acc)


def _root_exponent(c, field):
    """(e, N) with c = w^e, w a generator of the roots of unity in the field."""
    if field.kind == "rational":
        if c == 1:
            return 0, 2
        if c == -1:
            return 1, 2
        raise ParamInvalid(f"{c} is not a root of unity")
    n = field.order
    if n % 2 == 0:
        N, w = n, field.zeta
    else:
        N, w = 2 * n, -field.zeta_power((n + 1) // 2)
    r = field.one()
    for e in range(N):
        if r == c:
            return e, N
        r = r * w
    raise ParamInvalid(f"{scalar_str(c)} is not a root of unity")


def root_order(c, field) -> int:
    e, N = _root_exponent(c, field)
    return N // math.gcd(e, N)


def combine_roots(roots, field):
    """A generator of the cyclic group generated by the given roots of unity.

    Exponents depend only on the orders involved, so the construction
    commutes with Galois automorphisms.
    """
    mu, a = field.one(), 1
    for c in roots:
        b = root_order(c, field)
        L = math.lcm(a, b)
        a_part, b_part = 1, 1
        for p in _primes(L):
            va, vb = _val(a, p), _val(b, p)
            if va >= vb:
                a_part *= p**va
            else:
                b_part *= p**vb
        mu = (mu ** (a // a_part)) * (c ** (b // b_part))
        a = L
    return mu, a


def _primes(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _val(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass
class GenericFormReport:
    mu: object
    mu_order: int
    k0_degree: int
    stabilizer: list
    generators: list  # (label, order)
    powers: list  # scalar value of U_{x_i}^{n_i}
    commutation: dict  # (j, i) with j > i -> c_{x_j, x_i}

    def base_ring(self):
        units = ", ".join(f"a{i + 1}^(+-1)" for i in range(len(self.generators)))
        if self.mu_order <= 2:
            return f"Q[{units}]"
        return f"Q(mu)[{units}], mu of order {self.mu_order}"

    def render(self):
        lines = [
            f"mu = {scalar_str(self.mu)} (order {self.mu_order})",
            f"K0 = Q(mu), degree {self.k0_degree}",
            "generic form: generators " + ", ".join(f"U{i + 1}" for i in range(len(self.generators))),
        ]
        for i, (lab, o) in enumerate(self.generators):
            lines.append(f"  U{i + 1}^{o} = a{i + 1}   (x{i + 1} = {lab}; in this algebra a{i + 1} = {scalar_str(self.powers[i])})")
        for (j, i), c in sorted(self.commutation.items()):
            lines.append(f"  U{j + 1}*U{i + 1} = {scalar_str(c)} * U{i + 1}*U{j + 1}")
        lines.append(f"base ring: {self.base_ring()}")
        return "\n".join(lines)

    def to_json(self):
        return {
            "mu": scalar_str(self.mu),
            "mu_order": self.mu_order,
            "k0_degree": self.k0_degree,
            "galois_stabilizer": self.stabilizer,
            "generators": [{"label": l, "order": o} for l, o in self.generators],
            "generator_powers": [scalar_str(p) for p in self.powers],
            "commutation": [
                {"pair": [j + 1, i + 1], "c": scalar_str(c)} for (j, i), c in sorted(self.commutation.items())
            ],
            "base_ring": self.base_ring(),
            "text": self.render(),
        }


def mu_and_generic_form(W: TwistedGroupAlgebra) -> GenericFormReport:
    G, F = W.group, W.field
    if not G.is_abelian():
        raise NotAbelian("mu and the generic form need an abelian group")
    if G.decomposition is None:
        raise MissingDecomposition("supply a cyclic decomposition of the group")
    gens = G.decomposition
    comm = {}
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            comm[(j, i)] = commutator_scalar(W, gens[j][0], gens[i][0])
    mu, order = combine_roots([comm[k] for k in sorted(comm)], F)
    powers = []
    for g, o in gens:
        x = W.U(g)
        acc = x
        for _ in range(o - 1):
            acc = W.mul(acc, x)
        powers.append(W.scalar_value(acc))
    stab = [k for k in units_mod(F.order) if F.galois(k, mu) == mu] if F.kind == "cyclotomic" else [1]
    return GenericFormReport(
        mu=mu,
        mu_order=order,
        k0_degree=totient(order),
        stabilizer=stab,
        generators=[(G.labels[g], o) for g, o in gens],
        powers=powers,
        commutation=comm,
    )


def twisted_from_structure(W: TwistedGroupAlgebra, structure: Structure) -> TwistedGroupAlgebra:
    """Re-read alpha from the multiplication tensor of a (twisted) copy."""
    m = structure.tensors["m"]
    G = W.group
    vals = [[m.arr[G.mul(x, y), x, y] for y in range(G.order)] for x in range(G.order)]
    return TwistedGroupAlgebra(G, Cocycle2(vals), structure.field, structure)


def galois_twist(structure: Structure, k: int) -> Structure:
    """Apply sigma_k: zeta -> zeta^k to every entry of every tensor."""
    F = structure.field
    if F.kind == "rational_function":
        raise NotCyclotomic("Galois twisting needs a cyclotomic field")
    if F.kind == "rational":
        return structure.with_tensors(structure.tensors)
    if math.gcd(k, F.order) != 1:
        raise BadGaloisIndex(f"gcd({k}, {F.order}) != 1")
    return structure.with_tensors({name: t.map(lambda v: F.galois(k, v)) for name, t in structure.tensors.items()})


# ---------------------------------------------------------------------------
# Taft-type comodule algebras


@dataclass(frozen=True)
class TaftFactor:
    n: int
    c: int
    a: object
    b: object


@dataclass
class TaftProductParams:
    factors: list
    bexp: list  # b_ij exponents (z x z integers)
    lam: list  # lambda_ij scalars (z x z); lambda_ii = 0

    @property
    def z(self):
        return len(self.factors)

    @property
    def order(self):
        return reduce(math.lcm, (f.n for f in self.factors), 1)


@dataclass
class TaftParams:
    n: int
    a: object
    b: object


def validate_product_params(p: TaftProductParams, field):
    """Raise ParamInvalid naming the first violated constraint."""
    z, n = p.z, p.order
    if field.kind != "cyclotomic" or field.order % n:
        raise ParamInvalid(f"field must be cyclotomic of order divisible by {n}")
    if len(p.bexp) != z or any(len(r) != z for r in p.bexp):
        raise ParamInvalid("b_ij must be a z x z matrix")
    if len(p.lam) != z or any(len(r) != z for r in p.lam):
        raise ParamInvalid("lambda_ij must be a z x z matrix")
    zeta = field.root(n)
    for i, f in enumerate(p.factors):
        if f.n < 2:
            raise ParamInvalid(f"factor {i + 1}: n must be >= 2")
        if n // math.gcd(f.c, n) != f.n:
            raise ParamInvalid(f"factor {i + 1}: zeta^c_i must be a primitive n_i-th root of unity")
        if not field.coerce(f.a):
            raise ParamInvalid(f"factor {i + 1}: a_i must be nonzero")
    B = p.bexp
    for i in range(z):
        if B[i][i] % n:
            raise ParamInvalid(f"zeta^b_ii must be 1 (i = {i + 1})")
        for j in range(z):
            if (B[i][j] + B[j][i]) % n:
                raise ParamInvalid(f"zeta^(b_ij + b_ji) must be 1 (i, j = {i + 1}, {j + 1})")
            for nk in (p.factors[i].n, p.factors[j].n):
                if (B[i][j] * nk) % n:
                    raise ParamInvalid(
                        f"zeta^b_ij must be an n_i-th and n_j-th root of unity (i, j = {i + 1}, {j + 1})"
                    )
    for i in range(z):
        if field.coerce(p.lam[i][i]):
            raise ParamInvalid("lambda_ii must be 0")
        for j in range(i + 1, z):
            lij, lji = field.coerce(p.lam[i][j]), field.coerce(p.lam[j][i])
            expected = -(zeta ** (B[i][j] % n)) * lij
            if lji and lji != expected:
                raise ParamInvalid(
                    f"lambda_{j + 1}{i + 1} must equal -zeta^b_{i + 1}{j + 1} lambda_{i + 1}{j + 1}"
                )
            if not lij and not lji:
                continue
            ci, cj = p.factors[i].c, p.factors[j].c
            if (B[i][j] - cj) % n or (B[i][j] + ci) % n:
                raise ParamInvalid(
                    f"connected indices {i + 1}, {j + 1} require b_ij = -c_i = c_j (mod {n})"
                )
            for k in range(z):
                if k not in (i, j) and (B[i][k] + B[j][k]) % n:
                    raise ParamInvalid(
                        f"connected indices {i + 1}, {j + 1} require b_ik + b_jk = 0 (mod {n}) for k = {k + 1}"
                    )


class _TaftRewriter:
    """Normal-form multiplication on monomials g~^alpha t^beta."""

    def __init__(self, p: TaftProductParams, field):
        self.p, self.F = p, field
        self.z = p.z
        self.n = p.order
        self.ns = [f.n for f in p.factors]
        self.zeta = field.root(self.n)
        self.zpow = [self.zeta ** e for e in range(self.n)]
        self.a = [field.coerce(f.a) for f in p.factors]
        self.b = [field.coerce(f.b) for f in p.factors]
        self.a_inv = [invert_scalar(x) for x in self.a]
        z, B = self.z, p.bexp
        lam = [[field.zero()] * z for _ in range(z)]
        for i in range(z):
            for j in range(i + 1, z):
                lij = field.coerce(p.lam[i][j])
                lam[i][j] = lij
                lam[j][i] = -self.zpow[B[i][j] % self.n] * lij
        self.lam = lam
        self._cache = {}

    def z_(self, e):
        return self.zpow[e % self.n]

    def monomials(self):
        ranges = [range(k) for k in self.ns]
        return [
            (al, be) for al in itertools.product(*ranges) for be in itertools.product(*ranges)
        ]

    # right multiplication of a normal monomial by a single letter
    def times_letter(self, mono, letter):
        key = (mono, letter)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        res = self._times_letter(mono, letter)
        self._cache[key] = res
        return res

    def _times_letter(self, mono, letter):
        al, be = mono
        kind, i = letter
        F, p = self.F, self.p
        if kind == "g":
            e = -p.factors[i].c * be[i] - sum(p.bexp[i][j] * al[j] for j in range(i + 1, self.z))
            coef = self.z_(e)
            al2 = list(al)
            al2[i] += 1
            if al2[i] == self.ns[i]:
                al2[i] = 0
                coef = coef * self.a[i]
            return {(tuple(al2), be): coef}
        # letter t_k
        k = i
        last = max((m for m in range(self.z) if be[m]), default=None)
        if last is None or last <= k:
            be2 = list(be)
            be2[k] += 1
            coef = F.one()
            if be2[k] == self.ns[k]:
                be2[k] = 0
                coef = self.b[k]
            return {(al, tuple(be2)): coef}
        # mono = M' t_last with last > k: t_last t_k = t_k t_last + lam[last][k] g_last^-1 g_k^-1
        be1 = list(be)
        be1[last] -= 1
        prefix = {(al, tuple(be1)): F.one()}
        out = self.mul_letters(self.mul_letters(prefix, [("t", k)]), [("t", last)])
        lam = self.lam[last][k]
        if lam:
            extra = self.mul_letters(
                prefix, [("g", last)] * (self.ns[last] - 1) + [("g", k)] * (self.ns[k] - 1)
            )
            c = lam * self.a_inv[last] * self.a_inv[k]
            out = _axpy(out, extra, c)
        return out

    def mul_letters(self, vec, letters):
        for L in letters:
            acc = {}
            for mono, c in vec.items():
                for m2, d in self.times_letter(mono, L).items():
                    v = acc.get(m2, 0) + c * d
                    if v:
                        acc[m2] = v
                    else:
                        acc.pop(m2, None)
            vec = acc
        return vec

    def letters_of(self, mono):
        al, be = mono
        out = []
        for i in range(self.z):
            out += [("g", i)] * al[i]
        for i in range(self.z):
            out += [("t", i)] * be[i]
        return out

    def mul(self, m1, m2):
        return self.mul_letters({m1: self.F.one()}, self.letters_of(m2))


def _axpy(y, x, c):
    out = dict(y)
    for k, v in x.items():
        w = out.get(k, 0) + c * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


class _HopfProduct:
    """Tensor product of Taft Hopf algebras, basis prod g_i^{p_i} x_i^{q_i}."""

    def __init__(self, rw: _TaftRewriter):
        self.rw = rw

    def mul(self, h1, h2):
        (p1, q1), (p2, q2) = h1, h2
        e = 0
        p, q = [], []
        for i, ni in enumerate(self.rw.ns):
            if q1[i] + q2[i] >= ni:
                return None
            e -= self.rw.p.factors[i].c * q1[i] * p2[i]
            p.append((p1[i] + p2[i]) % ni)
            q.append(q1[i] + q2[i])
        return self.rw.z_(e), (tuple(p), tuple(q))


@dataclass
class TaftAlgebra:
    params: TaftProductParams
    field: object
    structure: Structure
    monomials: list
    coaction: dict  # monomial index -> {(w index, h monomial): coeff}

    @property
    def z(self):
        return self.params.z


def _operator_matrix(rw, monos, index, rho, functional):
    n = len(monos)
    F = rw.F
    M = [[F.zero()] * n for _ in range(n)]
    for col in range(n):
        for (w, h), c in rho[col].items():
            v = functional(h)
            if v:
                M[w][col] = M[w][col] + c * v
    return M


def build_taft_product(p: TaftProductParams, field, check: bool = True) -> TaftAlgebra:
    validate_product_params(p, field)
    rw = _TaftRewriter(p, field)
    H = _HopfProduct(rw)
    monos = rw.monomials()
    index = {m: i for i, m in enumerate(monos)}
    N = len(monos)
    F = field
    m = Tensor.zeros(1, 2, N, F)
    for i, m1 in enumerate(monos):
        for j, m2 in enumerate(monos):
            for mono, c in rw.mul(m1, m2).items():
                m.arr[index[mono], i, j] = c
    if check:
        bad = check_associative(m)
        if bad is not None:
            raise InternalCheckFailed(f"associativity fails on basis triple {bad}")
    z = p.z
    zero_al = tuple(0 for _ in range(z))
    one_mono = (zero_al, zero_al)
    unit = Tensor.zeros(1, 0, N, F)
    unit.arr[index[one_mono]] = F.one()

    # coaction: W (x) H elements as {(w monomial, h monomial): coeff}
    def tmul(x, y):
        out = {}
        for (w1, h1), c1 in x.items():
            for (w2, h2), c2 in y.items():
                hp = H.mul(h1, h2)
                if hp is None:
                    continue
                s, h = hp
                for w, d in rw.mul(w1, w2).items():
                    key = (w, h)
                    v = out.get(key, 0) + c1 * c2 * s * d
                    if v:
                        out[key] = v
                    else:
                        out.pop(key, None)
        return out

    def e(i):
        return tuple(1 if k == i else 0 for k in range(z))

    rho_letter = {}
    for i in range(z):
        ni = rw.ns[i]
        gi = (e(i), zero_al)
        ginv = (tuple((ni - 1) if k == i else 0 for k in range(z)), zero_al)
        ginv_x = (tuple((ni - 1) if k == i else 0 for k in range(z)), e(i))
        rho_letter[("g", i)] = {((e(i), zero_al), gi): F.one()}
        rho_letter[("t", i)] = {((zero_al, e(i)), ginv): F.one(), (one_mono, ginv_x): F.one()}
    one_h = (zero_al, zero_al)
    rho = {}
    for idx, mono in enumerate(monos):
        acc = {(one_mono, one_h): F.one()}
        for L in rw.letters_of(mono):
            acc = tmul(acc, rho_letter[L])
        rho[idx] = {(index[w], h): c for (w, h), c in acc.items()}
    if check:
        for i, m1 in enumerate(monos):
            r1 = {(monos[w], h): c for (w, h), c in rho[i].items()}
            for j, m2 in enumerate(monos):
                r2 = {(monos[w], h): c for (w, h), c in rho[j].items()}
                lhs = {}
                for mono, c in rw.mul(m1, m2).items():
                    for (w, h), d in rho[index[mono]].items():
                        key = (monos[w], h)
                        v = lhs.get(key, 0) + c * d
                        if v:
                            lhs[key] = v
                        else:
                            lhs.pop(key, None)
                if lhs != tmul(r1, r2):
                    raise InternalCheckFailed(f"coaction is not multiplicative at {(i, j)}")
    tensors = {"m": m, "unit": unit}
    ops = {}
    for i in range(z):
        ci = p.factors[i].c

        def gamma(h, i=i, ci=ci):
            pp, qq = h
            return rw.z_(ci * pp[i]) if not any(qq) else F.zero()

        def xi(h, i=i):
            pp, qq = h
            return F.one() if qq[i] == 1 and not any(q for k, q in enumerate(qq) if k != i) else F.zero()

        G = _operator_matrix(rw, monos, index, rho, gamma)
        X = _operator_matrix(rw, monos, index, rho, xi)
        ops[i] = (G, X)
        tensors[f"gamma_{i + 1}"] = Tensor.from_array(1, 1, N, F, G)
        tensors[f"xi_{i + 1}"] = Tensor.from_array(1, 1, N, F, X)
    if check:
        I = linalg.identity(N, F.one(), F.zero())
        for i in range(z):
            G, X = ops[i]
            ni, zc = rw.ns[i], rw.z_(p.factors[i].c)
            P = I
            for k in range(1, ni + 1):
                P = linalg.matmul(P, G)
                if (P == I) != (k == ni):
                    raise InternalCheckFailed(f"gamma_{i + 1} does not have order {ni}")
            P = I
            for _ in range(ni):
                P = linalg.matmul(P, X)
            if any(any(r) for r in P):
                raise InternalCheckFailed(f"xi_{i + 1}^{ni} != 0")
            lhs = linalg.matmul(linalg.matmul(G, X), linalg.inverse(G))
            if lhs != [[zc * v for v in r] for r in X]:
                raise InternalCheckFailed(f"gamma xi gamma^-1 != zeta^c xi for factor {i + 1}")
    return TaftAlgebra(p, F, Structure(N, F, tensors), monos, rho)


def build_taft(p: TaftParams, field, check: bool = True) -> TaftAlgebra:
    """Single Taft comodule algebra with g~^n = a, t^n = b, g~ t g~^{-1} = zeta t."""
    if p.n < 2:
        raise ParamInvalid("n must be >= 2")
    if field.kind != "cyclotomic" or field.order % p.n:
        raise ParamInvalid(f"field must be cyclotomic of order divisible by {p.n}")
    prod = TaftProductParams([TaftFactor(p.n, 1, p.a, p.b)], [[0]], [[0]])
    alg = build_taft_product(prod, field, check=check)
    t = dict(alg.structure.tensors)
    t["gamma"] = t.pop("gamma_1")
    t["xi"] = t.pop("xi_1")
    alg.structure = alg.structure.with_tensors(t)
    return alg


# ---------------------------------------------------------------------------
# extraction from structure tensors alone


def _mat(t: Tensor):
    return [list(r) for r in t.arr]


def _kernel(rows, n, F):
    rows = [r for r in rows if any(r)]
    if not rows:
        return [[F.one() if i == j else F.zero() for i in range(n)] for j in range(n)]
    return [[F.coerce(x) for x in v] for v in linalg.nullspace(rows)]


def _eigen_rows(M, lam):
    n = len(M)
    return [[M[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]


class _Alg:
    def __init__(self, structure):
        self.s = structure
        self.m = structure.tensors["m"]
        self.F = structure.field
        self.n = structure.dim
        u = find_unit(structure)
        if u is None:
            raise NotTaftShaped("the algebra has no unit")
        self.unit = u

    def mul(self, u, v):
        return multiply(self.m, u, v)

    def power(self, u, k):
        acc = self.unit
        for _ in range(k):
            acc = self.mul(acc, u)
        return acc

    def scalar_of(self, v, what):
        """c with v = c * unit."""
        i = next(k for k, x in enumerate(self.unit) if x)
        c = v[i] / self.unit[i]
        if [c * x for x in self.unit] != list(v):
            raise NotTaftShaped(f"{what} is not a scalar multiple of the unit")
        return self.F.coerce(c)

    def left_minus_right(self, u, lam):
        """Matrix of x -> u x - lam x u."""
        cols = []
        for j in range(self.n):
            e = [self.F.one() if k == j else self.F.zero() for k in range(self.n)]
            a, b = self.mul(u, e), self.mul(e, u)
            cols.append([x - lam * y for x, y in zip(a, b)])
        return linalg.transpose(cols)


@dataclass
class TaftInvariants:
    a: object
    b: object
    n: int
    note: str = "a is determined only up to n-th powers (depends on the chosen g~ line)"

    def to_json(self):
        return {"n": self.n, "a": scalar_str(self.a), "b": scalar_str(self.b), "a_note": self.note}


def extract_taft_invariants(structure, n: int | None = None) -> TaftInvariants:
    """Recover (a mod n-th powers, b) from m, gamma, xi alone."""
    F = structure.field
    N = structure.dim
    if n is None:
        n = math.isqrt(N)
    if n * n != N:
        raise NotTaftShaped(f"dimension {N} is not a square")
    for name in ("m", "gamma", "xi"):
        if name not in structure.tensors:
            raise NotTaftShaped(f"missing tensor {name!r}")
    A = _Alg(structure)
    zeta = F.root(n)
    G, X = _mat(structure.tensors["gamma"]), _mat(structure.tensors["xi"])
    Wi = []
    for i in range(n):
        basis = _kernel(_eigen_rows(G, zeta**i), N, F)
        if len(basis) != n:
            raise NotTaftShaped(f"gamma eigenspace W_{i} has dimension {len(basis)}, expected {n}")
        Wi.append(basis)
    kerX = _kernel(X, N, F)
    if len(kerX) != n:
        raise NotTaftShaped(f"ker(xi) has dimension {len(kerX)}, expected {n}")
    line = _kernel(_eigen_rows(G, zeta) + X, N, F)
    if len(line) != 1:
        raise NotTaftShaped(f"W_1 meet ker(xi) has dimension {len(line)}, expected 1")
    u = line[0]
    a = A.scalar_of(A.power(u, n), "u^n")
    # bi-eigenspaces W_{i,j}: gamma eigenvalue zeta^i, u-conjugation eigenvalue zeta^j
    for i in range(n):
        for j in range(n):
            sp = _kernel(_eigen_rows(G, zeta**i) + A.left_minus_right(u, zeta**j), N, F)
            if len(sp) != 1:
                raise NotTaftShaped(f"W_{i},{j} has dimension {len(sp)}, expected 1")
    sp = _kernel(_eigen_rows(G, zeta ** (n - 1)) + A.left_minus_right(u, zeta), N, F)
    tvec = sp[0]
    s = linalg.matvec(X, tvec)
    c = A.scalar_of(s, "xi(t)")
    if not c:
        raise NotTaftShaped("xi vanishes on W_{-1,1}")
    tvec = [x / c for x in tvec]
    b = A.scalar_of(A.power(tvec, n), "t^n")
    return TaftInvariants(a=a, b=b, n=n)


@dataclass
class ProductInvariants:
    a: list
    b: list
    zeta_b: list  # zeta^{b_ij}
    b_exponents: list
    lam: dict  # (i, j), i < j -> raw lambda_ij w.r.t. the extracted g~ lines
    Lambda: dict  # connected (i, j), i < j -> (t_i t_j - t_j t_i)^{n_i}
    cycles: list  # (cycle tuple, value)

    def to_json(self):
        return {
            "a": [scalar_str(x) for x in self.a],
            "b": [scalar_str(x) for x in self.b],
            "zeta_b": [[scalar_str(x) for x in r] for r in self.zeta_b],
            "b_exponents": self.b_exponents,
            "lambda_raw": {f"{i + 1},{j + 1}": scalar_str(v) for (i, j), v in sorted(self.lam.items())},
            "Lambda": {f"{i + 1},{j + 1}": scalar_str(v) for (i, j), v in sorted(self.Lambda.items())},
            "cycles": [{"cycle": [k + 1 for k in c], "value": scalar_str(v)} for c, v in self.cycles],
            "note": "a_i and lambda_ij are raw values that depend on the chosen g~_i lines",
        }


def extract_product_invariants(structure, hopf) -> ProductInvariants:
    """Invariants of a product-of-Taft comodule algebra from its tensors.

    ``hopf`` lists (n_i, c_i) for each Taft factor (data of the Hopf
    algebra, not of the cocycle).
    """
    import networkx as nx

    F = structure.field
    N = structure.dim
    z = len(hopf)
    n = reduce(math.lcm, (ni for ni, _ in hopf), 1)
    zeta = F.root(n)
    A = _Alg(structure)
    try:
        Gs = [_mat(structure.tensors[f"gamma_{i + 1}"]) for i in range(z)]
        Xs = [_mat(structure.tensors[f"xi_{i + 1}"]) for i in range(z)]
    except KeyError as exc:
        raise NotTaftShaped(f"missing operator tensor {exc}") from None
    us = []
    for i in range(z):
        rows = []
        for j in range(z):
            rows += _eigen_rows(Gs[j], zeta ** (hopf[i][1] % n) if i == j else F.one())
            rows += Xs[j]
        line = _kernel(rows, N, F)
        if len(line) != 1:
            raise NotTaftShaped(f"g~_{i + 1} line has dimension {len(line)}, expected 1")
        us.append(line[0])
    a = [A.scalar_of(A.power(u, hopf[i][0]), f"u_{i + 1}^n") for i, u in enumerate(us)]
    zb = [[None] * z for _ in range(z)]
    bexp = [[0] * z for _ in range(z)]
    for i in range(z):
        for j in range(z):
            lhs, rhs = A.mul(us[i], us[j]), A.mul(us[j], us[i])
            k = next(x for x, v in enumerate(rhs) if v)
            c = lhs[k] / rhs[k]
            if [c * v for v in rhs] != lhs:
                raise NotTaftShaped(f"g~_{i + 1}, g~_{j + 1} do not skew-commute")
            zb[i][j] = F.coerce(c)
            bexp[i][j] = next((e for e in range(n) if zeta**e == c), None)
    ts = []
    for i in range(z):
        ci = hopf[i][1]
        rows = []
        for j in range(z):
            rows += _eigen_rows(Gs[j], zeta ** ((-ci) % n) if i == j else F.one())
            rows += A.left_minus_right(us[j], zeta ** (ci % n) if i == j else F.one())
        for j in range(z):
            if j != i:
                rows += Xs[j]
        sp = _kernel(rows, N, F)
        if len(sp) != 1:
            raise NotTaftShaped(f"t_{i + 1} is not determined (solution space dimension {len(sp)})")
        v = sp[0]
        c = A.scalar_of(linalg.matvec(Xs[i], v), f"xi_{i + 1}(t_{i + 1})")
        if not c:
            raise NotTaftShaped(f"xi_{i + 1} vanishes on the t_{i + 1} line")
        ts.append([x / c for x in v])
    b = [A.scalar_of(A.power(t, hopf[i][0]), f"t_{i + 1}^n") for i, t in enumerate(ts)]
    lam, Lam = {}, {}
    inv_u = [
        [x * invert_scalar(a[i]) for x in A.power(u, hopf[i][0] - 1)] for i, u in enumerate(us)
    ]
    graph = nx.Graph()
    graph.add_nodes_from(range(z))
    for i in range(z):
        for j in range(i + 1, z):
            comm = [x - y for x, y in zip(A.mul(ts[i], ts[j]), A.mul(ts[j], ts[i]))]
            base = A.mul(inv_u[i], inv_u[j])
            k = next(x for x, v in enumerate(base) if v)
            c = comm[k] / base[k]
            if [c * v for v in base] != comm:
                raise NotTaftShaped(f"t_{i + 1} t_{j + 1} - t_{j + 1} t_{i + 1} is not a multiple of g~^-1 g~^-1")
            lam[(i, j)] = F.coerce(c)
            if c:
                graph.add_edge(i, j)
                Lam[(i, j)] = A.scalar_of(A.power(comm, hopf[i][0]), f"Lambda_{i + 1}{j + 1}")

    def lam_of(i, j):
        return lam[(i, j)] if i < j else lam[(j, i)] * -(zb[j][i])

    cycles = []
    for cyc in sorted(tuple(c) for c in nx.simple_cycles(graph) if len(c) >= 3):
        val = F.one()
        m = len(cyc)
        for k in range(m):
            x = lam_of(cyc[k], cyc[(k + 1) % m])
            val = val * (x if k % 2 == 0 else invert_scalar(x))
        cycles.append((cyc, val))
    return ProductInvariants(a, b, zb, bexp, lam, Lam, cycles)
