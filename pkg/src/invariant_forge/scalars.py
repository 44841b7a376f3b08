"""Exact scalars: rationals, cyclotomic fields Q(zeta_n), rational functions Q(t).

Rationals are plain :class:`fractions.Fraction` values.  Cyclotomic elements
are stored reduced modulo the cyclotomic polynomial, so two elements are
equal iff their coefficient tuples agree.  Rational functions are kept with a
monic, coprime denominator.

Polynomials are tuples of Fractions, lowest degree first, with no trailing
zeros (the zero polynomial is the empty tuple).
"""

from __future__ import annotations

import ast
import math
import re
from fractions import Fraction
from functools import lru_cache

from .errors import (
    BadGaloisIndex,
    FieldError,
    FieldMismatch,
    NotCyclotomic,
    ZeroInversion,
)

# ---------------------------------------------------------------------------
# univariate polynomials over Q


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def padd(a, b):
    n = max(len(a), len(b))
    return _trim(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def pneg(a):
    return tuple(-x for x in a)


def psub(a, b):
    return padd(a, pneg(b))


def pscale(a, s):
    if s == 0:
        return ()
    return tuple(x * s for x in a)


def pmul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def pdivmod(a, b):
    if not b:
        raise ZeroInversion("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        coef = Fraction(a[-1]) / lead
        q[k] = coef
        for i, y in enumerate(b):
            a[i + k] -= coef * y
        a = list(_trim(a))
    return _trim(q), _trim(a)


def pmonic(a):
    if not a:
        return a
    lead = Fraction(a[-1])
    return tuple(Fraction(x) / lead for x in a)


def pgcd(a, b):
    """Monic gcd (Euclid)."""
    while b:
        a, b = b, pdivmod(a, b)[1]
    return pmonic(a)


def peval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def poly_str(a, var="x"):
    """Render a polynomial, highest degree first: ``t^2 - 3*t + 1/2``."""
    if not a:
        return "0"
    terms = []
    for k in range(len(a) - 1, -1, -1):
        c = Fraction(a[k])
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        terms.append((sign, body))
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Phi_n as a coefficient tuple (lowest degree first).

    Computed as (x^n - 1) divided by Phi_d for every proper divisor d of n.
    """
    if n < 1:
        raise ValueError("cyclotomic order must be positive")
    num = (Fraction(-1),) + (Fraction(0),) * (n - 1) + (Fraction(1),)
    for d in range(1, n):
        if n % d == 0:
            num, rem = pdivmod(num, cyclotomic_polynomial(d))
            assert not rem
    return num


def totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def units_mod(n: int) -> list[int]:
    """Residues k in 1..n with gcd(k, n) = 1 (for n = 1 this is [1])."""
    return [k for k in range(1, n + 1) if math.gcd(k, n) == 1]


# ---------------------------------------------------------------------------
# fields


class RationalField:
    kind = "rational"
    order = 1

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise FieldMismatch(f"cannot use {x!r} as a rational number")

    @property
    def q_dim(self):
        return 1

    def to_q(self, x):
        return [Fraction(x)]

    def from_q(self, coords):
        return Fraction(coords[0])

    def galois(self, k, x):
        return Fraction(x)

    def parse(self, text):
        return parse_scalar(text, self)

    def descriptor(self):
        return {"kind": "rational"}

    def __repr__(self):
        return "QQ"

    def __str__(self):
        return "Q"


QQ = RationalField()


class CyclotomicField:
    """Q(zeta_n) with zeta_n = exp(2 pi i / n), stored modulo Phi_n."""

    kind = "cyclotomic"

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("cyclotomic order must be >= 1")
        self.order = n
        self.modulus = cyclotomic_polynomial(n)
        self.phi = len(self.modulus) - 1
        # x^e mod Phi_n for e in 0..n-1
        powers = []
        for e in range(n):
            mono = (Fraction(0),) * e + (Fraction(1),)
            powers.append(self._pad(pdivmod(mono, self.modulus)[1]))
        self._powers = powers
        self._int_powers = [tuple(int(x) for x in pw) for pw in powers]

    def _pad(self, c):
        c = tuple(Fraction(x) for x in c)
        return c + (Fraction(0),) * (self.phi - len(c))

    def reduce_poly(self, c) -> "Cyclo":
        """Element represented by an arbitrary polynomial in zeta."""
        out = [Fraction(0)] * self.phi
        for e, x in enumerate(c):
            if x == 0:
                continue
            if e < self.phi:
                out[e] += x
            else:
                for i, y in enumerate(self._powers[e % self.order]):
                    if y:
                        out[i] += x * y
        return Cyclo(self, tuple(out))

    def zero(self):
        return Cyclo(self, (Fraction(0),) * self.phi)

    def one(self):
        return Cyclo(self, self._powers[0])

    @property
    def zeta(self):
        return Cyclo(self, self._powers[1 % self.order])

    def root(self, m: int):
        """The designated primitive m-th root exp(2 pi i/m); requires m | n."""
        if self.order % m:
            raise FieldError(
                f"zeta_{m} is not in Q(zeta_{self.order}); "
                f"use order {math.lcm(self.order, m)}"
            )
        return self.zeta_power(self.order // m)

    def zeta_power(self, e: int):
        return Cyclo(self, self._powers[e % self.order])

    def coerce(self, x):
        if isinstance(x, Cyclo):
            if x.field is not self:
                raise FieldMismatch(f"{x.field} vs {self}")
            return x
        if isinstance(x, (int, Fraction)):
            return Cyclo(self, (Fraction(x),) + (Fraction(0),) * (self.phi - 1))
        raise FieldMismatch(f"cannot use {x!r} in {self}")

    @property
    def q_dim(self):
        return self.phi

    def to_q(self, x):
        return list(self.coerce(x).c)

    def from_q(self, coords):
        return Cyclo(self, tuple(Fraction(v) for v in coords))

    def galois(self, k, x):
        x = self.coerce(x)
        if math.gcd(k, self.order) != 1:
            raise BadGaloisIndex(f"gcd({k}, {self.order}) != 1")
        out = [Fraction(0)] * self.phi
        for i, v in enumerate(x.c):
            if v:
                for j, y in enumerate(self._powers[(i * k) % self.order]):
                    if y:
                        out[j] += v * y
        return Cyclo(self, tuple(out))

    def parse(self, text):
        return parse_scalar(text, self)

    def descriptor(self):
        return {"kind": "cyclotomic", "order": self.order}

    def __repr__(self):
        return f"CyclotomicField({self.order})"

    def __str__(self):
        return f"Q(zeta_{self.order})"


@lru_cache(maxsize=None)
def cyclotomic_field(n: int) -> CyclotomicField:
    return CyclotomicField(n)


class Cyclo:
    __slots__ = ("field", "c", "_ints")

    def __init__(self, field: CyclotomicField, c: tuple):
        self.field = field
        self.c = c
        self._ints = None

    def _other(self, o):
        if isinstance(o, Cyclo):
            if o.field is not self.field:
                raise FieldMismatch(f"{self.field} vs {o.field}")
            return o
        if isinstance(o, (int, Fraction)):
            return self.field.coerce(o)
        if isinstance(o, RatFunc):
            raise FieldMismatch(f"{self.field} vs {o.field}")
        return None

    def __add__(self, o):
        o = self._other(o)
        if o is None:
            return NotImplemented
        return Cyclo(self.field, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.field, tuple(-a for a in self.c))

    def __sub__(self, o):
        o = self._other(o)
        if o is None:
            return NotImplemented
        return Cyclo(self.field, tuple(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            return Cyclo(self.field, tuple(a * o for a in self.c))
        o = self._other(o)
        if o is None:
            return NotImplemented
        # integer convolution over a common denominator; Phi_n is monic with
        # integer coefficients, so the reduction stays integral
        F = self.field
        ia, da = self._int_form()
        ib, db = o._int_form()
        phi = F.phi
        out = [0] * phi
        high = {}
        for i, a in enumerate(ia):
            if a:
                for j, b in enumerate(ib):
                    if b:
                        e = i + j
                        if e < phi:
                            out[e] += a * b
                        else:
                            high[e] = high.get(e, 0) + a * b
        for e, x in high.items():
            if x:
                for k, y in enumerate(F._int_powers[e % F.order]):
                    if y:
                        out[k] += x * y
        den = da * db
        return Cyclo(F, tuple(Fraction(x, den) for x in out))

    def _int_form(self):
        r = self._ints
        if r is None:
            den = 1
            for a in self.c:
                den = den * a.denominator // math.gcd(den, a.denominator)
            r = (tuple(a.numerator * (den // a.denominator) for a in self.c), den)
            self._ints = r
        return r

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroInversion("inverse of zero in " + str(self.field))
        # extended Euclid: s*a + t*Phi = 1
        a, b = _trim(self.c), self.field.modulus
        s0, s1 = (Fraction(1),), ()
        while b:
            q, r = pdivmod(a, b)
            a, b = b, r
            s0, s1 = s1, psub(s0, pmul(q, s1))
        # a is a nonzero constant here
        inv = pscale(s0, 1 / Fraction(a[0]))
        return self.field.reduce_poly(inv)

    def __truediv__(self, o):
        if isinstance(o, (int, Fraction)):
            if o == 0:
                raise ZeroInversion("division by zero")
            return Cyclo(self.field, tuple(a / o for a in self.c))
        o = self._other(o)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, o):
        return self.inverse() * o

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out, base = self.field.one(), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, o):
        if isinstance(o, Cyclo):
            return o.field is self.field and o.c == self.c
        if isinstance(o, (int, Fraction)):
            return self.c[0] == o and not any(self.c[1:])
        return NotImplemented

    def __hash__(self):
        if not any(self.c[1:]):
            return hash(self.c[0])
        return hash((self.field.order, self.c))

    def __bool__(self):
        return any(self.c)

    def is_rational(self):
        return not any(self.c[1:])

    def __str__(self):
        if self.is_rational():
            return str(self.c[0])
        return poly_str(_trim(self.c), "z")

    def __repr__(self):
        return f"Cyclo({self.field.order}, {self})"


class RationalFunctionField:
    kind = "rational_function"

    def __init__(self, var: str = "t"):
        self.var = var

    def zero(self):
        return RatFunc(self, (), (Fraction(1),))

    def one(self):
        return RatFunc(self, (Fraction(1),), (Fraction(1),))

    @property
    def gen(self):
        return RatFunc(self, (Fraction(0), Fraction(1)), (Fraction(1),))

    def coerce(self, x):
        if isinstance(x, RatFunc):
            if x.field is not self:
                raise FieldMismatch(f"{x.field} vs {self}")
            return x
        if isinstance(x, (int, Fraction)):
            return RatFunc(self, _trim((Fraction(x),)), (Fraction(1),))
        raise FieldMismatch(f"cannot use {x!r} in {self}")

    q_dim = None

    def galois(self, k, x):
        raise NotCyclotomic("Galois action is only defined on cyclotomic fields")

    def parse(self, text):
        return parse_scalar(text, self)

    def descriptor(self):
        return {"kind": "rational_function", "variable": self.var}

    def __repr__(self):
        return f"RationalFunctionField({self.var!r})"

    def __str__(self):
        return f"Q({self.var})"


@lru_cache(maxsize=None)
def rational_function_field(var: str = "t") -> RationalFunctionField:
    return RationalFunctionField(var)


class RatFunc:
    __slots__ = ("field", "num", "den")

    def __init__(self, field, num, den, normalize=False):
        self.field = field
        if normalize:
            num, den = _trim(num), _trim(den)
            if not den:
                raise ZeroInversion("rational function with zero denominator")
            if not num:
                den = (Fraction(1),)
            else:
                g = pgcd(num, den)
                if len(g) > 1:
                    num = pdivmod(num, g)[0]
                    den = pdivmod(den, g)[0]
                lead = Fraction(den[-1])
                num = tuple(Fraction(x) / lead for x in num)
                den = tuple(Fraction(x) / lead for x in den)
        self.num = num
        self.den = den

    def _other(self, o):
        if isinstance(o, RatFunc):
            if o.field is not self.field:
                raise FieldMismatch(f"{self.field} vs {o.field}")
            return o
        if isinstance(o, (int, Fraction)):
            return self.field.coerce(o)
        if isinstance(o, Cyclo):
            raise FieldMismatch(f"{self.field} vs {o.field}")
        return None

    def __add__(self, o):
        o = self._other(o)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.field, padd(self.num, o.num), self.den, True)
        num = padd(pmul(self.num, o.den), pmul(o.num, self.den))
        return RatFunc(self.field, num, pmul(self.den, o.den), True)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.field, pneg(self.num), self.den)

    def __sub__(self, o):
        o = self._other(o)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = self._other(o)
        if o is None:
            return NotImplemented
        return RatFunc(
            self.field, pmul(self.num, o.num), pmul(self.den, o.den), True
        )

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroInversion("inverse of zero in " + str(self.field))
        return RatFunc(self.field, self.den, self.num, True)

    def __truediv__(self, o):
        o = self._other(o)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, o):
        return self.inverse() * o

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.field.one()
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, o):
        if isinstance(o, RatFunc):
            return o.field is self.field and o.num == self.num and o.den == self.den
        if isinstance(o, (int, Fraction)):
            return self.den == (1,) and self.num == _trim((Fraction(o),))
        return NotImplemented

    def __hash__(self):
        if self.den == (1,) and len(self.num) <= 1:
            return hash(self.num[0] if self.num else 0)
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def __call__(self, value):
        """Specialize the variable to a rational value."""
        d = peval(self.den, Fraction(value))
        if d == 0:
            raise ZeroInversion(f"denominator vanishes at {self.field.var}={value}")
        return Fraction(peval(self.num, Fraction(value))) / d

    def __str__(self):
        v = self.field.var
        ns = poly_str(self.num, v)
        if self.den == (1,):
            return ns
        ds = poly_str(self.den, v)
        if len([x for x in self.num if x]) > 1:
            ns = f"({ns})"
        if len([x for x in self.den if x]) > 1 or self.den[-1] != 1:
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __repr__(self):
        return f"RatFunc({self})"


# ---------------------------------------------------------------------------
# field-generic helpers


def field_of(x):
    if isinstance(x, (Cyclo, RatFunc)):
        return x.field
    if isinstance(x, (int, Fraction)):
        return QQ
    raise TypeError(f"not a scalar: {x!r}")


def field_from_descriptor(d: dict):
    kind = d.get("kind")
    if kind == "rational":
        return QQ
    if kind == "cyclotomic":
        return cyclotomic_field(int(d["order"]))
    if kind == "rational_function":
        return rational_function_field(d.get("variable", "t"))
    raise FieldError(f"unknown field kind {kind!r}")


def invert_scalar(s):
    if not s:
        raise ZeroInversion("cannot invert zero")
    if isinstance(s, (int, Fraction)):
        return 1 / Fraction(s)
    return s.inverse()


def galois_apply(k: int, s):
    """sigma_k: zeta -> zeta^k applied to a cyclotomic (or rational) scalar."""
    if isinstance(s, RatFunc):
        raise NotCyclotomic("Galois action needs a cyclotomic scalar")
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    return s.field.galois(k, s)


def scalar_str(s) -> str:
    return str(s)


# ---------------------------------------------------------------------------
# literal grammar:  + - * / ^ ( ), integers, z (zeta_n), zN (zeta_N, N | n), t

_ZN = re.compile(r"z(\d+)$")


def parse_scalar(text: str, field):
    """Parse a scalar literal such as ``"1/2"``, ``"z^2 - 1"`` or ``"(t+1)/(t-1)"``."""
    if not isinstance(text, str):
        if isinstance(text, int) and not isinstance(text, bool):
            return field.coerce(text)
        raise FieldError(f"scalar literal must be a string, got {text!r}")
    src = text.strip().replace("^", "**")
    if not src:
        raise FieldError("empty scalar literal")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise FieldError(f"bad scalar literal {text!r}: {exc.msg}") from None
    try:
        return field.coerce(_eval_literal(tree.body, field, text))
    except ZeroDivisionError:
        raise FieldError(f"division by zero in {text!r}") from None


def _eval_literal(node, field, text):
    if isinstance(node, ast.Constant):
        if isinstance(node.value, int) and not isinstance(node.value, bool):
            return Fraction(node.value)
        raise FieldError(f"only integer constants allowed in {text!r}")
    if isinstance(node, ast.Name):
        name = node.id
        if isinstance(field, CyclotomicField):
            if name == "z":
                return field.zeta
            m = _ZN.match(name)
            if m:
                return field.root(int(m.group(1)))
        if isinstance(field, RationalFunctionField) and name == field.var:
            return field.gen
        raise FieldError(f"symbol {name!r} not available in {field} ({text!r})")
    if isinstance(node, ast.UnaryOp):
        v = _eval_literal(node.operand, field, text)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
    if isinstance(node, ast.BinOp):
        left = _eval_literal(node.left, field, text)
        if isinstance(node.op, ast.Pow):
            e = _eval_literal(node.right, field, text)
            if not (isinstance(e, Fraction) and e.denominator == 1):
                raise FieldError(f"exponent must be an integer in {text!r}")
            e = int(e)
            if isinstance(left, Fraction):
                if left == 0 and e < 0:
                    raise ZeroDivisionError
                return left**e
            return left**e
        right = _eval_literal(node.right, field, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if not right:
                raise ZeroDivisionError
            if isinstance(left, Fraction) and isinstance(right, Fraction):
                return left / right
            return field.coerce(left) / right
    raise FieldError(f"unsupported syntax in scalar literal {text!r}")
