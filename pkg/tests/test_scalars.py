import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from invariant_forge.errors import BadGaloisIndex, FieldError, ZeroInversion
from invariant_forge.scalars import (
    QQ,
    cyclotomic_field,
    cyclotomic_polynomial,
    field_from_descriptor,
    galois_apply,
    invert_scalar,
    parse_scalar,
    rational_function_field,
    totient,
)

X = sp.Symbol("x")


def _rand_cyclo(rng, F, span=4):
    return F.from_q([Fraction(rng.randint(-span, span), rng.randint(1, 3)) for _ in range(F.phi)])


def _rand_ratfunc(rng, F):
    t = F.gen
    num = sum((rng.randint(-3, 3) * t**i for i in range(rng.randint(0, 3))), F.zero())
    den = sum((rng.randint(-3, 3) * t**i for i in range(rng.randint(1, 2))), F.zero())
    if not den:
        den = F.one()
    return num / den


def _to_sympy(c, F):
    """Cyclotomic element as a sympy polynomial in x (reduced mod Phi_n)."""
    return sum(sp.Rational(v.numerator, v.denominator) * X**i for i, v in enumerate(c.c))


# cyclotomic polynomials ---------------------------------------------------


@pytest.mark.parametrize("n", range(1, 31))
def test_cyclotomic_polynomial_matches_sympy(n):
    ours = sum(int(c) * X**i for i, c in enumerate(cyclotomic_polynomial(n)))
    assert sp.expand(ours - sp.cyclotomic_poly(n, X)) == 0


def test_cyclotomic_polynomial_small_cases():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(8) == (1, 0, 0, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)


@pytest.mark.parametrize("n", range(1, 25))
def test_zeta_is_primitive_root(n):
    F = cyclotomic_field(n)
    z = F.zeta
    assert z**n == F.one()
    for d in range(1, n):
        if n % d == 0:
            assert z**d != F.one()
    assert F.phi == totient(n)


# inversion -----------------------------------------------------------------


def test_invert_examples():
    assert invert_scalar(Fraction(3, 4)) == Fraction(4, 3)
    F8 = cyclotomic_field(8)
    z = F8.zeta
    assert invert_scalar(z) == -(z**3)
    R = rational_function_field("t")
    t = R.gen
    assert invert_scalar((t - 1) / (t + 1)) == (t + 1) / (t - 1)
    with pytest.raises(ZeroInversion):
        invert_scalar(F8.zero())
    with pytest.raises(ZeroInversion):
        invert_scalar(Fraction(0))


@pytest.mark.parametrize("n", [3, 5, 8, 12])
def test_cyclotomic_inverse_matches_sympy(n):
    rng = random.Random(n)
    F = cyclotomic_field(n)
    phi = sp.cyclotomic_poly(n, X)
    for _ in range(20):
        a = _rand_cyclo(rng, F)
        if not a:
            continue
        oracle = sp.invert(_to_sympy(a, F), phi, X)
        assert sp.expand(_to_sympy(invert_scalar(a), F) - sp.rem(oracle, phi, X)) == 0


# field axioms on many random triples --------------------------------------


def _axioms(rng, make, count):
    for _ in range(count):
        a, b, c = make(), make(), make()
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        if a:
            assert invert_scalar(a) * a == 1


def test_field_axioms_rational():
    rng = random.Random(1)
    _axioms(rng, lambda: Fraction(rng.randint(-50, 50), rng.randint(1, 20)), 10_000)


@pytest.mark.parametrize("n", [4, 8, 12])
def test_field_axioms_cyclotomic(n):
    rng = random.Random(n)
    F = cyclotomic_field(n)
    _axioms(rng, lambda: _rand_cyclo(rng, F), 10_000 if n == 8 else 2_000)


def test_field_axioms_rational_function():
    rng = random.Random(7)
    F = rational_function_field("t")
    _axioms(rng, lambda: _rand_ratfunc(rng, F), 2_000)


_frac = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 7))


@given(st.lists(_frac, min_size=4, max_size=4), st.lists(_frac, min_size=4, max_size=4))
def test_cyclotomic_multiplication_commutes_and_inverts(u, v):
    F = cyclotomic_field(8)
    a, b = F.from_q(u), F.from_q(v)
    assert a * b == b * a
    if a:
        assert (a * b) / a == b


# Galois action -------------------------------------------------------------


def test_galois_examples():
    F = cyclotomic_field(8)
    z = F.zeta
    s = z + z.inverse()
    assert galois_apply(1, s) == s
    assert galois_apply(3, s) == -s
    assert galois_apply(3, Fraction(5, 7)) == Fraction(5, 7)
    with pytest.raises(BadGaloisIndex):
        galois_apply(2, z)


@pytest.mark.parametrize("n", [4, 8, 12])
def test_galois_composition(n):
    rng = random.Random(100 + n)
    F = cyclotomic_field(n)
    units = [k for k in range(1, n) if sp.gcd(k, n) == 1]
    for _ in range(100):
        a = _rand_cyclo(rng, F)
        k, l = rng.choice(units), rng.choice(units)
        assert galois_apply(k, galois_apply(l, a)) == galois_apply((k * l) % n, a)


def test_galois_is_field_automorphism():
    rng = random.Random(3)
    F = cyclotomic_field(12)
    for _ in range(50):
        a, b = _rand_cyclo(rng, F), _rand_cyclo(rng, F)
        for k in (5, 7, 11):
            assert galois_apply(k, a * b) == galois_apply(k, a) * galois_apply(k, b)


# literals ------------------------------------------------------------------


def test_parse_literals():
    assert parse_scalar("1/2", QQ) == Fraction(1, 2)
    F = cyclotomic_field(8)
    assert parse_scalar("z^2 - 1", F) == F.zeta**2 - 1
    assert parse_scalar("z4", F) == F.zeta**2
    R = rational_function_field("t")
    t = R.gen
    assert parse_scalar("(t+1)/(t-1)", R) == (t + 1) / (t - 1)
    for bad in ("1/0", "", "q", "z"):
        with pytest.raises(FieldError):
            parse_scalar(bad, QQ)


@pytest.mark.parametrize("n", [3, 8, 12])
def test_parse_print_roundtrip(n):
    rng = random.Random(n)
    F = cyclotomic_field(n)
    for _ in range(50):
        a = _rand_cyclo(rng, F)
        assert parse_scalar(str(a), F) == a


def test_ratfunc_specialization():
    R = rational_function_field("t")
    t = R.gen
    f = (t**2 + 1) / (t - 2)
    assert f(Fraction(1, 2)) == Fraction(5, 4) / Fraction(-3, 2)
    with pytest.raises(ZeroInversion):
        f(2)


def test_descriptors_roundtrip():
    for F in (QQ, cyclotomic_field(8), rational_function_field("t")):
        assert field_from_descriptor(F.descriptor()) is F
    with pytest.raises(FieldError):
        field_from_descriptor({"kind": "p-adic"})
