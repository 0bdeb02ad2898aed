import threading

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from qhopf.cyclotomic import (
    QQ,
    CycNum,
    canonicalize,
    cyclotomic_polynomial,
    euler_phi,
    invert,
    root_of_unity,
)


# ---------------------------------------------------------------------------
# independent oracle: sympy's minimal-polynomial arithmetic for zeta_n
# ---------------------------------------------------------------------------

def oracle_reduce(n, raw):
    """Reduce sum_k raw[k] * zeta^k modulo Phi_n with sympy, return coeff tuple."""
    x = sympy.symbols("x")
    phi = sympy.cyclotomic_poly(n, x)
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x**k for k, c in raw.items())
    rem = sympy.rem(sympy.expand(expr), phi, x)
    poly = sympy.Poly(rem, x)
    deg = sympy.totient(n)
    out = [sympy.Integer(0)] * deg
    for (k,), c in poly.terms():
        out[k] = c
    return tuple(QQ(sympy.nsimplify(c).p, sympy.nsimplify(c).q) for c in out)


def oracle_cyclotomic(n):
    x = sympy.symbols("x")
    p = sympy.Poly(sympy.cyclotomic_poly(n, x), x)
    deg = p.degree()
    out = [0] * (deg + 1)
    for (k,), c in p.terms():
        out[k] = int(c)
    return tuple(out)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 8, 9, 12, 16, 25])
def test_cyclotomic_polynomial_against_sympy(n):
    assert tuple(int(c) for c in cyclotomic_polynomial(n)) == oracle_cyclotomic(n)
    assert euler_phi(n) == int(sympy.totient(n))


def test_root_of_unity_identity_case():
    assert root_of_unity(1, 0) == 1


def test_root_of_unity_square_is_minus_one():
    # oracle: x^2 mod Phi_4(x) = x^2 + 1 leaves -1
    assert oracle_reduce(4, {2: QQ(1)}) == (QQ(-1), QQ(0))
    assert root_of_unity(4, 2) == -1


def test_root_of_unity_fourth_power():
    z = root_of_unity(4, 1)
    assert z**4 == 1
    assert z**2 == -1


@pytest.mark.parametrize("n,k,order", [(4, 1, 4), (4, 2, 2), (6, 2, 3), (12, 8, 3), (9, 3, 3)])
def test_root_of_unity_multiplicative_order(n, k, order):
    z = root_of_unity(n, k)
    acc = CycNum.one(n)
    for step in range(1, order + 1):
        acc = acc * z
        if step < order:
            assert acc != 1
    assert acc == 1


def test_canonicalize_phi4_relation():
    # oracle: 1 + x^2 = Phi_4 reduces to 0
    assert oracle_reduce(4, {0: QQ(1), 2: QQ(1)}) == (QQ(0), QQ(0))
    assert canonicalize(4, [1, 0, 1]).is_zero()


def test_canonicalize_order_two():
    # oracle: Phi_2 = x + 1, so 3x -> -3
    assert oracle_reduce(2, {1: QQ(3)}) == (QQ(-3),)
    assert canonicalize(2, [0, 3]) == -3


def test_canonicalize_zero():
    assert canonicalize(7, []).is_zero()
    assert canonicalize(7, {3: 0}).is_zero()


def test_canonicalize_folds_high_powers():
    # zeta_4^5 = zeta_4
    assert canonicalize(4, {5: 1}) == root_of_unity(4, 1)


def test_invert_one():
    assert invert(CycNum.one(12)) == 1


def test_invert_zeta4():
    # oracle: solve (0 + 1*x) * (a + b*x) == 1 mod x^2 + 1 -> a = 0, b = -1
    z = root_of_unity(4, 1)
    assert invert(z) == canonicalize(4, [0, -1])
    assert invert(z) == root_of_unity(4, 3)


def test_invert_zero_raises():
    with pytest.raises(ZeroDivisionError):
        invert(CycNum.zero(4))


@pytest.mark.parametrize("n", [3, 4, 5, 8, 9, 12])
def test_invert_against_sympy(n):
    deg = euler_phi(n)
    raw = {k: QQ(k + 1, 2) for k in range(deg)}
    a = canonicalize(n, raw)
    v = invert(a)
    assert a * v == 1
    # cross-check the product reduction against sympy on a second element
    b = canonicalize(n, {0: QQ(1, 3), 1: QQ(-2)})
    prod = a * b
    expanded = {
        i + j: QQ(ca) * QQ(cb)
        for i, ca in enumerate(a.coeffs)
        for j, cb in enumerate(b.coeffs)
    }
    merged: dict = {}
    for i, ca in enumerate(a.coeffs):
        for j, cb in enumerate(b.coeffs):
            merged[i + j] = merged.get(i + j, QQ(0)) + ca * cb
    assert prod.coeffs == oracle_reduce(n, merged)


# ---------------------------------------------------------------------------
# properties
# ---------------------------------------------------------------------------

orders = st.sampled_from([1, 2, 3, 4, 6, 8, 9, 12])
small_rationals = st.builds(
    lambda p, q: QQ(p, q), st.integers(-30, 30), st.integers(1, 7)
)


def cycnums(n):
    deg = euler_phi(n)
    return st.lists(small_rationals, min_size=deg, max_size=deg).map(
        lambda cs: CycNum(n, tuple(cs))
    )


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_field_axioms_hold_exactly(data):
    n = data.draw(orders)
    a = data.draw(cycnums(n))
    b = data.draw(cycnums(n))
    c = data.draw(cycnums(n))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if not a.is_zero():
        assert a * invert(a) == 1


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_canonicalize_is_idempotent_and_multiplicative(data):
    n = data.draw(orders)
    a = data.draw(cycnums(n))
    b = data.draw(cycnums(n))
    again = canonicalize(n, dict(enumerate(a.coeffs)))
    assert again == a
    lhs = canonicalize(n, dict(enumerate((a * b).coeffs)))
    assert lhs == a * b


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=40), orders)
def test_root_times_complement_is_one(k, n):
    assert root_of_unity(n, k) * root_of_unity(n, n - k) == 1


def test_lift_embeds_subfield():
    # zeta_2 = -1 lifted into Q(zeta_4)
    m1 = root_of_unity(2, 1).lift(4)
    assert m1 == -1
    a = canonicalize(3, [1, 2])
    assert a.lift(12) * CycNum.one(12) == a.lift(12)
    # mixed arithmetic lifts automatically
    assert root_of_unity(2, 1) * root_of_unity(4, 1) == root_of_unity(4, 3)


def test_concurrent_cache_initialization():
    # per-order tables must be safe under concurrent first use
    errors = []

    def worker():
        try:
            for n in (30, 36, 40):
                z = root_of_unity(n, 7)
                assert z * invert(z) == 1
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
