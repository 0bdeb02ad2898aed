"""Exact arithmetic in the cyclotomic field Q(zeta_n).

An element is stored by its coordinate vector over the power basis
{zeta^0, ..., zeta^(phi(n)-1)} of Q[x]/(Phi_n(x)), where Phi_n is the n-th
cyclotomic polynomial.  Reduction is always modulo Phi_n, never x^n - 1, so
two field elements are equal exactly when their coefficient vectors are
equal.  Coefficients are arbitrary-precision rationals.
"""

from __future__ import annotations

import threading
from typing import Iterable, Sequence, Union

try:
    from gmpy2 import mpq as _mpq

    def QQ(*args):
        return _mpq(*args)

except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _mpq

    def QQ(*args):
        return _mpq(*args)


_ZERO = QQ(0)
_ONE = QQ(1)

RationalLike = Union[int, "_mpq"]


def _poly_trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a: Sequence, b: Sequence) -> list:
    out = [_ZERO] * (len(a) + len(b) - 1) if a and b else []
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            if cb == 0:
                continue
            out[i + j] += ca * cb
    return out


def _poly_divmod(num: Sequence, den: Sequence) -> tuple[list, list]:
    num = list(num)
    den = _poly_trim(list(den))
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    q = [_ZERO] * max(0, len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1] / lead
        if c != 0:
            q[k] = c
            for j, d in enumerate(den):
                num[k + j] -= c * d
    return q, _poly_trim(num)


_divisors_cache: dict[int, tuple[int, ...]] = {}


def _divisors(n: int) -> tuple[int, ...]:
    ds = _divisors_cache.get(n)
    if ds is None:
        ds = tuple(d for d in range(1, n + 1) if n % d == 0)
        _divisors_cache[n] = ds
    return ds


_cyclo_lock = threading.RLock()
_cyclo_cache: dict[int, tuple] = {}


def cyclotomic_polynomial(n: int) -> tuple:
    """Coefficients of Phi_n, ascending degree, exact rationals, monic."""
    if n < 1:
        raise ValueError("order must be positive")
    poly = _cyclo_cache.get(n)
    if poly is not None:
        return poly
    with _cyclo_lock:
        poly = _cyclo_cache.get(n)
        if poly is not None:
            return poly
        # Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
        num = [_ZERO] * (n + 1)
        num[0] = -_ONE
        num[n] = _ONE
        for d in _divisors(n)[:-1]:
            q, r = _poly_divmod(num, cyclotomic_polynomial(d))
            if r:
                raise ArithmeticError("cyclotomic division left a remainder")
            num = q
        poly = tuple(num)
        _cyclo_cache[n] = poly
        return poly


def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


class _OrderData:
    """Per-order reduction tables, built once and shared."""

    __slots__ = ("n", "phi", "reduction_rows", "zeta_rows")

    def __init__(self, n: int):
        poly = cyclotomic_polynomial(n)
        phi = len(poly) - 1
        self.n = n
        self.phi = phi
        x_phi = tuple(-c for c in poly[:phi])  # x^phi mod Phi_n

        def shift_reduce(vec):
            shifted = [_ZERO] + list(vec)
            top = shifted.pop()  # coefficient of x^phi after the shift
            if top != 0:
                shifted = [c + top * r for c, r in zip(shifted, x_phi)]
            return shifted

        # x^k mod Phi_n for k = phi .. 2*phi - 2 (enough for products)
        rows = [x_phi]
        for _ in range(phi - 2):
            rows.append(tuple(shift_reduce(rows[-1])))
        self.reduction_rows = tuple(rows)
        # zeta^k for 0 <= k < n, as canonical coefficient tuples
        zrows = []
        cur = [_ZERO] * phi
        cur[0] = _ONE
        for _ in range(n):
            zrows.append(tuple(cur))
            cur = shift_reduce(cur)
        self.zeta_rows = tuple(zrows)


_order_lock = threading.Lock()
_order_cache: dict[int, _OrderData] = {}


def _order_data(n: int) -> _OrderData:
    data = _order_cache.get(n)
    if data is None:
        with _order_lock:
            data = _order_cache.get(n)
            if data is None:
                data = _OrderData(n)
                _order_cache[n] = data
    return data


class CycNum:
    """An element of Q(zeta_n) in canonical power-basis form.

    Immutable; all arithmetic is exact.  Mixed-order arithmetic is allowed
    only when one order divides the other (the smaller field embeds via
    zeta_m = zeta_n^(n/m)); plain ints and rationals always coerce.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: tuple):
        self.order = order
        self.coeffs = coeffs

    # -- constructors ------------------------------------------------

    @staticmethod
    def from_rational(order: int, value) -> "CycNum":
        data = _order_data(order)
        v = QQ(value)
        return CycNum(order, (v,) + (_ZERO,) * (data.phi - 1))

    @staticmethod
    def zero(order: int) -> "CycNum":
        return CycNum.from_rational(order, 0)

    @staticmethod
    def one(order: int) -> "CycNum":
        return CycNum.from_rational(order, 1)

    # -- queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and all(c == 0 for c in self.coeffs[1:])

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- coercion ----------------------------------------------------

    def lift(self, order: int) -> "CycNum":
        """Embed into Q(zeta_order); requires self.order | order."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot lift from order {self.order} to {order}")
        step = order // self.order
        raw: dict[int, object] = {}
        for k, c in enumerate(self.coeffs):
            if c != 0:
                raw[k * step] = c
        return canonicalize(order, raw)

    def _pair(self, other) -> tuple["CycNum", "CycNum"]:
        if isinstance(other, CycNum):
            if other.order == self.order:
                return self, other
            if self.order % other.order == 0:
                return self, other.lift(self.order)
            if other.order % self.order == 0:
                return self.lift(other.order), other
            raise ValueError(
                f"incompatible cyclotomic orders {self.order} and {other.order}"
            )
        return self, CycNum.from_rational(self.order, other)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        a, b = self._pair(other)
        return CycNum(a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._pair(other)
        return CycNum(a.order, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return CycNum(self.order, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        a, b = self._pair(other)
        data = _order_data(a.order)
        phi = data.phi
        out = [_ZERO] * phi
        high = [_ZERO] * max(0, phi - 1)
        for i, ca in enumerate(a.coeffs):
            if ca == 0:
                continue
            for j, cb in enumerate(b.coeffs):
                if cb == 0:
                    continue
                k = i + j
                if k < phi:
                    out[k] += ca * cb
                else:
                    high[k - phi] += ca * cb
        for k, c in enumerate(high):
            if c != 0:
                row = data.reduction_rows[k]
                for t in range(phi):
                    if row[t] != 0:
                        out[t] += c * row[t]
        return CycNum(a.order, tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._pair(other)
        return a * b.inv()

    def __rtruediv__(self, other):
        return CycNum.from_rational(self.order, other) * self.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result = CycNum.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inv(self) -> "CycNum":
        """Multiplicative inverse, via the extended Euclidean algorithm."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        phi_poly = list(cyclotomic_polynomial(self.order))
        # extended gcd of (self as polynomial, Phi_n) over Q[x]
        r0, r1 = list(self.coeffs), phi_poly
        s0, s1 = [_ONE], []
        r0 = _poly_trim(list(r0))
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s_new = _poly_trim(
                [
                    (s0[i] if i < len(s0) else _ZERO)
                    - sum(
                        q[j] * s1[i - j]
                        for j in range(max(0, i - len(s1) + 1), min(len(q), i + 1))
                    )
                    for i in range(max(len(s0), len(q) + len(s1) - 1))
                ]
            )
            s0, s1 = s1, s_new
        # r0 = gcd (a nonzero constant, since Phi_n is irreducible)
        if len(r0) != 1:
            raise ArithmeticError("gcd with the cyclotomic polynomial is not constant")
        c = r0[0]
        inv_coeffs = [x / c for x in s0]
        return canonicalize(self.order, inv_coeffs)

    # -- comparison / hashing -----------------------------------------

    def __eq__(self, other):
        if isinstance(other, CycNum):
            if other.order == self.order:
                return self.coeffs == other.coeffs
            try:
                a, b = self._pair(other)
            except ValueError:
                return False
            return a.coeffs == b.coeffs
        if isinstance(other, (int,)) or type(other) is type(_ONE):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    # -- display -------------------------------------------------------

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                mon = "q" if k == 1 else f"q^{k}"
                if c == 1:
                    parts.append(mon)
                elif c == -1:
                    parts.append(f"-{mon}")
                else:
                    parts.append(f"{c}*{mon}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"CycNum({self.order}, {self})"


def canonicalize(order: int, raw) -> CycNum:
    """Reduce a polynomial in zeta (any degree) to canonical form.

    ``raw`` is a sequence of rationals indexed by power of zeta, or a sparse
    {exponent: rational} mapping.  Exponents are first folded modulo
    ``order`` (zeta^n = 1), then reduced modulo Phi_n.
    """
    data = _order_data(order)
    out = [_ZERO] * data.phi
    if isinstance(raw, dict):
        items: Iterable = raw.items()
    else:
        items = enumerate(raw)
    for k, c in items:
        if c == 0:
            continue
        c = QQ(c)
        row = data.zeta_rows[k % order]
        for t, r in enumerate(row):
            if r != 0:
                out[t] += c * r
    return CycNum(order, tuple(out))


def root_of_unity(order: int, k: int = 1) -> CycNum:
    """The canonical representation of zeta_order^k."""
    if order < 1:
        raise ValueError("order must be positive")
    data = _order_data(order)
    return CycNum(order, data.zeta_rows[k % order])


def invert(a: CycNum) -> CycNum:
    """Exact inverse; raises ZeroDivisionError on zero input."""
    return a.inv()
