"""Exact arithmetic in the supported coefficient fields.

Four fields are available, all with decidable equality through canonical
forms and no floating point anywhere:

* ``QQ`` -- the rationals, backed by :class:`fractions.Fraction`;
* ``CyclotomicField(n)`` -- Q(zeta_n), elements stored as coefficient
  vectors of length phi(n) reduced modulo the n-th cyclotomic polynomial;
* ``FunctionField(inner, name)`` -- univariate rational functions over an
  inner field, stored with coprime numerator/denominator and monic
  denominator;
* ``GF(p)`` -- the prime field, residues in ``[0, p)``.

Elements are immutable :class:`Scalar` values carrying a reference to
their field; the usual operators are overloaded.  :class:`Matrix` holds
exact matrices over any of these fields and backs both matrix-algebra
coefficients and linear-system solving.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction

from .errors import DivisionByZero, ScalarError, ZeroInput


# ---------------------------------------------------------------------------
# integer helpers


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mobius(n: int) -> int:
    f = _factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def euler_phi(n: int) -> int:
    result = n
    for p in _factorize(n):
        result = result // p * (p - 1)
    return result


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return _factorize(n) == {n: 1}


# ---------------------------------------------------------------------------
# dense univariate polynomial helpers
#
# Polynomials are tuples of coefficients, constant term first, with a
# nonzero leading coefficient ([] is the zero polynomial).  Coefficients
# are Fractions or Scalars; both support field division.


def _ptrim(cs) -> tuple:
    cs = list(cs)
    while cs and not cs[-1]:
        cs.pop()
    return tuple(cs)


def _padd(a, b) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return _ptrim(out)


def _pneg(a) -> tuple:
    return tuple(-c for c in a)


def _pmul(a, b, zero) -> tuple:
    if not a or not b:
        return ()
    out = [zero] * (len(a) + len(b) - 1)
    for i, c in enumerate(a):
        if not c:
            continue
        for j, d in enumerate(b):
            out[i + j] = out[i + j] + c * d
    return _ptrim(out)


def _pdivmod(a, b, zero) -> tuple[tuple, tuple]:
    if not b:
        raise DivisionByZero("polynomial division by zero")
    lead_inv = _coeff_inv(b[-1])
    rem = list(a)
    quot = [zero] * max(0, len(a) - len(b) + 1)
    while len(rem) >= len(b):
        if not rem[-1]:
            rem.pop()
            continue
        k = len(rem) - len(b)
        factor = rem[-1] * lead_inv
        quot[k] = factor
        for i, c in enumerate(b):
            rem[k + i] = rem[k + i] - factor * c
        rem.pop()
    return _ptrim(quot), _ptrim(rem)


def _coeff_inv(c):
    if isinstance(c, Fraction):
        return Fraction(1) / c
    return c.inverse()


def _pmonic(a) -> tuple:
    if not a:
        return a
    inv = _coeff_inv(a[-1])
    return tuple(c * inv for c in a)


def _pgcd(a, b, zero) -> tuple:
    while b:
        a, b = b, _pdivmod(a, b, zero)[1]
    return _pmonic(a)


def _pxgcd(a, b, zero, one) -> tuple[tuple, tuple, tuple]:
    """Monic g and s, t with s*a + t*b = g."""
    r0, r1 = a, b
    s0, s1 = (one,), ()
    t0, t1 = (), (one,)
    while r1:
        q, r = _pdivmod(r0, r1, zero)
        r0, r1 = r1, r
        s0, s1 = s1, _padd(s0, _pneg(_pmul(q, s1, zero)))
        t0, t1 = t1, _padd(t0, _pneg(_pmul(q, t1, zero)))
    if r0:
        inv = _coeff_inv(r0[-1])
        r0 = tuple(c * inv for c in r0)
        s0 = tuple(c * inv for c in s0)
        t0 = tuple(c * inv for c in t0)
    return r0, s0, t0


def _peval(a, x, zero):
    """Horner evaluation; x may live in a larger field than the coefficients."""
    acc = zero
    for c in reversed(a):
        acc = acc * x + c
    return acc


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[Fraction, ...]:
    """Coefficients of the n-th cyclotomic polynomial, by Moebius-factored division."""
    if n < 1:
        raise ValueError("order must be positive")
    num: tuple = (Fraction(1),)
    den: tuple = (Fraction(1),)
    for d in divisors(n):
        mu = mobius(n // d)
        if mu == 0:
            continue
        # x^d - 1
        cyc = (Fraction(-1),) + (Fraction(0),) * (d - 1) + (Fraction(1),)
        if mu == 1:
            num = _pmul(num, cyc, Fraction(0))
        else:
            den = _pmul(den, cyc, Fraction(0))
    quot, rem = _pdivmod(num, den, Fraction(0))
    assert not rem
    return quot


# ---------------------------------------------------------------------------
# fields and scalars


class Scalar:
    """Immutable element of one of the supported fields."""

    __slots__ = ("field", "rep")

    def __init__(self, field, rep):
        self.field = field
        self.rep = rep

    # -- arithmetic ----------------------------------------------------

    def _binary(self, other, op):
        if isinstance(other, (int, Fraction)):
            return op(self, self.field.coerce(other))
        if isinstance(other, Scalar):
            if other.field == self.field:
                return op(self, other)
            merged = _common_field(self.field, other.field)
            if merged is None:
                return NotImplemented
            return op(merged.coerce(self), merged.coerce(other))
        return NotImplemented

    def __add__(self, other):
        if type(other) is Scalar and other.field is self.field:
            return self.field.add(self, other)
        return self._binary(other, lambda a, b: a.field.add(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is Scalar and other.field is self.field:
            return self.field.add(self, self.field.neg(other))
        return self._binary(other, lambda a, b: a.field.add(a, b.field.neg(b)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if type(other) is Scalar and other.field is self.field:
            return self.field.mul(self, other)
        if isinstance(other, Matrix):
            return NotImplemented
        return self._binary(other, lambda a, b: a.field.mul(a, b))

    def __rmul__(self, other):
        if isinstance(other, Matrix):
            return NotImplemented
        return self.__mul__(other)

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a.field.mul(a, b.inverse()))

    def __rtruediv__(self, other):
        return self.inverse().__mul__(other)

    def __neg__(self):
        return self.field.neg(self)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("exponent must be an integer")
        base = self
        if k < 0:
            base = self.inverse()
            k = -k
        acc = self.field.one
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise DivisionByZero(f"inverse of zero in {self.field}")
        return self.field.inv(self)

    def is_zero(self) -> bool:
        return self.field.is_zero(self)

    def __bool__(self):
        return not self.is_zero()

    # -- structure -----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Scalar):
            if other.field == self.field:
                return self.rep == other.rep
            merged = _common_field(self.field, other.field)
            if merged is None:
                return False
            return merged.coerce(self).rep == merged.coerce(other).rep
        if isinstance(other, (int, Fraction)):
            try:
                return self.rep == self.field.coerce(other).rep
            except ScalarError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.rep))

    def __repr__(self):
        return self.field.render(self)

    __str__ = __repr__


def _common_field(f, g):
    """The larger of two fields when one embeds in the other, else None."""
    if f == g:
        return f
    if isinstance(f, RationalFunctionField):
        inner = _common_field(f.inner, g)
        if inner == f.inner:
            return f
    if isinstance(g, RationalFunctionField):
        inner = _common_field(f, g.inner)
        if inner == g.inner:
            return g
    if isinstance(f, CyclotomicFieldImpl) and g == QQ:
        return f
    if isinstance(g, CyclotomicFieldImpl) and f == QQ:
        return g
    return None


class _FieldBase:
    """Shared behaviour of the concrete field classes."""

    gen_name: str | None = None

    @property
    def zero(self) -> Scalar:
        return self.coerce(0)

    @property
    def one(self) -> Scalar:
        return self.coerce(1)

    @property
    def gen(self) -> Scalar | None:
        return None

    @property
    def characteristic(self) -> int:
        return 0

    def coerce(self, value) -> Scalar:
        raise NotImplementedError

    def __repr__(self):
        return self.name


class RationalField(_FieldBase):
    name = "Q"

    def coerce(self, value) -> Scalar:
        if isinstance(value, Scalar):
            if value.field == self:
                return value
            raise ScalarError(f"cannot coerce {value!r} into Q")
        if isinstance(value, (int, Fraction)):
            return Scalar(self, Fraction(value))
        raise ScalarError(f"cannot coerce {value!r} into Q")

    def add(self, a, b):
        return Scalar(self, a.rep + b.rep)

    def neg(self, a):
        return Scalar(self, -a.rep)

    def mul(self, a, b):
        return Scalar(self, a.rep * b.rep)

    def inv(self, a):
        return Scalar(self, Fraction(1) / a.rep)

    def is_zero(self, a):
        return a.rep == 0

    def render(self, a):
        return str(a.rep)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


QQ = RationalField()


class PrimeFieldImpl(_FieldBase):
    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"gf({p})"

    @property
    def characteristic(self) -> int:
        return self.p

    def coerce(self, value) -> Scalar:
        if isinstance(value, Scalar):
            if value.field == self:
                return value
            if value.field == QQ:
                value = value.rep
            else:
                raise ScalarError(f"cannot coerce {value!r} into {self.name}")
        if isinstance(value, int):
            return Scalar(self, value % self.p)
        if isinstance(value, Fraction):
            den = value.denominator % self.p
            if den == 0:
                raise ScalarError(f"denominator of {value} vanishes in {self.name}")
            return Scalar(self, value.numerator * pow(den, -1, self.p) % self.p)
        raise ScalarError(f"cannot coerce {value!r} into {self.name}")

    def add(self, a, b):
        return Scalar(self, (a.rep + b.rep) % self.p)

    def neg(self, a):
        return Scalar(self, -a.rep % self.p)

    def mul(self, a, b):
        return Scalar(self, a.rep * b.rep % self.p)

    def inv(self, a):
        return Scalar(self, pow(a.rep, -1, self.p))

    def is_zero(self, a):
        return a.rep == 0

    def render(self, a):
        return str(a.rep)

    def __eq__(self, other):
        return isinstance(other, PrimeFieldImpl) and other.p == self.p

    def __hash__(self):
        return hash(("gf", self.p))


@functools.lru_cache(maxsize=None)
def GF(p: int) -> PrimeFieldImpl:
    return PrimeFieldImpl(p)


class CyclotomicFieldImpl(_FieldBase):
    """Q(zeta_n); elements are coefficient tuples of length phi(n)."""

    gen_name = "z"

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("order must be positive")
        self.n = n
        self.modulus = cyclotomic_polynomial(n)
        self.degree = len(self.modulus) - 1
        self.name = f"cyclotomic({n})"

    @property
    def gen(self) -> Scalar:
        return self._reduce((Fraction(0), Fraction(1)))

    def _reduce(self, coeffs) -> Scalar:
        coeffs = _ptrim(tuple(Fraction(c) for c in coeffs))
        if len(coeffs) >= len(self.modulus):
            coeffs = _pdivmod(coeffs, self.modulus, Fraction(0))[1]
        rep = tuple(coeffs) + (Fraction(0),) * (self.degree - len(coeffs))
        return Scalar(self, rep)

    def coerce(self, value) -> Scalar:
        if isinstance(value, Scalar):
            if value.field == self:
                return value
            if value.field == QQ:
                value = value.rep
            else:
                raise ScalarError(f"cannot coerce {value!r} into {self.name}")
        if isinstance(value, (int, Fraction)):
            return self._reduce((Fraction(value),))
        if isinstance(value, (tuple, list)):
            return self._reduce(value)
        raise ScalarError(f"cannot coerce {value!r} into {self.name}")

    def add(self, a, b):
        return Scalar(self, tuple(x + y for x, y in zip(a.rep, b.rep)))

    def neg(self, a):
        return Scalar(self, tuple(-x for x in a.rep))

    def mul(self, a, b):
        prod = _pmul(_ptrim(a.rep), _ptrim(b.rep), Fraction(0))
        return self._reduce(prod)

    def inv(self, a):
        g, s, _ = _pxgcd(_ptrim(a.rep), self.modulus, Fraction(0), Fraction(1))
        if len(g) != 1:
            raise DivisionByZero(f"{a!r} is not invertible in {self.name}")
        return self._reduce(s)

    def is_zero(self, a):
        return all(c == 0 for c in a.rep)

    def render(self, a):
        return _render_poly(a.rep, "z", str)

    def __eq__(self, other):
        return isinstance(other, CyclotomicFieldImpl) and other.n == self.n

    def __hash__(self):
        return hash(("cyclotomic", self.n))


@functools.lru_cache(maxsize=None)
def CyclotomicField(n: int) -> CyclotomicFieldImpl:
    return CyclotomicFieldImpl(n)


class RationalFunctionField(_FieldBase):
    """Univariate rational functions over an inner field.

    Elements are (numerator, denominator) pairs of coefficient tuples over
    the inner field, coprime, with monic denominator.
    """

    def __init__(self, inner, name: str):
        if not name.isidentifier():
            raise ValueError(f"bad indeterminate name {name!r}")
        self.inner = inner
        self.var = name
        self.name = f"{inner.name}({name})"
        self.gen_name = name

    @property
    def characteristic(self) -> int:
        return self.inner.characteristic

    @property
    def gen(self) -> Scalar:
        return Scalar(self, ((self.inner.zero, self.inner.one), (self.inner.one,)))

    def _one_tuple(self) -> tuple:
        return (self.inner.one,)

    def _make(self, num, den) -> Scalar:
        num = _ptrim(num)
        den = _ptrim(den)
        if not den:
            raise DivisionByZero(f"zero denominator in {self.name}")
        if not num:
            return Scalar(self, ((), self._one_tuple()))
        if len(den) == 1 and den[0] == self.inner.one:
            return Scalar(self, (num, den))
        g = _pgcd(num, den, self.inner.zero)
        if len(g) > 1:
            num = _pdivmod(num, g, self.inner.zero)[0]
            den = _pdivmod(den, g, self.inner.zero)[0]
        lead_inv = _coeff_inv(den[-1])
        num = tuple(c * lead_inv for c in num)
        den = tuple(c * lead_inv for c in den)
        return Scalar(self, (num, den))

    def from_polys(self, num_coeffs, den_coeffs=None) -> Scalar:
        num = tuple(self.inner.coerce(c) for c in num_coeffs)
        den = (
            (self.inner.one,)
            if den_coeffs is None
            else tuple(self.inner.coerce(c) for c in den_coeffs)
        )
        return self._make(num, den)

    def coerce(self, value) -> Scalar:
        if isinstance(value, Scalar):
            if value.field is self or value.field == self:
                return value
            inner_val = self.inner.coerce(value)
            return Scalar(self, ((inner_val,), (self.inner.one,)) if inner_val else ((), (self.inner.one,)))
        if isinstance(value, (int, Fraction)):
            return self.coerce(self.inner.coerce(value))
        raise ScalarError(f"cannot coerce {value!r} into {self.name}")

    def add(self, a, b):
        (an, ad), (bn, bd) = a.rep, b.rep
        zero = self.inner.zero
        if ad == bd:
            num = _padd(an, bn)
            if len(ad) == 1 and ad[0] == self.inner.one:
                return Scalar(self, (num, ad)) if num else Scalar(self, ((), ad))
            return self._make(num, ad)
        num = _padd(_pmul(an, bd, zero), _pmul(bn, ad, zero))
        return self._make(num, _pmul(ad, bd, zero))

    def neg(self, a):
        num, den = a.rep
        return Scalar(self, (_pneg(num), den))

    def mul(self, a, b):
        (an, ad), (bn, bd) = a.rep, b.rep
        zero = self.inner.zero
        if (
            len(ad) == 1
            and len(bd) == 1
            and ad[0] == self.inner.one
            and bd[0] == self.inner.one
        ):
            if len(an) == 1 and len(bn) == 1:
                return Scalar(self, ((an[0] * bn[0],), ad))
            return Scalar(self, (_pmul(an, bn, zero), ad))
        return self._make(_pmul(an, bn, zero), _pmul(ad, bd, zero))

    def inv(self, a):
        num, den = a.rep
        return self._make(den, num)

    def is_zero(self, a):
        return not a.rep[0]

    def render(self, a):
        num, den = a.rep
        num_str = _render_poly(num, self.var, lambda c: _wrap(str(c)))
        if den == (self.inner.one,):
            return num_str
        den_str = _render_poly(den, self.var, lambda c: _wrap(str(c)))
        return f"({num_str})/({den_str})"

    def __eq__(self, other):
        return (
            isinstance(other, RationalFunctionField)
            and other.inner == self.inner
            and other.var == self.var
        )

    def __hash__(self):
        return hash(("ratfunc", self.inner, self.var))


@functools.lru_cache(maxsize=None)
def FunctionField(inner, name: str) -> RationalFunctionField:
    return RationalFunctionField(inner, name)


def _wrap(s: str) -> str:
    if any(ch in s[1:] for ch in "+- ") or "/" in s:
        return f"({s})"
    return s


def _render_poly(coeffs, var: str, coeff_str) -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        if k == 0:
            piece = coeff_str(c)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            if c == 1:
                piece = mono
            elif c == -1:
                piece = f"-{mono}"
            else:
                piece = f"{coeff_str(c)}*{mono}"
        terms.append(piece)
    if not terms:
        return "0"
    out = terms[0]
    for piece in terms[1:]:
        if piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out


def parse_field(descriptor: str):
    """Field from a descriptor like ``Q``, ``gf(5)``, ``cyclotomic(3)``, ``Q(t)``."""
    text = descriptor.strip()
    if text in ("Q", "QQ"):
        return QQ
    if text.endswith(")") and "(" in text:
        # split at the last top-level '(' so nested heads like gf(5)(t) work
        depth = 0
        split = None
        for i in range(len(text) - 1, -1, -1):
            if text[i] == ")":
                depth += 1
            elif text[i] == "(":
                depth -= 1
                if depth == 0:
                    split = i
                    break
        if split is not None:
            head = text[:split].strip()
            arg = text[split + 1 : -1].strip()
            if head.lower() == "gf" and arg.isdigit():
                return GF(int(arg))
            if head.lower() == "cyclotomic" and arg.isdigit():
                return CyclotomicField(int(arg))
            if arg.isidentifier():
                return FunctionField(parse_field(head), arg)
    raise ValueError(f"unrecognised field descriptor {descriptor!r}")


def canonicalize(s: Scalar) -> Scalar:
    """Rebuild a scalar through its field's canonical constructor.

    Construction already stores canonical forms, so this is idempotent and
    acts as the equality normal form.
    """
    field = s.field
    if field == QQ or isinstance(field, PrimeFieldImpl):
        return field.coerce(s.rep if not isinstance(s.rep, tuple) else s.rep)
    if isinstance(field, CyclotomicFieldImpl):
        return field._reduce(s.rep)
    if isinstance(field, RationalFunctionField):
        num, den = s.rep
        return field._make(num, den)
    raise ScalarError(f"unknown field {field!r}")


# ---------------------------------------------------------------------------
# roots of unity


def root_of_unity_order(s: Scalar) -> int | None:
    """Smallest N with s**N == 1, or None when s is not a root of unity.

    The search bound is field-determined: Q admits only orders 1 and 2;
    Q(zeta_n) only divisors of lcm(2, n); GF(p) only divisors of p - 1;
    a rational function must be constant, deferring to the inner field.
    """
    if s.is_zero():
        raise ZeroInput("0 is not a root of unity")
    field = s.field
    if field == QQ:
        if s.rep == 1:
            return 1
        if s.rep == -1:
            return 2
        return None
    if isinstance(field, PrimeFieldImpl):
        return _order_dividing(s, field.p - 1)
    if isinstance(field, CyclotomicFieldImpl):
        return _order_dividing(s, math.lcm(2, field.n))
    if isinstance(field, RationalFunctionField):
        num, den = s.rep
        if len(num) <= 1 and den == (field.inner.one,):
            return root_of_unity_order(num[0])
        return None
    raise ScalarError(f"unknown field {field!r}")


def _order_dividing(s: Scalar, bound: int) -> int | None:
    one = s.field.one
    if s ** bound != one:
        return None
    for d in divisors(bound):
        if s ** d == one:
            return d
    return None


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Immutable exact matrix over one of the scalar fields."""

    __slots__ = ("field", "rows")

    def __init__(self, field, rows):
        self.field = field
        self.rows = tuple(
            tuple(
                c if type(c) is Scalar and c.field is field else field.coerce(c)
                for c in row
            )
            for row in rows
        )
        if self.rows:
            width = len(self.rows[0])
            if any(len(row) != width for row in self.rows):
                raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, field, nrows: int, ncols: int) -> "Matrix":
        return cls(field, [[0] * ncols for _ in range(nrows)])

    @classmethod
    def unit(cls, field, n: int, i: int, j: int) -> "Matrix":
        """The matrix unit e_{ij} (0-based indices) in Mat_n."""
        return cls(field, [[1 if (r, c) == (i, j) else 0 for c in range(n)] for r in range(n)])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return Matrix(
            self.field,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return Matrix(
            self.field,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def __neg__(self):
        return Matrix(self.field, [[-a for a in row] for row in self.rows])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("matrix dimension mismatch")
            cols = list(zip(*other.rows))
            return Matrix(
                self.field,
                [
                    [_dot(row, col, self.field) for col in cols]
                    for row in self.rows
                ],
            )
        if isinstance(other, (Scalar, int, Fraction)):
            s = self.field.coerce(other)
            return Matrix(self.field, [[a * s for a in row] for row in self.rows])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            s = self.field.coerce(other)
            return Matrix(self.field, [[s * a for a in row] for row in self.rows])
        return NotImplemented

    def __pow__(self, k: int):
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        acc = Matrix.identity(self.field, self.nrows)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.rows == other.rows

    def __hash__(self):
        return hash((self.field, self.rows))

    def is_zero(self) -> bool:
        return all(a.is_zero() for row in self.rows for a in row)

    def __bool__(self):
        return not self.is_zero()

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        aug = [list(row) + list(ident) for row, ident in zip(self.rows, Matrix.identity(self.field, n).rows)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
            if pivot is None:
                raise DivisionByZero("matrix is singular")
            aug[col], aug[pivot] = aug[pivot], aug[col]
            inv = aug[col][col].inverse()
            aug[col] = [a * inv for a in aug[col]]
            for r in range(n):
                if r != col and not aug[r][col].is_zero():
                    factor = aug[r][col]
                    aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
        return Matrix(self.field, [row[n:] for row in aug])

    def is_invertible(self) -> bool:
        try:
            self.inverse()
        except DivisionByZero:
            return False
        return True

    def scalar_part(self) -> Scalar | None:
        """The z with self == z*I, or None when self is not central."""
        if not self.is_square() or self.nrows == 0:
            return None
        z = self.rows[0][0]
        expected = Matrix.identity(self.field, self.nrows) * z
        return z if self == expected else None

    def __repr__(self):
        inner = ", ".join("[" + ", ".join(str(a) for a in row) + "]" for row in self.rows)
        return f"[{inner}]"

    __str__ = __repr__


def _dot(row, col, field):
    acc = None
    for a, b in zip(row, col):
        if a.is_zero() or b.is_zero():
            continue
        term = a * b
        acc = term if acc is None else acc + term
    return acc if acc is not None else field.zero


def solve_linear_system(a: Matrix, b) -> list[Scalar] | None:
    """One exact solution of A x = b, or None when the system is inconsistent.

    Free variables are set to 0; if that yields the zero vector on a
    homogeneous system, the free variables are instead set to 1 one at a
    time in ascending column order until a nonzero solution appears.
    """
    field = a.field
    b = [field.coerce(c) for c in b]
    if len(b) != a.nrows:
        raise ValueError("right-hand side length does not match row count")
    nrows, ncols = a.nrows, a.ncols
    aug = [list(row) + [rhs] for row, rhs in zip(a.rows, b)]

    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, nrows) if not aug[i][col].is_zero()), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = aug[r][col].inverse()
        aug[r] = [v * inv for v in aug[r]]
        for i in range(nrows):
            if i != r and not aug[i][col].is_zero():
                factor = aug[i][col]
                aug[i] = [v - factor * w for v, w in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if not aug[i][ncols].is_zero():
            return None

    free_cols = [c for c in range(ncols) if c not in pivots]

    def build(free_assignment):
        x = [field.zero] * ncols
        for c, v in free_assignment.items():
            x[c] = v
        for row_idx, col in enumerate(pivots):
            val = aug[row_idx][ncols]
            for c in free_cols:
                val = val - aug[row_idx][c] * x[c]
            x[col] = val
        return x

    solution = build({})
    if all(v.is_zero() for v in solution) and all(v.is_zero() for v in b):
        for c in free_cols:
            candidate = build({c: field.one})
            if any(not v.is_zero() for v in candidate):
                return candidate
    return solution
