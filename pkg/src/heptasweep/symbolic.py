"""Scalar arithmetic that survives a vanishing pivot.

A :class:`Scalar` is either a plain float or a rational function in one
symbol (rendered ``s``) with exact rational coefficients.  The symbol
enters the computation when a sweep pivot is numerically zero; every
quantity that transitively touches it becomes a rational function, and the
solver finishes by cancelling common factors and substituting ``s = 0``.

Coefficients are :class:`fractions.Fraction` values.  Floats are promoted
exactly (every finite float is a dyadic rational) at the moment a numeric
value meets a symbolic one; polynomial cancellation over floats would be
meaningless.  Canonical form -- numerator and denominator coprime, monic
denominator -- is restored eagerly after every operation, so equality is
structural and cancellation is always complete.

All values here are immutable and every operation is a pure function; the
module is safe for concurrent use (the degree guard is a context variable,
scoped per thread/task).
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from contextvars import ContextVar
from fractions import Fraction

from .errors import (
    ContractViolationError,
    DegreeLimitError,
    NonFiniteEntryError,
    PoleAtZeroError,
    ScalarDivisionError,
)

#: Name used when rendering the pivot symbol.
SYMBOL_NAME = "s"

#: Diagnostic cap on num/den degrees; ``None`` disables the check.
#: The sweep sets this to 2N for the duration of a solve.
_DEGREE_LIMIT: ContextVar[int | None] = ContextVar("heptasweep_degree_limit", default=None)


@contextmanager
def degree_limit(bound: int | None):
    """Scope a maximum rational-function degree (implementation-bug guard)."""
    token = _DEGREE_LIMIT.set(bound)
    try:
        yield
    finally:
        _DEGREE_LIMIT.reset(token)


def promote(x) -> Fraction:
    """Exact conversion of a finite float to a rational; never rounds."""
    x = float(x)
    if not math.isfinite(x):
        raise NonFiniteEntryError(f"cannot promote non-finite value {x!r}")
    return Fraction(x)


class Poly:
    """Univariate polynomial with Fraction coefficients, ascending degree.

    The zero polynomial is the empty coefficient tuple; otherwise the
    leading coefficient is nonzero.  Coefficients must be ints or
    Fractions -- floats are rejected so that promotion stays explicit.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = []
        for c in coeffs:
            if isinstance(c, Fraction):
                cs.append(c)
            elif isinstance(c, int):
                cs.append(Fraction(c))
            else:
                raise ContractViolationError(
                    f"polynomial coefficients must be exact rationals, got {type(c).__name__}"
                )
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            raise ContractViolationError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def constant_term(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def scale(self, k: Fraction) -> "Poly":
        if not k:
            return Poly()
        return Poly(tuple(c * k for c in self.coeffs))

    def monic(self) -> "Poly":
        lc = self.leading
        return self if lc == 1 else self.scale(1 / lc)

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __add__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, ci in enumerate(self.coeffs):
            if not ci:
                continue
            for j, cj in enumerate(other.coeffs):
                out[i + j] += ci * cj
        return Poly(out)

    def __divmod__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        if other.is_zero:
            raise ScalarDivisionError("polydiv", "division by the zero polynomial")
        dn, lc = other.degree, other.leading
        if self.degree < dn:
            return Poly(), self
        q = [Fraction(0)] * (self.degree - dn + 1)
        r = list(self.coeffs)
        while len(r) - 1 >= dn:
            k = len(r) - 1 - dn
            f = r[-1] / lc
            if f:
                q[k] = f
                for idx in range(dn):
                    r[k + idx] -= f * other.coeffs[idx]
            r.pop()
        return Poly(q), Poly(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        return _poly_str(self)

    def __repr__(self):
        return f"Poly({self})"


#: Shared constants; Poly is immutable so aliasing is safe.
P_ZERO = Poly()
P_ONE = Poly((1,))
P_X = Poly((0, 1))


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic greatest common divisor by the Euclidean algorithm."""
    if p.is_zero and q.is_zero:
        raise ContractViolationError("gcd of two zero polynomials is undefined")
    a, b = p, q
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def _poly_str(p: Poly) -> str:
    if p.is_zero:
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if not c:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            power = SYMBOL_NAME if k == 1 else f"{SYMBOL_NAME}^{k}"
            if mag == 1:
                body = power
            elif mag.denominator == 1:
                body = f"{mag}*{power}"
            else:
                body = f"({mag})*{power}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(parts)


class RationalFn:
    """Ratio of two polynomials in canonical form.

    Canonical means: numerator and denominator coprime, denominator monic
    (its leading coefficient absorbed into the numerator), and the zero
    function stored as 0/1.  The constructor canonicalizes uncondition-
    ally, so every reachable instance satisfies the invariant.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = P_ONE):
        if den.is_zero:
            raise ScalarDivisionError("rationalfn", "zero denominator polynomial")
        if num.is_zero:
            num, den = P_ZERO, P_ONE
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            lc = den.leading
            if lc != 1:
                inv = 1 / lc
                num, den = num.scale(inv), den.scale(inv)
        limit = _DEGREE_LIMIT.get()
        if limit is not None and (num.degree > limit or den.degree > limit):
            raise DegreeLimitError(
                f"rational function degree exceeds limit {limit}: "
                f"num {num.degree}, den {den.degree}"
            )
        self.num = num
        self.den = den

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def eval_at_zero(self) -> Fraction:
        """Value at the symbol = 0; raises if the denominator vanishes there."""
        d0 = self.den.constant_term
        if not d0:
            raise PoleAtZeroError(f"pole at {SYMBOL_NAME}=0 in {self}")
        return self.num.constant_term / d0

    def __neg__(self):
        return RationalFn(-self.num, self.den)

    def __add__(self, other):
        if not isinstance(other, RationalFn):
            return NotImplemented
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other):
        if not isinstance(other, RationalFn):
            return NotImplemented
        return RationalFn(self.num * other.den - other.num * self.den, self.den * other.den)

    def __mul__(self, other):
        if not isinstance(other, RationalFn):
            return NotImplemented
        return RationalFn(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if not isinstance(other, RationalFn):
            return NotImplemented
        if other.is_zero:
            raise ScalarDivisionError("div", f"{self} / {other}")
        return RationalFn(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        return (
            isinstance(other, RationalFn)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        if self.den == P_ONE:
            return _poly_str(self.num)
        return f"({_poly_str(self.num)})/({_poly_str(self.den)})"

    def __repr__(self):
        return f"RationalFn({self})"


_SYMBOL_FN = RationalFn(P_X)


def fraction_to_float(fr: Fraction) -> float:
    """Correctly rounded float of a Fraction; saturates to +/-inf on overflow."""
    try:
        return float(fr)
    except OverflowError:
        return math.inf if fr > 0 else -math.inf


def _as_rfn(v) -> RationalFn:
    if isinstance(v, RationalFn):
        return v
    if isinstance(v, Fraction):
        return RationalFn(Poly((v,)))
    return RationalFn(Poly((promote(v),)))


class Scalar:
    """A plain float or a rational function in the fallback symbol.

    Arithmetic between two numeric values is ordinary floating point; as
    soon as one operand is symbolic the other is promoted exactly and the
    result is a symbolic value in canonical form.  A symbolic value whose
    function is constant stays symbolic -- demotion to a float happens only
    in :meth:`substitute_zero`.
    """

    __slots__ = ("value",)

    def __init__(self, value):
        if isinstance(value, (int, bool)):
            value = float(value)
        if not isinstance(value, (float, RationalFn)):
            raise ContractViolationError(f"Scalar holds float or RationalFn, got {type(value).__name__}")
        self.value = value

    @classmethod
    def number(cls, x) -> "Scalar":
        return cls(float(x))

    @classmethod
    def symbol(cls) -> "Scalar":
        """The bare symbol: the rational function s/1."""
        return cls(_SYMBOL_FN)

    @classmethod
    def rational(cls, rfn: RationalFn) -> "Scalar":
        return cls(rfn)

    @property
    def is_numeric(self) -> bool:
        return isinstance(self.value, float)

    @property
    def is_symbolic(self) -> bool:
        return isinstance(self.value, RationalFn)

    def substitute_zero(self) -> float:
        """Numeric values pass through; symbolic ones evaluate at symbol = 0."""
        if isinstance(self.value, float):
            return self.value
        return fraction_to_float(self.value.eval_at_zero())

    # -- arithmetic ----------------------------------------------------

    @staticmethod
    def _operand(other):
        if isinstance(other, Scalar):
            return other.value
        if isinstance(other, Fraction):
            return other
        if isinstance(other, (int, float)):
            return float(other)
        return None

    def __add__(self, other):
        ov = self._operand(other)
        if ov is None:
            return NotImplemented
        return Scalar(_add_values(self.value, ov))

    __radd__ = __add__

    def __sub__(self, other):
        ov = self._operand(other)
        if ov is None:
            return NotImplemented
        return Scalar(_sub_values(self.value, ov))

    def __rsub__(self, other):
        ov = self._operand(other)
        if ov is None:
            return NotImplemented
        return Scalar(_sub_values(ov, self.value))

    def __mul__(self, other):
        ov = self._operand(other)
        if ov is None:
            return NotImplemented
        return Scalar(_mul_values(self.value, ov))

    __rmul__ = __mul__

    def __truediv__(self, other):
        ov = self._operand(other)
        if ov is None:
            return NotImplemented
        return Scalar(_div_values(self.value, ov))

    def __rtruediv__(self, other):
        ov = self._operand(other)
        if ov is None:
            return NotImplemented
        return Scalar(_div_values(ov, self.value))

    def __neg__(self):
        return Scalar(-self.value)

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        # Structural: a numeric and a constant symbolic never compare equal.
        return type(self.value) is type(other.value) and self.value == other.value

    def __hash__(self):
        return hash((type(self.value).__name__, self.value))

    def __str__(self):
        return repr(self.value) if isinstance(self.value, float) else str(self.value)

    def __repr__(self):
        return f"Scalar({self})"


def _add_values(l, r):
    if isinstance(l, float) and isinstance(r, float):
        return l + r
    return _as_rfn(l) + _as_rfn(r)


def _sub_values(l, r):
    if isinstance(l, float) and isinstance(r, float):
        return l - r
    return _as_rfn(l) - _as_rfn(r)


def _mul_values(l, r):
    if isinstance(l, float) and isinstance(r, float):
        return l * r
    return _as_rfn(l) * _as_rfn(r)


def _div_values(l, r):
    if (isinstance(r, float) and r == 0.0) or (isinstance(r, RationalFn) and r.is_zero):
        raise ScalarDivisionError("div", f"{_value_str(l)} / {_value_str(r)}")
    if isinstance(l, float) and isinstance(r, float):
        return l / r
    return _as_rfn(l) / _as_rfn(r)


def _value_str(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def _to_scalar(v) -> Scalar:
    if isinstance(v, Scalar):
        return v
    if isinstance(v, (int, float)):
        return Scalar(float(v))
    raise ContractViolationError(f"not a scalar value: {v!r}")


# -- module-level operation surface ------------------------------------


def add(l, r) -> Scalar:
    return _to_scalar(l) + _to_scalar(r)


def sub(l, r) -> Scalar:
    return _to_scalar(l) - _to_scalar(r)


def mul(l, r) -> Scalar:
    return _to_scalar(l) * _to_scalar(r)


def div(l, r) -> Scalar:
    return _to_scalar(l) / _to_scalar(r)


def substitute_zero(s) -> float:
    return _to_scalar(s).substitute_zero()


def is_numerically_zero(s, eps: float) -> bool:
    """|s| < eps for numeric scalars; symbolic values must never be compared."""
    s = _to_scalar(s)
    if not s.is_numeric:
        raise ContractViolationError(
            "numeric zero test called on a symbolic value; once the fallback "
            "is active pivots are never compared against eps"
        )
    return abs(s.value) < eps


def is_exact_zero(v) -> bool:
    """True when a float or Scalar is exactly zero (after cancellation)."""
    if isinstance(v, Scalar):
        v = v.value
    if isinstance(v, RationalFn):
        return v.is_zero
    return v == 0.0
