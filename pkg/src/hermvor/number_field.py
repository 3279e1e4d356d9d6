"""Exact arithmetic in an imaginary quadratic field F = Q(w) and its maximal order.

The generator is ``w = sqrt(D/4)`` for ``D = 0 mod 4`` and ``w = (1 + sqrt(D))/2``
for ``D = 1 mod 4``; in both cases ``w**2 = t*w - n`` with ``t = tr(w)`` and
``n = norm(w)``.  Elements are stored in the basis ``{1, w}``.

Two layers are provided.  :class:`QuadElement` and :class:`QuadInteger` are the
public immutable value types.  Hot loops elsewhere in the package operate on raw
integer pairs ``(a, b)`` through the ``QuadField`` helper methods, which avoid
object allocation.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

Rational = Fraction


def _squarefree(m: int) -> bool:
    m = abs(m)
    if m == 0:
        return False
    p = 2
    while p * p <= m:
        if m % (p * p) == 0:
            return False
        p += 1
    return True


def is_fundamental(D: int) -> bool:
    """True iff ``D`` is a negative fundamental discriminant."""
    if D >= 0:
        return False
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


class QuadField:
    """The field Q(w_D) together with its ring of integers Z[w_D]."""

    def __init__(self, D: int):
        if not is_fundamental(D):
            raise ValueError(f"{D} is not a negative fundamental discriminant")
        self.D = D
        if D % 4 == 0:
            self.t, self.n = 0, -D // 4
        else:
            self.t, self.n = 1, (1 - D) // 4
        self._units = self._compute_units()

    def __repr__(self):
        return f"QuadField({self.D})"

    def __eq__(self, other):
        return isinstance(other, QuadField) and other.D == self.D

    def __hash__(self):
        return hash(("QuadField", self.D))

    def __reduce__(self):
        return (field, (self.D,))

    # -- integer-pair arithmetic -------------------------------------------
    def mul(self, x, y):
        a, b = x
        c, d = y
        bd = b * d
        return (a * c - self.n * bd, a * d + b * c + self.t * bd)

    def conj(self, x):
        a, b = x
        return (a + self.t * b, -b)

    def norm(self, x):
        a, b = x
        return a * a + self.t * a * b + self.n * b * b

    def mul_conj(self, x, y):
        """``conj(x) * y`` without materialising the conjugate."""
        a, b = x
        c, d = y
        a = a + self.t * b
        b = -b
        bd = b * d
        return (a * c - self.n * bd, a * d + b * c + self.t * bd)

    def trace(self, x):
        a, b = x
        return 2 * a + self.t * b

    def divide(self, x, y):
        """Exact quotient ``x / y`` as a pair of Fractions."""
        N = self.norm(y)
        if N == 0:
            raise ZeroDivisionError("division by zero in F")
        p = self.mul(x, self.conj(y))
        return (Fraction(p[0], N), Fraction(p[1], N))

    def divide_exact(self, x, y):
        """``x / y`` as an integer pair, or ``None`` when not in O."""
        N = self.norm(y)
        p0, p1 = self.mul(x, self.conj(y))
        if p0 % N or p1 % N:
            return None
        return (p0 // N, p1 // N)

    def embed(self, x) -> complex:
        """Complex embedding (heuristics only, never equality)."""
        return complex(x[0]) + complex(x[1]) * self.omega_complex

    @property
    def omega_complex(self) -> complex:
        if self.t == 0:
            return complex(0.0, math.sqrt(self.n))
        return complex(0.5, math.sqrt(-self.D) / 2)

    # -- structure ----------------------------------------------------------
    def _compute_units(self):
        if self.D == -4:
            return [(1, 0), (0, 1), (-1, 0), (0, -1)]
        if self.D == -3:
            # w = (1 + sqrt(-3))/2 is a primitive sixth root of unity
            units, u = [], (1, 0)
            for _ in range(6):
                units.append(u)
                u = self.mul(u, (0, 1))
            return units
        return [(1, 0), (-1, 0)]

    @property
    def units(self):
        return list(self._units)

    @property
    def num_units(self) -> int:
        return len(self._units)

    def companion(self):
        """Matrix of multiplication by w on O = Z + Z w (columns are images)."""
        return [[0, -self.n], [1, self.t]]

    def element(self, a, b=0) -> "QuadElement":
        return QuadElement(self, a, b)

    def integer(self, a, b=0) -> "QuadInteger":
        return QuadInteger(self, a, b)


@lru_cache(maxsize=None)
def field(D: int) -> QuadField:
    return QuadField(D)


def units(D: int) -> list["QuadInteger"]:
    K = field(D)
    return [QuadInteger(K, a, b) for a, b in K.units]


def omega_companion(D: int) -> list[list[int]]:
    return field(D).companion()


class QuadElement:
    """Immutable element ``a + b*w`` of F with rational coordinates."""

    __slots__ = ("K", "a", "b")

    def __init__(self, K: QuadField, a=0, b=0):
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def _coerce(self, other):
        if isinstance(other, QuadElement):
            if other.K.D != self.K.D:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, int):
            return QuadInteger(self.K, other, 0)
        if isinstance(other, Fraction):
            return QuadElement(self.K, other, 0)
        return NotImplemented

    def _result(self, other, a, b):
        if isinstance(self, QuadInteger) and isinstance(other, QuadInteger):
            return QuadInteger(self.K, a, b)
        return QuadElement(self.K, a, b)

    @property
    def pair(self):
        return (self.a, self.b)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._result(other, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return self._result(self, -self.a, -self.b)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._result(other, self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.K.mul((self.a, self.b), (other.a, other.b))
        return self._result(other, a, b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.K.divide((self.a, self.b), (other.a, other.b))
        return QuadElement(self.K, a, b)

    def __rtruediv__(self, other):
        return QuadElement(self.K, other) / self

    def conj(self):
        a, b = self.K.conj((self.a, self.b))
        return self._result(self, a, b)

    def norm(self) -> Fraction:
        return self.K.norm((self.a, self.b))

    def trace(self) -> Fraction:
        return self.K.trace((self.a, self.b))

    def is_rational(self) -> bool:
        return self.b == 0

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def __complex__(self):
        return self.K.embed((float(self.a), float(self.b)))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadElement):
            return self.K.D == other.K.D and self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.K.D, self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return f"{type(self).__name__}({self.a}, {self.b}; D={self.K.D})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*w"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}*w"


class QuadInteger(QuadElement):
    """Element ``a + b*w`` of O = Z[w]."""

    __slots__ = ()

    def __init__(self, K: QuadField, a=0, b=0):
        a, b = Fraction(a), Fraction(b)
        if a.denominator != 1 or b.denominator != 1:
            raise ValueError(f"{a} + {b}*w is not in O")
        QuadElement.__init__(self, K, a, b)

    @property
    def ints(self) -> tuple[int, int]:
        return (int(self.a), int(self.b))

    def is_unit(self) -> bool:
        return self.norm() == 1


def scale_vector(K: QuadField, u, vec: tuple) -> tuple:
    """``u * vec`` for a flat O-vector ``(a1, b1, a2, b2, ...)``."""
    out = []
    for i in range(0, len(vec), 2):
        out.extend(K.mul(u, (vec[i], vec[i + 1])))
    return tuple(out)


def unit_multiples(K: QuadField, vec: tuple) -> list[tuple]:
    """All unit multiples of a flat O-vector."""
    return [scale_vector(K, u, vec) for u in K.units]


def canonical(K: QuadField, vec: tuple) -> tuple:
    """The lexicographically largest unit multiple of a flat O-vector."""
    return max(unit_multiples(K, vec))


__all__ = [
    "Rational", "QuadField", "QuadElement", "QuadInteger", "field",
    "is_fundamental", "units", "omega_companion", "canonical",
    "unit_multiples", "scale_vector",
]
