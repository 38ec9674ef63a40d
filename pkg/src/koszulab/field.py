"""Exact coefficient fields: arbitrary-precision rationals and prime fields.

A :class:`Field` is an immutable descriptor that knows how to operate on raw
element values: `fractions.Fraction` for the rationals, plain `int` residues
in ``[0, p)`` for a prime field.  Raw values keep the polynomial layer lean;
:class:`FieldElement` wraps a value together with its field for callers that
want checked, self-describing scalars.

Both representations are canonical (reduced fraction / least nonnegative
residue), so equality of values is equality of field elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DivisionByZero, MixedFields

MAX_CHARACTERISTIC = 1 << 62

# Deterministic Miller-Rabin witnesses for all n < 3.3 * 10^24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Field:
    """Descriptor of the coefficient field; ``char`` is 0 or a prime < 2^62."""

    char: int = 0

    def __post_init__(self):
        if self.char != 0:
            if self.char >= MAX_CHARACTERISTIC or not is_prime(self.char):
                raise ValueError(f"characteristic must be 0 or a prime < 2^62, got {self.char}")

    @staticmethod
    def rationals() -> "Field":
        return Field(0)

    @staticmethod
    def prime(p: int) -> "Field":
        return Field(p)

    @property
    def kind(self) -> str:
        return "rationals" if self.char == 0 else "prime-field"

    # -- raw-value arithmetic ------------------------------------------------

    @property
    def zero(self):
        return Fraction(0) if self.char == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.char == 0 else 1

    def from_int(self, n: int):
        return Fraction(n) if self.char == 0 else n % self.char

    def from_fraction(self, num: int, den: int):
        if self.char == 0:
            return Fraction(num, den)
        if den % self.char == 0:
            raise DivisionByZero(f"denominator {den} vanishes in F_{self.char}")
        return num * pow(den, -1, self.char) % self.char

    def add(self, a, b):
        return a + b if self.char == 0 else (a + b) % self.char

    def sub(self, a, b):
        return a - b if self.char == 0 else (a - b) % self.char

    def mul(self, a, b):
        return a * b if self.char == 0 else a * b % self.char

    def neg(self, a):
        return -a if self.char == 0 else -a % self.char

    def inv(self, a):
        if not a:
            raise DivisionByZero("inverse of zero")
        return 1 / a if self.char == 0 else pow(a, -1, self.char)

    def div(self, a, b):
        if not b:
            raise DivisionByZero("division by zero")
        return a / b if self.char == 0 else a * pow(b, -1, self.char) % self.char

    def pow(self, a, n: int):
        if self.char == 0:
            return a**n
        if n < 0:
            return pow(self.inv(a), -n, self.char)
        return pow(a, n, self.char)

    def format(self, a) -> str:
        if self.char == 0 and a.denominator != 1:
            return f"{a.numerator}/{a.denominator}"
        return str(a if self.char == 0 else a)

    def __str__(self):
        return "Q" if self.char == 0 else f"F{self.char}"


# Default CLI field: the customary computer-algebra prime.
DEFAULT_PRIME = 32003


@dataclass(frozen=True)
class FieldElement:
    """A checked scalar: a canonical value tagged with its field."""

    field: Field
    value: object

    @staticmethod
    def of(field: Field, n) -> "FieldElement":
        if isinstance(n, Fraction) and field.char == 0:
            return FieldElement(field, n)
        return FieldElement(field, field.from_int(n) if isinstance(n, int) else n)

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise MixedFields(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, int):
            return FieldElement(self.field, self.field.from_int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, self.field.add(self.value, other.value))

    def __sub__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, self.field.sub(self.value, other.value))

    def __mul__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, self.field.mul(self.value, other.value))

    def __truediv__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, self.field.div(self.value, other.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.value, n))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __bool__(self):
        return bool(self.value)

    def __str__(self):
        return self.field.format(self.value)


def field_arithmetic(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Dispatch form of the four field operations; op in {add, sub, mul, div}."""
    if a.field != b.field:
        raise MixedFields(f"{a.field} vs {b.field}")
    return {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}[op](b)
