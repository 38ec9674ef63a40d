"""Sparse multivariate polynomials over an exact field, under a fixed
monomial order (grevlex or lex) with the standard grading.

Monomials are exponent tuples, one entry per ring variable.  A polynomial is
an immutable, canonically sorted tuple of (monomial, coefficient) terms in
strictly descending order, so structural equality is mathematical equality
and the leading term is ``terms[0]``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import reduce

from .errors import DegreeOverflow, MixedRings, PolySyntaxError, UnknownVariable, ZeroElement
from .field import Field

Monomial = tuple  # exponent tuple, one int per variable

MAX_EXPONENT = 1 << 16  # fixed-width exponents; exceeding this is a hard error
NEG_INFINITY = float("-inf")  # degree of the zero polynomial


@dataclass(frozen=True)
class RingDescriptor:
    """A polynomial ring k[x_1..x_n] with a monomial order and unit weights
    unless overridden.  Variable order in ``variables`` is the precedence
    order (earlier = larger)."""

    field: Field
    variables: tuple
    order: str = "grevlex"
    weights: tuple = ()

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        if self.order not in ("grevlex", "lex"):
            raise ValueError(f"unknown order {self.order!r}")
        if not self.weights:
            object.__setattr__(self, "weights", (1,) * len(self.variables))
        if len(self.weights) != len(self.variables) or any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive, one per variable")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def weighted_degree(self, mono: Monomial) -> int:
        return sum(w * e for w, e in zip(self.weights, mono))

    def monomial_key(self, mono: Monomial):
        """Sort key ascending in the ring order."""
        if self.order == "lex":
            return mono
        return (self.weighted_degree(mono), tuple(-e for e in reversed(mono)))

    def zero(self) -> "Polynomial":
        return Polynomial(self, ())

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        v = self.field.from_int(c) if isinstance(c, int) else c
        if not v:
            return self.zero()
        return Polynomial(self, (((0,) * self.nvars, v),))

    def var(self, name: str) -> "Polynomial":
        i = self.variables.index(name)
        mono = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, ((mono, self.field.one),))

    def monomial(self, exps, coeff=None) -> "Polynomial":
        c = self.field.one if coeff is None else coeff
        if not c:
            return self.zero()
        return Polynomial(self, ((tuple(exps), c),))

    def from_terms(self, terms: dict) -> "Polynomial":
        """Canonicalize a {monomial: coeff} dict into a Polynomial."""
        items = [(m, c) for m, c in terms.items() if c]
        items.sort(key=lambda t: self.monomial_key(t[0]), reverse=True)
        return Polynomial(self, tuple(items))

    def __str__(self):
        return f"{self.field}[{','.join(self.variables)}]:{self.order}"


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    out = tuple(x + y for x, y in zip(a, b))
    if any(e >= MAX_EXPONENT for e in out):
        raise DegreeOverflow(f"exponent exceeds {MAX_EXPONENT}")
    return out


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True if monomial a divides b."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


@dataclass(frozen=True)
class Polynomial:
    """Canonical sparse polynomial; construct via RingDescriptor factories."""

    ring: RingDescriptor
    terms: tuple  # ((monomial, coeff), ...) strictly descending, no zeros

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def leading_term(self):
        """(monomial, coeff) of the largest term; raises on the zero polynomial."""
        if not self.terms:
            raise ZeroElement("zero polynomial has no leading term")
        return self.terms[0]

    def leading_monomial(self) -> Monomial:
        return self.leading_term()[0]

    def degree(self):
        """Weighted total degree of the leading monomial; -inf for zero."""
        if not self.terms:
            return NEG_INFINITY
        return max(self.ring.weighted_degree(m) for m, _ in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {self.ring.weighted_degree(m) for m, _ in self.terms}
        return len(degs) <= 1

    def homogeneous_degree(self):
        """Degree if homogeneous and nonzero, else None."""
        degs = {self.ring.weighted_degree(m) for m, _ in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise MixedRings(f"{self.ring} vs {other.ring}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        fld = self.ring.field
        acc = dict(self.terms)
        for m, c in other.terms:
            s = fld.add(acc.get(m, fld.zero), c)
            if s:
                acc[m] = s
            else:
                acc.pop(m, None)
        return self.ring.from_terms(acc)

    def __neg__(self) -> "Polynomial":
        fld = self.ring.field
        return Polynomial(self.ring, tuple((m, fld.neg(c)) for m, c in self.terms))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        fld = self.ring.field
        acc = {}
        for ma, ca in self.terms:
            for mb, cb in other.terms:
                m = mono_mul(ma, mb)
                s = fld.add(acc.get(m, fld.zero), fld.mul(ca, cb))
                if s:
                    acc[m] = s
                else:
                    acc.pop(m, None)
        return self.ring.from_terms(acc)

    def scale(self, c) -> "Polynomial":
        if not c:
            return self.ring.zero()
        fld = self.ring.field
        return Polynomial(self.ring, tuple((m, fld.mul(cc, c)) for m, cc in self.terms))

    def mul_term(self, mono: Monomial, coeff) -> "Polynomial":
        if not coeff:
            return self.ring.zero()
        fld = self.ring.field
        return Polynomial(
            self.ring, tuple((mono_mul(m, mono), fld.mul(c, coeff)) for m, c in self.terms)
        )

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.terms[0][1]
        return self.scale(self.ring.field.inv(lc))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)})"


def poly_arithmetic(f: Polynomial, g: Polynomial, op: str) -> Polynomial:
    """Dispatch form used by the CLI layer; op in {add, sub, mul}."""
    return {"add": f.__add__, "sub": f.__sub__, "mul": f.__mul__}[op](g)


# -- text format ---------------------------------------------------------------


def format_poly(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    ring = p.ring
    fld = ring.field
    parts = []
    for idx, (mono, coeff) in enumerate(p.terms):
        neg = False
        if fld.char == 0 and coeff < 0:
            neg, coeff = True, -coeff
        factors = [
            v if e == 1 else f"{v}^{e}" for v, e in zip(ring.variables, mono) if e
        ]
        if not factors:
            body = fld.format(coeff)
        elif coeff == fld.one:
            body = "*".join(factors)
        else:
            body = "*".join([fld.format(coeff)] + factors)
        if idx == 0:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9']*|\^|\*|\+|-|/|\(|\))")


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolySyntaxError(f"unexpected character {text[pos:pos + 1]!r}", pos)
        out.append((m.group(1), m.start(1)))
        pos = m.end()
    return out


def parse_poly(text: str, ring: RingDescriptor) -> Polynomial:
    """Parse the shared ASCII grammar: terms joined by + / -, monomials like
    ``x^2*y``, coefficients as integers or ``a/b``."""
    toks = _tokenize(text)
    if not toks:
        raise PolySyntaxError("empty polynomial", 0)
    fld = ring.field
    i = 0
    total = {}

    def peek():
        return toks[i][0] if i < len(toks) else None

    def parse_varpow():
        nonlocal i
        name, at = toks[i]
        if name not in ring.variables:
            raise UnknownVariable(f"unknown variable {name!r}", at)
        i += 1
        exp = 1
        if peek() == "^":
            i += 1
            if i >= len(toks) or not toks[i][0].isdigit():
                raise PolySyntaxError("expected exponent after '^'", toks[i - 1][1] + 1)
            exp = int(toks[i][0])
            if exp >= MAX_EXPONENT:
                raise DegreeOverflow(f"exponent {exp} exceeds {MAX_EXPONENT}")
            i += 1
        mono = [0] * ring.nvars
        mono[ring.variables.index(name)] = exp
        return mono

    def parse_term():
        nonlocal i
        coeff = fld.one
        mono = [0] * ring.nvars
        saw_factor = False
        # optional leading coefficient
        if peek() is not None and peek().isdigit():
            num, at = toks[i]
            i += 1
            if peek() == "/":
                i += 1
                if i >= len(toks) or not toks[i][0].isdigit():
                    raise PolySyntaxError("expected denominator after '/'", at)
                den = int(toks[i][0])
                if den == 0:
                    raise PolySyntaxError("zero denominator", toks[i][1])
                i += 1
                coeff = fld.from_fraction(int(num), den)
            else:
                coeff = fld.from_int(int(num))
            saw_factor = True
            if peek() == "*":
                i += 1
                saw_factor = False  # a monomial must follow
        if not saw_factor or (peek() is not None and peek() not in "+-"):
            while True:
                if peek() is None or peek()[0].isdigit() or peek() in "+-*/^()":
                    if saw_factor:
                        break
                    at = toks[i][1] if i < len(toks) else len(text)
                    raise PolySyntaxError("expected a variable", at)
                vp = parse_varpow()
                mono = [a + b for a, b in zip(mono, vp)]
                saw_factor = True
                if peek() == "*":
                    i += 1
                    saw_factor = False
                    continue
                break
        return tuple(mono), coeff

    sign = 1
    if peek() in ("+", "-"):
        sign = -1 if toks[i][0] == "-" else 1
        i += 1
    while True:
        mono, coeff = parse_term()
        if sign < 0:
            coeff = fld.neg(coeff)
        s = fld.add(total.get(mono, fld.zero), coeff)
        if s:
            total[mono] = s
        else:
            total.pop(mono, None)
        if i >= len(toks):
            break
        nxt, at = toks[i]
        if nxt not in ("+", "-"):
            raise PolySyntaxError(f"expected '+' or '-', got {nxt!r}", at)
        sign = -1 if nxt == "-" else 1
        i += 1
        if i >= len(toks):
            raise PolySyntaxError("dangling sign", at)
    return ring.from_terms(total)


def parse_sequence(text: str, ring: RingDescriptor) -> tuple:
    """Comma-separated polynomials."""
    return tuple(parse_poly(part, ring) for part in text.split(","))


def product(polys, ring: RingDescriptor) -> Polynomial:
    return reduce(lambda a, b: a * b, polys, ring.one())


def monomials_of_degree(ring: RingDescriptor, d: int) -> list:
    """All exponent tuples of weighted degree exactly d, lexicographically."""
    if d < 0:
        return []
    n = ring.nvars
    out = []

    def rec(i, rem, acc):
        if i == n - 1:
            w = ring.weights[i]
            if rem % w == 0:
                out.append(tuple(acc + [rem // w]))
            return
        w = ring.weights[i]
        for e in range(rem // w, -1, -1):
            rec(i + 1, rem - e * w, acc + [e])

    if n == 0:
        return [()] if d == 0 else []
    rec(0, d, [])
    return out
