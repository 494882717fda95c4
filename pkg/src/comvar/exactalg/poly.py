"""Univariate polynomials over F_p.

Coefficients are stored lowest degree first with no trailing zeros, so the
zero polynomial is the empty tuple.  Its degree is ``None`` rather than -1;
callers that compare degrees must handle it explicitly.
"""

from __future__ import annotations

from typing import Iterable

from .field import FieldError, ModulusMismatch, PrimeFieldElement, check_prime


def _trim(coeffs: list[int]) -> tuple[int, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class FieldPolynomial:
    __slots__ = ("coeffs", "modulus")

    def __init__(self, coeffs: Iterable[int | PrimeFieldElement], modulus: int):
        check_prime(modulus)
        reduced = [int(c) % modulus for c in coeffs]
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "coeffs", _trim(reduced))

    def __setattr__(self, name, value):
        raise AttributeError("FieldPolynomial is immutable")

    @classmethod
    def constant(cls, c: int, modulus: int) -> FieldPolynomial:
        return cls([c], modulus)

    @classmethod
    def monomial(cls, degree: int, modulus: int, coeff: int = 1) -> FieldPolynomial:
        return cls([0] * degree + [coeff], modulus)

    @classmethod
    def linear_power(cls, root: int, exponent: int, modulus: int) -> FieldPolynomial:
        """(t - root) ** exponent."""
        return cls([-root, 1], modulus) ** exponent

    @property
    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        if not self.coeffs:
            raise FieldError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def element(self, i: int) -> PrimeFieldElement:
        c = self.coeffs[i] if i < len(self.coeffs) else 0
        return PrimeFieldElement(c, self.modulus)

    def _check(self, other: FieldPolynomial) -> None:
        if not isinstance(other, FieldPolynomial):
            raise TypeError("FieldPolynomial expected")
        if other.modulus != self.modulus:
            raise ModulusMismatch(f"F_{self.modulus} vs F_{other.modulus}")

    def _lift(self, other) -> FieldPolynomial:
        if isinstance(other, int):
            return FieldPolynomial([other], self.modulus)
        self._check(other)
        return other

    def __add__(self, other):
        other = self._lift(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return FieldPolynomial(
            [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)],
            self.modulus,
        )

    __radd__ = __add__

    def __neg__(self):
        return FieldPolynomial([-c for c in self.coeffs], self.modulus)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return FieldPolynomial([], self.modulus)
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return FieldPolynomial(out, self.modulus)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise FieldError("negative polynomial power")
        result = FieldPolynomial([1], self.modulus)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        other = self._lift(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        p = self.modulus
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = pow(other.leading, -1, p)
        quot = [0] * max(len(rem) - db, 0)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k] * inv_lead % p
            if c:
                quot[k - db] = c
                for i, bi in enumerate(other.coeffs):
                    rem[k - db + i] = (rem[k - db + i] - c * bi) % p
        return FieldPolynomial(quot, p), FieldPolynomial(rem[:db], p)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> FieldPolynomial:
        if self.is_zero:
            return self
        inv = pow(self.leading, -1, self.modulus)
        return FieldPolynomial([c * inv for c in self.coeffs], self.modulus)

    def __call__(self, t: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * t + c) % self.modulus
        return acc

    def __eq__(self, other):
        if isinstance(other, int):
            other = FieldPolynomial([other], self.modulus)
        if not isinstance(other, FieldPolynomial):
            return NotImplemented
        return self.modulus == other.modulus and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.modulus))

    def __repr__(self):
        return f"FieldPolynomial({list(self.coeffs)}, {self.modulus})"


def poly_xgcd(f: FieldPolynomial, g: FieldPolynomial) -> tuple[FieldPolynomial, FieldPolynomial, FieldPolynomial]:
    """Extended Euclid: return ``(d, u, v)`` with ``u*f + v*g == d`` and ``d`` monic.

    The cofactors come straight out of the remainder sequence, which already
    gives ``deg u < deg g - deg d`` whenever ``g`` does not divide ``f``.
    """
    f._check(g)
    if f.is_zero and g.is_zero:
        raise FieldError("gcd of two zero polynomials is undefined")
    p = f.modulus
    one = FieldPolynomial([1], p)
    zero = FieldPolynomial([], p)
    r0, r1 = f, g
    u0, u1 = one, zero
    v0, v1 = zero, one
    while not r1.is_zero:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    inv = pow(r0.leading, -1, p)
    return r0 * inv, u0 * inv, v0 * inv
