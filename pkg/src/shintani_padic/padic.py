"""Capped-precision arithmetic in Z_p for odd primes p.

Values are residues modulo p^m with the precision m tracked explicitly.
Rationals with denominator prime to p are passed around as
``fractions.Fraction`` and embedded with :func:`to_padic`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational


class PadicDomainError(ValueError):
    """Raised when an operation is applied outside its p-adic domain."""


@lru_cache(maxsize=None)
def _check_prime(p: int) -> None:
    if p < 3 or p % 2 == 0 or any(p % d == 0 for d in range(3, int(p**0.5) + 1, 2)):
        raise PadicDomainError(f"only odd primes are supported, got {p}")


@dataclass(frozen=True)
class PadicInt:
    prime: int
    precision: int
    residue: int

    def __post_init__(self):
        if self.precision < 1:
            raise PadicDomainError("precision must be positive")
        modulus = self.prime**self.precision
        if not 0 <= self.residue < modulus:
            object.__setattr__(self, "residue", self.residue % modulus)

    @classmethod
    def of(cls, p: int, m: int, value) -> "PadicInt":
        _check_prime(p)
        return to_padic(value, p, m)

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    def is_unit(self) -> bool:
        return self.residue % self.prime != 0

    def reduce(self, m: int) -> "PadicInt":
        if m > self.precision:
            raise PadicDomainError(f"cannot raise precision {self.precision} to {m}")
        return PadicInt(self.prime, m, self.residue % self.prime**m)

    def congruent(self, other, m: int | None = None) -> bool:
        """Equality modulo p^m (default: the smaller precision)."""
        other = self._coerce(other)
        if m is None:
            m = min(self.precision, other.precision)
        mod = self.prime**m
        return (self.residue - other.residue) % mod == 0

    def _coerce(self, other) -> "PadicInt":
        if isinstance(other, PadicInt):
            if other.prime != self.prime:
                raise PadicDomainError("mixed primes")
            return other
        if isinstance(other, (int, Rational)):
            return to_padic(other, self.prime, self.precision)
        return NotImplemented

    def _binop(self, other, op):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        m = min(self.precision, other.precision)
        return PadicInt(self.prime, m, op(self.residue, other.residue) % self.prime**m)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return PadicInt(self.prime, self.precision, -self.residue)

    def inverse(self) -> "PadicInt":
        if not self.is_unit():
            raise PadicDomainError(f"{self} is not a unit")
        return PadicInt(self.prime, self.precision, pow(self.residue, -1, self.modulus))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return PadicInt(self.prime, self.precision, pow(self.residue, e, self.modulus))

    def __int__(self):
        return self.residue

    def __str__(self):
        return f"{self.residue} mod {self.prime}^{self.precision}"


def to_padic(value, p: int, m: int) -> PadicInt:
    """Embed an integer or a p-integral rational into Z/p^m."""
    if isinstance(value, PadicInt):
        return value.reduce(m)
    _check_prime(p)
    value = Fraction(value)
    if value.denominator % p == 0:
        raise PadicDomainError(f"{value} is not {p}-integral")
    mod = p**m
    return PadicInt(p, m, value.numerator * pow(value.denominator, -1, mod) % mod)


def flat_sharp(a: int, h: int) -> tuple[int, int]:
    """Representatives of a mod h in [0, h) and (0, h]."""
    if h <= 1:
        raise ValueError(f"modulus must exceed 1, got {h}")
    flat = a % h
    return flat, flat if flat else h


def _require_unit(x: PadicInt) -> None:
    if not x.is_unit():
        raise PadicDomainError(f"{x} is not a unit")


@lru_cache(maxsize=None)
def teichmuller_table(p: int, m: int) -> tuple[int, ...]:
    """omega(r) mod p^m for r = 0..p-1 (entry 0 unused, set to 0)."""
    mod = p**m
    table = [0]
    for r in range(1, p):
        x = r
        for _ in range(m):
            y = pow(x, p, mod)
            if y == x:
                break
            x = y
        table.append(x)
    return tuple(table)


def teichmuller(x: PadicInt) -> PadicInt:
    _require_unit(x)
    p, m = x.prime, x.precision
    return PadicInt(p, m, teichmuller_table(p, m)[x.residue % p])


def angle(x: PadicInt) -> PadicInt:
    """The 1-unit part x / omega(x)."""
    return x / teichmuller(x)


def _ceil_log(k: int, p: int) -> int:
    e, t = 0, 1
    while t < k:
        t *= p
        e += 1
    return e


def _floor_log(k: int, p: int) -> int:
    e, t = 0, p
    while t <= k:
        t *= p
        e += 1
    return e


def _vp(k: int, p: int) -> int:
    e = 0
    while k % p == 0:
        k //= p
        e += 1
    return e


def _log_one_plus(u: int, p: int, m: int) -> int:
    """log(1+u) mod p^m for an integer u divisible by p."""
    # v(u^k/k) >= k - floor(log_p k), nondecreasing in k
    last = 1
    while (last + 1) - _floor_log(last + 1, p) < m:
        last += 1
    wmod = p ** (m + _ceil_log(last, p) + 1)
    mod = p**m
    total = 0
    power = 1
    for k in range(1, last + 1):
        power = power * u % wmod
        e = _vp(k, p)
        term = (power // p**e) * pow(k // p**e, -1, mod)
        total += term if k % 2 else -term
    return total % mod


def log_iwasawa(x: PadicInt) -> PadicInt:
    """Iwasawa logarithm of a unit (vanishes on roots of unity)."""
    _require_unit(x)
    p, m = x.prime, x.precision
    u = pow(x.residue, p - 1, p**m) - 1
    value = _log_one_plus(u, p, m) * pow(p - 1, -1, p**m)
    return PadicInt(p, m, value)


def exp_p(x: PadicInt) -> PadicInt:
    p, m = x.prime, x.precision
    if x.residue % p:
        raise PadicDomainError(f"exp diverges at {x}: argument must lie in pZ_p")
    # v(x^k/k!) >= k - (k-1)/(p-1); stop once that bound reaches m
    last = 0
    k = 0
    while True:
        k += 1
        if (k * (p - 1) - (k - 1)) >= m * (p - 1):
            break
        last = k
    guard = _vp_factorial(last, p)
    wmod = p ** (m + guard)
    mod = p**m
    total = 1
    power = 1
    fact_unit = 1
    fact_e = 0
    for k in range(1, last + 1):
        power = power * x.residue % wmod
        e = _vp(k, p)
        fact_e += e
        fact_unit = fact_unit * (k // p**e) % mod
        total += (power // p**fact_e) * pow(fact_unit, -1, mod)
    return PadicInt(p, m, total % mod)


def _vp_factorial(k: int, p: int) -> int:
    e, t = 0, p
    while t <= k:
        e += k // t
        t *= p
    return e


def pow_rational_unit(u: PadicInt, e) -> PadicInt:
    """u**e for a 1-unit u and a rational exponent with denominator prime to p."""
    p = u.prime
    if u.residue % p != 1:
        raise PadicDomainError(f"{u} is not a 1-unit")
    e = Fraction(e)
    if e.denominator % p == 0:
        raise PadicDomainError(f"exponent {e} has denominator divisible by {p}")
    if e.denominator == 1:
        return u ** int(e)
    return exp_p(log_iwasawa(u) * to_padic(e, p, u.precision))
