"""Exact scalar domains: the cyclotomic field Q(zeta_2p) and Q(k).

``CycScalar`` represents elements of Q[x]/Phi_2p(x) with x identified with
q = e^{i pi / p}, so q^p + 1 = 0 and q^{2p} = 1 hold on the nose.
``LevelScalar`` represents rational functions of the formal level k, stored
with coprime numerator/denominator and monic denominator.  The q-integer
combinatorics (<n>, <n>!, <m choose n>) used throughout the package live
here as well.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union


class DegenerateQBinomial(ZeroDivisionError):
    """A q-binomial was requested through a ratio with a vanished q-factorial."""


class PoleAtLevel(ZeroDivisionError):
    """A LevelScalar was specialized at a root of its denominator."""


# ---------------------------------------------------------------------------
# cyclotomic polynomials
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (low degree first) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("n must be positive")
    # x^n - 1 = prod_{d | n} Phi_d(x); divide out the proper divisors.
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    for d in range(1, n):
        if n % d == 0:
            num = _poly_int_div(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _poly_int_div(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (low degree first)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        for j, dj in enumerate(den):
            num[i + j] -= c * dj
    if any(num):
        raise ArithmeticError("non-exact polynomial division")
    return out


@lru_cache(maxsize=None)
def _reduction_row(p: int, i: int) -> tuple[Fraction, ...]:
    """Coefficients of x^i mod Phi_2p, for i >= deg Phi_2p."""
    phi = cyclotomic_poly(2 * p)
    deg = len(phi) - 1
    if i == deg:
        return tuple(Fraction(-c) for c in phi[:deg])
    prev = _reduction_row(p, i - 1)
    nxt = [Fraction(0)] + list(prev[:-1])
    top = prev[-1]
    if top:
        base = _reduction_row(p, deg)
        for a in range(deg):
            nxt[a] += top * base[a]
    return tuple(nxt)


RatLike = Union[int, Fraction]


class CycScalar:
    """An element of Q(zeta_2p), reduced modulo the cyclotomic polynomial."""

    __slots__ = ("p", "coeffs", "_hash")

    def __init__(self, p: int, coeffs: Iterable[RatLike]):
        if p < 2:
            raise ValueError("p must be at least 2")
        deg = len(cyclotomic_poly(2 * p)) - 1
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > deg:
            for i in range(len(cs) - 1, deg - 1, -1):
                top = cs[i]
                if top:
                    row = _reduction_row(p, i)
                    for a in range(deg):
                        cs[a] += top * row[a]
                cs.pop()
        elif len(cs) < deg:
            cs.extend(Fraction(0) for _ in range(deg - len(cs)))
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "_hash", None)

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_rational(cls, p: int, x: RatLike) -> "CycScalar":
        return cls(p, [Fraction(x)])

    @classmethod
    def zero(cls, p: int) -> "CycScalar":
        return cls(p, [])

    @classmethod
    def one(cls, p: int) -> "CycScalar":
        return cls(p, [1])

    @classmethod
    def q_power(cls, p: int, e: int) -> "CycScalar":
        """q^e with q = zeta_2p (e arbitrary, reduced mod 2p)."""
        e %= 2 * p
        return cls(p, [0] * e + [1])

    # -- structure ---------------------------------------------------------

    def __setattr__(self, *a):  # pragma: no cover - immutability guard
        raise AttributeError("CycScalar is immutable")

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycScalar.from_rational(self.p, other)
        if not isinstance(other, CycScalar):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.p, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mon = "q" if i == 1 else f"q^{i}"
                terms.append(mon if c == 1 else f"{c}*{mon}")
        return " + ".join(terms) if terms else "0"

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "CycScalar":
        if isinstance(other, CycScalar):
            if other.p != self.p:
                raise ValueError("mixed cyclotomic orders")
            return other
        if isinstance(other, (int, Fraction)):
            return CycScalar.from_rational(self.p, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycScalar(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycScalar(self.p, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycScalar(self.p, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
        return CycScalar(self.p, out)

    __rmul__ = __mul__

    def inverse(self) -> "CycScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_2p)")
        phi = [Fraction(c) for c in cyclotomic_poly(2 * self.p)]
        # extended Euclid over Q[x]: find u with u*self = 1 mod Phi.
        r0, r1 = phi, list(self.coeffs)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while any(r1):
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        lead = next(c for c in reversed(r0) if c)
        if len(_poly_trim(r0)) != 1:
            raise ArithmeticError("Phi_2p not coprime with a nonzero element")
        return CycScalar(self.p, [c / lead for c in s0])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int) -> "CycScalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = CycScalar.one(self.p)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- numeric embedding (test oracle only) -------------------------------

    def approx(self) -> complex:
        q = cmath.exp(1j * math.pi / self.p)
        return sum(complex(c) * q**i for i, c in enumerate(self.coeffs))


def _poly_trim(a: list[Fraction]) -> list[Fraction]:
    while a and not a[-1]:
        a = a[:-1]
    return a


def _poly_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    return _poly_trim(out)


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _poly_trim(out)


def _poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b):
        c = r[-1] / b[-1]
        d = len(r) - len(b)
        q[d] = c
        for j, bj in enumerate(b):
            r[d + j] -= c * bj
        r = _poly_trim(r)
    return q, r


# ---------------------------------------------------------------------------
# q-combinatorics
# ---------------------------------------------------------------------------

def qint(n: int, p: int) -> CycScalar:
    """The q-integer <n> = (q^{2n} - 1)/(q^2 - 1) at q = zeta_2p."""
    if p < 2:
        raise ValueError("p must be at least 2")
    num = CycScalar.q_power(p, 2 * n) - 1
    den = CycScalar.q_power(p, 2) - 1
    return num / den


def qfact(n: int, p: int) -> CycScalar:
    """<n>! = <1><2>...<n>."""
    if n < 0:
        raise ValueError("negative q-factorial")
    out = CycScalar.one(p)
    for i in range(1, n + 1):
        out = out * qint(i, p)
    return out


@lru_cache(maxsize=None)
def qbinom(m: int, n: int, p: int) -> CycScalar:
    """<m choose n>, the Gaussian binomial in q^2 evaluated at q = zeta_2p.

    Computed by the Pascal-type recursion, which is division-free and hence
    defined for all 0 <= n <= m even when intermediate q-factorials vanish.
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    if n < 0 or n > m:
        return CycScalar.zero(p)
    if n == 0 or n == m:
        return CycScalar.one(p)
    return qbinom(m - 1, n - 1, p) + CycScalar.q_power(p, 2 * n) * qbinom(m - 1, n, p)


def qbinom_via_factorials(m: int, n: int, p: int) -> CycScalar:
    """<m>!/(<n>!<m-n>!), raising DegenerateQBinomial on a vanished denominator."""
    if n < 0 or n > m:
        raise ValueError("need 0 <= n <= m")
    den = qfact(n, p) * qfact(m - n, p)
    if den.is_zero():
        raise DegenerateQBinomial(f"<{n}>! <{m - n}>! vanishes at p={p}")
    return qfact(m, p) / den


# ---------------------------------------------------------------------------
# the rational-function field Q(k)
# ---------------------------------------------------------------------------

_ONE_POLY = (Fraction(1),)


class LevelScalar:
    """A rational function of the formal level k, in reduced form."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Iterable[RatLike], den: Iterable[RatLike] = (1,)):
        n = _poly_trim([Fraction(c) for c in num])
        d = _poly_trim([Fraction(c) for c in den])
        if not d:
            raise ZeroDivisionError("zero denominator in Q(k)")
        if n and len(d) > 1:
            g = _poly_gcd(n, d)
            if len(g) > 1:
                n, _ = _poly_divmod(n, g)
                d, _ = _poly_divmod(d, g)
        elif not n:
            d = [Fraction(1)]
        lead = d[-1]
        if lead != 1:
            n = [c / lead for c in n]
            d = [c / lead for c in d]
        object.__setattr__(self, "num", tuple(n))
        object.__setattr__(self, "den", tuple(d))
        object.__setattr__(self, "_hash", None)

    @classmethod
    def from_rational(cls, x: RatLike) -> "LevelScalar":
        return cls([Fraction(x)])

    @classmethod
    def _raw(cls, num: tuple, den: tuple) -> "LevelScalar":
        # already-reduced data; bypass the normalizing constructor
        self = object.__new__(cls)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)
        return self

    @classmethod
    def k(cls) -> "LevelScalar":
        return cls([0, 1])

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("LevelScalar is immutable")

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return len(self.num) <= 1 and self.den == (Fraction(1),)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not constant")
        return self.num[0] if self.num else Fraction(0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LevelScalar.from_rational(other)
        if not isinstance(other, LevelScalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.num, self.den))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        def fmt(cs):
            terms = []
            for i, c in enumerate(cs):
                if not c:
                    continue
                if i == 0:
                    terms.append(str(c))
                else:
                    mon = "k" if i == 1 else f"k^{i}"
                    terms.append(mon if c == 1 else f"{c}*{mon}")
            return " + ".join(terms) if terms else "0"

        if self.den == (Fraction(1),):
            return fmt(self.num)
        return f"({fmt(self.num)})/({fmt(self.den)})"

    def _coerce(self, other):
        if isinstance(other, LevelScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return LevelScalar.from_rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == _ONE_POLY and other.den == _ONE_POLY:
            n = max(len(self.num), len(other.num))
            out = [Fraction(0)] * n
            for i, c in enumerate(self.num):
                out[i] += c
            for i, c in enumerate(other.num):
                out[i] += c
            return LevelScalar._raw(tuple(_poly_trim(out)), _ONE_POLY)
        num = _poly_sub(_poly_mul(self.num, other.den), [-c for c in _poly_mul(other.num, self.den)])
        return LevelScalar(num, _poly_mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return LevelScalar._raw(tuple(-c for c in self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == _ONE_POLY and other.den == _ONE_POLY:
            return LevelScalar._raw(tuple(_poly_mul(self.num, other.num)), _ONE_POLY)
        return LevelScalar(_poly_mul(self.num, other.num), _poly_mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero in Q(k)")
        return LevelScalar(_poly_mul(self.num, other.den), _poly_mul(self.den, other.num))

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return other / self

    def __pow__(self, n: int) -> "LevelScalar":
        if n < 0:
            return (LevelScalar.from_rational(1) / self) ** (-n)
        out = LevelScalar.from_rational(1)
        for _ in range(n):
            out = out * self
        return out

    def specialize(self, k0: RatLike) -> Fraction:
        """Exact value at k = k0; raises PoleAtLevel at a pole."""
        k0 = Fraction(k0)
        den = _poly_eval(self.den, k0)
        if den == 0:
            raise PoleAtLevel(f"pole at k = {k0}")
        return _poly_eval(self.num, k0) / den


def _poly_eval(cs: Sequence[Fraction], x: Fraction) -> Fraction:
    out = Fraction(0)
    for c in reversed(cs):
        out = out * x + c
    return out


def _poly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    a, b = list(a), list(b)
    while _poly_trim(b):
        _, r = _poly_divmod(a, b)
        a, b = b, r
    a = _poly_trim(a)
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def specialize_level(x: LevelScalar, k0: RatLike) -> Fraction:
    """Exact rational value of x at k = k0 (PoleAtLevel at a pole)."""
    return x.specialize(k0)


K = LevelScalar.k()
