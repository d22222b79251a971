"""Exact free-field (multi-boson) machinery: momentum lattices, Wick OPEs,
screenings, currents, W-generators, the Wakimoto dictionary, and reduction.

Three free bosons phi_a with propagators <phi_a(z) phi_b(w)> = G_ab log(z-w)
realize both screening configurations at a concrete rational level k.  Fields
are finite sums of Wick-ordered monomials

    : d^{m_1} phi_{a_1} ... d^{m_r} phi_{a_r} e^{beta . phi} :

with rational coefficients, and all operator products are evaluated exactly
from the propagator, so that every identity below is checked symbolically
over Q.  The working coordinates per case are

* asymmetric:  (phi_matter, phi_liouville, phi_extra) -- an orthogonal basis
  with Gram diag(2(k+2), -2k, 2k) and k = 1/p + j - 2; the two screening
  momenta are alpha_1 = -(phi_matter + phi_liouville)/2, alpha_2 = phi_matter;
* symmetric:   (phi_1, phi_2, phi_extra), Gram ((1, k+1), (k+1, 1)) (+) (2k)
  with k = 1/p + j - 1 and alpha_i the unit vectors;
* opposite-asymmetric: the reflection of the symmetric lattice in its second
  simple root, with k = 1/p + j - 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .affine import MINUS, PLUS, ZERO, mff_operator
from .nichols import ASYMMETRIC, SYMMETRIC, CheckReport
from .scalars import CycScalar, LevelScalar

OPPOSITE = "opposite-asymmetric"

Vector = Tuple[Fraction, Fraction, Fraction]
Deriv = Tuple[Tuple[int, int], ...]  # sorted ((boson index, order), ...)
TermKey = Tuple[Deriv, Vector]

_ZERO3: Vector = (Fraction(0), Fraction(0), Fraction(0))


class ConstraintFailure(Exception):
    """The requested momentum lattice violates a braiding constraint."""


class NonIntegerMonodromy(Exception):
    """A contour action was requested around a field with branching."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _vadd(u: Vector, v: Vector) -> Vector:
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2])


def _vscale(c: Fraction, v: Vector) -> Vector:
    return (c * v[0], c * v[1], c * v[2])


# ---------------------------------------------------------------------------
# Momentum lattices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentumSystem:
    """Three-boson background: a case label, the level, and the Gram matrix.

    ``alpha`` holds the two short screening momenta and the third (extra)
    boson direction; ``omega`` is the dual basis, so that
    ``pair(omega[i], alpha[j]) == delta_ij``.
    """

    case: str
    p: int
    j: int
    level: Fraction
    gram: Tuple[Vector, Vector, Vector]
    alpha: Tuple[Vector, Vector, Vector]
    omega: Tuple[Vector, Vector, Vector]

    def pair(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
        return sum(
            (u[a] * self.gram[a][b] * v[b] for a in range(3) for b in range(3)),
            Fraction(0),
        )

    # -- field constructors -------------------------------------------------
    def zero(self) -> "FFField":
        return FFField(self, {})

    def one(self) -> "FFField":
        return FFField(self, {((), _ZERO3): Fraction(1)})

    def exponential(self, beta: Sequence[Fraction]) -> "FFField":
        b = tuple(_frac(x) for x in beta)
        return FFField(self, {((), b): Fraction(1)})

    def boson(self, a: int, order: int = 1) -> "FFField":
        """The field d^order phi_a (order >= 1; bare phi is not a field)."""
        if order < 1:
            raise ValueError("only derivatives of the boson are fields")
        return FFField(self, {(((a, order),), _ZERO3): Fraction(1)})

    def gradient(self, vec: Sequence[Fraction], order: int = 1) -> "FFField":
        """The linear combination sum_a vec_a d^order phi_a."""
        out = self.zero()
        for a, c in enumerate(vec):
            if c:
                out = out + self.boson(a, order).scale(_frac(c))
        return out

    def screening_current(self, which) -> "FFField":
        """The short screening currents (1, 2) or the long one ("long")."""
        if which in (1, 2):
            return self.exponential(self.alpha[which - 1])
        if which != "long":
            raise ValueError(f"unknown screening {which!r}")
        t = self.level + 2
        if self.case in (ASYMMETRIC, OPPOSITE):
            return self.exponential(_vscale(Fraction(-1) / t, self.alpha[1]))
        beta = _vscale(Fraction(-1) / t, _vadd(self.alpha[0], self.alpha[1]))
        return self.gradient(self.alpha[0]) * self.exponential(beta)


def _dual_basis(gram: Tuple[Vector, Vector, Vector], alpha) -> Tuple[Vector, Vector, Vector]:
    """Solve pair(omega_i, alpha_j) = delta_ij by Gaussian elimination."""
    # rows of the linear system: omega_i . G . alpha_j = delta_ij
    cols = [
        tuple(
            sum((gram[a][b] * alpha[jj][b] for b in range(3)), Fraction(0))
            for a in range(3)
        )
        for jj in range(3)
    ]
    omegas = []
    for i in range(3):
        # solve M x = e_i where M rows are the pairing columns
        mat = [list(cols[r]) + [Fraction(int(r == i))] for r in range(3)]
        for c in range(3):
            piv = next(r for r in range(c, 3) if mat[r][c])
            mat[c], mat[piv] = mat[piv], mat[c]
            inv = Fraction(1) / mat[c][c]
            mat[c] = [x * inv for x in mat[c]]
            for r in range(3):
                if r != c and mat[r][c]:
                    f = mat[r][c]
                    mat[r] = [x - f * y for x, y in zip(mat[r], mat[c])]
        omegas.append(tuple(mat[r][3] for r in range(3)))
    return tuple(omegas)


def _check_braiding_constraints(sys: "MomentumSystem") -> None:
    """The lattice must reproduce a diagonal braiding of the right class."""
    p = sys.p

    def phase(x: Fraction) -> CycScalar:
        e = x * p
        if e.denominator != 1:
            raise ConstraintFailure(f"exponent {x} is not a multiple of 1/p")
        return CycScalar.q_power(p, int(e))

    a1, a2 = sys.alpha[0], sys.alpha[1]
    q11 = phase(sys.pair(a1, a1))
    q22 = phase(sys.pair(a2, a2))
    q1221 = phase(2 * sys.pair(a1, a2))
    minus_one = CycScalar.from_rational(p, -1)
    one = CycScalar.one(p)
    if sys.case == ASYMMETRIC:
        ok = q11 == minus_one and q1221 * q22 == one
    elif sys.case == SYMMETRIC:
        ok = q11 == minus_one and q22 == minus_one
    else:
        ok = q22 == minus_one and q1221 * q11 == one
    # the product q12 q21 must be a primitive p-th root of unity
    powers = [q1221]
    for _ in range(p - 1):
        powers.append(powers[-1] * q1221)
    ok = ok and powers[-1] == one and all(x != one for x in powers[:-1])
    if not ok:
        raise ConstraintFailure(f"braiding class check failed for {sys.case}")
    # rank-2 Cartan condition: for each pair, a_12 = a_21 = -1 must satisfy
    # a_ij (alpha_i . alpha_i) = 2 alpha_i . alpha_j or alpha_i . alpha_i = 1
    for ai, aj in ((a1, a2), (a2, a1)):
        aii = sys.pair(ai, ai)
        if -aii != 2 * sys.pair(ai, aj) and aii != 1:
            raise ConstraintFailure("Cartan condition fails")


def solve_momenta(case: str, p: int, j: int) -> MomentumSystem:
    """Momentum lattice solving the braiding constraints for (case, p, j)."""
    if p < 2:
        raise ConstraintFailure("p must be at least 2")
    mu = Fraction(j * p + 1, p)
    if case == ASYMMETRIC:
        if j < 0:
            raise ConstraintFailure("the asymmetric family needs j >= 0")
        k = Fraction(1, p) + j - 2
        gram = (
            (2 * (k + 2), Fraction(0), Fraction(0)),
            (Fraction(0), -2 * k, Fraction(0)),
            (Fraction(0), Fraction(0), 2 * k),
        )
        alpha = (
            (Fraction(-1, 2), Fraction(-1, 2), Fraction(0)),
            (Fraction(1), Fraction(0), Fraction(0)),
            (Fraction(0), Fraction(0), Fraction(1)),
        )
    elif case == SYMMETRIC:
        if j < -1:
            raise ConstraintFailure("the symmetric family needs j >= -1")
        k = Fraction(1, p) + j - 1
        gram = (
            (Fraction(1), k + 1, Fraction(0)),
            (k + 1, Fraction(1), Fraction(0)),
            (Fraction(0), Fraction(0), 2 * k),
        )
        alpha = (
            (Fraction(1), Fraction(0), Fraction(0)),
            (Fraction(0), Fraction(1), Fraction(0)),
            (Fraction(0), Fraction(0), Fraction(1)),
        )
    elif case == OPPOSITE:
        if j < 0:
            raise ConstraintFailure("the opposite-asymmetric family needs j >= 0")
        k = Fraction(1, p) + j - 2
        gram = (
            (2 * mu, -mu, Fraction(0)),
            (-mu, Fraction(1), Fraction(0)),
            (Fraction(0), Fraction(0), 2 * k),
        )
        alpha = (
            (Fraction(1), Fraction(0), Fraction(0)),
            (Fraction(0), Fraction(1), Fraction(0)),
            (Fraction(0), Fraction(0), Fraction(1)),
        )
    else:
        raise ConstraintFailure(f"unknown case {case!r}")
    sys = MomentumSystem(case, p, j, k, gram, alpha, _dual_basis(gram, alpha))
    _check_braiding_constraints(sys)
    return sys


def weyl_reflect(sys: MomentumSystem, i: int) -> MomentumSystem:
    """Reflect the screening momenta in alpha_i and classify the new lattice.

    The rank-2 pseudoreflection sends alpha_i to -alpha_i and the other root
    to alpha_j + alpha_i; the reflected Gram matrix always lands back on one
    of the three families (possibly the same one), whose system is returned.
    """
    if i not in (1, 2):
        raise ValueError("reflections act in the two screening directions")
    a1, a2 = sys.alpha[0], sys.alpha[1]
    if i == 1:
        b1, b2 = _vscale(Fraction(-1), a1), _vadd(a2, a1)
    else:
        b1, b2 = _vadd(a1, a2), _vscale(Fraction(-1), a2)
    g11, g12, g22 = sys.pair(b1, b1), sys.pair(b1, b2), sys.pair(b2, b2)
    if (g11, g22) == (1, 1):
        case2, mu = SYMMETRIC, g12
    elif g11 == 1 and g22 == -2 * g12:
        case2, mu = ASYMMETRIC, -g12
    elif g22 == 1 and g11 == -2 * g12:
        case2, mu = OPPOSITE, -g12
    else:
        raise ConstraintFailure("reflected lattice leaves the three families")
    jp = mu * sys.p - 1
    if jp.denominator != 1 or int(jp) % sys.p:
        raise ConstraintFailure("reflected lattice leaves the three families")
    return solve_momenta(case2, sys.p, int(jp) // sys.p)


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------

class FFField:
    """A finite sum of Wick-ordered monomials with rational coefficients.

    The product ``*`` is the Wick-monomial product (merge the derivative
    symbols, add the momenta); it is the right reading of a composite that
    is written down already normal ordered.  The point-splitting normal
    product of two composite fields is :func:`normal_product` instead.
    """

    __slots__ = ("system", "terms")

    def __init__(self, system: MomentumSystem, terms: Dict[TermKey, Fraction]):
        self.system = system
        self.terms = {key: c for key, c in terms.items() if c}

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FFField)
            and self.system is other.system
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "FFField") -> "FFField":
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, Fraction(0)) + c
        return FFField(self.system, out)

    def __sub__(self, other: "FFField") -> "FFField":
        return self + other.scale(Fraction(-1))

    def __neg__(self) -> "FFField":
        return self.scale(Fraction(-1))

    def scale(self, c) -> "FFField":
        c = _frac(c)
        return FFField(self.system, {key: c * x for key, x in self.terms.items()})

    def __mul__(self, other: "FFField") -> "FFField":
        out: Dict[TermKey, Fraction] = {}
        for (d1, b1), c1 in self.terms.items():
            for (d2, b2), c2 in other.terms.items():
                key = (tuple(sorted(d1 + d2)), _vadd(b1, b2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return FFField(self.system, out)

    def derivative(self) -> "FFField":
        out: Dict[TermKey, Fraction] = {}
        for (deriv, beta), c in self.terms.items():
            for i, (a, m) in enumerate(deriv):
                key = (tuple(sorted(deriv[:i] + ((a, m + 1),) + deriv[i + 1 :])), beta)
                out[key] = out.get(key, Fraction(0)) + c
            for a in range(3):
                if beta[a]:
                    key = (tuple(sorted(deriv + ((a, 1),))), beta)
                    out[key] = out.get(key, Fraction(0)) + c * beta[a]
        return FFField(self.system, out)

    def momenta(self) -> List[Vector]:
        return sorted({beta for _, beta in self.terms})

    def polynomial_degree(self) -> int:
        """The largest total derivative order among the monomials."""
        if self.is_zero():
            raise ValueError("the zero field has no degree")
        return max(sum(m for _, m in deriv) for deriv, _ in self.terms)

    def proportionality(self, other: "FFField") -> Optional[Fraction]:
        """The scalar c with self == c * other, or None."""
        if self.is_zero() or other.is_zero():
            return Fraction(0) if self.is_zero() else None
        key = next(iter(other.terms))
        if key not in self.terms:
            return None
        c = self.terms[key] / other.terms[key]
        return c if self == other.scale(c) else None

    def __repr__(self) -> str:
        if not self.terms:
            return "FFField(0)"
        bits = []
        for (deriv, beta), c in sorted(self.terms.items()):
            sym = "".join(f"d{m}phi{a}" for a, m in deriv) or "1"
            tag = f"e({','.join(str(x) for x in beta)})" if any(beta) else ""
            bits.append(f"{c}*{sym}{tag}")
        return "FFField(" + " + ".join(bits[:8]) + ("..." if len(bits) > 8 else "") + ")"


# ---------------------------------------------------------------------------
# Operator products
# ---------------------------------------------------------------------------

_TAYLOR_CACHE: Dict[Tuple[Vector, int], Dict[Deriv, Fraction]] = {}


def _exp_taylor(beta: Vector, n: int) -> Dict[Deriv, Fraction]:
    """Degree-n Taylor coefficient of e^{beta.phi(z)} around w, divided by
    e^{beta.phi(w)}: the expansion of exp(sum_t u^t beta . d^t phi / t!)."""
    key = (beta, n)
    if key in _TAYLOR_CACHE:
        return _TAYLOR_CACHE[key]
    if n == 0:
        out: Dict[Deriv, Fraction] = {(): Fraction(1)}
    else:
        out = {}
        for t in range(1, n + 1):
            lower = _exp_taylor(beta, n - t)
            for a in range(3):
                if not beta[a]:
                    continue
                g = beta[a] * Fraction(t, math.factorial(t)) / n
                for deriv, c in lower.items():
                    key2 = tuple(sorted(deriv + ((a, t),)))
                    out[key2] = out.get(key2, Fraction(0)) + g * c
    _TAYLOR_CACHE[key] = out
    return out


def _poly_mul(
    poly: Dict[Tuple[int, Deriv], Fraction],
    factor: Iterable[Tuple[int, Deriv, Fraction]],
    cap: Optional[int] = None,
) -> Dict[Tuple[int, Deriv], Fraction]:
    out: Dict[Tuple[int, Deriv], Fraction] = {}
    for (off, deriv), c in poly.items():
        for off2, deriv2, c2 in factor:
            off3 = off + off2
            if cap is not None and off3 > cap:
                continue
            key = (off3, tuple(sorted(deriv + deriv2)))
            out[key] = out.get(key, Fraction(0)) + c * c2
    return out


def ope_coefficients(A: FFField, B: FFField, max_power: Fraction) -> Dict[Fraction, FFField]:
    """All OPE coefficients of A(z)B(w) at powers of (z - w) <= max_power.

    The coefficients are fields at w; powers are exact rationals (the pairing
    of the two momenta plus an integer).  Coefficients at powers beyond
    ``max_power`` are not computed.
    """
    system = A.system
    max_power = _frac(max_power)
    out: Dict[Fraction, Dict[TermKey, Fraction]] = {}
    for (derivA, betaA), cA in A.terms.items():
        for (derivB, betaB), cB in B.terms.items():
            pairing = system.pair(betaA, betaB)
            cap = max_power - pairing
            floor_cap = cap.numerator // cap.denominator
            beta_out = _vadd(betaA, betaB)
            # pairings of each boson with the two exponential momenta
            with_b = tuple(
                sum((system.gram[a][b] * betaB[b] for b in range(3)), Fraction(0))
                for a in range(3)
            )
            with_a = tuple(
                sum((betaA[a] * system.gram[a][b] for a in range(3)), Fraction(0))
                for b in range(3)
            )

            skeletons: List[Tuple[Fraction, int, Tuple[Tuple[int, int], ...], Tuple[int, ...]]] = []

            def assign(idx: int, coeff: Fraction, off: int, surv, used) -> None:
                if idx == len(derivA):
                    skeletons.append((coeff, off, tuple(surv), tuple(sorted(used))))
                    return
                a, m = derivA[idx]
                sign = Fraction((-1) ** (m - 1))
                # survive to be Taylor expanded at w
                assign(idx + 1, coeff, off, surv + [(a, m)], used)
                # contract against the w exponential
                if with_b[a]:
                    assign(
                        idx + 1,
                        coeff * with_b[a] * sign * math.factorial(m - 1),
                        off - m,
                        surv,
                        used,
                    )
                # pair against an unused w symbol
                for i, (b, n) in enumerate(derivB):
                    if i in used or not system.gram[a][b]:
                        continue
                    assign(
                        idx + 1,
                        coeff * system.gram[a][b] * sign * math.factorial(m + n - 1),
                        off - m - n,
                        surv,
                        used + [i],
                    )

            assign(0, cA * cB, 0, [], [])

            for coeff, off, surv, used in skeletons:
                poly: Dict[Tuple[int, Deriv], Fraction] = {(off, ()): coeff}
                # remaining w symbols: keep, or contract against the z side
                for i, (b, n) in enumerate(derivB):
                    if i in used:
                        continue
                    factor = [(0, ((b, n),), Fraction(1))]
                    if with_a[b]:
                        factor.append((-n, (), -with_a[b] * math.factorial(n - 1)))
                    poly = _poly_mul(poly, factor)
                poly = {key: c for key, c in poly.items() if key[0] <= floor_cap}
                if not poly:
                    continue
                # Taylor expansion of the surviving z symbols around w
                for a, m in surv:
                    low = min(k for k, _ in poly)
                    factor = [
                        (t, ((a, m + t),), Fraction(1, math.factorial(t)))
                        for t in range(0, floor_cap - low + 1)
                    ]
                    poly = _poly_mul(poly, factor, cap=floor_cap)
                # Taylor expansion of the z exponential around w
                if any(betaA):
                    low = min((k for k, _ in poly), default=0)
                    factor = [
                        (t, deriv, c)
                        for t in range(0, floor_cap - low + 1)
                        for deriv, c in _exp_taylor(betaA, t).items()
                    ]
                    poly = _poly_mul(poly, factor, cap=floor_cap)
                for (off2, deriv), c in poly.items():
                    power = pairing + off2
                    slot = out.setdefault(power, {})
                    key = (deriv, beta_out)
                    slot[key] = slot.get(key, Fraction(0)) + c
    return {
        power: FFField(system, terms)
        for power, terms in out.items()
        if any(terms.values())
    }


def ope_coefficient(A: FFField, B: FFField, power) -> FFField:
    """The single OPE coefficient of A(z)B(w) at (z - w)**power."""
    power = _frac(power)
    return ope_coefficients(A, B, power).get(power, A.system.zero())


def ope_singular_part(A: FFField, B: FFField, depth: int = 0) -> Dict[Fraction, FFField]:
    """All OPE coefficients at negative powers (and, if depth > 0, the first
    ``depth`` regular orders as well)."""
    coeffs = ope_coefficients(A, B, Fraction(depth - 1))
    return {power: f for power, f in coeffs.items() if not f.is_zero()}


def normal_product(A: FFField, B: FFField) -> FFField:
    """The point-splitting normal product (the zeroth regular OPE order)."""
    _guard_monodromy(A, B)
    return ope_coefficient(A, B, 0)


def _guard_monodromy(A: FFField, B: FFField) -> None:
    for (_, betaA) in A.terms:
        for (_, betaB) in B.terms:
            x = A.system.pair(betaA, betaB)
            if x.denominator != 1:
                raise NonIntegerMonodromy(
                    f"momentum pairing {x} is not an integer"
                )


def mode_action(current: FFField, n: int, X: FFField) -> FFField:
    """The mode J_n of a weight-one current acting on the field X."""
    _guard_monodromy(current, X)
    return ope_coefficient(current, X, -1 - n)


def screening_action(which, X: FFField) -> FFField:
    """The contour action of a screening charge on the field X."""
    S = X.system.screening_current(which)
    _guard_monodromy(S, X)
    return ope_coefficient(S, X, -1)


def conformal_weight(T: FFField, X: FFField) -> Fraction:
    """The eigenvalue of L_0 on X, read off the second-order pole of T X."""
    coeff = ope_coefficient(T, X, -2)
    c = coeff.proportionality(X)
    if c is None:
        raise ValueError("the field is not an L0 eigenvector")
    return c


def central_charge(T: FFField) -> Fraction:
    """Twice the fourth-order pole coefficient of T(z)T(w)."""
    coeff = ope_coefficient(T, T, -4)
    c = coeff.proportionality(T.system.one())
    if c is None:
        raise ValueError("the fourth-order pole is not a multiple of the identity")
    return 2 * c


def _monomials(weight: int, bosons: Sequence[int]) -> List[Deriv]:
    """All Wick monomials of the given total derivative order."""
    out: List[Deriv] = []

    def extend(remaining: int, minimum: Tuple[int, int], acc: Deriv) -> None:
        if remaining == 0:
            out.append(acc)
            return
        for a in bosons:
            for m in range(1, remaining + 1):
                if (a, m) >= minimum:
                    extend(remaining - m, (a, m), acc + ((a, m),))

    extend(weight, (min(bosons, default=0), 1), ())
    return out


def antiderivative(X: FFField) -> Optional[FFField]:
    """A field Y with Y' == X, or None when X is not a total derivative.

    Solved per momentum and per total derivative order by expressing the
    derivative on the finite monomial basis one order lower and running
    Gaussian elimination over the rationals.
    """
    system = X.system
    total = system.zero()
    for beta in X.momenta():
        grades: Dict[int, Dict[TermKey, Fraction]] = {}
        for (deriv, b), c in X.terms.items():
            if b != beta:
                continue
            grades.setdefault(sum(m for _, m in deriv), {})[(deriv, b)] = c
        bosons = sorted(
            {a for (deriv, b), _ in X.terms.items() if b == beta for a, _ in deriv}
            | {a for a in range(3) if beta[a]}
        )
        for w, target in grades.items():
            cands = [
                FFField(system, {(deriv, beta): Fraction(1)})
                for deriv in _monomials(w - 1, bosons)
            ]
            images = [cand.derivative() for cand in cands]
            keys = sorted(
                {key for img in images for key in img.terms} | set(target)
            )
            rows = [
                [img.terms.get(key, Fraction(0)) for img in images]
                + [target.get(key, Fraction(0))]
                for key in keys
            ]
            ncols = len(cands)
            # Gaussian elimination on the augmented matrix
            pivots: List[int] = []
            rank = 0
            for col in range(ncols):
                piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
                if piv is None:
                    continue
                rows[rank], rows[piv] = rows[piv], rows[rank]
                inv = Fraction(1) / rows[rank][col]
                rows[rank] = [x * inv for x in rows[rank]]
                for r in range(len(rows)):
                    if r != rank and rows[r][col]:
                        f = rows[r][col]
                        rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
                pivots.append(col)
                rank += 1
            if any(row[ncols] for row in rows[rank:]):
                return None
            for r, col in enumerate(pivots):
                if rows[r][ncols]:
                    total = total + cands[col].scale(rows[r][ncols])
    return total


# ---------------------------------------------------------------------------
# Currents
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurrentFamily:
    """The affine sl(2) currents and energy-momentum fields of a lattice.

    ``jp``/``jm`` are the level-stripped currents (no extra-boson dressing);
    the matter/liouville/extra split is only available in the asymmetric
    case, where the working basis is orthogonal.
    """

    system: MomentumSystem
    Jp: FFField
    Jz: FFField
    Jm: FFField
    T: FFField
    Tsug: FFField
    jp: FFField
    jm: FFField
    Tmatter: Optional[FFField] = None
    Tliouville: Optional[FFField] = None
    Textra: Optional[FFField] = None


def build_currents(system: MomentumSystem) -> CurrentFamily:
    """The free-field currents of the lattice, with exact coefficients."""
    k = system.level
    w1, w2, w3 = system.omega
    d1 = system.gradient(system.alpha[0])
    d2 = system.gradient(system.alpha[1])
    dd1 = system.gradient(system.alpha[0], 2)
    dd2 = system.gradient(system.alpha[1], 2)
    extra = system.boson(2)
    Jz = extra.scale(Fraction(1, 2))
    Tex = (extra * extra).scale(Fraction(1, 4) / k)
    if system.case == ASYMMETRIC:
        T = (
            (d1 * d1).scale(-1 / k)
            + (d1 * d2).scale(-1 / k)
            + (d2 * d2).scale(Fraction(-1, 2) / (k * (k + 2)))
            - dd1
            - dd2.scale(Fraction(1, 2) / (k + 2))
        )
        jp = system.exponential(w1)
        jm = -((d1 * d1) + (d1 * d2) + dd1.scale(k + 1)) * system.exponential(
            _vscale(Fraction(-1), w1)
        )
        matter = system.boson(0)
        Tm = (matter * matter).scale(Fraction(1, 4) / (k + 2)) + system.boson(
            0, 2
        ).scale(Fraction(k + 1, 2) / (k + 2))
        liou = system.boson(1)
        Tl = (liou * liou).scale(Fraction(-1, 4) / k) + system.boson(1, 2).scale(
            Fraction(1, 2)
        )
    elif system.case == SYMMETRIC:
        T = (
            (d1 * d1).scale(Fraction(-1, 2) / (k * (k + 2)))
            + (d1 * d2).scale((k + 1) / (k * (k + 2)))
            + (d2 * d2).scale(Fraction(-1, 2) / (k * (k + 2)))
            - (dd1 + dd2).scale(Fraction(1, 2) / (k + 2))
        )
        jp = d1 * system.exponential(_vadd(_vscale(Fraction(-1), w1), w2))
        jm = d2 * system.exponential(_vadd(w1, _vscale(Fraction(-1), w2)))
        Tm = Tl = None
    else:
        raise ValueError("currents are built for the two screening cases")
    two_w3 = _vscale(Fraction(2), w3)
    Jp = jp * system.exponential(two_w3)
    Jm = jm * system.exponential(_vscale(Fraction(-1), two_w3))
    return CurrentFamily(
        system, Jp, Jz, Jm, T, T + Tex, jp, jm, Tm, Tl, Tex if Tm else None
    )


def check_current_opes(cur: CurrentFamily) -> CheckReport:
    """Every defining operator product of the current family."""
    sysm = cur.system
    k = sysm.level
    report = CheckReport(f"currents[{sysm.case},p={sysm.p},j={sysm.j}]")
    one = sysm.one()

    def coeff(A, B, n):
        return ope_coefficient(A, B, n)

    report.record("JzJz level", coeff(cur.Jz, cur.Jz, -2) == one.scale(k / 2), "", "k/2")
    report.record("JzJz residue", coeff(cur.Jz, cur.Jz, -1).is_zero(), "", "0")
    report.record("JzJp", coeff(cur.Jz, cur.Jp, -1) == cur.Jp, "", "+Jp")
    report.record("JzJm", coeff(cur.Jz, cur.Jm, -1) == -cur.Jm, "", "-Jm")
    report.record("JpJm level", coeff(cur.Jp, cur.Jm, -2) == one.scale(k), "", "k")
    report.record("JpJm residue", coeff(cur.Jp, cur.Jm, -1) == cur.Jz.scale(2), "", "2Jz")
    report.record("JpJp regular", not ope_singular_part(cur.Jp, cur.Jp), "", "0")
    report.record("JmJm regular", not ope_singular_part(cur.Jm, cur.Jm), "", "0")
    # Sugawara: normal products of the currents reproduce T + extra
    quad = (
        normal_product(cur.Jp, cur.Jm)
        + normal_product(cur.Jm, cur.Jp)
        + normal_product(cur.Jz, cur.Jz).scale(2)
    ).scale(Fraction(1, 2) / (k + 2))
    report.record("sugawara bilinear", quad == cur.Tsug, "", "T + T_extra")
    c = Fraction(3) * k / (k + 2) - 1
    for name, T in (("T", cur.T), ("Tsug", cur.Tsug)):
        cc = Fraction(3) * k / (k + 2) if name == "Tsug" else c
        report.record(f"{name} c", central_charge(T) == cc, central_charge(T), cc)
        report.record(f"{name} third pole", coeff(T, T, -3).is_zero(), "", "0")
        report.record(f"{name} self", coeff(T, T, -2) == T.scale(2), "", "2T")
        report.record(f"{name} deriv", coeff(T, T, -1) == T.derivative(), "", "dT")
    for name, J, wt in (("Jp", cur.Jp, 1), ("Jz", cur.Jz, 1), ("Jm", cur.Jm, 1)):
        report.record(
            f"Tsug {name} weight",
            coeff(cur.Tsug, J, -2) == J.scale(wt)
            and coeff(cur.Tsug, J, -1) == J.derivative()
            and not any(p < -2 for p in ope_singular_part(cur.Tsug, J)),
            "",
            "primary weight 1",
        )
    if cur.Tmatter is not None:
        cm = 13 - 6 * (k + 2) - Fraction(6) / (k + 2)
        report.record(
            "matter c", central_charge(cur.Tmatter) == cm, central_charge(cur.Tmatter), cm
        )
        report.record(
            "liouville c",
            central_charge(cur.Tliouville) == 6 * k + 1,
            central_charge(cur.Tliouville),
            6 * k + 1,
        )
        report.record(
            "extra c", central_charge(cur.Textra) == 1, central_charge(cur.Textra), 1
        )
        total = cur.Tmatter + cur.Tliouville + cur.Textra
        report.record("three-term split", total == cur.Tsug, "", "Tsug")
        for A, B, name in (
            (cur.Tmatter, cur.Tliouville, "matter/liouville"),
            (cur.Tmatter, cur.Textra, "matter/extra"),
            (cur.Tliouville, cur.Textra, "liouville/extra"),
        ):
            report.record(f"{name} commute", not ope_singular_part(A, B), "", "0")
    return report


# ---------------------------------------------------------------------------
# Charge primaries and W-generators
# ---------------------------------------------------------------------------

def charge_primary(system: MomentumSystem, h) -> FFField:
    """The weight h(h+1)/(k+2) exponential primary of charge h."""
    h = _frac(h)
    w1, w2, w3 = system.omega
    if system.case == ASYMMETRIC:
        return system.exponential(_vscale(2 * h, _vadd(w2, w3)))
    if system.case == SYMMETRIC:
        return system.exponential(_vscale(h, _vadd(w1, w2)))
    raise ValueError("charge primaries are built for the two screening cases")


def apply_mff_operator(cur: CurrentFamily, r: int, s: int, X: FFField) -> FFField:
    """The image of X under the charge +r, depth r*s singular-vector operator.

    The abstract mode expansion is evaluated at the concrete level of the
    lattice and applied word by word, with the fields of already-computed
    word suffixes shared across the whole expansion.
    """
    level = LevelScalar.from_rational(cur.system.level)
    ops = mff_operator(r, s, MINUS, level=level)
    by_kind = {PLUS: cur.Jp, ZERO: cur.Jz, MINUS: cur.Jm}
    cache: Dict[Tuple, FFField] = {(): X}

    def suffix_field(word) -> FFField:
        if word not in cache:
            kind, n = word[0]
            cache[word] = mode_action(by_kind[kind], n, suffix_field(word[1:]))
        return cache[word]

    out = cur.system.zero()
    for word, c in ops.items():
        out = out + suffix_field(word).scale(c.rational_value())
    return out


def w_generators(cur: CurrentFamily) -> Dict[str, FFField]:
    """The three W-algebra generators of the lattice.

    At the bottom of each family (asymmetric j = 0, symmetric j = -1) the
    plus generator is an exponential (or a single zero-mode descendant) and
    the other two follow by the long screening.  Higher j uses the
    singular-vector operators on the charge +-h primaries and the identity.
    """
    sysm = cur.system
    p, j = sysm.p, sysm.j
    if sysm.case == ASYMMETRIC:
        if j == 0:
            wp = charge_primary(sysm, 1)
            w0 = screening_action("long", wp)
            return {"W+": wp, "W0": w0, "W-": screening_action("long", w0)}
        h = j * p + 1
        return {
            "W+": apply_mff_operator(cur, j * p, 3 * p, charge_primary(sysm, h)),
            "W0": apply_mff_operator(cur, 2 * j * p + 1, 2 * p, sysm.one()),
            "W-": apply_mff_operator(cur, 3 * j * p + 2, p, charge_primary(sysm, -h)),
        }
    if sysm.case == SYMMETRIC:
        if j == -1:
            wp = mode_action(cur.Jp, 0, charge_primary(sysm, 1)).scale(Fraction(1, 2))
            w0 = screening_action("long", wp)
            return {"W+": wp, "W0": w0, "W-": screening_action("long", w0)}
        h = (j + 1) * p + 1
        w2, w3 = sysm.omega[1], sysm.omega[2]
        top = sysm.exponential(_vscale(Fraction(2 * h), _vadd(w2, w3)))
        bottom = sysm.exponential(_vscale(Fraction(-2 * h), _vadd(w2, w3)))
        return {
            "W+": apply_mff_operator(cur, h - 1, 3 * p, top).scale(math.factorial(h)),
            "W0": apply_mff_operator(cur, 2 * h - 1, 2 * p, sysm.one()),
            "W-": apply_mff_operator(cur, 3 * h - 1, p, bottom),
        }
    raise ValueError("W-generators are built for the two screening cases")


def extremal_vertex(system: MomentumSystem, s: int, r, theta: int) -> FFField:
    """The extremal exponential of the (s, r) tower in the theta-twisted sector."""
    if system.case != ASYMMETRIC:
        raise ValueError("extremal vertices live on the asymmetric lattice")
    p = system.p
    w1, w2, w3 = system.omega
    r = _frac(r)
    beta = _vadd(
        _vscale(r / p, w1),
        _vadd(
            _vscale(Fraction(-(s - 1), p), w2),
            _vscale(-(s - 1 - 2 * r + theta - 2 * p * theta) / p, w3),
        ),
    )
    return system.exponential(beta)


# ---------------------------------------------------------------------------
# Hamiltonian reduction
# ---------------------------------------------------------------------------

def hamiltonian_reduce(X: FFField) -> FFField:
    """Set the liouville and extra bosons to zero, keeping the matter part."""
    if X.system.case != ASYMMETRIC:
        raise ValueError("reduction is defined on the asymmetric lattice")
    out: Dict[TermKey, Fraction] = {}
    for (deriv, beta), c in X.terms.items():
        if any(a != 0 for a, _ in deriv):
            continue
        key = (deriv, (beta[0], Fraction(0), Fraction(0)))
        out[key] = out.get(key, Fraction(0)) + c
    return FFField(X.system, out)


# ---------------------------------------------------------------------------
# Wakimoto dictionary
# ---------------------------------------------------------------------------

def wakimoto_images(system: MomentumSystem) -> Dict[str, FFField]:
    """Images of the first-order generators under the bosonization map.

    Keys: "beta"/"gamma" for the weight (1, 0) pair, "phi" for the rescaled
    auxiliary boson derivative (with propagator 2(k+2) log), and "etaxi"
    for the fermionic bilinear current.
    """
    k = system.level
    w1, w2, w3 = system.omega
    ws = _vadd(w2, w3)
    out = {"phi": system.gradient(ws).scale(2 * (k + 2))}
    if system.case == SYMMETRIC:
        out["beta"] = -(
            system.gradient(system.alpha[0])
            * system.exponential(_vadd(_vscale(Fraction(-1), w1), _vadd(w2, _vscale(Fraction(2), w3))))
        )
        out["gamma"] = system.exponential(
            _vadd(w1, _vadd(_vscale(Fraction(-1), w2), _vscale(Fraction(-2), w3)))
        )
        out["etaxi"] = system.gradient(system.alpha[0])
    elif system.case == ASYMMETRIC:
        up = _vadd(w1, _vscale(Fraction(2), w3))
        out["beta"] = -system.exponential(up)
        half = (Fraction(1, 2), Fraction(1, 2), Fraction(0))
        out["gamma"] = system.gradient(half) * system.exponential(_vscale(Fraction(-1), up))
        out["etaxi"] = system.gradient(half)
    else:
        raise ValueError("the dictionary is defined for the two screening cases")
    return out


def wakimoto_map(system: MomentumSystem, terms) -> FFField:
    """Evaluate a composite in the bosonized generators on the lattice.

    ``terms`` is an iterable of (coefficient, factors, charge) with factors a
    sequence of (name, order) pairs -- name in {"beta", "gamma", "etaxi"}
    with order counting derivatives, or ("phi", m) for the m-th derivative
    of the auxiliary boson -- and charge c standing for a rightmost factor
    e^{c phi_aux}.  Nested point-splitting normal products are taken right
    to left, matching the usual reading of such composites.
    """
    images = wakimoto_images(system)
    ws = _vadd(system.omega[1], system.omega[2])
    out = system.zero()
    for coeff, factors, charge in terms:
        # the auxiliary boson has propagator 2(k+2) log, so its momentum c
        # lands on 2c(k+2) (omega_2 + omega_3) in lattice coordinates
        acc = system.exponential(_vscale(2 * _frac(charge) * (system.level + 2), ws))
        for name, order in reversed(list(factors)):
            if name == "phi":
                if order < 1:
                    raise ValueError("the bare auxiliary boson is not a field")
                img = system.gradient(ws, order).scale(2 * (system.level + 2))
            else:
                img = images[name]
                for _ in range(order):
                    img = img.derivative()
            acc = normal_product(img, acc)
        out = out + acc.scale(_frac(coeff))
    return out


def check_wakimoto(system: MomentumSystem) -> CheckReport:
    """The bosonization map sends the defining relations onto the lattice."""
    cur = build_currents(system)
    k = system.level
    report = CheckReport(f"wakimoto[{system.case},p={system.p},j={system.j}]")
    images = wakimoto_images(system)
    sing = ope_singular_part(images["beta"], images["gamma"])
    report.record(
        "beta gamma pair",
        set(sing) == {Fraction(-1)} and sing[Fraction(-1)] == -system.one(),
        "",
        "-1/(z-w)",
    )
    report.record(
        "J+ image",
        wakimoto_map(system, [(-1, (("beta", 0),), 0)]) == cur.Jp,
        "",
        "Jp",
    )
    report.record(
        "J0 image",
        wakimoto_map(
            system,
            [(1, (("beta", 0), ("gamma", 0)), 0), (Fraction(1, 2), (("phi", 1),), 0)],
        )
        == cur.Jz,
        "",
        "Jz",
    )
    report.record(
        "J- image",
        wakimoto_map(
            system,
            [
                (1, (("beta", 0), ("gamma", 0), ("gamma", 0)), 0),
                (k, (("gamma", 1),), 0),
                (1, (("gamma", 0), ("phi", 1)), 0),
            ],
        )
        == cur.Jm,
        "",
        "Jm",
    )
    # the two scalars of the original lattice, recovered through the map
    d1 = system.gradient(system.alpha[0])
    d2 = system.gradient(system.alpha[1])
    eta_sign = 1 if system.case == SYMMETRIC else -1
    eta_coeff = k + 1 if system.case == SYMMETRIC else k + 2
    report.record(
        "dA1 image",
        wakimoto_map(system, [(eta_sign, (("etaxi", 0),), 0)]) == d1,
        "",
        "dA1",
    )
    report.record(
        "dA2 image",
        wakimoto_map(
            system,
            [
                (k + 2, (("beta", 0), ("gamma", 0)), 0),
                (1, (("phi", 1),), 0),
                (eta_coeff, (("etaxi", 0),), 0),
            ],
        )
        == d2,
        "",
        "dA2",
    )
    report.record(
        "dA3 image",
        wakimoto_map(
            system, [(2, (("beta", 0), ("gamma", 0)), 0), (1, (("phi", 1),), 0)]
        )
        == system.boson(2),
        "",
        "dA3",
    )
    # descending exponential corner: the auxiliary vertex maps to the
    # lowest zero-mode descendant of the charge -h primary
    for h in (1, 2):
        img = wakimoto_map(system, [(1, (), -Fraction(h) / (k + 2))])
        expected = system.exponential(
            _vscale(Fraction(-2 * h), _vadd(system.omega[1], system.omega[2]))
        )
        report.record(f"corner vertex h={h}", img == expected, "", "e^{-2h(w2+w3)}")
    return report


# ---------------------------------------------------------------------------
# Closed-form conformal weights
# ---------------------------------------------------------------------------

def matter_weight(r: int, s: int, level: Optional[LevelScalar] = None) -> LevelScalar:
    """Weight of the (r, s) degenerate matter primary, symbolic in the level."""
    if level is None:
        level = LevelScalar.k()
    t = level + 2
    return (
        t * Fraction(r * r - 1, 4)
        + LevelScalar.from_rational(Fraction(s * s - 1, 4)) / t
        + Fraction(1 - r * s, 2)
    )


def charge_primary_weight(h, level: Optional[LevelScalar] = None) -> LevelScalar:
    """Sugawara weight h(h+1)/(k+2) of the charge h exponential primary."""
    if level is None:
        level = LevelScalar.k()
    h = _frac(h)
    return LevelScalar.from_rational(h * (h + 1)) / (level + 2)


def extremal_weight(p: int, s: int, r, theta: int) -> Fraction:
    """Sugawara weight of the extremal vertex in the theta-twisted sector."""
    r = _frac(r)
    return Fraction((s + theta - 1) ** 2, 4 * p) - r * (theta - 1) / p + Fraction(
        1 - s - theta * theta, 2
    )


def generator_weight(p: int, j: int) -> int:
    """Conformal weight of the three W-generators of the (p, j) family."""
    return 4 * j * p * p + 2 * p


def multiplet_size(p: int, j: int) -> int:
    """Size of the zero-mode multiplet the W-generators sit in."""
    return 4 * j * p + 3


def dimension_formulas(query: str, **params):
    """Dispatch the closed-form weight and counting formulas by name."""
    table = {
        "matter": matter_weight,
        "charge-primary": charge_primary_weight,
        "extremal": extremal_weight,
        "generator": generator_weight,
        "multiplet": multiplet_size,
    }
    if query not in table:
        raise ValueError(f"unknown formula {query!r}")
    return table[query](**params)


def half_lattice_phase(p: int, x) -> CycScalar:
    """The phase e^{i pi x} for x in (1/p) Z, as an exact cyclotomic."""
    e = _frac(x) * p
    if e.denominator != 1:
        raise NonIntegerMonodromy(f"{x} is not a multiple of 1/p")
    return CycScalar.q_power(p, int(e))
