"""Symbolic mode calculus for the affine sl(2) algebra over Q(k).

Everything is exact: scalars are rational functions of a formal level k,
vectors live in twisted Verma modules, and singular vectors are produced
by evaluating alternating products of complex powers of two distinguished
modes.  The complex powers are eliminated with closed rearrangement
identities (a binomial expansion that terminates because the relevant
adjoint action is nilpotent of order three), and every singular vector is
cross-checkable against an independent linear solve for the annihilator
at its bigrade.

A mode is a pair ``(kind, n)`` with ``kind`` in ``{+1, 0, -1}`` standing
for the raising, Cartan, and lowering currents, and ``n`` the mode index.
"""

import itertools
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from .linalg import accum, axpy_sub
from .nichols import CheckReport
from .scalars import LevelScalar

Mode = Tuple[int, int]
Word = Tuple[Mode, ...]
Coeffs = Dict[Word, LevelScalar]

PLUS, ZERO, MINUS = 1, 0, -1


class MFFEvaluationError(RuntimeError):
    """The complex-power evaluation failed to telescope to integer powers."""


def _one() -> LevelScalar:
    return LevelScalar.from_rational(1)


def bracket(a: Mode, b: Mode, level: LevelScalar) -> Tuple[LevelScalar, List[Tuple[Mode, int]]]:
    """Commutator of two modes: a central scalar plus integer multiples of modes.

    The three defining brackets are
    ``[J0_m, J±_n] = ±J±_{m+n}``, ``[J0_m, J0_n] = (k/2) m delta``, and
    ``[J+_m, J-_n] = k m delta + 2 J0_{m+n}``.
    """
    (ka, m), (kb, n) = a, b
    zero = LevelScalar.from_rational(0)
    if ka == kb:
        if ka == ZERO and m + n == 0:
            return level * Fraction(m, 2), []
        return zero, []
    if ka == ZERO:
        return zero, [((kb, m + n), kb)]
    if kb == ZERO:
        return zero, [((ka, m + n), -ka)]
    central = level * m if m + n == 0 else zero
    return central, [((ZERO, m + n), 2 * ka)]


def rearrange_power(
    sigma: int,
    x: int,
    gamma: LevelScalar,
    mode: Mode,
    level: Optional[LevelScalar] = None,
) -> List[Tuple[LevelScalar, Word, int]]:
    """Rewrite ``(J^sigma_x)^gamma . mode`` with the power moved to the right.

    Returns terms ``(coeff, prefix, j)`` meaning
    ``coeff * prefix * (J^sigma_x)^(gamma - j)`` with ``j`` in {0, 1, 2}.
    Valid for symbolic ``gamma`` because ``ad(J^sigma_x)`` kills any mode
    after at most two steps, so the binomial expansion closes:

        A^g B = B A^g + g [A,B] A^(g-1) + g(g-1)/2 [A,[A,B]] A^(g-2).

    Only ``sigma = +1`` or ``-1`` is supported; the Cartan current has a
    non-nilpotent adjoint action and admits no such closed form.
    """
    if sigma not in (PLUS, MINUS):
        raise ValueError(f"no closed rearrangement for kind {sigma}")
    if level is None:
        level = LevelScalar.k()
    A = (sigma, x)
    one = _one()
    out: List[Tuple[LevelScalar, Word, int]] = [(one, (mode,), 0)]
    g2 = gamma * (gamma - one) * Fraction(1, 2)
    c1, modes1 = bracket(A, mode, level)
    if c1:
        out.append((gamma * c1, (), 1))
    for m1, i1 in modes1:
        out.append((gamma * i1, (m1,), 1))
        c2, modes2 = bracket(A, m1, level)
        if c2:
            out.append((g2 * (i1 * c2), (), 2))
        for m2, i2 in modes2:
            c3, modes3 = bracket(A, m2, level)
            if c3 or modes3:  # pragma: no cover - impossible for kinds +-1
                raise ValueError("adjoint action is not nilpotent of order three")
            out.append((g2 * (i1 * i2), (m2,), 2))
    return [(c, pre, j) for c, pre, j in out if c]


class TwistedVerma:
    """A twisted Verma module with highest weight ``lam`` and twist ``theta``.

    The twisted highest-weight vector is killed by ``J+_{>=theta}``,
    ``J0_{>=1}``, and ``J-_{>=1-theta}``, and ``J0_0 + (k/2) theta`` acts on
    it by ``lam``.  Vectors are dictionaries mapping normal-ordered words of
    creation modes to Q(k) coefficients.
    """

    def __init__(self, lam: LevelScalar, theta: int, level: Optional[LevelScalar] = None):
        self.lam = lam
        self.theta = theta
        self.level = level if level is not None else LevelScalar.k()
        self._eigen = lam - self.level * Fraction(theta, 2)
        self._one = _one()

    def params(self) -> Tuple[LevelScalar, int, LevelScalar]:
        return (self.lam, self.theta, self.level)

    def creation(self, mode: Mode) -> bool:
        kind, n = mode
        if kind == PLUS:
            return n <= self.theta - 1
        if kind == ZERO:
            return n <= -1
        return n <= -self.theta

    def order_key(self, mode: Mode) -> Tuple[int, int, int]:
        # raising, then Cartan, then lowering modes, each by decreasing index;
        # non-creation modes sort after everything so they reach the vacuum
        return (0 if self.creation(mode) else 1, -mode[0], -mode[1])

    def highest_weight(self) -> "AffineVector":
        return AffineVector(self, {(): self._one})

    def normal_order(self, word: Word) -> Coeffs:
        """Expand an arbitrary mode word applied to the highest-weight vector."""
        out: Coeffs = {}
        stack: List[Tuple[LevelScalar, Word]] = [(self._one, tuple(word))]
        while stack:
            c, w = stack.pop()
            while True:
                if not w:
                    accum(out, c, {(): self._one})
                    break
                last = w[-1]
                if not self.creation(last):
                    if last == (ZERO, 0):
                        c = c * self._eigen
                        w = w[:-1]
                        continue
                    break  # kills the highest-weight vector
                i = self._last_inversion(w)
                if i is None:
                    accum(out, c, {w: self._one})
                    break
                a, b = w[i], w[i + 1]
                central, modes = bracket(a, b, self.level)
                if central:
                    stack.append((c * central, w[:i] + w[i + 2 :]))
                for mode, mult in modes:
                    stack.append((c * mult, w[:i] + (mode,) + w[i + 2 :]))
                w = w[:i] + (b, a) + w[i + 2 :]
        return out

    def _last_inversion(self, w: Word) -> Optional[int]:
        for i in range(len(w) - 2, -1, -1):
            if self.order_key(w[i]) > self.order_key(w[i + 1]):
                return i
        return None

    def apply_mode(self, mode: Mode, coeffs: Coeffs) -> Coeffs:
        out: Coeffs = {}
        for word, c in coeffs.items():
            accum(out, c, self.normal_order((mode,) + word))
        return out


class AffineVector:
    """A vector in a twisted Verma module, exact over Q(k)."""

    def __init__(self, module: TwistedVerma, coeffs: Coeffs):
        self.module = module
        self.coeffs = {w: c for w, c in coeffs.items() if c}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AffineVector):
            return NotImplemented
        return self.module.params() == other.module.params() and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"AffineVector({self.coeffs!r})"

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "AffineVector") -> "AffineVector":
        out = dict(self.coeffs)
        accum(out, self.module._one, other.coeffs)
        return AffineVector(self.module, out)

    def __sub__(self, other: "AffineVector") -> "AffineVector":
        out = dict(self.coeffs)
        axpy_sub(out, self.module._one, other.coeffs)
        return AffineVector(self.module, out)

    def scale(self, c: LevelScalar) -> "AffineVector":
        return AffineVector(self.module, {w: c * v for w, v in self.coeffs.items()})

    def apply(self, mode: Mode) -> "AffineVector":
        return AffineVector(self.module, self.module.apply_mode(mode, self.coeffs))

    def apply_word(self, word: Iterable[Mode]) -> "AffineVector":
        out = self
        for mode in reversed(tuple(word)):
            out = out.apply(mode)
        return out

    def bigrade(self) -> Tuple[int, int]:
        """(charge, depth) relative to the highest-weight vector.

        A mode ``(kind, n)`` contributes ``kind`` to the charge and ``-n``
        to the depth; raises on inhomogeneous or zero vectors.
        """
        grades = {
            (sum(k for k, _ in w), sum(-n for _, n in w)) for w in self.coeffs
        }
        if len(grades) != 1:
            raise ValueError(f"vector is not homogeneous: {sorted(grades)}")
        return grades.pop()


def sugawara_dim(lam: LevelScalar, theta: int, level: Optional[LevelScalar] = None) -> LevelScalar:
    """Conformal dimension of the twisted highest-weight vector.

    ``(lam^2 + lam)/(k + 2) - theta lam + (k/4) theta^2``; has a pole at
    the critical level k = -2 (a ZeroDivisionError on a constant level -2).
    """
    if level is None:
        level = LevelScalar.k()
    two = LevelScalar.from_rational(2)
    return (lam * lam + lam) / (level + two) - lam * theta + level * Fraction(theta * theta, 4)


def lambda_plus(r: int, s: int, level: Optional[LevelScalar] = None) -> LevelScalar:
    """Highest weight admitting a charge -r singular vector at depth r(s-1)."""
    if level is None:
        level = LevelScalar.k()
    two = LevelScalar.from_rational(2)
    return LevelScalar.from_rational(Fraction(r - 1, 2)) - (level + two) * Fraction(s - 1, 2)


def lambda_minus(r: int, s: int, level: Optional[LevelScalar] = None) -> LevelScalar:
    """Highest weight admitting a charge +r singular vector at depth r*s."""
    if level is None:
        level = LevelScalar.k()
    two = LevelScalar.from_rational(2)
    return LevelScalar.from_rational(Fraction(-r - 1, 2)) + (level + two) * Fraction(s, 2)


def _push_float(
    sigma: int,
    x: int,
    gamma: LevelScalar,
    word: Word,
    level: LevelScalar,
    cap: int,
) -> Dict[Tuple[Word, int], LevelScalar]:
    """Move ``(J^sigma_x)^gamma`` rightward through a concrete word.

    Returns ``{(prefix, drop): coeff}`` meaning
    ``coeff * prefix * (J^sigma_x)^(gamma - drop)``.

    Prefixes are kept PBW-straightened after every step and copies of the
    floating mode are absorbed into the power immediately (they commute
    with everything of the same kind to their right), so that terms which
    agree as operators collide and the state count stays polynomial.
    """
    states: Dict[Tuple[Word, int], LevelScalar] = {((), 0): _one()}
    for mode in word:
        states = _push_step(sigma, x, gamma, states, mode, level, cap)
    return states


_REARRANGE_CACHE: Dict[Tuple, List[Tuple[LevelScalar, Word, int]]] = {}
_STRAIGHTEN_CACHE: Dict[Tuple, "Coeffs"] = {}


def _rearrange_cached(sigma, x, gamma, mode, level, concrete: bool = False):
    # concrete coefficients are plain Fractions, which keeps the hot loop of
    # mff_operator at a numeric level free of polynomial-wrapper overhead
    key = (sigma, x, gamma, mode, level, concrete)
    out = _REARRANGE_CACHE.get(key)
    if out is None:
        out = rearrange_power(sigma, x, gamma, mode, level)
        if concrete:
            out = [(c.rational_value(), pre, j) for c, pre, j in out]
        _REARRANGE_CACHE[key] = out
    return out


def _straighten_cached(
    word: Word, last_kind: int, level: LevelScalar, concrete: bool = False
):
    key = (word, last_kind, level, concrete)
    out = _STRAIGHTEN_CACHE.get(key)
    if out is None:
        out = _operator_normal_order(word, last_kind, level)
        if concrete:
            out = {w: c.rational_value() for w, c in out.items()}
        _STRAIGHTEN_CACHE[key] = out
    return out


_SCALE_BASE = 210
_BASE_POWERS = [1]


class _UnscalableCoefficient(Exception):
    """A coefficient denominator has a prime factor outside the scale base."""


def _bpow(i: int) -> int:
    while len(_BASE_POWERS) <= i:
        _BASE_POWERS.append(_BASE_POWERS[-1] * _SCALE_BASE)
    return _BASE_POWERS[i]


def _scaled(q: Fraction) -> Tuple[int, int]:
    """Represent ``q`` as ``(n, e)`` with ``q = n / _SCALE_BASE**e``."""
    d = q.denominator
    e = 0
    while _bpow(e) % d:
        e += 1
        if e > 64:
            raise _UnscalableCoefficient(str(q))
    return q.numerator * (_bpow(e) // d), e


def _sadd(acc: Dict, key, n: int, e: int) -> None:
    """Accumulate the scaled value ``n / _SCALE_BASE**e`` into ``acc[key]``."""
    cur = acc.get(key)
    if cur is None:
        acc[key] = (n, e)
        return
    cn, ce = cur
    if e == ce:
        acc[key] = (cn + n, ce)
    elif e > ce:
        acc[key] = (cn * _bpow(e - ce) + n, e)
    else:
        acc[key] = (cn + n * _bpow(ce - e), ce)


class _PairPusher:
    """Scaled-integer engine moving one fixed fractional power through words.

    Coefficients are ``(n, e)`` pairs meaning ``n / _SCALE_BASE**e``, which
    keeps the hot accumulation loop at plain integer arithmetic with no gcd
    normalization, and the one-mode advance of each state is cached per
    ``(prefix, drop, mode)`` so that prefixes recurring across branches of
    the word trie cost a single list walk.
    """

    def __init__(self, sigma: int, x: int, gamma: LevelScalar, level: LevelScalar, cap: int):
        self.sigma = sigma
        self.x = x
        self.gamma = gamma
        self.level = level
        self.cap = cap
        self.fused: Dict[Tuple[Word, int, Mode], List] = {}

    def _expansion(self, prefix: Word, drop: int, mode: Mode) -> List:
        A = (self.sigma, self.x)
        out: Dict[Tuple[Word, int], Fraction] = {}
        rearranged = _rearrange_cached(
            self.sigma, self.x, self.gamma - drop, mode, self.level, True
        )
        for c2, pre, j in rearranged:
            if len(prefix) + len(pre) > self.cap:
                raise MFFEvaluationError("rearrangement exceeded the length cap")
            canonical = _straighten_cached(prefix + pre, self.sigma, self.level, True)
            for canon, c3 in canonical.items():
                absorbed = canon.count(A)
                key = (tuple(m for m in canon if m != A), drop + j - absorbed)
                cur = out.get(key)
                out[key] = c2 * c3 if cur is None else cur + c2 * c3
        return [(w, d) + _scaled(c) for (w, d), c in out.items() if c]

    def step(self, states: Dict, mode: Mode) -> Dict:
        """Advance every state past ``mode``; states carry scaled coefficients."""
        fused = self.fused
        nxt: Dict[Tuple[Word, int], Tuple[int, int]] = {}
        for (prefix, drop), (n, e) in states.items():
            key = (prefix, drop, mode)
            expansion = fused.get(key)
            if expansion is None:
                expansion = fused[key] = self._expansion(prefix, drop, mode)
            for w, d, n2, e2 in expansion:
                _sadd(nxt, (w, d), n * n2, e + e2)
        return {k: v for k, v in nxt.items() if v[0]}


_PUSHER_CACHE: Dict[Tuple, _PairPusher] = {}


def _push_step(
    sigma: int,
    x: int,
    gamma: LevelScalar,
    states: Dict[Tuple[Word, int], object],
    mode: Mode,
    level: LevelScalar,
    cap: int,
    concrete: bool = False,
) -> Dict[Tuple[Word, int], object]:
    """Advance the floating power past one further mode of the word."""
    A = (sigma, x)
    nxt: Dict[Tuple[Word, int], object] = {}
    for (prefix, drop), c in states.items():
        rearranged = _rearrange_cached(sigma, x, gamma - drop, mode, level, concrete)
        for c2, pre, j in rearranged:
            if len(prefix) + len(pre) > cap:
                raise MFFEvaluationError("rearrangement exceeded the length cap")
            canonical = _straighten_cached(prefix + pre, sigma, level, concrete)
            for canon, c3 in canonical.items():
                absorbed = canon.count(A)
                stripped = tuple(m for m in canon if m != A)
                key = (stripped, drop + j - absorbed)
                cur = nxt.get(key)
                val = c * c2 * c3 if cur is None else cur + c * c2 * c3
                nxt[key] = val
    return {key: c for key, c in nxt.items() if c}


def _operator_normal_order(
    word: Word, last_kind: int, level: LevelScalar
) -> Coeffs:
    """PBW straightening of an operator word (no vacuum is applied).

    Words are sorted with the ``last_kind`` block rightmost and the other
    two kinds in raising-then-Cartan-then-lowering order, each block by
    decreasing mode index.  Terms that are equal as operators then collide
    syntactically, which the complex-power telescoping relies on.
    """
    base = {PLUS: 0, ZERO: 1, MINUS: 2}

    def key(mode: Mode) -> Tuple[int, int, int]:
        kind, n = mode
        return (1 if kind == last_kind else 0, base[kind], -n)

    out: Coeffs = {}
    one = _one()
    stack: List[Tuple[LevelScalar, Word]] = [(one, tuple(word))]
    while stack:
        c, w = stack.pop()
        while True:
            i = next(
                (i for i in range(len(w) - 2, -1, -1) if key(w[i]) > key(w[i + 1])),
                None,
            )
            if i is None:
                accum(out, c, {w: one})
                break
            central, modes = bracket(w[i], w[i + 1], level)
            if central:
                stack.append((c * central, w[:i] + w[i + 2 :]))
            for mode, mult in modes:
                stack.append((c * mult, w[:i] + (mode,) + w[i + 2 :]))
            w = w[:i] + (w[i + 1], w[i]) + w[i + 2 :]
    return out


def mff_operator(
    r: int, s: int, sign: int, level: Optional[LevelScalar] = None
) -> Dict[Word, LevelScalar]:
    """Polynomial mode expansion of the alternating complex-power product.

    The product has 2s-1 factors whose exponents are ``r + j(k+2)`` for
    j = s-1, ..., -(s-1), alternating between the two distinguished modes
    (lowering-at-0 and raising-at--1; ``sign`` picks which comes first).
    Evaluation proceeds from the middle factor, whose exponent is the
    integer r, outward in pairs: the left factor of a pair is pushed
    through the accumulated polynomial with :func:`rearrange_power` and the
    leftover power merges with the right factor of the pair, telescoping to
    a nonnegative integer exponent.
    """
    if sign not in (PLUS, MINUS):
        raise ValueError("sign must be +1 or -1")
    if r < 1 or s < 1:
        raise ValueError("r and s must be positive")
    if level is None:
        level = LevelScalar.k()
    t = level + LevelScalar.from_rational(2)

    def factor_mode(i: int) -> Mode:
        # factor 1 is the leftmost; odd factors carry the leading kind
        lead = MINUS if sign == PLUS else PLUS
        kind = lead if i % 2 == 1 else -lead
        return (kind, 0) if kind == MINUS else (kind, -1)

    cap = 3 * r * s + 8
    key = (r, s, sign, level)
    cached = _MFF_CACHE.get(key)
    if cached is not None:
        return dict(cached)
    if level.is_rational():
        try:
            out = _mff_operator_scaled(r, s, factor_mode, t, level, cap)
        except _UnscalableCoefficient:
            out = _mff_operator_generic(r, s, factor_mode, t, level, cap)
    else:
        out = _mff_operator_generic(r, s, factor_mode, t, level, cap)
    _MFF_CACHE[key] = out
    return dict(out)


_MFF_CACHE: Dict[Tuple, Dict[Word, LevelScalar]] = {}


def _mff_operator_scaled(
    r: int, s: int, factor_mode, t: LevelScalar, level: LevelScalar, cap: int
) -> Dict[Word, LevelScalar]:
    """Concrete-level expansion on scaled-integer coefficients."""
    mid = factor_mode(s)
    ops: Dict[Word, Tuple[int, int]] = {(mid,) * r: (1, 0)}
    for j in range(1, s):
        sigma, x = factor_mode(s - j)
        gamma_left = t * j + r
        pkey = (sigma, x, gamma_left, level)
        pusher = _PUSHER_CACHE.get(pkey)
        if pusher is None:
            pusher = _PUSHER_CACHE[pkey] = _PairPusher(sigma, x, gamma_left, level, cap)
        staged: Dict[Tuple[Word, int], Tuple[int, int]] = {}

        def push(states, items, depth: int) -> None:
            # items: (word, coeff) pairs sharing their first `depth` modes,
            # which the states have already been pushed through; words that
            # branch apart later share all of the work up to that point
            for word, (n, e) in items:
                if len(word) == depth:
                    # gamma_left - drop + gamma_right = 2r - drop (copies of
                    # the floating mode were absorbed into the power already)
                    for (prefix, drop), (n2, e2) in states.items():
                        _sadd(staged, (prefix, 2 * r - drop), n * n2, e + e2)
            rest = [it for it in items if len(it[0]) > depth]
            for mode, group in itertools.groupby(rest, key=lambda it: it[0][depth]):
                push(pusher.step(states, mode), list(group), depth + 1)

        push({((), 0): (1, 0)}, sorted(ops.items()), 0)
        ops = {}
        for (prefix, e), (n, ee) in staged.items():
            if not n:
                continue
            if e < 0:
                raise MFFEvaluationError(
                    f"merged exponent {e} is negative at pair {j} of ({r},{s})"
                )
            _sadd(ops, prefix + ((sigma, x),) * e, n, ee)
    return {
        w: LevelScalar.from_rational(Fraction(n, _bpow(e)))
        for w, (n, e) in ops.items()
        if n
    }


def _mff_operator_generic(
    r: int, s: int, factor_mode, t: LevelScalar, level: LevelScalar, cap: int
) -> Dict[Word, LevelScalar]:
    """Expansion over rational functions of the level (any level)."""
    one = _one()
    mid = factor_mode(s)
    ops: Dict[Word, LevelScalar] = {(mid,) * r: one}
    for j in range(1, s):
        sigma, x = factor_mode(s - j)
        gamma_left = t * j + r
        staged: Dict[Tuple[Word, int], LevelScalar] = {}

        def push(states, items, depth: int) -> None:
            for word, c in items:
                if len(word) == depth:
                    for (prefix, drop), c2 in states.items():
                        accum(staged, c * c2, {(prefix, 2 * r - drop): one})
            rest = [it for it in items if len(it[0]) > depth]
            for mode, group in itertools.groupby(rest, key=lambda it: it[0][depth]):
                push(
                    _push_step(sigma, x, gamma_left, states, mode, level, cap),
                    list(group),
                    depth + 1,
                )

        push({((), 0): _one()}, sorted(ops.items()), 0)
        ops = {}
        for (prefix, e), c in staged.items():
            if not c:
                continue
            if e < 0:
                raise MFFEvaluationError(
                    f"merged exponent {e} is negative at pair {j} of ({r},{s})"
                )
            accum(ops, c, {prefix + ((sigma, x),) * e: one})
    return {w: c for w, c in ops.items() if c}


def _twist_word(word: Word, theta: int, level: LevelScalar) -> Coeffs:
    """Image of an operator word under the spectral-flow automorphism.

    Raising modes shift up by theta, lowering modes down by theta, and the
    zeroth Cartan mode picks up the central shift ``(k/2) theta``.
    """
    terms: Coeffs = {(): _one()}
    for kind, n in word:
        if kind == PLUS:
            images: List[Tuple[Word, LevelScalar]] = [(((PLUS, n + theta),), _one())]
        elif kind == MINUS:
            images = [(((MINUS, n - theta),), _one())]
        elif n == 0 and theta != 0:
            images = [(((ZERO, 0),), _one()), ((), level * Fraction(theta, 2))]
        else:
            images = [(((ZERO, n),), _one())]
        nxt: Coeffs = {}
        for w, c in terms.items():
            for tail, c2 in images:
                accum(nxt, c * c2, {w + tail: _one()})
        terms = nxt
    return terms


def mff_vector(
    r: int, s: int, sign: int, theta: int, level: Optional[LevelScalar] = None
) -> AffineVector:
    """The singular vector of charge ``sign * r`` in the twisted Verma module.

    The module's highest weight is :func:`lambda_plus` or
    :func:`lambda_minus` accordingly; the untwisted operator expansion is
    transported by the spectral flow and normal ordered against the twisted
    highest-weight vector.
    """
    if level is None:
        level = LevelScalar.k()
    lam = lambda_plus(r, s, level) if sign == PLUS else lambda_minus(r, s, level)
    module = TwistedVerma(lam, theta, level)
    out: Coeffs = {}
    for word, c in mff_operator(r, s, sign, level).items():
        for w2, c2 in _twist_word(word, theta, level).items():
            accum(out, c * c2, module.normal_order(w2))
    return AffineVector(module, out)


def expected_bigrade(r: int, s: int, sign: int, theta: int) -> Tuple[int, int]:
    """Relative (charge, depth) of the singular vector."""
    if sign == PLUS:
        return (-r, r * (s - 1 + theta))
    return (r, r * (s - theta))


def verify_singular(v: AffineVector) -> CheckReport:
    """Check the twisted highest-weight conditions for a candidate vector.

    The three modes checked generate the full annihilator of a twisted
    highest-weight vector; the shifted-weight eigenvalue and the Sugawara
    dimension bookkeeping are verified as well.
    """
    module = v.module
    theta = module.theta
    report = CheckReport(f"singular vector at twist {theta}")
    charge, depth = v.bigrade()
    for kind, n in ((PLUS, theta), (ZERO, 1), (MINUS, 1 - theta)):
        img = v.apply((kind, n))
        report.record(f"killed by ({kind},{n})", img.is_zero(), img.coeffs, {})
    shifted = module.lam + charge
    eigen = shifted - module.level * Fraction(theta, 2)
    img = v.apply((ZERO, 0))
    report.record(
        "Cartan zero-mode eigenvalue",
        img == v.scale(eigen),
        img.coeffs,
        v.scale(eigen).coeffs,
    )
    lhs = sugawara_dim(module.lam, theta, module.level) + depth
    rhs = sugawara_dim(shifted, theta, module.level)
    report.record("conformal dimension of the shifted weight", lhs == rhs, lhs, rhs)
    return report


def basis_at_bigrade(module: TwistedVerma, charge: int, depth: int) -> List[Word]:
    """All normal-ordered creation words at a relative (charge, depth).

    Only twists 0 and 1 are supported: there the single depth-zero creation
    mode makes the enumeration finite at every bigrade.
    """
    theta = module.theta
    if theta not in (0, 1):
        raise ValueError("basis enumeration is implemented for twists 0 and 1")
    zero_mode = (MINUS, 0) if theta == 0 else (PLUS, 0)
    cands: List[Tuple[Mode, int]] = []
    for v in range(1, depth + 1):
        for kind in (PLUS, ZERO, MINUS):
            cands.append(((kind, -v), v))
    words = set()

    def rec(i: int, remaining: int, modes: List[Mode]) -> None:
        if remaining == 0:
            u = (charge - sum(k for k, _ in modes)) * zero_mode[0]
            if u >= 0:
                words.add(tuple(sorted(modes + [zero_mode] * u, key=module.order_key)))
            return
        if i == len(cands):
            return
        mode, lv = cands[i]
        for cnt in range(remaining // lv + 1):
            rec(i + 1, remaining - cnt * lv, modes + [mode] * cnt)

    rec(0, depth, [])
    return sorted(words)


def _nullspace(
    columns: List[Word], rows: List[Dict[Word, LevelScalar]]
) -> List[Dict[Word, LevelScalar]]:
    """Basis of the solution space of a homogeneous system over Q(k)."""
    idx = {c: i for i, c in enumerate(columns)}
    pivot_rows: Dict[Word, Dict[Word, LevelScalar]] = {}
    for raw in rows:
        row = {c: v for c, v in raw.items() if v}
        while row:
            lead = min(row, key=lambda c: idx[c])
            if lead in pivot_rows:
                axpy_sub(row, row[lead], pivot_rows[lead])
                continue
            inv = row[lead]
            pivot_rows[lead] = {c: v / inv for c, v in row.items()}
            break
    # back-substitute to reduced form
    for lead in sorted(pivot_rows, key=lambda c: idx[c], reverse=True):
        prow = pivot_rows[lead]
        for other, orow in pivot_rows.items():
            if other != lead and lead in orow:
                axpy_sub(orow, orow[lead], prow)
    one = _one()
    solutions = []
    for free in columns:
        if free in pivot_rows:
            continue
        sol = {free: one}
        for lead, prow in pivot_rows.items():
            if free in prow:
                sol[lead] = -prow[free]
        solutions.append(sol)
    return solutions


def singular_vectors_at(module: TwistedVerma, charge: int, depth: int) -> List[AffineVector]:
    """Independent linear solve for highest-weight vectors at a bigrade.

    Imposes annihilation by the three generating modes on the full monomial
    basis and returns a basis of solutions, each scaled so its first
    monomial has unit coefficient.
    """
    basis = basis_at_bigrade(module, charge, depth)
    rows: Dict[Tuple[int, Word], Dict[Word, LevelScalar]] = {}
    gens = ((PLUS, module.theta), (ZERO, 1), (MINUS, 1 - module.theta))
    for gi, gen in enumerate(gens):
        for w in basis:
            for w2, c in module.normal_order((gen,) + w).items():
                rows.setdefault((gi, w2), {})[w] = c
    out = []
    for sol in _nullspace(basis, list(rows.values())):
        lead = min(sol)
        inv = sol[lead]
        out.append(AffineVector(module, {w: c / inv for w, c in sol.items()}))
    return out


def normalize_leading(v: AffineVector) -> AffineVector:
    """Rescale so the lexicographically first monomial has unit coefficient."""
    if v.is_zero():
        return v
    lead = min(v.coeffs)
    inv = v.coeffs[lead]
    return AffineVector(v.module, {w: c / inv for w, c in v.coeffs.items()})
