"""Free braided tensor algebra with diagonal braiding.

Words are tuples of generator indices; elements are sparse maps from words
to ``CycScalar`` coefficients.  The braid-group action, Matsumoto lifts,
the total braided symmetrizer, the braided shuffle product, deconcatenation,
and the half-twist antipode all live here.  Everything is graded by word
length and the operators act block-diagonally.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Callable, Dict, Iterable, Iterator, Mapping, Sequence, Tuple

from .scalars import CycScalar

Word = Tuple[int, ...]


class BraidingMatrix:
    """A diagonal braiding Psi(F_i (x) F_k) = q_{i,k} F_k (x) F_i.

    Entries are stored as integer exponents e with q_{i,k} = q^e, q = zeta_2p;
    the root xi is configured as xi = q^t.
    """

    __slots__ = ("p", "t", "size", "exps")

    def __init__(self, p: int, t: int, exps: Sequence[Sequence[int]]):
        self.p = p
        self.t = t % (2 * p)
        self.size = len(exps)
        self.exps = tuple(tuple(e % (2 * p) for e in row) for row in exps)

    @classmethod
    def asymmetric(cls, p: int, t: int = 0) -> "BraidingMatrix":
        """q_11 = -1, q_12 = xi^{-1} q^{-1}, q_21 = xi q^{-1}, q_22 = q^2."""
        return cls(p, t, [[p, -t - 1], [t - 1, 2]])

    @classmethod
    def symmetric(cls, p: int, t: int = 0) -> "BraidingMatrix":
        """q_11 = q_22 = -1, q_12 = -xi^{-1} q, q_21 = -xi q."""
        return cls(p, t, [[p, p - t + 1], [p + t + 1, p]])

    def exp(self, i: int, k: int) -> int:
        return self.exps[i][k]

    def phase(self, i: int, k: int) -> CycScalar:
        return CycScalar.q_power(self.p, self.exps[i][k])

    def q(self, e: int) -> CycScalar:
        return CycScalar.q_power(self.p, e)

    def is_symmetric_braiding(self) -> bool:
        """Whether q_{i,k} = q_{k,i} for all pairs (computed, never assumed)."""
        return all(
            self.exps[i][k] == self.exps[k][i]
            for i in range(self.size)
            for k in range(self.size)
        )

    def __repr__(self) -> str:
        return f"BraidingMatrix(p={self.p}, t={self.t}, exps={self.exps})"


class TensorElement:
    """A sparse element of the free algebra: map from words to coefficients."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: Mapping[Word, CycScalar] | None = None):
        self.p = p
        self.terms: Dict[Word, CycScalar] = {}
        if terms:
            for w, c in terms.items():
                if c:
                    self.terms[tuple(w)] = c

    @classmethod
    def from_word(cls, p: int, word: Iterable[int], coeff: CycScalar | int = 1) -> "TensorElement":
        if isinstance(coeff, int):
            coeff = CycScalar.from_rational(p, coeff)
        return cls(p, {tuple(word): coeff})

    @classmethod
    def unit(cls, p: int) -> "TensorElement":
        return cls.from_word(p, ())

    @classmethod
    def zero(cls, p: int) -> "TensorElement":
        return cls(p)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def __iter__(self) -> Iterator[Tuple[Word, CycScalar]]:
        return iter(self.terms.items())

    def __add__(self, other: "TensorElement") -> "TensorElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            s = c if s is None else s + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        res = TensorElement(self.p)
        res.terms = out
        return res

    def __neg__(self) -> "TensorElement":
        res = TensorElement(self.p)
        res.terms = {w: -c for w, c in self.terms.items()}
        return res

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def scale(self, c: CycScalar | int) -> "TensorElement":
        if isinstance(c, int):
            c = CycScalar.from_rational(self.p, c)
        res = TensorElement(self.p)
        if c:
            res.terms = {w: c * x for w, x in self.terms.items()}
        return res

    def degrees(self) -> set[int]:
        return {len(w) for w in self.terms}

    def degree_component(self, n: int) -> "TensorElement":
        res = TensorElement(self.p)
        res.terms = {w: c for w, c in self.terms.items() if len(w) == n}
        return res

    def gamma_degree(self) -> Tuple[int, ...] | None:
        """Multiset of letters (as a sorted tuple), if homogeneous; else None."""
        degs = {tuple(sorted(w)) for w in self.terms}
        if len(degs) == 1:
            return next(iter(degs))
        return None

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for w in sorted(self.terms):
            bits.append(f"({self.terms[w]!r})*{''.join(map(str, w)) or '1'}")
        return " + ".join(bits)


# ---------------------------------------------------------------------------
# braid group action
# ---------------------------------------------------------------------------

def braid(Q: BraidingMatrix, i: int, x: TensorElement) -> TensorElement:
    """Apply Psi_i, braiding strands i and i+1 (1-based strand index)."""
    out: Dict[Word, CycScalar] = {}
    for w, c in x.terms.items():
        if len(w) <= i:
            raise ValueError(f"word {w} too short for strand {i}")
        a, b = w[i - 1], w[i]
        nw = w[: i - 1] + (b, a) + w[i + 1 :]
        nc = c * Q.phase(a, b)
        s = out.get(nw)
        s = nc if s is None else s + nc
        if s:
            out[nw] = s
        else:
            out.pop(nw, None)
    res = TensorElement(x.p)
    res.terms = out
    return res


@lru_cache(maxsize=None)
def reduced_word(perm: Tuple[int, ...]) -> Tuple[int, ...]:
    """A reduced expression (as adjacent transposition indices, 1-based)
    for the permutation given in one-line notation (images of 0..n-1)."""
    seq: list[int] = []
    arr = list(perm)
    # bubble sort: each adjacent swap records one s_i, read in application order
    n = len(arr)
    for _ in range(n):
        done = True
        for i in range(n - 1):
            if arr[i] > arr[i + 1]:
                arr[i], arr[i + 1] = arr[i + 1], arr[i]
                seq.append(i + 1)
                done = False
        if done:
            break
    # seq sorts perm to identity; applying the reversed sequence to the
    # identity produces perm, and the lift applies the braids in that order.
    return tuple(reversed(seq))


def matsumoto_lift(Q: BraidingMatrix, perm: Sequence[int]) -> Callable[[TensorElement], TensorElement]:
    """The Matsumoto lift of a permutation along a reduced expression."""
    seq = reduced_word(tuple(perm))

    def op(x: TensorElement) -> TensorElement:
        for d in x.degrees():
            if d != len(perm):
                raise ValueError("degree mismatch between element and permutation")
        for i in seq:
            x = braid(Q, i, x)
        return x

    return op


def apply_lift_to_word(Q: BraidingMatrix, perm: Tuple[int, ...], w: Word) -> Tuple[CycScalar, Word]:
    """Lift of a permutation applied to a single word: (coefficient, new word)."""
    letters = list(w)
    coeff_exp = 0
    for i in reduced_word(perm):
        a, b = letters[i - 1], letters[i]
        coeff_exp += Q.exp(a, b)
        letters[i - 1], letters[i] = b, a
    return Q.q(coeff_exp), tuple(letters)


def symmetrizer(Q: BraidingMatrix, n: int) -> Callable[[TensorElement], TensorElement]:
    """The total braided symmetrizer: the sum of Matsumoto lifts over S_n."""
    perms = list(itertools.permutations(range(n)))

    def op(x: TensorElement) -> TensorElement:
        out: Dict[Word, CycScalar] = {}
        for w, c in x.terms.items():
            if len(w) != n:
                raise ValueError("degree mismatch in symmetrizer")
            for perm in perms:
                f, nw = apply_lift_to_word(Q, perm, w)
                nc = c * f
                s = out.get(nw)
                s = nc if s is None else s + nc
                if s:
                    out[nw] = s
                else:
                    out.pop(nw, None)
        res = TensorElement(x.p)
        res.terms = out
        return res

    return op


def symmetrizer_element(Q: BraidingMatrix, x: TensorElement) -> TensorElement:
    """The total symmetrizer applied to x, via the parabolic factorization.

    Uses sym_n = sym_{n-1} o (sum_j Psi_j Psi_{j+1} ... Psi_{n-1}), which
    collects terms after every stage instead of enumerating all n! lifts;
    agrees with symmetrizer(n) (tested) but stays polynomial per word.
    """
    out = TensorElement.zero(x.p)
    for n in sorted(x.degrees()):
        comp = x.degree_component(n)
        for m in range(2, n + 1):
            acc = comp
            partial = comp
            for j in range(m - 1, 0, -1):
                partial = braid(Q, j, partial)
                acc = acc + partial
            comp = acc
        out = out + comp
    return out


# ---------------------------------------------------------------------------
# shuffle product / deconcatenation / antipode
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _shuffle_words(Qkey, u: Word, v: Word) -> Tuple[Tuple[Word, int], ...]:
    """Braided shuffle of two words; coefficients as exponents of q."""
    Q: BraidingMatrix = Qkey
    if not u:
        return ((v, 0),)
    if not v:
        return ((u, 0),)
    res: list[Tuple[Word, int]] = []
    # first letter from u
    for w, e in _shuffle_words(Qkey, u[1:], v):
        res.append(((u[0],) + w, e))
    # first letter from v, braided over all of u
    cross = sum(Q.exp(a, v[0]) for a in u)
    for w, e in _shuffle_words(Qkey, u, v[1:]):
        res.append(((v[0],) + w, e + cross))
    return tuple(res)


@lru_cache(maxsize=None)
def _shuffle_pair(Qkey, u: Word, v: Word) -> Tuple[Tuple[Word, CycScalar], ...]:
    """Shuffle of two words with coefficients collected per output word.

    Exponents are tallied as integer counts first, so each output word costs
    a single cyclotomic reduction instead of one per shuffle term.
    """
    Q: BraidingMatrix = Qkey
    order = 2 * Q.p
    counts: Dict[Word, list] = {}
    for w, e in _shuffle_words(Qkey, u, v):
        arr = counts.get(w)
        if arr is None:
            arr = [0] * order
            counts[w] = arr
        arr[e % order] += 1
    out = []
    for w, arr in counts.items():
        c = CycScalar(Q.p, arr)
        if c:
            out.append((w, c))
    return tuple(out)


def shuffle(Q: BraidingMatrix, x: TensorElement, y: TensorElement) -> TensorElement:
    """The braided shuffle product (unit: the empty word)."""
    out: Dict[Word, CycScalar] = {}
    for u, cu in x.terms.items():
        for v, cv in y.terms.items():
            c = cu * cv
            for w, wc in _shuffle_pair(Q, u, v):
                nc = c * wc
                s = out.get(w)
                s = nc if s is None else s + nc
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
    res = TensorElement(x.p)
    res.terms = out
    return res


def shuffle_power(Q: BraidingMatrix, x: TensorElement, n: int) -> TensorElement:
    out = TensorElement.unit(x.p)
    for _ in range(n):
        out = shuffle(Q, out, x)
    return out


def deconcat(x: TensorElement) -> Dict[Tuple[Word, Word], CycScalar]:
    """Deconcatenation coproduct: Delta(w) = sum_i w_{<=i} (x) w_{>i}."""
    out: Dict[Tuple[Word, Word], CycScalar] = {}
    for w, c in x.terms.items():
        for i in range(len(w) + 1):
            key = (w[:i], w[i:])
            s = out.get(key)
            s = c if s is None else s + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def counit(x: TensorElement) -> CycScalar:
    return x.terms.get((), CycScalar.zero(x.p))


@lru_cache(maxsize=None)
def _longest_element(n: int) -> Tuple[int, ...]:
    return tuple(range(n - 1, -1, -1))


def half_twist_antipode(Q: BraidingMatrix, x: TensorElement) -> TensorElement:
    """S(x) = (-1)^n (lift of the longest element of S_n)(x) per grade n."""
    out = TensorElement.zero(x.p)
    for n in sorted(x.degrees()):
        comp = x.degree_component(n)
        lifted = matsumoto_lift(Q, _longest_element(n))(comp) if n >= 2 else comp
        if n % 2:
            lifted = -lifted
        out = out + lifted
    return out
