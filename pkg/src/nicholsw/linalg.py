"""Exact sparse linear algebra over field-like scalars.

Vectors are dicts mapping hashable, orderable keys to nonzero scalars; the
scalar type only needs +, -, *, /, truthiness, and a multiplicative unit.
"""

from __future__ import annotations

from typing import Dict, Hashable, List, Optional, Tuple

Vec = Dict[Hashable, object]


def axpy_sub(dst: Vec, c, src: Vec) -> None:
    """dst -= c * src, dropping entries that become zero."""
    for k, v in src.items():
        cur = dst.get(k)
        nv = -(c * v) if cur is None else cur - c * v
        if nv:
            dst[k] = nv
        else:
            dst.pop(k, None)


def accum(dst: Vec, c, src: Vec) -> None:
    """dst += c * src, dropping entries that become zero."""
    for k, v in src.items():
        cur = dst.get(k)
        nv = c * v if cur is None else cur + c * v
        if nv:
            dst[k] = nv
        else:
            dst.pop(k, None)


class LinearSpan:
    """An incrementally built row-echelon span with coordinate extraction.

    Each added generator is remembered by label, and ``coords`` expresses a
    vector as an exact linear combination of the generators (or None when
    the vector lies outside the span).
    """

    def __init__(self, one):
        self._one = one
        # rows: (pivot key, echelon vector with pivot coefficient 1,
        #        expression of that vector in the added generators)
        self.rows: List[Tuple[Hashable, Vec, Vec]] = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def add(self, label: Hashable, vec: Vec) -> bool:
        """Add a generator; returns False if it was already in the span."""
        work = {k: v for k, v in vec.items() if v}
        combo: Vec = {label: self._one}
        for pivot, evec, ecombo in self.rows:
            c = work.get(pivot)
            if c:
                axpy_sub(work, c, evec)
                axpy_sub(combo, c, ecombo)
        if not work:
            return False
        pivot = min(work)
        inv = self._one / work[pivot]
        work = {k: v * inv for k, v in work.items()}
        combo = {k: v * inv for k, v in combo.items()}
        self.rows.append((pivot, work, combo))
        return True

    def contains(self, vec: Vec) -> bool:
        return self.coords(vec) is not None

    def coords(self, vec: Vec) -> Optional[Vec]:
        """Coordinates of vec over the generator labels, or None."""
        work = {k: v for k, v in vec.items() if v}
        out: Vec = {}
        for pivot, evec, ecombo in self.rows:
            c = work.get(pivot)
            if c:
                axpy_sub(work, c, evec)
                accum(out, c, ecombo)
        if work:
            return None
        return out

    def coords_first_leg(self, terms: Vec) -> Optional[Dict[Hashable, Vec]]:
        """Expand a two-leg tensor over the span in its *first* leg.

        ``terms`` maps (key1, key2) pairs to scalars; the first legs must lie
        in this span.  Returns {generator label: second-leg vector}, or None
        when a first-leg residual remains.
        """
        work = {k: v for k, v in terms.items() if v}
        out: Dict[Hashable, Vec] = {}
        for pivot, evec, ecombo in self.rows:
            second = {k2: v for (k1, k2), v in work.items() if k1 == pivot}
            if not second:
                continue
            for k1, c1 in evec.items():
                for k2, c2 in second.items():
                    key = (k1, k2)
                    cur = work.get(key)
                    nv = -(c1 * c2) if cur is None else cur - c1 * c2
                    if nv:
                        work[key] = nv
                    else:
                        work.pop(key, None)
            for lab, c in ecombo.items():
                acc = out.setdefault(lab, {})
                accum(acc, c, second)
        if work:
            return None
        return {lab: v for lab, v in out.items() if v}
