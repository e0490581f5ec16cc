"""Exact sparse linear algebra over the rationals and over prime fields.

Vectors are dicts from arbitrary hashable keys to coefficients.  Rational
elimination keeps rows as content-normalized integer dicts and reduces by
cross-multiplication, so no Fraction arithmetic happens in the inner loop.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Hashable, Iterable


class RationalEchelon:
    """Incremental row echelon over Q keyed by arbitrary hashables.

    Each stored row is an integer dict whose pivot is its largest key under
    ``key_order``; rows are kept with content 1.
    """

    def __init__(self, key_order: Callable[[Hashable], object] | None = None):
        self.key_order = key_order or (lambda k: k)
        self.rows: dict[Hashable, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _to_int_vec(self, vec: dict) -> dict:
        if not vec:
            return {}
        denom = 1
        for c in vec.values():
            if isinstance(c, Fraction):
                denom = lcm(denom, c.denominator)
        out = {}
        for k, c in vec.items():
            v = int(c * denom) if isinstance(c, Fraction) else int(c) * denom
            if v:
                out[k] = v
        return _normalize_content(out)

    def reduce(self, vec: dict) -> dict:
        """Fully reduce a vector; the result has no pivot as leading key."""
        v = self._to_int_vec(vec)
        while v:
            lead = max(v, key=self.key_order)
            row = self.rows.get(lead)
            if row is None:
                return v
            a, b = v[lead], row[lead]
            g = gcd(a, b)
            ca, cb = b // g, a // g
            if ca != 1:
                v = {k: ca * c for k, c in v.items()}
            for k, rv in row.items():
                s = v.get(k, 0) - cb * rv
                if s:
                    v[k] = s
                else:
                    v.pop(k, None)
            if len(v) > 64:
                v = _normalize_content(v)
        return v

    def insert(self, vec: dict) -> bool:
        """Reduce and store; returns True when the rank grew."""
        v = self.reduce(vec)
        if not v:
            return False
        v = _normalize_content(v)
        lead = max(v, key=self.key_order)
        if v[lead] < 0:
            v = {k: -c for k, c in v.items()}
        self.rows[lead] = v
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)


def _normalize_content(vec: dict) -> dict:
    g = 0
    for c in vec.values():
        g = gcd(g, abs(c))
        if g == 1:
            return vec
    if g > 1:
        return {k: c // g for k, c in vec.items()}
    return vec


def rational_rank_of(vectors: Iterable[dict],
                     key_order: Callable[[Hashable], object] | None = None) -> int:
    ech = RationalEchelon(key_order)
    for v in vectors:
        ech.insert(v)
    return ech.rank


class ModpEchelon:
    """Incremental row echelon over the field with p elements."""

    def __init__(self, p: int, key_order: Callable[[Hashable], object] | None = None):
        self.p = p
        self.key_order = key_order or (lambda k: k)
        self.rows: dict[Hashable, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: dict) -> dict:
        p = self.p
        v = {k: c % p for k, c in vec.items() if c % p}
        while v:
            lead = max(v, key=self.key_order)
            row = self.rows.get(lead)
            if row is None:
                return v
            factor = v[lead]
            for k, rv in row.items():
                s = (v.get(k, 0) - factor * rv) % p
                if s:
                    v[k] = s
                else:
                    v.pop(k, None)
        return v

    def insert(self, vec: dict) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        lead = max(v, key=self.key_order)
        inv = pow(v[lead], -1, self.p)
        self.rows[lead] = {k: (inv * c) % self.p for k, c in v.items()}
        return True


def modp_nullity(rows: Iterable[dict], ncols: int, p: int,
                 key_order: Callable[[Hashable], object] | None = None) -> int:
    """Dimension of the solution space of the homogeneous system."""
    ech = ModpEchelon(p, key_order)
    for r in rows:
        ech.insert(r)
    return ncols - ech.rank
