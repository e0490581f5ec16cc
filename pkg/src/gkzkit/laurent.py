"""Sparse Laurent polynomials over exact rationals, with two coefficient modes.

Coefficients are either plain Fractions ("rational mode", the deformation
parameters specialized to numbers) or sparse polynomials in the parameters
lambda_1..lambda_N with Fraction coefficients ("symbolic mode").  The two
modes never mix inside one polynomial; binary operations raise
ScalarModeError on a mismatch.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import ScalarModeError
from .lattice import ParameterVector, PointConfig

IntVec = tuple[int, ...]


class LambdaPoly:
    """Polynomial in the parameters lambda_1..lambda_N over the rationals."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[IntVec, Fraction] | None = None):
        self.nvars = nvars
        self.terms: dict[IntVec, Fraction] = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    self.terms[tuple(e)] = c

    @staticmethod
    def const(value, nvars: int) -> "LambdaPoly":
        return LambdaPoly(nvars, {(0,) * nvars: Fraction(value)})

    @staticmethod
    def gen(j: int, nvars: int) -> "LambdaPoly":
        """The generator lambda_j (1-based)."""
        e = [0] * nvars
        e[j - 1] = 1
        return LambdaPoly(nvars, {tuple(e): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (isinstance(other, LambdaPoly) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __add__(self, other: "LambdaPoly") -> "LambdaPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LambdaPoly(self.nvars, out)

    def __neg__(self) -> "LambdaPoly":
        return LambdaPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LambdaPoly") -> "LambdaPoly":
        return self + (-other)

    def __mul__(self, other: "LambdaPoly") -> "LambdaPoly":
        out: dict[IntVec, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return LambdaPoly(self.nvars, out)

    def scale(self, c) -> "LambdaPoly":
        c = Fraction(c)
        return LambdaPoly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def derivative(self, j: int) -> "LambdaPoly":
        """Formal derivative with respect to lambda_j (1-based)."""
        out: dict[IntVec, Fraction] = {}
        for e, c in self.terms.items():
            if e[j - 1]:
                e2 = list(e)
                e2[j - 1] -= 1
                out[tuple(e2)] = c * e[j - 1]
        return LambdaPoly(self.nvars, out)

    def evaluate(self, values: Sequence[Fraction]) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, p in zip(values, e):
                term *= Fraction(v) ** p
            total += term
        return total

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"l{j + 1}^{p}" if p > 1 else f"l{j + 1}"
                            for j, p in enumerate(e) if p)
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


Scalar = object  # Fraction in rational mode, LambdaPoly in symbolic mode


def _scalar_is_zero(c) -> bool:
    return c.is_zero() if isinstance(c, LambdaPoly) else c == 0


class LaurentPoly:
    """Finite map from integer exponent vectors to nonzero coefficients.

    ``nlam`` is None in rational mode, or the number of lambda variables in
    symbolic mode.
    """

    __slots__ = ("n", "nlam", "terms")

    def __init__(self, n: int, terms: dict[IntVec, Scalar] | None = None,
                 nlam: int | None = None):
        self.n = n
        self.nlam = nlam
        self.terms: dict[IntVec, Scalar] = {}
        if terms:
            for u, c in terms.items():
                u = tuple(u)
                if len(u) != n:
                    raise ValueError("exponent length mismatch")
                if nlam is None:
                    c = Fraction(c)
                if not _scalar_is_zero(c):
                    self.terms[u] = c

    @staticmethod
    def zero(n: int, nlam: int | None = None) -> "LaurentPoly":
        return LaurentPoly(n, {}, nlam)

    @staticmethod
    def monomial(u: Sequence[int], coeff=Fraction(1), nlam: int | None = None) -> "LaurentPoly":
        return LaurentPoly(len(u), {tuple(int(x) for x in u): coeff}, nlam)

    @staticmethod
    def one(n: int, nlam: int | None = None) -> "LaurentPoly":
        coeff = LambdaPoly.const(1, nlam) if nlam is not None else Fraction(1)
        return LaurentPoly(n, {(0,) * n: coeff}, nlam)

    def is_zero(self) -> bool:
        return not self.terms

    def _check_mode(self, other: "LaurentPoly") -> None:
        if self.n != other.n:
            raise ScalarModeError("ambient dimension mismatch")
        if self.nlam != other.nlam:
            raise ScalarModeError("rational and symbolic coefficients mixed")

    def __eq__(self, other) -> bool:
        return (isinstance(other, LaurentPoly) and self.n == other.n
                and self.nlam == other.nlam and self.terms == other.terms)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check_mode(other)
        out = dict(self.terms)
        for u, c in other.terms.items():
            if u in out:
                s = out[u] + c
                if _scalar_is_zero(s):
                    del out[u]
                else:
                    out[u] = s
            else:
                out[u] = c
        return LaurentPoly(self.n, out, self.nlam)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.n, {u: -c for u, c in self.terms.items()}, self.nlam)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check_mode(other)
        out: dict[IntVec, Scalar] = {}
        for u1, c1 in self.terms.items():
            for u2, c2 in other.terms.items():
                u = tuple(a + b for a, b in zip(u1, u2))
                c = c1 * c2
                if u in out:
                    s = out[u] + c
                    if _scalar_is_zero(s):
                        del out[u]
                    else:
                        out[u] = s
                elif not _scalar_is_zero(c):
                    out[u] = c
        return LaurentPoly(self.n, out, self.nlam)

    def scalar_mul(self, c) -> "LaurentPoly":
        """Multiply by a Fraction (valid in both modes) or a LambdaPoly."""
        if isinstance(c, LambdaPoly):
            if self.nlam != c.nvars:
                raise ScalarModeError("symbolic scalar on a rational-mode polynomial")
            return LaurentPoly(self.n, {u: v * c for u, v in self.terms.items()}, self.nlam)
        c = Fraction(c)
        if c == 0:
            return LaurentPoly.zero(self.n, self.nlam)
        if self.nlam is None:
            return LaurentPoly(self.n, {u: v * c for u, v in self.terms.items()}, None)
        return LaurentPoly(self.n, {u: v.scale(c) for u, v in self.terms.items()}, self.nlam)

    def shift(self, u: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial with exponent u."""
        u = tuple(int(x) for x in u)
        return LaurentPoly(self.n, {tuple(a + b for a, b in zip(w, u)): c
                                    for w, c in self.terms.items()}, self.nlam)

    def as_symbolic(self, nlam: int) -> "LaurentPoly":
        """Lift a rational-mode polynomial to symbolic mode with constant coefficients."""
        if self.nlam is not None:
            if self.nlam != nlam:
                raise ScalarModeError("already symbolic in a different number of parameters")
            return self
        return LaurentPoly(self.n, {u: LambdaPoly.const(c, nlam)
                                    for u, c in self.terms.items()}, nlam)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for u, c in sorted(self.terms.items()):
            mono = "*".join(f"x{i + 1}^{p}" for i, p in enumerate(u) if p)
            bits.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


def build_f(config: PointConfig, lam: Sequence) -> LaurentPoly:
    """The Laurent polynomial sum of lam_j times the j-th point monomial."""
    if len(lam) != config.N:
        raise ValueError("need one coefficient per point")
    terms: dict[IntVec, Scalar] = {}
    for point, c in zip(config.points, lam):
        c = Fraction(c)
        if c == 0:
            continue
        terms[point] = terms.get(point, Fraction(0)) + c
    return LaurentPoly(config.n, terms, None)


def build_f_symbolic(config: PointConfig) -> LaurentPoly:
    """The same polynomial with the parameters kept as symbols."""
    terms: dict[IntVec, Scalar] = {}
    for j, point in enumerate(config.points, start=1):
        gen = LambdaPoly.gen(j, config.N)
        terms[point] = terms[point] + gen if point in terms else gen
    return LaurentPoly(config.n, terms, config.N)


def toric_derivative(i: int, p: LaurentPoly) -> LaurentPoly:
    """x_i d/dx_i in the exponent encoding: each term scales by its i-th exponent."""
    if not 1 <= i <= p.n:
        raise ValueError("derivative index out of range")
    out: dict[IntVec, Scalar] = {}
    for u, c in p.terms.items():
        k = u[i - 1]
        if k:
            if isinstance(c, LambdaPoly):
                out[u] = c.scale(k)
            else:
                out[u] = c * k
    return LaurentPoly(p.n, out, p.nlam)


def apply_D(i: int, alpha: ParameterVector, f: LaurentPoly, xi: LaurentPoly) -> LaurentPoly:
    """The twisted derivation in direction i applied to xi.

    Acts as x_i d/dx_i + alpha_i + (x_i df/dx_i) in the logarithmic basis; on
    a monomial with exponent u it gives (u_i + alpha_i) times the monomial
    plus the shifts by each point with its coefficient from f.
    """
    out = toric_derivative(i, xi)
    out = out + xi.scalar_mul(alpha.entries[i - 1])
    out = out + toric_derivative(i, f) * xi
    return out


def divide_exact(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly | None:
    """Exact quotient p / q among Laurent polynomials, or None if q does not
    divide p.  Rational coefficient mode only.

    Monomials are units, so divisibility is decided after shifting both
    operands to ordinary polynomials; leading-term reduction under the
    lexicographic order then either terminates at zero or certifies
    non-divisibility.
    """
    if p.nlam is not None or q.nlam is not None:
        raise ScalarModeError("exact division needs specialized coefficients")
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return LaurentPoly.zero(p.n)
    n = p.n
    shift_p = tuple(min(u[i] for u in p.terms) for i in range(n))
    shift_q = tuple(min(u[i] for u in q.terms) for i in range(n))
    num = {tuple(a - b for a, b in zip(u, shift_p)): c for u, c in p.terms.items()}
    den = {tuple(a - b for a, b in zip(u, shift_q)): c for u, c in q.terms.items()}
    lead_q = max(den)
    lead_qc = den[lead_q]
    quot: dict[IntVec, Fraction] = {}
    while num:
        lead_p = max(num)
        diff = tuple(a - b for a, b in zip(lead_p, lead_q))
        if any(d < 0 for d in diff):
            return None
        coeff = num[lead_p] / lead_qc
        quot[diff] = coeff
        for u, c in den.items():
            tgt = tuple(a + b for a, b in zip(u, diff))
            s = num.get(tgt, Fraction(0)) - coeff * c
            if s:
                num[tgt] = s
            else:
                num.pop(tgt, None)
    out_shift = tuple(a - b for a, b in zip(shift_p, shift_q))
    return LaurentPoly(n, {tuple(a + b for a, b in zip(u, out_shift)): c
                           for u, c in quot.items()})


class Support:
    """Predicate selecting which exponent vectors a module is allowed to use."""

    name = "support"

    def contains(self, u: IntVec) -> bool:  # pragma: no cover - interface
        raise NotImplementedError


class FullSupport(Support):
    """All of the exponent lattice."""

    def __init__(self, n: int):
        self.n = n
        self.name = "Z^n"

    def contains(self, u: IntVec) -> bool:
        return len(u) == self.n


class HalfSupport(Support):
    """Exponents with nonnegative last coordinate."""

    def __init__(self, n: int):
        self.n = n
        self.name = "R+"

    def contains(self, u: IntVec) -> bool:
        return u[-1] >= 0


class ConeSupport(Support):
    """Nonnegative integer combinations of the configuration points.

    Membership is decided by breadth-first reachability from the origin
    inside a padded box; results are memoized per padding bound.
    """

    def __init__(self, config: PointConfig):
        self.config = config
        self.name = "U0"
        self._cache: dict[int, frozenset[IntVec]] = {}

    def _reachable(self, bound: int) -> frozenset[IntVec]:
        # bucket the padding so nearby query norms share one search
        pad = bound + 2 * self.config.max_norm() + 2
        pad = ((pad + 7) // 8) * 8
        if pad in self._cache:
            return self._cache[pad]
        start = (0,) * self.config.n
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for u in frontier:
                for a in self.config.points:
                    v = tuple(x + y for x, y in zip(u, a))
                    if v not in seen and all(abs(x) <= pad for x in v):
                        seen.add(v)
                        nxt.append(v)
            frontier = nxt
        result = frozenset(seen)
        self._cache[pad] = result
        return result

    def contains(self, u: IntVec) -> bool:
        u = tuple(u)
        bound = max((abs(x) for x in u), default=0)
        return u in self._reachable(bound)


class WSupport(Support):
    """Exponents with facet values at least the given thresholds on a subset T."""

    def __init__(self, v: Sequence[int], T: Iterable[int], facets: Sequence):
        self.v = tuple(int(x) for x in v)
        self.T = tuple(sorted(set(T)))
        self.facets = tuple(facets)
        self.name = f"W({self.v},{self.T})"

    def contains(self, u: IntVec) -> bool:
        return all(self.facets[i - 1].evaluate(u) >= self.v[i - 1] for i in self.T)


class PredicateSupport(Support):
    """Arbitrary closed support given by a membership callable."""

    def __init__(self, fn: Callable[[IntVec], bool], name: str = "custom"):
        self._fn = fn
        self.name = name

    def contains(self, u: IntVec) -> bool:
        return self._fn(tuple(u))


def support_restrict(p: LaurentPoly, S: Support) -> tuple[LaurentPoly, LaurentPoly]:
    """Split p into the part supported in S and the residue outside."""
    inside: dict[IntVec, Scalar] = {}
    outside: dict[IntVec, Scalar] = {}
    for u, c in p.terms.items():
        (inside if S.contains(u) else outside)[u] = c
    return (LaurentPoly(p.n, inside, p.nlam), LaurentPoly(p.n, outside, p.nlam))


def check_closure(S: Support, config: PointConfig, bound: int) -> bool:
    """Sample the closure condition: u in S implies u + a(j) in S, within a box."""
    for u in itertools.product(range(-bound, bound + 1), repeat=config.n):
        if S.contains(u):
            for a in config.points:
                if not S.contains(tuple(x + y for x, y in zip(u, a))):
                    return False
    return True


