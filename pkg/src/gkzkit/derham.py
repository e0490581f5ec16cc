"""Twisted logarithmic de Rham complexes on the torus and their truncations.

Forms are written in the logarithmic basis dx_{i1}/x_{i1} ^ ... ^
dx_{ik}/x_{ik}, so the twisted differential acts through the derivations of
``apply_D`` with wedge-sign bookkeeping.  Top cohomology dimensions are
computed by exact linear algebra on sup-norm windows, with an explicit
stabilization check at two consecutive bounds; a dimension that fails to
stabilize is an explicit outcome, never silently accepted.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import NotStabilizedError
from .intmat import rational_rank
from .lattice import (FacetForm, ParameterVector, PointConfig, cone_facets,
                      is_nonresonant)
from .laurent import (LambdaPoly, LaurentPoly, Support, apply_D,
                      build_f_symbolic)
from .linalg import RationalEchelon

IntVec = tuple[int, ...]
IndexTuple = tuple[int, ...]


class LogForm:
    """Degree-k form: map from strictly increasing 1-based index tuples to
    coefficient Laurent polynomials."""

    __slots__ = ("n", "degree", "nlam", "components")

    def __init__(self, n: int, degree: int,
                 components: dict[IndexTuple, LaurentPoly] | None = None,
                 nlam: int | None = None):
        if not 0 <= degree <= n:
            raise ValueError("degree out of range")
        self.n = n
        self.degree = degree
        self.nlam = nlam
        self.components: dict[IndexTuple, LaurentPoly] = {}
        if components:
            for idx, poly in components.items():
                idx = tuple(idx)
                if len(idx) != degree or list(idx) != sorted(set(idx)):
                    raise ValueError(f"bad index tuple {idx}")
                if any(not 1 <= i <= n for i in idx):
                    raise ValueError(f"index out of range in {idx}")
                if poly.nlam != nlam:
                    raise ValueError("component coefficient mode mismatch")
                if not poly.is_zero():
                    self.components[idx] = poly

    @staticmethod
    def zero(n: int, degree: int, nlam: int | None = None) -> "LogForm":
        return LogForm(n, degree, {}, nlam)

    @staticmethod
    def from_monomial(u: Sequence[int], idx: Sequence[int], n: int,
                      coeff=Fraction(1), nlam: int | None = None) -> "LogForm":
        if nlam is not None and not isinstance(coeff, LambdaPoly):
            coeff = LambdaPoly.const(coeff, nlam)
        poly = LaurentPoly(n, {tuple(int(x) for x in u): coeff}, nlam)
        return LogForm(n, len(tuple(idx)), {tuple(idx): poly}, nlam)

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other) -> bool:
        return (isinstance(other, LogForm) and self.n == other.n
                and self.degree == other.degree and self.nlam == other.nlam
                and self.components == other.components)

    def __add__(self, other: "LogForm") -> "LogForm":
        if (self.n, self.degree, self.nlam) != (other.n, other.degree, other.nlam):
            raise ValueError("form shape mismatch")
        out = dict(self.components)
        for idx, poly in other.components.items():
            s = out[idx] + poly if idx in out else poly
            if s.is_zero():
                out.pop(idx, None)
            else:
                out[idx] = s
        return LogForm(self.n, self.degree, out, self.nlam)

    def __neg__(self) -> "LogForm":
        return LogForm(self.n, self.degree,
                       {idx: -p for idx, p in self.components.items()}, self.nlam)

    def __sub__(self, other: "LogForm") -> "LogForm":
        return self + (-other)

    def scale(self, c) -> "LogForm":
        return LogForm(self.n, self.degree,
                       {idx: p.scalar_mul(c) for idx, p in self.components.items()},
                       self.nlam)

    def mul_poly(self, q: LaurentPoly) -> "LogForm":
        return LogForm(self.n, self.degree,
                       {idx: q * p for idx, p in self.components.items()}, self.nlam)

    def mul_monomial(self, u: Sequence[int]) -> "LogForm":
        return LogForm(self.n, self.degree,
                       {idx: p.shift(u) for idx, p in self.components.items()}, self.nlam)

    def __repr__(self) -> str:
        if not self.components:
            return "0"
        return " + ".join(f"[{p}] w{list(idx)}" for idx, p in sorted(self.components.items()))


def wedge_insert(i: int, idx: IndexTuple) -> tuple[int, IndexTuple] | None:
    """Sign and sorted tuple for dx_i/x_i wedged in front of the tuple idx."""
    if i in idx:
        return None
    pos = sum(1 for j in idx if j < i)
    sign = -1 if pos % 2 else 1
    return sign, tuple(sorted(idx + (i,)))


def nabla(alpha: ParameterVector, f: LaurentPoly, omega: LogForm) -> LogForm:
    """The twisted differential in the logarithmic basis."""
    n = omega.n
    if omega.degree == n:
        # there are no forms of degree n + 1
        return LogForm.zero(n, n, omega.nlam)
    out = LogForm.zero(n, omega.degree + 1, omega.nlam)
    for idx, xi in omega.components.items():
        for i in range(1, n + 1):
            ins = wedge_insert(i, idx)
            if ins is None:
                continue
            sign, target = ins
            piece = apply_D(i, alpha, f, xi)
            if sign < 0:
                piece = -piece
            out = out + LogForm(n, omega.degree + 1, {target: piece}, omega.nlam)
    return out


def check_complex(alpha: ParameterVector, f: LaurentPoly,
                  samples: Sequence[LogForm]) -> bool:
    """nabla composed with itself vanishes on every sample."""
    for omega in samples:
        if not nabla(alpha, f, nabla(alpha, f, omega)).is_zero():
            return False
    return True


def twist_conjugation_check(alpha: ParameterVector, u: Sequence[int],
                            f: LaurentPoly, samples: Sequence[LogForm]) -> bool:
    """Multiplication by the monomial x^u conjugates the shifted twist to the
    original one."""
    shifted = alpha.shift(u)
    for omega in samples:
        lhs = nabla(shifted, f, omega).mul_monomial(u)
        rhs = nabla(alpha, f, omega.mul_monomial(u))
        if lhs != rhs:
            return False
    return True


def homotopy_rho(ell: FacetForm, omega: LogForm) -> LogForm:
    """Contraction against the facet form: alternating sum over dropped indices."""
    n = omega.n
    if omega.degree == 0:
        return LogForm.zero(n, 0, omega.nlam)
    out = LogForm.zero(n, omega.degree - 1, omega.nlam)
    for idx, xi in omega.components.items():
        for pos, i in enumerate(idx):
            c = ell.coeffs[i - 1]
            if c == 0:
                continue
            coeff = Fraction(c) if pos % 2 == 0 else Fraction(-c)
            reduced = idx[:pos] + idx[pos + 1:]
            out = out + LogForm(n, omega.degree - 1, {reduced: xi.scalar_mul(coeff)},
                                omega.nlam)
    return out


def homotopy_identity_check(ell: FacetForm, alpha: ParameterVector,
                            config: PointConfig,
                            samples: Sequence[LogForm]) -> bool:
    """The contraction is a homotopy for multiplication by the facet value.

    On a monomial form with exponent u the anticommutator of the twisted
    differential and the contraction multiplies by ell(alpha + u) and shifts
    by each point weighted with lambda_j ell(a(j)); checked exactly with
    symbolic parameters.
    """
    f = build_f_symbolic(config)
    for omega in samples:
        if omega.nlam != config.N:
            raise ValueError("samples must carry symbolic coefficients")
        if omega.degree < omega.n:
            lhs = homotopy_rho(ell, nabla(alpha, f, omega))
        else:
            lhs = LogForm.zero(omega.n, omega.degree, omega.nlam)
        if omega.degree > 0:
            lhs = lhs + nabla(alpha, f, homotopy_rho(ell, omega))
        rhs = LogForm.zero(omega.n, omega.degree, omega.nlam)
        for idx, xi in omega.components.items():
            acc = LaurentPoly.zero(omega.n, omega.nlam)
            for u, c in xi.terms.items():
                scale = Fraction(ell.evaluate(alpha.entries)) + ell.evaluate(u)
                acc = acc + LaurentPoly(omega.n, {u: c.scale(scale)}, omega.nlam)
                for j, point in enumerate(config.points, start=1):
                    ell_a = ell.evaluate(point)
                    if ell_a == 0:
                        continue
                    shifted = tuple(x + y for x, y in zip(u, point))
                    lam_c = c * LambdaPoly.gen(j, config.N).scale(ell_a)
                    acc = acc + LaurentPoly(omega.n, {shifted: lam_c}, omega.nlam)
            rhs = rhs + LogForm(omega.n, omega.degree, {idx: acc}, omega.nlam)
        if lhs != rhs:
            return False
    return True


def graded_multiplier(ell: FacetForm, alpha: ParameterVector, p: int) -> Fraction:
    """The scalar by which the homotopy acts on the p-th graded piece."""
    return Fraction(ell.evaluate(alpha.entries)) + p


@dataclass
class RankReport:
    """Outcome of a truncated top-cohomology dimension computation."""

    complex_id: str
    alpha: ParameterVector
    lam: tuple[Fraction, ...]
    bound: int
    dims: tuple[int, int]
    stabilized: bool
    dim: int
    warnings: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "complex": self.complex_id,
            "alpha": [str(a) for a in self.alpha.entries],
            "lambda": [str(v) for v in self.lam],
            "B": self.bound,
            "dims": list(self.dims),
            "stabilized": self.stabilized,
            "dim": self.dim,
            "warnings": list(self.warnings),
        }


def require_stabilized(report: RankReport) -> RankReport:
    if not report.stabilized:
        raise NotStabilizedError(report.dims, report.bound)
    return report


class CohomologyWindow:
    """Finite truncation of a support adapted to the cone geometry.

    For a pointed cone the window is the lattice slab cut out by the
    translated facet inequalities ell_i(u) >= -B together with the weight cap
    h(u) <= 2B * max_j h(a(j)), where h is the sum of the facet forms.  Shift
    by any point raises every ell_i and raises h by at most its maximum, so
    all reduction moves stay inside the slab except at the top shell, which
    the graded structure eliminates at generic parameters.  When the facet
    forms do not span (the cone has lineality), a sup-norm box of the same
    bound is intersected in as a cap for the unclipped directions.
    """

    def __init__(self, config: PointConfig, support: Support, bound: int):
        if bound < 0:
            raise ValueError("window bound must be nonnegative")
        self.config = config
        self.support = support
        self.bound = bound
        facets = cone_facets(config)
        n = config.n
        self.hvec = tuple(sum(f.coeffs[i] for f in facets) for i in range(n))
        hmax = max((self.weight(p) for p in config.points), default=0)
        pointed = bool(facets) and rational_rank([list(f.coeffs) for f in facets]) == n
        self.cap = 2 * bound * hmax if pointed else None
        self.facets = facets
        self._points = self._enumerate(pointed)
        self._set = frozenset(self._points)

    def weight(self, u: Sequence[int]) -> int:
        return sum(h * x for h, x in zip(self.hvec, u))

    def _accept(self, u: IntVec, box: int | None) -> bool:
        if box is not None and any(abs(x) > box for x in u):
            return False
        if any(f.evaluate(u) < -self.bound for f in self.facets):
            return False
        if self.cap is not None and self.weight(u) > self.cap:
            return False
        return self.support.contains(u)

    def _enumerate(self, pointed: bool) -> list[IntVec]:
        n = self.config.n
        if not pointed:
            box = self.bound
            pts = [u for u in itertools.product(range(-box, box + 1), repeat=n)
                   if self._accept(u, box)]
            return sorted(pts)
        # expand the scan box until the slab no longer touches its shell
        K = max(self.cap or 0, self.bound) + 1
        for _ in range(8):
            pts = [u for u in itertools.product(range(-K, K + 1), repeat=n)
                   if self._accept(u, None)]
            if all(max(abs(x) for x in u) < K for u in pts):
                return sorted(pts)
            K *= 2
        raise RuntimeError("window enumeration did not close; cone may not be pointed")

    @property
    def points(self) -> list[IntVec]:
        return self._points

    def __contains__(self, u: IntVec) -> bool:
        return u in self._set

    def key_order(self, u: IntVec):
        return (self.weight(u), u)


def _generator_vectors(config: PointConfig, alpha: ParameterVector,
                       lam: Sequence[Fraction], win: CohomologyWindow) -> list[dict]:
    """Images of window monomials under each twisted derivation, as sparse
    vectors supported inside the window.

    A monomial generates in direction i only when every shifted exponent it
    produces stays inside the window, so the image provably lies there.
    """
    n = config.n
    vecs = []
    for u in win.points:
        for i in range(1, n + 1):
            vec: dict[IntVec, Fraction] = {}
            diag = alpha.entries[i - 1] + u[i - 1]
            if diag:
                vec[u] = diag
            ok = True
            for j, point in enumerate(config.points):
                coeff = point[i - 1]
                if coeff == 0 or lam[j] == 0:
                    continue
                v = tuple(x + y for x, y in zip(u, point))
                if v not in win:
                    ok = False
                    break
                vec[v] = vec.get(v, Fraction(0)) + lam[j] * coeff
            if ok and vec:
                vecs.append(vec)
    return vecs


def _window_quotient_dim(config: PointConfig, alpha: ParameterVector,
                         lam: Sequence[Fraction], support: Support,
                         bound: int) -> int:
    win = CohomologyWindow(config, support, bound)
    ech = RationalEchelon(win.key_order)
    for vec in _generator_vectors(config, alpha, lam, win):
        ech.insert(vec)
    return len(win.points) - ech.rank


def top_cohomology_dim(config: PointConfig, alpha: ParameterVector,
                       lam: Sequence, support: Support, bound: int,
                       complex_id: str | None = None) -> RankReport:
    """Truncated dimension of the top cohomology of the twisted complex.

    Computes the window quotient at bounds B-1 and B; the result counts as
    stabilized when the two agree.  A resonant parameter is not an error:
    the computation proceeds with a warning flag set.
    """
    lam = tuple(Fraction(v) for v in lam)
    if any(v == 0 for v in lam):
        raise ValueError("parameter specialization must be nonzero")
    if bound < 1:
        raise ValueError("need bound at least 1 for the stabilization pair")
    warnings = []
    verdict = is_nonresonant(config, alpha)
    if not verdict.nonresonant:
        form, value = verdict.witness
        warnings.append(f"resonant: form {form.coeffs} takes integer value {value}")
    dims = (_window_quotient_dim(config, alpha, lam, support, bound - 1),
            _window_quotient_dim(config, alpha, lam, support, bound))
    return RankReport(
        complex_id=complex_id or f"torus/{support.name}",
        alpha=alpha,
        lam=lam,
        bound=bound,
        dims=dims,
        stabilized=dims[0] == dims[1],
        dim=dims[1],
        warnings=tuple(warnings),
    )


def random_specialization(rng: random.Random, count: int) -> tuple[Fraction, ...]:
    """Independent uniform rationals with numerator and denominator in [1, 1000]."""
    return tuple(Fraction(rng.randint(1, 1000), rng.randint(1, 1000))
                 for _ in range(count))


def generic_rank(config: PointConfig, alpha: ParameterVector, support: Support,
                 bound: int, seed: int = 0, rounds: int = 3) -> RankReport:
    """Stabilized dimension at generic parameters.

    Draws pairs of random specializations until two distinct ones agree on a
    stabilized dimension; raises NotStabilizedError when the budget runs out.
    """
    rng = random.Random(seed)
    last = None
    for _ in range(rounds):
        lam1 = random_specialization(rng, config.N)
        lam2 = random_specialization(rng, config.N)
        if lam1 == lam2:
            continue
        rep1 = top_cohomology_dim(config, alpha, lam1, support, bound)
        rep2 = top_cohomology_dim(config, alpha, lam2, support, bound)
        last = (rep1, rep2)
        if rep1.stabilized and rep2.stabilized and rep1.dim == rep2.dim:
            warnings = rep1.warnings + (f"agreed with second specialization {list(map(str, lam2))}",)
            return RankReport(rep1.complex_id, alpha, rep1.lam, bound, rep1.dims,
                              True, rep1.dim, warnings)
    dims = (last[0].dim, last[1].dim) if last else (-1, -1)
    raise NotStabilizedError(dims, bound, "no agreeing stabilized pair of specializations")


@dataclass
class QuasiIsoReport:
    """Comparison of the truncated complexes over nested supports."""

    verdict: bool
    dim_small: int
    dim_big: int
    surjective: bool
    small: RankReport = field(repr=False, default=None)
    big: RankReport = field(repr=False, default=None)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "dim_small": self.dim_small,
            "dim_big": self.dim_big,
            "surjective": self.surjective,
        }


def quasi_iso_check(config: PointConfig, alpha: ParameterVector, lam: Sequence,
                    S_small: Support, S_big: Support, bound: int) -> QuasiIsoReport:
    """Inclusion of the small-support subcomplex induces the same top quotient.

    Checks (a) equal stabilized dimensions and (b) surjectivity: every window
    monomial of the big support is congruent, modulo the twisted-derivation
    image inside the window, to something supported in the small window.
    """
    lam = tuple(Fraction(v) for v in lam)
    small = require_stabilized(
        top_cohomology_dim(config, alpha, lam, S_small, bound))
    big = require_stabilized(
        top_cohomology_dim(config, alpha, lam, S_big, bound))

    win_big = CohomologyWindow(config, S_big, bound)
    win_small = CohomologyWindow(config, S_small, bound)
    ech = RationalEchelon(win_big.key_order)
    for vec in _generator_vectors(config, alpha, lam, win_big):
        ech.insert(vec)
    for u in win_small.points:
        ech.insert({u: 1})
    surjective = ech.rank == len(win_big.points)

    return QuasiIsoReport(
        verdict=(small.dim == big.dim) and surjective,
        dim_small=small.dim,
        dim_big=big.dim,
        surjective=surjective,
        small=small,
        big=big,
    )


def enumerate_monomial_forms(n: int, bound: int, degrees: Sequence[int],
                             nlam: int | None = None) -> list[LogForm]:
    """Every monomial form with exponents in the centered box, all index tuples."""
    out = []
    for u in itertools.product(range(-bound, bound + 1), repeat=n):
        for k in degrees:
            for idx in itertools.combinations(range(1, n + 1), k):
                out.append(LogForm.from_monomial(u, idx, n, nlam=nlam))
    return out
