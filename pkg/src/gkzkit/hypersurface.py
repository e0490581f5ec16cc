"""The last-coordinate specialization: complexes on the hypersurface complement.

When every point of the configuration has last coordinate 1, the defining
polynomial factors as x_n times a Laurent polynomial g in the first n-1
variables.  This module houses the twisted complex on the complement of
g = 0 in the (n-1)-torus, the two-row double complex that splits logarithmic
forms by their dx_n/x_n part, the comparison chain map weighted by rising
factorials of the last parameter entry, and the truncated dimension of the
top cohomology on the complement.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import PochhammerPoleError, StructureError
from .intmat import complete_primitive_vector, matvec, solve_integer
from .lattice import ParameterVector, PointConfig, validate_config
from .laurent import LaurentPoly, divide_exact, toric_derivative
from .derham import LogForm, RankReport, wedge_insert
from .linalg import RationalEchelon

IntVec = tuple[int, ...]
IndexTuple = tuple[int, ...]


def pochhammer(a: Fraction, m: int) -> Fraction:
    """Rising factorial a(a+1)...(a+m-1); for negative m the reciprocal
    falling product 1/((a-1)(a-2)...(a+m))."""
    a = Fraction(a)
    if m >= 0:
        out = Fraction(1)
        for k in range(m):
            out *= a + k
        return out
    out = Fraction(1)
    for k in range(1, -m + 1):
        factor = a - k
        if factor == 0:
            raise PochhammerPoleError(
                f"rising factorial undefined: {a} - {k} vanishes")
        out *= factor
    return 1 / out


def check_structure(config: PointConfig) -> None:
    """Require last coordinate identically 1 on the configuration."""
    if any(p[-1] != 1 for p in config.points):
        raise StructureError("configuration does not have constant last coordinate 1")


def find_unimodular_normalizer(config: PointConfig) -> list[list[int]] | None:
    """A unimodular matrix Q with <last row of Q, a(j)> = 1 for every point,
    or None when no such lattice functional exists."""
    mat = [list(p) for p in config.points]  # N x n
    w = solve_integer(mat, [1] * config.N)
    if w is None:
        return None
    return complete_primitive_vector(w)


def apply_unimodular(config: PointConfig, alpha: ParameterVector,
                     Q: list[list[int]]) -> tuple[PointConfig, ParameterVector]:
    """Transform points and parameter together by the unimodular matrix Q."""
    new_points = [tuple(matvec(Q, list(p))) for p in config.points]
    new_alpha = ParameterVector(tuple(
        sum(Fraction(Q[i][k]) * alpha.entries[k] for k in range(config.n))
        for i in range(config.n)))
    return validate_config(new_points), new_alpha


def normalize_structure(config: PointConfig, alpha: ParameterVector
                        ) -> tuple[PointConfig, ParameterVector, bool]:
    """Return an equivalent configuration with last coordinate 1.

    Searches for a unimodular change of coordinates when the raw
    configuration fails the syntactic test; the flag reports whether a
    change was applied.
    """
    if all(p[-1] == 1 for p in config.points):
        return config, alpha, False
    Q = find_unimodular_normalizer(config)
    if Q is None:
        raise StructureError(
            "no lattice functional takes value 1 on every point")
    new_config, new_alpha = apply_unimodular(config, alpha, Q)
    check_structure(new_config)
    return new_config, new_alpha, True


def build_g(config: PointConfig, lam: Sequence) -> LaurentPoly:
    """Drop the last coordinate: the polynomial whose x_n-multiple is f."""
    check_structure(config)
    if len(lam) != config.N:
        raise ValueError("need one coefficient per point")
    terms: dict[IntVec, Fraction] = {}
    for p, c in zip(config.points, lam):
        c = Fraction(c)
        if c == 0:
            continue
        key = p[:-1]
        terms[key] = terms.get(key, Fraction(0)) + c
    return LaurentPoly(config.n - 1, terms)


class LocalizedElement:
    """num / g^m with a Laurent numerator, kept in lowest g-terms.

    Negative powers of g are folded into the numerator, so m >= 0 always and
    g does not divide num unless m = 0; with that normalization the pair
    (num, m) is a canonical form and equality is termwise.
    """

    __slots__ = ("g", "num", "gpow")

    def __init__(self, g: LaurentPoly, num: LaurentPoly, gpow: int):
        if g.is_zero():
            raise ZeroDivisionError("localization at the zero polynomial")
        self.g = g
        if num.is_zero():
            self.num = num
            self.gpow = 0
            return
        while gpow < 0:
            num = num * g
            gpow += 1
        while gpow > 0:
            q = divide_exact(num, g)
            if q is None:
                break
            num = q
            gpow -= 1
        self.num = num
        self.gpow = gpow

    @staticmethod
    def zero(g: LaurentPoly) -> "LocalizedElement":
        return LocalizedElement(g, LaurentPoly.zero(g.n), 0)

    @staticmethod
    def from_poly(g: LaurentPoly, num: LaurentPoly) -> "LocalizedElement":
        return LocalizedElement(g, num, 0)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        return (isinstance(other, LocalizedElement) and self.g == other.g
                and self.gpow == other.gpow and self.num == other.num)

    def __add__(self, other: "LocalizedElement") -> "LocalizedElement":
        if self.g != other.g:
            raise ValueError("localized elements over different denominators")
        m = max(self.gpow, other.gpow)
        a = self.num
        for _ in range(m - self.gpow):
            a = a * self.g
        b = other.num
        for _ in range(m - other.gpow):
            b = b * self.g
        return LocalizedElement(self.g, a + b, m)

    def __neg__(self) -> "LocalizedElement":
        return LocalizedElement(self.g, -self.num, self.gpow)

    def __sub__(self, other: "LocalizedElement") -> "LocalizedElement":
        return self + (-other)

    def __mul__(self, other: "LocalizedElement") -> "LocalizedElement":
        if self.g != other.g:
            raise ValueError("localized elements over different denominators")
        return LocalizedElement(self.g, self.num * other.num,
                                self.gpow + other.gpow)

    def scale(self, c) -> "LocalizedElement":
        return LocalizedElement(self.g, self.num.scalar_mul(c), self.gpow)

    def toric_derivative(self, i: int) -> "LocalizedElement":
        """x_i d/dx_i via the quotient rule."""
        first = LocalizedElement(self.g, toric_derivative(i, self.num), self.gpow)
        if self.gpow == 0:
            return first
        second = LocalizedElement(
            self.g, self.num * toric_derivative(i, self.g), self.gpow + 1)
        return first + second.scale(-self.gpow)

    def __repr__(self) -> str:
        return f"({self.num})/g^{self.gpow}"


class UForm:
    """Form on the complement of g = 0: localized coefficients indexed by
    strictly increasing tuples from the first n-1 variables."""

    __slots__ = ("g", "nprime", "degree", "components")

    def __init__(self, g: LaurentPoly, degree: int,
                 components: dict[IndexTuple, LocalizedElement] | None = None):
        self.g = g
        self.nprime = g.n
        if not 0 <= degree <= self.nprime:
            raise ValueError("degree out of range")
        self.degree = degree
        self.components: dict[IndexTuple, LocalizedElement] = {}
        if components:
            for idx, val in components.items():
                idx = tuple(idx)
                if len(idx) != degree or list(idx) != sorted(set(idx)):
                    raise ValueError(f"bad index tuple {idx}")
                if any(not 1 <= i <= self.nprime for i in idx):
                    raise ValueError(f"index out of range in {idx}")
                if not val.is_zero():
                    self.components[idx] = val

    @staticmethod
    def zero(g: LaurentPoly, degree: int) -> "UForm":
        return UForm(g, degree, {})

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other) -> bool:
        return (isinstance(other, UForm) and self.g == other.g
                and self.degree == other.degree
                and self.components == other.components)

    def __add__(self, other: "UForm") -> "UForm":
        if self.g != other.g or self.degree != other.degree:
            raise ValueError("form shape mismatch")
        out = dict(self.components)
        for idx, val in other.components.items():
            s = out[idx] + val if idx in out else val
            if s.is_zero():
                out.pop(idx, None)
            else:
                out[idx] = s
        return UForm(self.g, self.degree, out)

    def __neg__(self) -> "UForm":
        return UForm(self.g, self.degree,
                     {idx: -v for idx, v in self.components.items()})

    def __sub__(self, other: "UForm") -> "UForm":
        return self + (-other)

    def mul_localized(self, c: LocalizedElement) -> "UForm":
        return UForm(self.g, self.degree,
                     {idx: v * c for idx, v in self.components.items()})

    def __repr__(self) -> str:
        if not self.components:
            return "0"
        return " + ".join(f"[{v}] w{list(idx)}"
                          for idx, v in sorted(self.components.items()))


def tilde_nabla(alpha: ParameterVector, g: LaurentPoly, omega: UForm) -> UForm:
    """Twisted differential on the complement: logarithmic part in the first
    n-1 directions minus the last parameter entry times dg/g."""
    nprime = g.n
    if alpha.n != nprime + 1:
        raise ValueError("parameter must have one more entry than g has variables")
    if omega.degree == nprime:
        return UForm.zero(g, nprime)
    alpha_n = alpha.entries[-1]
    out = UForm.zero(g, omega.degree + 1)
    for idx, eta in omega.components.items():
        for i in range(1, nprime + 1):
            ins = wedge_insert(i, idx)
            if ins is None:
                continue
            sign, target = ins
            piece = eta.toric_derivative(i) + eta.scale(alpha.entries[i - 1])
            correction = LocalizedElement(
                g, eta.num * toric_derivative(i, g), eta.gpow + 1)
            piece = piece + correction.scale(-alpha_n)
            if sign < 0:
                piece = -piece
            out = out + UForm(g, omega.degree + 1, {target: piece})
    return out


@dataclass
class SplitForm:
    """Pair of logarithmic forms over the full torus with indices drawn from
    the first n-1 variables; part1 carries an implicit trailing dx_n/x_n."""

    part0: LogForm
    part1: LogForm

    def __post_init__(self):
        n = self.part0.n
        if self.part1.n != n:
            raise ValueError("parts live on different tori")
        for part in (self.part0, self.part1):
            for idx in part.components:
                if any(i >= n for i in idx):
                    raise ValueError("split index tuples must avoid the last variable")


def assemble(sf: SplitForm) -> LogForm:
    """Total logarithmic form of one homogeneous degree: part1 tuples gain
    the trailing last index."""
    n = sf.part0.n
    degree = sf.part0.degree
    lifted = {idx + (n,): poly for idx, poly in sf.part1.components.items()}
    if lifted and sf.part1.degree != degree - 1:
        raise ValueError("rows do not assemble to a homogeneous form")
    out = dict(sf.part0.components)
    out.update(lifted)
    return LogForm(n, degree, out, sf.part0.nlam)


def split(form: LogForm) -> SplitForm:
    """Inverse of assemble: separate components by the trailing last index."""
    n = form.n
    comp0: dict[IndexTuple, LaurentPoly] = {}
    comp1: dict[IndexTuple, LaurentPoly] = {}
    for idx, poly in form.components.items():
        if idx and idx[-1] == n:
            comp1[idx[:-1]] = poly
        else:
            comp0[idx] = poly
    deg1 = form.degree - 1 if form.degree > 0 else 0
    return SplitForm(LogForm(n, form.degree, comp0, form.nlam),
                     LogForm(n, deg1, comp1, form.nlam))


def _embed_g(g: LaurentPoly, nlam: int | None) -> LaurentPoly:
    """View g inside the full torus ring (zero last exponent)."""
    terms = {u + (0,): c for u, c in g.terms.items()}
    out = LaurentPoly(g.n + 1, terms)
    return out.as_symbolic(nlam) if nlam is not None else out


def d_h(alpha: ParameterVector, g: LaurentPoly, part: LogForm) -> LogForm:
    """Horizontal boundary: logarithmic derivations in the first n-1
    directions plus x_n times the corresponding derivative of g."""
    n = part.n
    if part.degree >= n:
        # only the empty form has this nominal degree among split rows
        return LogForm.zero(n, n, part.nlam)
    gn = _embed_g(g, part.nlam)
    out = LogForm.zero(n, part.degree + 1, part.nlam)
    for idx, xi in part.components.items():
        for i in range(1, n):
            ins = wedge_insert(i, idx)
            if ins is None:
                continue
            sign, target = ins
            dg_i = toric_derivative(i, gn).shift((0,) * (n - 1) + (1,))
            piece = toric_derivative(i, xi) \
                + xi.scalar_mul(alpha.entries[i - 1]) + dg_i * xi
            if sign < 0:
                piece = -piece
            out = out + LogForm(n, part.degree + 1, {target: piece}, part.nlam)
    return out


def d_v(alpha: ParameterVector, g: LaurentPoly, part0: LogForm) -> LogForm:
    """Vertical boundary into the dx_n/x_n row, with the trailing-basis sign."""
    n = part0.n
    gn = _embed_g(g, part0.nlam)
    xn_g = gn.shift((0,) * (n - 1) + (1,))
    out = LogForm.zero(n, part0.degree, part0.nlam)
    for idx, xi in part0.components.items():
        piece = toric_derivative(n, xi) + xi.scalar_mul(alpha.entries[-1]) \
            + xn_g * xi
        if len(idx) % 2:
            piece = -piece
        out = out + LogForm(n, part0.degree, {idx: piece}, part0.nlam)
    return out


def split_boundaries(alpha: ParameterVector, g: LaurentPoly,
                     sf: SplitForm) -> tuple[SplitForm, LogForm]:
    """The two boundary maps of the double complex.

    Returns the horizontal image of both rows as a SplitForm of one higher
    degree, and the vertical image of the top row (which lands in the
    dx_n/x_n row).  The vertical map is injective on the half-Laurent row;
    a zero vertical image with a nonzero input raises.
    """
    dh = SplitForm(d_h(alpha, g, sf.part0), d_h(alpha, g, sf.part1))
    dv = d_v(alpha, g, sf.part0)
    if dv.is_zero() and not sf.part0.is_zero():
        raise StructureError("vertical boundary unexpectedly annihilated a form")
    return dh, dv


def check_split_matches_nabla(config: PointConfig, alpha: ParameterVector,
                              lam: Sequence, samples: Sequence["LogForm"]) -> bool:
    """The twisted differential on the full torus decomposes along the rows:
    the horizontal boundary on each row plus the vertical boundary feeding
    the dx_n/x_n row.  Compared componentwise, so empty rows of differing
    nominal degree still agree."""
    from .derham import nabla
    from .laurent import build_f

    f = build_f(config, lam)
    g = build_g(config, lam)
    for form in samples:
        sp = split(form)
        spn = split(nabla(alpha, f, form))
        want0 = d_h(alpha, g, sp.part0)
        want1 = d_v(alpha, g, sp.part0)
        if sp.part1.components:
            want1 = want1 + d_h(alpha, g, sp.part1)
        if spn.part0.components != want0.components:
            return False
        if spn.part1.components != want1.components:
            return False
    return True


def gamma(alpha: ParameterVector, g: LaurentPoly, part1: LogForm) -> UForm:
    """Comparison map dropping the trailing dx_n/x_n.

    A monomial with last exponent m maps to its first n-1 coordinates over
    g^m, weighted by (-1)^m times the rising factorial of the last parameter
    entry; negative m uses the reciprocal convention and requires the last
    parameter entry to avoid the corresponding poles.
    """
    n = part1.n
    if part1.nlam is not None:
        raise ValueError("comparison map needs specialized coefficients")
    alpha_n = alpha.entries[-1]
    out = UForm.zero(g, part1.degree)
    for idx, xi in part1.components.items():
        acc = LocalizedElement.zero(g)
        for u, c in xi.terms.items():
            m = u[-1]
            weight = pochhammer(alpha_n, m) * c
            if m % 2:
                weight = -weight
            if weight == 0:
                continue
            num = LaurentPoly.monomial(u[:-1], weight)
            if m >= 0:
                acc = acc + LocalizedElement(g, num, m)
            else:
                gp = LaurentPoly.one(g.n)
                for _ in range(-m):
                    gp = gp * g
                acc = acc + LocalizedElement(g, num * gp, 0)
        out = out + UForm(g, part1.degree, {idx: acc})
    return out


def check_gamma_chain_map(alpha: ParameterVector, g: LaurentPoly,
                          samples: Sequence[SplitForm]) -> bool:
    """The comparison map intertwines the boundaries and kills the vertical
    image: gamma(d_h w) = tilde_nabla(gamma(w)) on the dx_n/x_n row and
    gamma(d_v v) = 0 for the other row."""
    for sf in samples:
        if sf.part1.degree < g.n:
            lhs = gamma(alpha, g, d_h(alpha, g, sf.part1))
            rhs = tilde_nabla(alpha, g, gamma(alpha, g, sf.part1))
            if lhs != rhs:
                return False
        if not gamma(alpha, g, d_v(alpha, g, sf.part0)).is_zero():
            return False
    return True


def twist_iso_U_check(alpha: ParameterVector, u: Sequence[int], g: LaurentPoly,
                      samples: Sequence[UForm]) -> bool:
    """Multiplication by x'^{u'} / g^{u_n} conjugates the shifted twist to the
    original twist on the complement."""
    u = tuple(int(x) for x in u)
    factor = LocalizedElement(g, LaurentPoly.monomial(u[:-1]), u[-1])
    shifted = alpha.shift(u)
    for omega in samples:
        lhs = tilde_nabla(shifted, g, omega).mul_localized(factor)
        rhs = tilde_nabla(alpha, g, omega.mul_localized(factor))
        if lhs != rhs:
            return False
    return True


def _box(nprime: int, bound: int):
    return itertools.product(range(-bound, bound + 1), repeat=nprime)


def kernel_equals_dv_image(alpha: ParameterVector, g: LaurentPoly, k: int,
                           u_bound: int, m_bound: int) -> bool:
    """Within a window, the kernel of the comparison map on the dx_n/x_n row
    coincides with the vertical image of the other row.

    The vertical image always lies in the kernel (chain-map identity), so
    the subspaces agree exactly when the two dimensions match.  Requires the
    last parameter entry to avoid nonpositive integers, which makes the
    rising factorials nonzero.
    """
    alpha_n = alpha.entries[-1]
    if alpha_n.denominator == 1 and alpha_n <= 0:
        raise PochhammerPoleError(
            "last parameter entry is a nonpositive integer")
    nprime = g.n
    n = nprime + 1
    r_g = max(max(abs(x) for x in u) for u in g.terms)
    idx_tuples = list(itertools.combinations(range(1, nprime + 1), k))
    basis = [(up, m, idx) for idx in idx_tuples
             for up in _box(nprime, u_bound) for m in range(m_bound + 1)]

    # gamma matrix: columns indexed by basis, target keyed by numerator
    # monomials at the common denominator g^{m_bound}
    g_pows = [LaurentPoly.one(nprime)]
    for _ in range(m_bound):
        g_pows.append(g_pows[-1] * g)
    ech_gamma = RationalEchelon()
    gamma_cols = []
    for up, m, idx in basis:
        weight = pochhammer(alpha_n, m)
        if m % 2:
            weight = -weight
        num = LaurentPoly.monomial(up, weight) * g_pows[m_bound - m]
        gamma_cols.append({(w, idx): c for w, c in num.terms.items()})
    # kernel dimension of the matrix whose columns are gamma images
    col_ech = RationalEchelon()
    rank = 0
    for col in gamma_cols:
        if col_ech.insert(col):
            rank += 1
    ker_dim = len(basis) - rank

    # vertical-image generators confined to the window: the numerator box
    # eroded by the support of g, so every image term stays inside
    eroded = [up for up in _box(nprime, u_bound)
              if all(max(abs(a + b) for a, b in zip(up, w)) <= u_bound
                     for w in g.terms)]
    ech_v = RationalEchelon()
    v_rank = 0
    for idx in idx_tuples:
        sign = -1 if k % 2 else 1
        for up in eroded:
            for m in range(m_bound):
                vec: dict = {}
                diag = alpha_n + m
                if diag:
                    vec[(up, m, idx)] = diag * sign
                for w, c in g.terms.items():
                    tgt = tuple(a + b for a, b in zip(up, w))
                    key = (tgt, m + 1, idx)
                    vec[key] = vec.get(key, Fraction(0)) + c * sign
                if vec and ech_v.insert(vec):
                    v_rank += 1
    return ker_dim == v_rank


def cohomology_U_dim(config: PointConfig, alpha: ParameterVector,
                     lam: Sequence, bound: int) -> RankReport:
    """Truncated dimension of the top cohomology on the complement of g = 0.

    Requires the last-coordinate structure (a unimodular normalization is
    applied automatically when available).  A last parameter entry that is a
    nonpositive integer is shifted to 1 beforehand; the shift is an
    isomorphism of the complex, so dimensions are unaffected.
    """
    lam = tuple(Fraction(v) for v in lam)
    warnings = []
    config, alpha, changed = normalize_structure(config, alpha)
    if changed:
        warnings.append("applied unimodular change of coordinates")
    alpha_n = alpha.entries[-1]
    if alpha_n.denominator == 1 and alpha_n < 1:
        shift = (0,) * (config.n - 1) + (int(1 - alpha_n),)
        alpha = alpha.shift(shift)
        warnings.append(f"pre-twisted last parameter entry by {shift[-1]}")
    g = build_g(config, lam)

    dims = (_u_quotient_dim(config, alpha, g, bound - 1),
            _u_quotient_dim(config, alpha, g, bound))
    return RankReport(
        complex_id="U",
        alpha=alpha,
        lam=lam,
        bound=bound,
        dims=dims,
        stabilized=dims[0] == dims[1],
        dim=dims[1],
        warnings=tuple(warnings),
    )


def _u_quotient_dim(config: PointConfig, alpha: ParameterVector,
                    g: LaurentPoly, bound: int) -> int:
    """Window quotient of top-degree forms on the complement by the image of
    the twisted differential.

    The window elements are x'^{u'} / g^m for (u', m) ranging over the
    cone-adapted torus window intersected with m >= 0; these span a subspace
    of the localized ring whose coordinates are numerator monomials at the
    common denominator g^M.  Every image of a window element under the
    twisted derivations shifts (u', m) by a configuration point, hence stays
    inside the window by closure whenever the cap admits it, so the quotient
    dimension is the difference of two ranks.
    """
    from .derham import CohomologyWindow
    from .laurent import HalfSupport

    nprime = g.n
    alpha_n = alpha.entries[-1]
    win = CohomologyWindow(config, HalfSupport(config.n), bound)
    points = win.points
    M = max((pt[-1] for pt in points), default=0)
    g_pows = [LaurentPoly.one(nprime)]
    for _ in range(M):
        g_pows.append(g_pows[-1] * g)

    cache: dict[tuple, dict] = {}

    def numvec(pt) -> dict:
        if pt not in cache:
            up, m = pt[:-1], pt[-1]
            cache[pt] = dict((LaurentPoly.monomial(up) * g_pows[M - m]).terms)
        return cache[pt]

    span_ech = RationalEchelon()
    span_rank = 0
    for pt in points:
        if span_ech.insert(numvec(pt)):
            span_rank += 1

    derivs = [toric_derivative(i, g) for i in range(1, nprime + 1)]
    gen_ech = RationalEchelon()
    gen_rank = 0
    for pt in points:
        up, m = pt[:-1], pt[-1]
        for i in range(1, nprime + 1):
            shifts = []
            ok = True
            for w, c in derivs[i - 1].terms.items():
                tgt = tuple(a + b for a, b in zip(up, w)) + (m + 1,)
                if tgt not in win:
                    ok = False
                    break
                shifts.append((tgt, c))
            if not ok:
                continue
            vec: dict = {}
            diag = Fraction(up[i - 1]) + alpha.entries[i - 1]
            if diag:
                for w, c in numvec(pt).items():
                    vec[w] = vec.get(w, Fraction(0)) + diag * c
            scale = -(m + alpha_n)
            if scale:
                for tgt, c in shifts:
                    for wkey, cv in numvec(tgt).items():
                        s = vec.get(wkey, Fraction(0)) + scale * c * cv
                        if s:
                            vec[wkey] = s
                        else:
                            vec.pop(wkey, None)
            if vec and gen_ech.insert(vec):
                gen_rank += 1
    return span_rank - gen_rank