import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gkzkit.catalog import builtin_alpha, builtin_config
from gkzkit.derham import LogForm, top_cohomology_dim
from gkzkit.errors import PochhammerPoleError, StructureError
from gkzkit.hypersurface import (LocalizedElement, SplitForm, UForm,
                                 apply_unimodular, build_g,
                                 check_gamma_chain_map,
                                 check_split_matches_nabla, cohomology_U_dim,
                                 find_unimodular_normalizer, gamma,
                                 kernel_equals_dv_image, normalize_structure,
                                 pochhammer, split, split_boundaries,
                                 tilde_nabla, twist_iso_U_check)
from gkzkit.lattice import ParameterVector, validate_config
from gkzkit.laurent import FullSupport, LaurentPoly

TRI = builtin_config("trinomial")
ALPHA = builtin_alpha("trinomial")
LAM1 = [Fraction(1), Fraction(1), Fraction(1)]
LAMR = [Fraction(3, 7), Fraction(5, 11), Fraction(2, 9)]


def loc_mono(g, u, m=0, c=1):
    return LocalizedElement(g, LaurentPoly.monomial(u, Fraction(c)), m)


def test_pochhammer_values_and_poles():
    a = Fraction(1, 5)
    assert pochhammer(a, 0) == 1
    assert pochhammer(a, 1) == a
    assert pochhammer(a, 3) == a * (a + 1) * (a + 2)
    assert pochhammer(a, -1) == 1 / (a - 1)
    assert pochhammer(a, -2) == 1 / ((a - 1) * (a - 2))
    with pytest.raises(PochhammerPoleError):
        pochhammer(Fraction(2), -3)


@settings(max_examples=40, deadline=None)
@given(num=st.integers(-9, 9), den=st.integers(1, 7), m=st.integers(-5, 5))
def test_pochhammer_recurrence(num, den, m):
    a = Fraction(num, den)
    try:
        lhs = pochhammer(a, m + 1)
        rhs = pochhammer(a, m) * (a + m)
    except PochhammerPoleError:
        return
    assert lhs == rhs


def test_localized_normalization():
    g = build_g(TRI, LAM1)
    e = LocalizedElement(g, g * LaurentPoly.monomial((2,)), 3)
    assert e.gpow == 2 and e.num == LaurentPoly.monomial((2,))
    # negative powers fold into the numerator
    e = LocalizedElement(g, LaurentPoly.one(1), -2)
    assert e.gpow == 0 and e.num == g * g
    z = LocalizedElement(g, LaurentPoly.zero(1), 5)
    assert z.is_zero() and z.gpow == 0
    s = loc_mono(g, (1,), 2) + loc_mono(g, (1,), 2, -1)
    assert s.is_zero()


def test_localized_arithmetic_against_evaluation():
    g = build_g(TRI, LAMR)
    rng = random.Random(3)

    def ev(e, x):
        num = sum(c * x ** u[0] for u, c in e.num.terms.items())
        gv = sum(c * x ** u[0] for u, c in g.terms.items())
        return num / gv ** e.gpow

    for _ in range(30):
        a = loc_mono(g, (rng.randint(-2, 2),), rng.randint(0, 2),
                     rng.randint(-3, 3))
        b = loc_mono(g, (rng.randint(-2, 2),), rng.randint(0, 2),
                     rng.randint(-3, 3))
        x = Fraction(rng.randint(2, 7), rng.randint(8, 11))
        assert ev(a + b, x) == ev(a, x) + ev(b, x)
        assert ev(a * b, x) == ev(a, x) * ev(b, x)
        # quotient-rule derivative at the sample point via a formal check:
        # compare against the derivative of the numerator/denominator form
        d = a.toric_derivative(1)
        h = Fraction(1, 10 ** 8)
        # exact rational derivative: x d/dx of num/g^m equals
        # (x num' g - m x num g') / g^{m+1}; evaluate both sides exactly
        num_d = sum(c * u[0] * x ** u[0] for u, c in a.num.terms.items())
        g_d = sum(c * u[0] * x ** u[0] for u, c in g.terms.items())
        gv = sum(c * x ** u[0] for u, c in g.terms.items())
        want = (num_d * gv - a.gpow * g_d *
                sum(c * x ** u[0] for u, c in a.num.terms.items())) / gv ** (a.gpow + 1)
        assert ev(d, x) == want


def test_tilde_nabla_matches_hand_example():
    g = build_g(TRI, LAM1)
    one = UForm(g, 0, {(): LocalizedElement.from_poly(g, LaurentPoly.one(1))})
    got = tilde_nabla(ALPHA, g, one)
    # alpha_1 dx1/x1 minus alpha_2 (x - 1/x)/g dx1/x1, over the common
    # denominator g
    num = LaurentPoly(1, {(-1,): Fraction(8, 15), (0,): Fraction(1, 3),
                          (1,): Fraction(2, 15)})
    want = UForm(g, 1, {(1,): LocalizedElement(g, num, 1)})
    assert got == want
    assert tilde_nabla(ALPHA, g, UForm.zero(g, 0)).is_zero()


def test_tilde_nabla_squares_to_zero():
    cfgs = [(TRI, ALPHA, LAMR)]
    gauss = builtin_config("gauss")
    cfg_h, alpha_h, _ = normalize_structure(gauss, builtin_alpha("gauss"))
    cfgs.append((cfg_h, alpha_h, [Fraction(2), Fraction(3, 2), Fraction(5, 3),
                                  Fraction(7, 4)]))
    for cfg, alpha, lam in cfgs:
        g = build_g(cfg, lam)
        rng = random.Random(7)
        for _ in range(10):
            comp = {}
            for idx in [(), *[(i,) for i in range(1, g.n + 1)]]:
                if len(idx) == 0:
                    comp[idx] = loc_mono(g, tuple(rng.randint(-2, 2)
                                                  for _ in range(g.n)),
                                         rng.randint(0, 2), rng.randint(-3, 3))
            omega = UForm(g, 0, {(): comp[()]})
            assert tilde_nabla(alpha, g, tilde_nabla(alpha, g, omega)).is_zero()


def test_split_boundaries_and_injectivity():
    g = build_g(TRI, LAM1)
    sf = SplitForm(LogForm.from_monomial((1, 0), (), 2),
                   LogForm.from_monomial((0, 2), (1,), 2))
    dh, dv = split_boundaries(ALPHA, g, sf)
    assert not dv.is_zero()
    assert dh.part0.degree == 1 and dh.part1.degree == 2
    # vertical boundary of the zero form is zero without complaint
    dh0, dv0 = split_boundaries(ALPHA, g,
                                SplitForm(LogForm.zero(2, 0), LogForm.zero(2, 0)))
    assert dv0.is_zero()


def test_total_complex_consistency():
    samples = []
    for u in itertools.product(range(-1, 2), repeat=2):
        for idx in [(), (1,), (2,), (1, 2)]:
            samples.append(LogForm.from_monomial(u, idx, 2))
    assert check_split_matches_nabla(TRI, ALPHA, LAM1, samples)


def test_gamma_examples():
    g = build_g(TRI, LAM1)
    a2 = ALPHA.entries[1]
    got = gamma(ALPHA, g, LogForm.from_monomial((3, 0), (), 2))
    assert got == UForm(g, 0, {(): loc_mono(g, (3,), 0)})
    got = gamma(ALPHA, g, LogForm.from_monomial((3, 1), (), 2))
    assert got == UForm(g, 0, {(): loc_mono(g, (3,), 1, -a2)})
    got = gamma(ALPHA, g, LogForm.from_monomial((3, -1), (), 2))
    want = UForm(g, 0, {(): LocalizedElement(
        g, LaurentPoly.monomial((3,), -1 / (a2 - 1)) * g, 0)})
    assert got == want


def test_gamma_chain_map_window():
    g = build_g(TRI, LAM1)
    samples = []
    for u1 in range(-2, 3):
        for m in range(0, 5):
            for idx in [(), (1,)]:
                samples.append(SplitForm(
                    LogForm.from_monomial((u1, m), idx, 2),
                    LogForm.from_monomial((u1, m), idx, 2)))
    assert check_gamma_chain_map(ALPHA, g, samples)


def test_gamma_surjectivity_within_window():
    # every target monomial over g^M is hit when the last entry avoids
    # nonpositive integers
    g = build_g(TRI, LAMR)
    M = 3
    for u1 in range(-2, 3):
        got = gamma(ALPHA, g, LogForm.from_monomial((u1, M), (), 2))
        val = got.components[()]
        assert val.gpow == M and not val.is_zero()


def test_kernel_equals_dv_image_and_pole_guard():
    g = build_g(TRI, LAMR)
    assert kernel_equals_dv_image(ALPHA, g, 0, 3, 3)
    assert kernel_equals_dv_image(ALPHA, g, 1, 3, 3)
    with pytest.raises(PochhammerPoleError):
        kernel_equals_dv_image(ParameterVector.of("1/3", 0), g, 0, 2, 2)


def test_twist_iso_U():
    g = build_g(TRI, LAMR)
    samples = [UForm(g, 0, {(): loc_mono(g, (1,), 1)}),
               UForm(g, 0, {(): loc_mono(g, (0,), 0)}),
               UForm(g, 1, {(1,): loc_mono(g, (-1,), 2)})]
    for u in ((0, 0), (0, 1), (1, 0), (1, -1), (-2, 2)):
        assert twist_iso_U_check(ALPHA, u, g, samples), u
    # composing a shift with its negative returns the original operator
    factor = LocalizedElement(g, LaurentPoly.monomial((2,)), 1)
    inverse = LocalizedElement(g, LaurentPoly.monomial((-2,)), -1)
    prod = factor * inverse
    assert prod == LocalizedElement.from_poly(g, LaurentPoly.one(1))


def test_structure_normalization():
    with pytest.raises(StructureError):
        build_g(validate_config([(1,), (2,)]), [1, 1])
    gauss = builtin_config("gauss")
    w_matrix = find_unimodular_normalizer(gauss)
    assert w_matrix is not None
    assert w_matrix[-1] == [1, 1, 1]
    cfg_h, alpha_h, changed = normalize_structure(gauss, builtin_alpha("gauss"))
    assert changed
    assert all(p[-1] == 1 for p in cfg_h.points)
    # no functional can hit value 1 on both 1 and 2
    assert find_unimodular_normalizer(validate_config([(1,), (2,)])) is None
    with pytest.raises(StructureError):
        normalize_structure(validate_config([(1,), (2,)]),
                            ParameterVector.of("1/2"))


def test_cohomology_U_matches_torus_dim():
    rep = cohomology_U_dim(TRI, ALPHA, LAMR, 4)
    assert rep.stabilized and rep.dim == 2
    torus = top_cohomology_dim(TRI, ALPHA, LAMR, FullSupport(2), 4)
    assert torus.dim == rep.dim


def test_cohomology_U_pretwist_and_gauss():
    # integer last entry below 1 is shifted automatically
    alpha = ParameterVector.of("1/3", -2)
    rep = cohomology_U_dim(TRI, alpha, LAMR, 4)
    assert any("pre-twisted" in w for w in rep.warnings)
    assert rep.stabilized and rep.dim == 2

    gauss = builtin_config("gauss")
    lam = [Fraction(3, 7), Fraction(5, 11), Fraction(2, 9), Fraction(7, 13)]
    rep = cohomology_U_dim(gauss, builtin_alpha("gauss"), lam, 3)
    assert any("unimodular" in w for w in rep.warnings)
    assert rep.stabilized and rep.dim == 2


def test_minimal_two_point_case_matches():
    # valid two-point configuration with constant last coordinate: both the
    # torus side and the complement side give dimension 1
    cfg = validate_config([(1, 1), (0, 1)])
    alpha = ParameterVector.of("1/3", "1/7")
    lam = [Fraction(3, 5), Fraction(7, 11)]
    torus = top_cohomology_dim(cfg, alpha, lam, FullSupport(2), 4)
    assert torus.stabilized and torus.dim == 1
    rep = cohomology_U_dim(cfg, alpha, lam, 4)
    assert rep.stabilized and rep.dim == 1


def test_unimodular_transport_preserves_nonresonance():
    from gkzkit.lattice import is_nonresonant
    gauss = builtin_config("gauss")
    alpha = builtin_alpha("gauss")
    Q = find_unimodular_normalizer(gauss)
    cfg_h, alpha_h = apply_unimodular(gauss, alpha, Q)
    assert is_nonresonant(gauss, alpha).nonresonant \
        == is_nonresonant(cfg_h, alpha_h).nonresonant
