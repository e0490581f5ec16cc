"""Exact-identity battery over the built-in configurations.

Each check runs with symbolic parameters, so a pass is an exact polynomial
identity, not a numerical coincidence.  Checks that receive no samples
report a vacuous pass explicitly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .derham import (LogForm, check_complex, enumerate_monomial_forms,
                     homotopy_identity_check, twist_conjugation_check)
from .errors import StructureError
from .hypersurface import (SplitForm, build_g, check_gamma_chain_map,
                           check_split_matches_nabla, kernel_equals_dv_image,
                           normalize_structure)
from .lattice import (ParameterVector, PointConfig, cone_facets,
                      relation_lattice)
from .laurent import build_f_symbolic
from .weyl import (WeylElement, check_commutation, check_phi_intertwines,
                   check_phi_kills_box)


@dataclass
class CheckResult:
    name: str
    ok: bool
    samples: int
    vacuous: bool = False
    detail: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "ok": self.ok, "samples": self.samples,
               "vacuous": self.vacuous}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class BatteryReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, result: CheckResult) -> None:
        self.checks.append(result)

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": [c.to_json() for c in self.checks]}


def _del_monomials(N: int, max_degree: int) -> list[WeylElement]:
    out = []
    for total in range(max_degree + 1):
        for b in itertools.product(range(total + 1), repeat=N):
            if sum(b) == total:
                out.append(WeylElement.monomial((0,) * N, b))
    return out


def run_battery(config: PointConfig, alpha: ParameterVector,
                exponent_bound: int = 2, del_degree: int = 3,
                perturb_beta: bool = False) -> BatteryReport:
    """All exact identity checks for one configuration.

    With ``perturb_beta`` the commutation check runs against an off-by-one
    shift parameter, which must fail; this is the negative control.
    """
    report = BatteryReport()
    n, N = config.n, config.N
    lattice = relation_lattice(config)
    facets = cone_facets(config)

    # box and Euler operators interleave up to the parameter shift
    count = 0
    ok = True
    detail = ""
    for l in lattice.basis:
        for i in range(1, n + 1):
            count += 1
            beta = None
            if perturb_beta:
                from .weyl import box_shift
                shift = box_shift(config, l)
                beta = ParameterVector(tuple(
                    a - s + (1 if k == i - 1 else 0)
                    for k, (a, s) in enumerate(zip(alpha.entries, shift))))
            result = check_commutation(config, l, i, alpha, beta=beta)
            if not result.ok:
                ok = False
                detail = (f"l={l}, i={i}, beta={[str(b) for b in result.beta.entries]}, "
                          f"residual={result.residual}")
                break
        if not ok:
            break
    report.add(CheckResult("commutation", ok, count, vacuous=count == 0,
                           detail=detail if not ok else ""))

    # the parameter-linear map annihilates left multiples of box operators
    count = 0
    ok = True
    detail = ""
    tees = _del_monomials(N, 2)
    for l in lattice.basis:
        for t in tees:
            count += 1
            if not check_phi_kills_box(config, t, l):
                ok = False
                detail = f"t={t}, l={l}"
                break
        if not ok:
            break
    report.add(CheckResult("phi_kills_boxes", ok, count, vacuous=count == 0,
                           detail=detail))

    # transport of the Euler action and the parameter derivatives
    count = 0
    ok = True
    detail = ""
    for w in _del_monomials(N, del_degree):
        for i in range(1, n + 1):
            count += 1
            if not check_phi_intertwines(w, i, alpha, config):
                ok = False
                detail = f"w={w}, i={i}"
                break
        if not ok:
            break
    report.add(CheckResult("phi_intertwines", ok, count, detail=detail))

    # the twisted differential squares to zero
    f = build_f_symbolic(config)
    forms = enumerate_monomial_forms(n, exponent_bound, range(n + 1), nlam=N)
    ok = check_complex(alpha, f, forms)
    report.add(CheckResult("nabla_squared", ok, len(forms),
                           vacuous=not forms))

    # contraction homotopy identity, per facet
    count = 0
    ok = True
    detail = ""
    for ell in facets:
        if not homotopy_identity_check(ell, alpha, config, forms):
            ok = False
            detail = f"facet={ell.coeffs}"
            break
        count += len(forms)
    report.add(CheckResult("homotopy_identity", ok, count,
                           vacuous=count == 0 and ok, detail=detail))

    # monomial twist conjugation
    twists = [tuple(1 if k == 0 else 0 for k in range(n))]
    if n >= 2:
        twists.append(tuple(-1 if k == 1 else 0 for k in range(n)))
        twists.append(tuple(1 if k <= 1 else 0 for k in range(n)))
    small_forms = enumerate_monomial_forms(n, 1, range(min(n, 2)), nlam=N)
    count = 0
    ok = True
    for u in twists:
        if not twist_conjugation_check(alpha, u, f, small_forms):
            ok = False
            break
        count += len(small_forms)
    report.add(CheckResult("twist_conjugation", ok, count))

    # hypersurface-structure checks, when the configuration admits them
    if n >= 2:
        try:
            cfg_h, alpha_h, _ = normalize_structure(config, alpha)
        except StructureError:
            cfg_h = None
        if cfg_h is not None:
            lam = tuple(Fraction(k + 2, 2 * k + 1) for k in range(N))
            g = build_g(cfg_h, lam)
            splits = []
            for u in itertools.product(range(-1, 2), repeat=n - 1):
                for m in range(0, 3):
                    full = u + (m,)
                    for k in range(n):
                        for idx in itertools.combinations(range(1, n), k):
                            splits.append(SplitForm(
                                LogForm.from_monomial(full, idx, n),
                                LogForm.from_monomial(full, idx, n)))
            ok = check_gamma_chain_map(alpha_h, g, splits)
            report.add(CheckResult("gamma_chain_map", ok, len(splits)))
            total_forms = enumerate_monomial_forms(n, 1, range(n + 1))
            ok = check_split_matches_nabla(cfg_h, alpha_h, lam, total_forms)
            report.add(CheckResult("split_consistency", ok, len(total_forms)))
            alpha_n = alpha_h.entries[-1]
            if not (alpha_n.denominator == 1 and alpha_n <= 0):
                ok = all(kernel_equals_dv_image(alpha_h, g, k, 2, 3)
                         for k in range(n))
                report.add(CheckResult("gamma_kernel", ok, n))
    return report
