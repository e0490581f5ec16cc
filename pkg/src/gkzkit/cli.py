"""Command-line front end: analyze, rank, verify, modp.

Every report embeds the job description, the seed, and the toolkit version;
rerunning a job with the same seed reproduces byte-identical output.  Exit
codes: 0 success, 1 identity-check failure, 2 invalid configuration or
arguments, 3 dimension not stabilized, 4 resonant parameter where
nonresonance is required.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .catalog import BUILTIN_POINTS, builtin_alpha, builtin_config, builtin_names
from .derham import (generic_rank, quasi_iso_check, random_specialization,
                     require_stabilized, top_cohomology_dim)
from .errors import (DuplicatePointError, GkzError, NotGeneratingError,
                     NotStabilizedError, ResonantError)
from .hypersurface import cohomology_U_dim
from .jsonio import dump_json, load_config, parse_alpha, parse_fraction
from .lattice import (cone_facets, is_nonresonant, relation_lattice)
from .laurent import ConeSupport, FullSupport
from .modp import full_set_sweep
from .verify import run_battery

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_CONFIG = 2
EXIT_NOT_STABILIZED = 3
EXIT_RESONANT = 4


def _resolve_config(text: str):
    """Builtin name, inline JSON, or a path to a JSON file."""
    if text in BUILTIN_POINTS:
        return builtin_config(text), text
    if text.strip().startswith("{"):
        return load_config(text), "inline"
    with open(text, "r", encoding="utf-8") as fh:
        return load_config(fh.read()), text


def _parse_alpha_arg(text: str):
    return parse_alpha([part.strip() for part in text.split(",") if part.strip()])


def _emit(payload: dict, out_path: str | None) -> None:
    text = dump_json(payload)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _job_block(args, config, config_label: str) -> dict:
    job = {
        "command": args.command,
        "config": {"points": [list(p) for p in config.points], "label": config_label},
        "seed": args.seed,
        "version": __version__,
    }
    if getattr(args, "alpha", None):
        job["alpha"] = args.alpha
    if getattr(args, "lam", None):
        job["lambda"] = args.lam
    if getattr(args, "bound", None):
        job["bound"] = args.bound
    if getattr(args, "primes", None):
        job["primes"] = args.primes
    return job


def cmd_analyze(args) -> int:
    config, label = _resolve_config(args.config)
    alpha = _parse_alpha_arg(args.alpha) if args.alpha else None
    lattice = relation_lattice(config)
    facets = cone_facets(config)
    result = {
        "n": config.n,
        "N": config.N,
        "relation_basis": [list(l) for l in lattice.basis],
        "relation_rank": lattice.rank,
        "facets": [list(f.coeffs) for f in facets],
    }
    if alpha is not None:
        verdict = is_nonresonant(config, alpha)
        result["nonresonant"] = verdict.nonresonant
        result["vacuous"] = verdict.vacuous
        if verdict.witness is not None:
            form, value = verdict.witness
            result["witness"] = {"facet": list(form.coeffs), "value": value}
    _emit({"job": _job_block(args, config, label), "result": result}, args.out)
    return EXIT_OK


def _lambda_values(args, count: int):
    if args.lam == "random":
        import random
        rng = random.Random(args.seed)
        return random_specialization(rng, count)
    values = [parse_fraction(part.strip()) for part in args.lam.split(",")]
    if len(values) != count:
        raise ValueError(f"need {count} coefficients, got {len(values)}")
    return tuple(values)


def cmd_rank(args) -> int:
    config, label = _resolve_config(args.config)
    alpha = _parse_alpha_arg(args.alpha)
    supports = []
    for name in args.supports.split(","):
        name = name.strip().lower()
        if name in ("zn", "z^n", "full"):
            supports.append(("Z^n", FullSupport(config.n)))
        elif name in ("u0", "cone"):
            supports.append(("U0", ConeSupport(config)))
        else:
            raise ValueError(f"unknown support {name!r}")
    result: dict = {"supports": {}}
    try:
        if args.lam == "random":
            for name, support in supports:
                rep = generic_rank(config, alpha, support, args.bound,
                                   seed=args.seed)
                result["supports"][name] = rep.to_json()
        else:
            lam = _lambda_values(args, config.N)
            for name, support in supports:
                rep = require_stabilized(top_cohomology_dim(
                    config, alpha, lam, support, args.bound))
                result["supports"][name] = rep.to_json()
        if len(supports) == 2:
            lam = _lambda_values(args, config.N) if args.lam != "random" else None
            if lam is None:
                import random
                rng = random.Random(args.seed)
                lam = random_specialization(rng, config.N)
            qi = quasi_iso_check(config, alpha, lam, supports[1][1],
                                 supports[0][1], args.bound)
            result["quasi_iso"] = qi.to_json()
        if args.hypersurface:
            lam_u = (_lambda_values(args, config.N) if args.lam != "random"
                     else _random_for(args, config.N))
            rep = cohomology_U_dim(config, alpha, lam_u, args.bound)
            result["U"] = require_stabilized(rep).to_json()
    except NotStabilizedError as exc:
        result["error"] = {"kind": "NotStabilized", "dims": list(exc.dims),
                           "bound": exc.bound}
        _emit({"job": _job_block(args, config, label), "result": result}, args.out)
        return EXIT_NOT_STABILIZED
    _emit({"job": _job_block(args, config, label), "result": result}, args.out)
    return EXIT_OK


def _random_for(args, count: int):
    import random
    rng = random.Random(args.seed)
    return random_specialization(rng, count)


def cmd_verify(args) -> int:
    names = [args.config] if args.config else builtin_names()
    overall_ok = True
    sections = []
    for name in names:
        config, label = _resolve_config(name)
        if name in BUILTIN_POINTS and not args.alpha:
            alpha = builtin_alpha(name)
        elif args.alpha:
            alpha = _parse_alpha_arg(args.alpha)
        else:
            raise ValueError("--alpha is required for a non-builtin configuration")
        battery = run_battery(config, alpha,
                              exponent_bound=args.window,
                              del_degree=args.degree,
                              perturb_beta=args.perturb_beta)
        sections.append({"config": label, "alpha": [str(a) for a in alpha.entries],
                         **battery.to_json()})
        overall_ok = overall_ok and battery.ok
    payload = {
        "job": {
            "command": "verify",
            "configs": names,
            "window": args.window,
            "degree": args.degree,
            "perturb_beta": args.perturb_beta,
            "seed": args.seed,
            "version": __version__,
        },
        "result": {"ok": overall_ok, "batteries": sections},
    }
    _emit(payload, args.out)
    return EXIT_OK if overall_ok else EXIT_CHECK_FAILED


def cmd_modp(args) -> int:
    config, label = _resolve_config(args.config)
    alpha = _parse_alpha_arg(args.alpha)
    primes = [int(p.strip()) for p in args.primes.split(",") if p.strip()]
    try:
        report = full_set_sweep(config, alpha, primes, bound=args.bound,
                                seed=args.seed)
    except ResonantError as exc:
        _emit({"job": _job_block(args, config, label),
               "result": {"error": {"kind": "Resonant", "message": str(exc)}}},
              args.out)
        return EXIT_RESONANT
    except NotStabilizedError as exc:
        _emit({"job": _job_block(args, config, label),
               "result": {"error": {"kind": "NotStabilized",
                                    "dims": list(exc.dims)}}}, args.out)
        return EXIT_NOT_STABILIZED
    _emit({"job": _job_block(args, config, label), "result": report.to_json()},
          args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gkz",
        description="Exact toolkit for hypergeometric systems attached to "
                    "lattice point configurations")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="builtin name, JSON file path, or inline JSON")
        p.add_argument("--alpha", help="comma-separated rational entries, e.g. 1/3,1/5")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="write the JSON report to this path")

    p = sub.add_parser("analyze", help="lattice of relations, facets, nonresonance")
    common(p)

    p = sub.add_parser("rank", help="top cohomology dimensions over supports")
    common(p)
    p.add_argument("--lambda", dest="lam", default="random",
                   help='"random" or comma-separated rationals')
    p.add_argument("--bound", type=int, default=4)
    p.add_argument("--supports", default="zn,u0")
    p.add_argument("--hypersurface", action="store_true",
                   help="also compute the complement-side dimension")

    p = sub.add_parser("verify", help="exact identity battery")
    common(p)
    p.add_argument("--window", type=int, default=2,
                   help="sup-norm bound for sample exponents")
    p.add_argument("--degree", type=int, default=3,
                   help="max partial-derivative degree for transport checks")
    p.add_argument("--perturb-beta", action="store_true",
                   help="negative control: shift the commutation parameter off by one")

    p = sub.add_parser("modp", help="mod-p solution dimensions against the rank")
    common(p)
    p.add_argument("--primes", default="3,5,7,11,13,17,19,23")
    p.add_argument("--bound", type=int, default=4)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "analyze":
            return cmd_analyze(args)
        if args.command == "rank":
            return cmd_rank(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "modp":
            return cmd_modp(args)
    except (NotGeneratingError, DuplicatePointError) as exc:
        sys.stderr.write(f"invalid configuration: {exc}\n")
        return EXIT_BAD_CONFIG
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"bad input: {exc}\n")
        return EXIT_BAD_CONFIG
    except GkzError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CHECK_FAILED
    parser.error("unknown command")
    return EXIT_BAD_CONFIG


if __name__ == "__main__":
    sys.exit(main())
