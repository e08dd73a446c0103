"""Command-line interface.

Subcommands: constants, zeta, trace, functional, optimize, sweep, rates,
suite.  Structured output is JSON on stdout (17-significant-digit floats via
shortest repr); sweeps write CSV.  Exit codes: 0 success, 1 check failure,
2 usage error, 3 numerical-consistency error.

Config precedence: explicit flags > key=value file named by the environment
variable CONFORMAL_ZETA_CONFIG > built-in defaults.  Recognized config keys:
variant, grid_n, seed, tol.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import acceptance, bubbles, fieldio, functionals, optimize, zeta
from .background import round_sphere_background
from .errors import ConsistencyError, SchemaError
from .params import VARIANTS, dim_params
from .spectra import SpectrumQuery
from .zonal import make_grid

CONFIG_ENV = "CONFORMAL_ZETA_CONFIG"
_DEFAULTS = {"variant": "paper", "grid_n": acceptance.DEFAULT_GRID_SIZE, "seed": 0, "tol": 1e-8}

EXIT_OK = 0
EXIT_CHECK_FAILURE = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _load_config() -> dict:
    cfg = dict(_DEFAULTS)
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return cfg
    try:
        with open(path) as fh:
            for ln, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise SchemaError("expected key=value", f"{path}:{ln}")
                key, _, raw = line.partition("=")
                key, raw = key.strip(), raw.strip()
                if key == "variant":
                    if raw not in VARIANTS:
                        raise SchemaError(f"variant must be one of {VARIANTS}", f"{path}:{ln}")
                    cfg[key] = raw
                elif key in ("grid_n", "seed"):
                    cfg[key] = int(raw)
                elif key == "tol":
                    cfg[key] = float(raw)
                else:
                    raise SchemaError(f"unknown config key {key!r}", f"{path}:{ln}")
    except OSError as exc:
        raise SchemaError(f"cannot read config file ({exc})", path) from exc
    return cfg


def _emit(doc):
    json.dump(doc, sys.stdout, allow_nan=False)
    sys.stdout.write("\n")


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="conformal-zeta", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def add_common(p, mass_field=False):
        p.add_argument("--n", type=int, required=True, help="even sphere dimension >= 4")
        p.add_argument("--variant", choices=VARIANTS, default=None)
        p.add_argument("--grid-n", type=int, default=None, help="collocation size N")
        if mass_field:
            p.add_argument("--mass-field", default=None,
                           help="field file with normalized-mass data on the round sphere")

    p = sub.add_parser("constants", help="print the dimensional constants")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--variant", choices=VARIANTS, default=None)

    p = sub.add_parser("zeta", help="Laurent data of the spectral series at s=1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--space", choices=("sphere", "projective"), required=True)

    p = sub.add_parser("trace", help="sphere trace of a conformal factor from a field file")
    add_common(p)
    p.add_argument("--profile", required=True, help="field file for the conformal factor")

    p = sub.add_parser("functional", help="functional report for a conformal factor")
    add_common(p, mass_field=True)
    p.add_argument("--profile", required=True)

    p = sub.add_parser("optimize", help="maximize the mass functional")
    add_common(p, mass_field=True)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="write the result JSON here instead of stdout")

    p = sub.add_parser("sweep", help="mass functional along the glued-bubble family")
    add_common(p, mass_field=True)
    p.add_argument("--alphas", required=True, metavar="A:B:M",
                   help="M log-spaced concentration scales from A to B")
    p.add_argument("--epsilon", type=float, default=bubbles.SWEEP_EPSILON_DEFAULT)
    p.add_argument("--out", required=True, help="CSV output path")

    p = sub.add_parser("rates", help="fit the second-moment decay branch")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--cap", type=float, default=bubbles.RATE_CAP_DEFAULT)

    p = sub.add_parser("suite", help="run the acceptance checks")
    p.add_argument("--out", default=None, help="also write the report JSON here")
    p.add_argument("--checks", nargs="*", default=None,
                   help="restrict to these check names (trailing * for prefixes)")
    p.add_argument("--jobs", type=int, default=4)
    p.add_argument("--grid-n", type=int, default=None)
    return top


def _parse_alphas(raw: str) -> np.ndarray:
    try:
        lo, hi, count = raw.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
        if lo <= 0 or hi <= lo or count < 2:
            raise ValueError
    except ValueError:
        raise SchemaError("expected A:B:M with 0 < A < B and integer M >= 2", "--alphas")
    return np.logspace(np.log10(lo), np.log10(hi), count)


def _background(args, cfg):
    n = args.n
    variant = args.variant or cfg["variant"]
    grid = make_grid(n, getattr(args, "grid_n", None) or cfg["grid_n"])
    mnor = None
    if getattr(args, "mass_field", None):
        mnor = fieldio.read_field(args.mass_field, grid)
    return round_sphere_background(n, grid, variant=variant, mnor=mnor)


def run(argv=None) -> int:
    cfg = _load_config()
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.command == "constants":
        params = dim_params(args.n, args.variant or cfg["variant"])
        _emit({
            "n": params.n, "m": params.m, "p": params.p, "a_n": params.a_n,
            "c_n": params.c_n, "b_n": params.b_n, "omega_n": params.omega_n,
            "yamabe_sphere": params.yamabe_sphere, "variant": params.variant,
        })
        return EXIT_OK

    if args.command == "zeta":
        lv = zeta.spectral_zeta_at_one(SpectrumQuery(space=args.space, n=args.n))
        _emit({"residue": lv.residue, "finite_part": lv.finite_part, "at": lv.at})
        return EXIT_OK

    if args.command == "trace":
        bg = _background(args, cfg)
        u = fieldio.read_field(args.profile, bg.grid)
        _emit({"trace": functionals.conformal_trace(u, bg)})
        return EXIT_OK

    if args.command == "functional":
        bg = _background(args, cfg)
        u = fieldio.read_field(args.profile, bg.grid)
        rep = functionals.functional_report(u, bg)
        _emit({
            "mass_functional": rep.mass_functional,
            "yamabe_functional": rep.yamabe_functional,
            "trace": rep.trace, "volume": rep.volume, "sobolev_gap": rep.sobolev_gap,
        })
        return EXIT_OK

    if args.command == "optimize":
        bg = _background(args, cfg)
        opt_cfg = optimize.OptimizerConfig(
            tol_residual=args.tol if args.tol is not None else cfg["tol"],
            seed=args.seed if args.seed is not None else cfg["seed"],
        )
        res = optimize.maximize_mass_functional(bg, opt_cfg)
        doc = fieldio.result_document(res)
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(doc, fh, allow_nan=False)
                fh.write("\n")
        else:
            _emit(doc)
        return EXIT_OK if res.converged else EXIT_CHECK_FAILURE

    if args.command == "sweep":
        bg = _background(args, cfg)
        rows = bubbles.concentration_sweep(_parse_alphas(args.alphas), args.epsilon, bg)
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["alpha", "M_psi", "sphere_value", "margin", "mu"])
            for r in rows:
                writer.writerow([repr(v) for v in (r.alpha, r.m_psi, r.sphere_value, r.margin, r.mu)])
        return EXIT_OK

    if args.command == "rates":
        alphas = np.logspace(-3, -1, 25)
        vals = [bubbles.bubble_moment(a, args.cap, args.k, args.n) for a in alphas]
        fit = bubbles.fit_decay_rate(alphas, vals, args.n, args.k)
        _emit({
            "n": args.n, "k": fit.k, "exponent_fit": fit.exponent_fit,
            "log_factor_detected": fit.log_factor_detected, "r2": fit.r2,
            "predicted": fit.predicted,
        })
        return EXIT_OK

    if args.command == "suite":
        report = acceptance.run_suite(
            names=args.checks, jobs=args.jobs,
            grid_size=args.grid_n or cfg["grid_n"])
        doc = report.to_json_dict()
        _emit(doc)
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(doc, fh, allow_nan=False, indent=2)
                fh.write("\n")
        return EXIT_OK if report.overall_pass else EXIT_CHECK_FAILURE

    raise AssertionError(f"unhandled command {args.command!r}")


def main(argv=None) -> int:
    try:
        return run(argv)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        print(f"numerical consistency error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
