"""Acceptance suite: every golden-value and property check, with provenance.

Each check carries the measured value, the registered expectation (a number
with a tolerance, or an interval), a pass flag, and a provenance tag:

* ``paper``   -- the expectation reproduces a printed closed form or claim;
* ``derived`` -- the expectation was computed from an independent oracle
  (exact rational closed forms, brute-force summation, quadrature);
* ``trivial`` -- structural identities.

Two registered projective-space expectations (the finite part +1/18 and the
paper-variant normalized mass 1/(16 pi^2)) disagree with both the engine and
the exact-rational oracle, which give +1/36 and 1/(24 pi^2); the checks are
kept as registered and report as failing, with the oracle values recorded in
their notes.  See the README.
"""

from __future__ import annotations

import datetime as _dt
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import bubbles, functionals, laws, optimize, zeta
from .background import round_sphere_background
from .params import dim_params, sphere_volume
from .spectra import SpectrumQuery
from .zonal import (ZonalField, constant_field, make_grid, random_band_limited,
                    random_zonal)

SUITE_SEED = 7041
DEFAULT_GRID_SIZE = 256

# field-generation law for the conformal-identity checks: smooth enough that
# exp(phi)-type composites stay fully resolved at N=256 (see zonal module notes)
_LAW_LMAX = 16
_LAW_DECAY = 5.0
_PHI_AMPLITUDE = 0.3
_F_AMPLITUDE = 0.5


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    expected: float | tuple[float | None, float | None]
    tolerance: float
    passed: bool
    provenance: str  # paper | derived | trivial
    note: str = ""


@dataclass(frozen=True)
class ReportDocument:
    checks: tuple[Check, ...]
    environment: dict
    overall_pass: bool
    generated_at: str = field(default_factory=lambda: _dt.datetime.now(_dt.timezone.utc).isoformat())

    def to_json_dict(self) -> dict:
        return {
            "checks": [
                {
                    "name": c.name,
                    "value": c.value,
                    "expected": list(c.expected) if isinstance(c.expected, tuple) else c.expected,
                    "tolerance": c.tolerance,
                    "pass": c.passed,
                    "provenance": c.provenance,
                    "note": c.note,
                }
                for c in self.checks
            ],
            "environment": self.environment,
            "overall_pass": self.overall_pass,
            "generated_at": self.generated_at,
        }


def _scalar_check(name, value, expected, tol, provenance, note="") -> Check:
    return Check(name=name, value=float(value), expected=float(expected),
                 tolerance=float(tol), passed=bool(abs(value - expected) <= tol),
                 provenance=provenance, note=note)


def _interval_check(name, value, lo, hi, provenance, note="") -> Check:
    ok = (lo is None or value >= lo) and (hi is None or value <= hi)
    return Check(name=name, value=float(value), expected=(lo, hi), tolerance=0.0,
                 passed=bool(ok), provenance=provenance, note=note)


# ---------------------------------------------------------------------------
# exact-rational oracle for the zeta targets (pre-verification route)
# ---------------------------------------------------------------------------

def rational_finite_part(n: int, parity: str | None = None, step: int | None = None) -> Fraction:
    """Closed-form finite part with exact rational arithmetic.

    fp = (2/(n-1)!) [ S(-1) + (sum_i (i+1/2)^2) * rho ], where S is the
    (possibly step-2) lattice sum continued to exponent -1 via Bernoulli
    polynomials and rho the lattice pole density 1/(step (n-2)).
    """
    x_first = Fraction(n - 1, 2)
    if parity == "odd":
        x_first += 1
    lattice_step = step or (2 if parity in ("even", "odd") else 1)

    def zeta_minus_one(a: Fraction) -> Fraction:
        return -zeta.bernoulli_polynomial(2, a) / 2

    if lattice_step == 1:
        head = zeta_minus_one(x_first)
    else:
        head = lattice_step * zeta_minus_one(x_first / lattice_step)
    offsets = sum(Fraction(2 * i + 1, 2) ** 2 for i in range((n - 4) // 2 + 1))
    pole = offsets / (lattice_step * (n - 2))
    return Fraction(2, math.factorial(n - 1)) * (head + pole)


# ---------------------------------------------------------------------------
# producers (grouped so expensive artifacts are shared)
# ---------------------------------------------------------------------------

def _zeta_checks(env) -> list[Check]:
    out = []
    for n in (4, 6):
        lv = zeta.spectral_zeta_at_one(SpectrumQuery(space="sphere", n=n))
        out.append(_interval_check(f"zeta_residue_sphere_n{n}", abs(lv.residue),
                                   None, 1e-10, "paper",
                                   "regularity of the series at its expansion point"))
        oracle = rational_finite_part(n)
        target = {4: Fraction(-1, 9), 6: Fraction(-1, 45)}[n]
        out.append(_scalar_check(
            f"finite_part_sphere_n{n}", lv.finite_part, float(target), 1e-9, "derived",
            f"oracle {oracle} ({'matches' if oracle == target else 'DISAGREES with'} registered target)"))
    rp = zeta.spectral_zeta_at_one(SpectrumQuery(space="projective", n=4))
    out.append(_interval_check("zeta_residue_projective_n4", abs(rp.residue),
                               None, 1e-10, "paper", ""))
    oracle_rp = rational_finite_part(4, parity="even")
    out.append(_scalar_check(
        "finite_part_projective_n4", rp.finite_part, float(Fraction(1, 18)), 1e-9, "derived",
        f"registered target 1/18; exact-rational oracle gives {oracle_rp} and the engine agrees with the oracle"))

    # printed-trace reproduction and the factor-two ratio (paper constants)
    for n, target in ((4, Fraction(-1, 18)), (6, Fraction(-1, 90))):
        grid = env[f"grid{n}"]
        bg = round_sphere_background(n, grid, variant="paper")
        tr = functionals.conformal_trace(constant_field(grid, 1.0), bg)
        out.append(_scalar_check(f"trace_const_n{n}", tr, float(target), 1e-12, "paper"))
        fp = zeta.spectral_zeta_at_one(SpectrumQuery(space="sphere", n=n)).finite_part
        out.append(_scalar_check(f"trace_ratio_n{n}", fp / tr, 2.0, 1e-6, "derived",
                                 "series finite part over printed-constant trace"))

    # calibration identity for the homogeneous sphere mass
    for n in (4, 6):
        q = SpectrumQuery(space="sphere", n=n)
        cal = zeta.homogeneous_mass(q, dim_params(n, "calibrated"))
        out.append(_scalar_check(f"calibration_mnor_zero_n{n}", cal.normalized_mass,
                                 0.0, 1e-9, "paper",
                                 "round-sphere normalized mass vanishes (calibrated constants)"))
        pap = zeta.homogeneous_mass(q, dim_params(n, "paper"))
        b_n = dim_params(n, "paper").b_n
        out.append(_scalar_check(f"calibration_mnor_paper_n{n}", pap.normalized_mass,
                                 -b_n * n * (n - 1), 1e-9, "paper",
                                 "paper constants leave -b_n n(n-1)"))

    # projective-space positivity and the registered value
    rp_q = SpectrumQuery(space="projective", n=4)
    for variant in ("paper", "calibrated"):
        hm = zeta.homogeneous_mass(rp_q, dim_params(4, variant))
        out.append(_interval_check(f"projective_mass_positive_{variant}",
                                   hm.normalized_mass, 0.0, None, "paper",
                                   "positive-mass claim for real projective space"))
    hm = zeta.homogeneous_mass(rp_q, dim_params(4, "paper"))
    out.append(_scalar_check(
        "projective_normalized_mass_value", hm.normalized_mass,
        1.0 / (16.0 * math.pi**2), 1e-9, "derived",
        "registered target 1/(16 pi^2); oracle route gives fp/vol + 12 b_4 = 1/(24 pi^2)"))
    return out


def _law_checks(env) -> list[Check]:
    n = 4
    grid = env["grid4"]
    bg = round_sphere_background(n, grid, variant="calibrated")
    worst_y = worst_p = worst_m = 0.0
    for seed in range(100):
        f = random_band_limited(grid, 3000 + seed, _LAW_LMAX, _F_AMPLITUDE, _LAW_DECAY)
        phi = random_band_limited(grid, 9000 + seed, _LAW_LMAX, _PHI_AMPLITUDE, _LAW_DECAY)
        mnor = random_zonal(grid, 15000 + seed, _LAW_LMAX, 0.3, 0.05)
        bg_m = round_sphere_background(n, grid, variant="calibrated", mnor=mnor)
        u = ZonalField(grid, np.exp((n - 2) / 2.0 * phi.values))
        ramp = np.exp(-(n + 2) / 2.0 * phi.values)

        # conformal Laplacian covariance
        bg_h = laws.transform_background(bg, phi)
        lhs = ZonalField(grid, laws.transformed_laplacian(f, phi, bg).values
                         + bg.params.a_n * bg_h.scal.values * f.values)
        rhs = ramp * laws.yamabe_apply(u * f, bg).values
        worst_y = max(worst_y, float(np.abs(lhs.values - rhs).max()))

        # mass-transport operator covariance on a background with mass data
        bg_hm = laws.transform_background(bg_m, phi)
        lhs_p = ZonalField(grid, bg.params.c_n * laws.transformed_laplacian(f, phi, bg_m).values
                           - bg_hm.mass_field().values * f.values)
        rhs_p = ramp * laws.p_operator_apply(u * f, bg_m).values
        worst_p = max(worst_p, float(np.abs(lhs_p.values - rhs_p).max()))

        # normalized-mass covariance through the two independent routes
        lhs_m = laws.mass_pushforward(u, bg_m).values \
            + bg_m.params.b_n * laws.transformed_scalar_curvature(u, bg_m).values
        rhs_m = laws.normalized_mass_pushforward(bg_m.mnor, phi).values
        worst_m = max(worst_m, float(np.abs(lhs_m - rhs_m).max()))

    out = [
        _interval_check("covariance_yamabe", worst_y, None, 1e-8, "paper",
                        "100 seeded pairs at N=256"),
        _interval_check("covariance_p_operator", worst_p, None, 1e-8, "paper",
                        "100 seeded pairs at N=256"),
        _interval_check("covariance_normalized_mass", worst_m, None, 1e-8, "paper",
                        "100 seeded pairs at N=256"),
    ]

    # transport ODE vs closed form
    worst = 0.0
    for seed in range(20):
        phi = random_band_limited(grid, 21000 + seed, _LAW_LMAX, _PHI_AMPLITUDE, _LAW_DECAY)
        u = ZonalField(grid, np.exp((n - 2) / 2.0 * phi.values))
        closed = laws.mass_pushforward(u, bg).values
        marched = laws.mass_transport_ode(bg, phi, steps=64).values
        worst = max(worst, float(np.abs(closed - marched).max()))
    out.append(_interval_check("mass_transport_ode", worst, None, 1e-6, "derived",
                               "4th-order march of the infinitesimal law, 64 steps, 20 seeds"))
    return out


def _sobolev_checks(env) -> list[Check]:
    out = []
    for n in (4, 6):
        grid = env[f"grid{n}"]
        bg = round_sphere_background(n, grid)
        worst = math.inf
        for seed in range(1000):
            u = random_zonal(grid, 40000 + seed, 48, 1.0, 0.05)
            worst = min(worst, functionals.sobolev_gap(u, bg))
        out.append(_interval_check(f"sobolev_gap_random_n{n}", worst, -1e-9, None, "paper",
                                   "min gap over 1000 seeded positive band-limited fields"))
    worst_dil = 0.0
    for n in (4, 6):
        grid = env[f"grid{n}"]
        bg = round_sphere_background(n, grid)
        for t in (0.0, 0.5, 1.0, 2.0):
            gap = abs(functionals.sobolev_gap(functionals.dilation_factor(t, grid), bg))
            worst_dil = max(worst_dil, gap)
    out.append(_interval_check("sobolev_gap_dilations", worst_dil, None, 1e-8, "derived",
                               "dilation factors are the extremal family"))
    return out


def _optimizer_checks(env) -> list[Check]:
    grid = env["grid4"]
    bg = round_sphere_background(4, grid, variant="paper")
    target = -bg.params.b_n * bg.params.yamabe_sphere
    worst_rel = worst_res = worst_fit = 0.0
    for seed in range(10):
        res = optimize.maximize_mass_functional(
            bg, optimize.OptimizerConfig(seed=SUITE_SEED + seed))
        worst_rel = max(worst_rel, abs(res.value / target - 1.0))
        worst_res = max(worst_res, res.residual)
        worst_fit = max(worst_fit, optimize.fit_dilation_orbit(res.u_star, bg)[1])
    return [
        _interval_check("optimizer_sphere_value", worst_rel, None, 1e-6, "derived",
                        "relative deviation from the orbit value, 10 seeds"),
        _interval_check("optimizer_sphere_residual", worst_res, None, 1e-8, "derived",
                        "Euler-Lagrange residual at the optimum, 10 seeds"),
        _interval_check("optimizer_orbit_fit", worst_fit, None, 1e-4, "paper",
                        "sup distance to the dilation orbit, 10 seeds"),
    ]


def _bump_checks(env) -> list[Check]:
    grid = env["grid4"]
    theta = grid.theta
    mnor = ZonalField(grid, 0.02 * np.exp(-(theta**2) / 0.1))
    bg = round_sphere_background(4, grid, variant="paper", mnor=mnor)
    sphere_value = -bg.params.b_n * bg.params.yamabe_sphere

    # concentration scales the N=256 grid resolves (several nodes per core)
    rows = bubbles.concentration_sweep(np.logspace(np.log10(0.02), np.log10(0.3), 12), 0.3, bg)
    best_margin = max(r.margin for r in rows)
    res = optimize.maximize_mass_functional(bg, optimize.OptimizerConfig(seed=SUITE_SEED))
    return [
        _interval_check("positive_bump_sweep_margin", best_margin, 0.0, None, "paper",
                        "glued-bubble sweep on the positive-mass bump background"),
        _interval_check("positive_bump_optimizer_margin", res.value - sphere_value, 1e-4, None, "paper",
                        "optimizer exceeds the orbit value strictly"),
        _interval_check("positive_bump_constant_mass_reldev", res.mass_reldev, None, 1e-6, "paper",
                        "optimal metric has constant mass"),
    ]


def _rate_checks(env) -> list[Check]:
    alphas = np.logspace(-3, -1, 25)
    out = []
    for n, k in ((6, 0), (8, 0), (8, 2), (4, 0), (6, 2)):
        vals = [bubbles.bubble_moment(a, bubbles.RATE_CAP_DEFAULT, k, n) for a in alphas]
        fit = bubbles.fit_decay_rate(alphas, vals, n, k)
        want_exp = bubbles.predicted_exponent(n, k)
        want_log = fit.predicted == "k_plus_2_log"
        ok = (abs(fit.exponent_fit - want_exp) <= 0.05
              and fit.log_factor_detected == want_log and fit.r2 >= 0.999)
        out.append(Check(
            name=f"rate_n{n}_k{k}", value=fit.exponent_fit, expected=want_exp,
            tolerance=0.05, passed=ok, provenance="paper",
            note=f"log factor {'detected' if fit.log_factor_detected else 'absent'} "
                 f"(want {'detected' if want_log else 'absent'}), r2={fit.r2:.7f}"))
    return out


def _flat_norm_checks(env) -> list[Check]:
    worst = 0.0
    for n in (4, 6):
        target = 2.0 ** (-n) * sphere_volume(n)
        for alpha in (0.1, 1.0, 10.0):
            worst = max(worst, abs(bubbles.flat_profile_lp_mass(alpha, n) - target))
    return [_interval_check("flat_norm_identity", worst, None, 1e-8, "paper",
                            "concentration-scale independence of the critical norm")]


# producer -> name prefixes it can emit, so filtered runs skip unrelated work
_PRODUCERS = (
    (_zeta_checks, ("zeta_residue", "finite_part", "trace_", "calibration_", "projective_")),
    (_law_checks, ("covariance_", "mass_transport")),
    (_sobolev_checks, ("sobolev_",)),
    (_optimizer_checks, ("optimizer_",)),
    (_bump_checks, ("positive_bump_",)),
    (_rate_checks, ("rate_",)),
    (_flat_norm_checks, ("flat_norm",)),
)

CHECK_NAMES = (
    "calibration_mnor_paper_n4", "calibration_mnor_paper_n6",
    "calibration_mnor_zero_n4", "calibration_mnor_zero_n6",
    "covariance_normalized_mass", "covariance_p_operator", "covariance_yamabe",
    "finite_part_projective_n4", "finite_part_sphere_n4", "finite_part_sphere_n6",
    "flat_norm_identity",
    "mass_transport_ode",
    "optimizer_orbit_fit", "optimizer_sphere_residual", "optimizer_sphere_value",
    "projective_mass_positive_calibrated", "projective_mass_positive_paper",
    "projective_normalized_mass_value",
    "rate_n4_k0", "rate_n6_k0", "rate_n6_k2", "rate_n8_k0", "rate_n8_k2",
    "sobolev_gap_dilations", "sobolev_gap_random_n4", "sobolev_gap_random_n6",
    "positive_bump_constant_mass_reldev", "positive_bump_optimizer_margin", "positive_bump_sweep_margin",
    "trace_const_n4", "trace_const_n6", "trace_ratio_n4", "trace_ratio_n6",
    "zeta_residue_projective_n4", "zeta_residue_sphere_n4", "zeta_residue_sphere_n6",
)

# registered expectations that disagree with the package's own oracle route;
# kept as registered (they fail) and documented in the README
KNOWN_DISPUTED_CHECKS = ("finite_part_projective_n4", "projective_normalized_mass_value")


def _matches(name: str, patterns: list[str]) -> bool:
    for pat in patterns:
        if pat.endswith("*"):
            if name.startswith(pat[:-1]):
                return True
        elif name == pat:
            return True
    return False


def run_suite(names: list[str] | None = None, jobs: int = 4,
              grid_size: int = DEFAULT_GRID_SIZE) -> ReportDocument:
    """Run the acceptance checks (optionally filtered by exact name or prefix)."""
    env = {
        "grid4": make_grid(4, grid_size),
        "grid6": make_grid(6, grid_size),
    }
    producers = [fn for fn, prefixes in _PRODUCERS
                 if names is None
                 or any(pat.rstrip("*").startswith(p) or p.startswith(pat.rstrip("*"))
                        for pat in names for p in prefixes)]
    checks: list[Check] = []
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        for batch in pool.map(lambda fn: fn(env), producers):
            checks.extend(batch)
    if names:
        checks = [c for c in checks if _matches(c.name, names)]
    checks.sort(key=lambda c: c.name)
    return ReportDocument(
        checks=tuple(checks),
        environment={"grid_N": grid_size, "constant_variant": "per-check (paper unless noted)",
                     "seed": SUITE_SEED},
        overall_pass=all(c.passed for c in checks),
    )
