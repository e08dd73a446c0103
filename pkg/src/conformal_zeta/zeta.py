"""Hurwitz zeta with Laurent data and finite parts of spectral Dirichlet series.

The series under study is, for the order-(n-2) operator on S^n (or RP^n),

    Z(s) = sum_l mult(l) * eig(l)^{-s}
         = (2/(n-1)!) * sum_x  x * lam(x)^{1-s},

where x = l + (n-1)/2 and lam(x) = prod_{i} (x^2 - (i+1/2)^2) for
i = 0..(n-4)/2; on projective space x steps by 2.  Expanding
lam(x)^{1-s} = x^{(n-2)(1-s)} * sum_k a_k(s) x^{-2k} (a_k polynomial in s-1,
a_k(1)=0 for k>=1) turns every tail term into a shifted Hurwitz zeta, whose
pole at argument 1 is cancelled by the vanishing of a_1 at s=1.  The series is
therefore regular at s=1; its value there is the zeta-regularized trace of the
inverse operator.

Two evaluation routes are exposed and cross-checked by the test suite:

* ``spectral_zeta(query, s)``: exact head (l <= head_size) plus the expanded
  tail, valid away from s=1 and the Weyl poles;
* ``spectral_zeta_at_one(query)``: at s=1 the eigenvalue factor drops out of
  every term (lam^0 = 1), so the head/tail split telescopes through the
  Hurwitz recurrence into a two-term closed form; the reported residue is
  extracted numerically from symmetric evaluations at 1 +/- delta so that the
  regularity claim is measured, not assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from scipy.special import digamma

from .params import DimensionParams, sphere_volume
from .spectra import SpectrumQuery, subcritical_eigenvalue

# ---------------------------------------------------------------------------
# Hurwitz zeta
# ---------------------------------------------------------------------------

POLE_GUARD = 1e-6
_EM_BERNOULLI_TERMS = 14
_MPMATH_DPS = 40


def _bernoulli_numbers(count: int) -> list[Fraction]:
    """B_0..B_{count-1} as exact rationals (recurrence)."""
    out: list[Fraction] = []
    for m in range(count):
        if m == 0:
            out.append(Fraction(1))
            continue
        acc = Fraction(0)
        for k in range(m):
            acc += Fraction(math.comb(m + 1, k)) * out[k]
        out.append(-acc / (m + 1))
    return out


_BERN = _bernoulli_numbers(2 * _EM_BERNOULLI_TERMS + 4)


def bernoulli_polynomial(k: int, a: Fraction) -> Fraction:
    """B_k(a) as an exact rational for rational a."""
    return sum(Fraction(math.comb(k, j)) * _BERN[j] * a ** (k - j) for j in range(k + 1))


def _hurwitz_nonpositive_integer(s_int: int, a: float) -> float:
    """zeta_H(-m, a) = -B_{m+1}(a)/(m+1), evaluated by float Horner."""
    k = 1 - s_int
    coeffs = [float(Fraction(math.comb(k, j)) * _BERN[j]) for j in range(k + 1)]
    acc = 0.0
    for j, c in enumerate(coeffs):  # sum c_j a^{k-j}, Horner in a
        acc = acc * a + c
    return -acc / k


def _hurwitz_euler_maclaurin(s: float, a: float) -> float:
    """Head sum + tail integral + Bernoulli corrections; sound for s >= -1.5."""
    # Keep the truncation point small when s < 0 so the head/tail cancellation
    # cannot eat significant digits; for s >= 0 push it out for convergence.
    target = max(a, 25.0) if s < 0.5 else max(a, 35.0 + 2.0 * abs(s))
    m_terms = max(0, int(math.ceil(target - a)))
    head = math.fsum((k + a) ** (-s) for k in range(m_terms))
    b = m_terms + a
    total = head + b ** (1.0 - s) / (s - 1.0) + 0.5 * b ** (-s)
    poch = s
    power = b ** (-s - 1.0)
    corr = 0.0
    for j in range(1, _EM_BERNOULLI_TERMS + 1):
        corr += float(_BERN[2 * j]) / math.factorial(2 * j) * poch * power
        poch *= (s + 2 * j - 1) * (s + 2 * j)
        power *= b ** (-2.0)
    return total + corr


def hurwitz_zeta(s: float, a: float) -> float:
    """Analytically continued Hurwitz zeta, float64 in and out.

    Dispatch: exact Bernoulli polynomials at non-positive integer s;
    Euler-Maclaurin for s >= -1.5; arbitrary-precision fallback below that
    (float64 Euler-Maclaurin loses digits to head/tail cancellation there).
    """
    if a <= 0:
        raise ValueError(f"hurwitz_zeta needs a > 0, got a={a}")
    if abs(s - 1.0) < POLE_GUARD:
        raise ValueError(f"s={s} is within {POLE_GUARD} of the pole at s=1")
    if s == int(s) and s <= 0:
        return _hurwitz_nonpositive_integer(int(s), a)
    if s >= -1.5:
        return _hurwitz_euler_maclaurin(s, a)
    with mpmath.workdps(_MPMATH_DPS):
        return float(mpmath.zeta(s, a))


@dataclass(frozen=True)
class LaurentValue:
    """(residue, constant term) of a zeta-type function at its expansion point."""

    residue: float
    finite_part: float
    at: float = 1.0


def hurwitz_laurent_at_1(a: float) -> LaurentValue:
    """Laurent data of zeta_H(s, a) at s=1: residue 1, constant term -psi(a)."""
    if a <= 0:
        raise ValueError(f"hurwitz_laurent_at_1 needs a > 0, got a={a}")
    return LaurentValue(residue=1.0, finite_part=-float(digamma(a)), at=1.0)


# ---------------------------------------------------------------------------
# Spectral zeta of the order-(n-2) operator
# ---------------------------------------------------------------------------

DEFAULT_HEAD_SIZE = 1000
MAX_TAIL_ORDER = 20
TAIL_TOLERANCE = 1e-13
_RESIDUE_DELTA = 1e-4

PARITIES = ("even", "odd")


def _squared_offsets(n: int) -> list[float]:
    """The c_i = (i+1/2)^2 with eig = prod_i (x^2 - c_i)."""
    return [(i + 0.5) ** 2 for i in range((n - 4) // 2 + 1)]


@lru_cache(maxsize=None)
def _tail_coefficient_polys(n: int, order: int) -> tuple[np.ndarray, ...]:
    """Polynomials a_k(sigma) in sigma = s-1 with lam^{1-s} = sum_k a_k x^{-2k}.

    Each factor (1 - c x^{-2})^{-sigma} contributes binom(-sigma, j) (-c)^j at
    x^{-2j}; the factors convolve.  Coefficient arrays are exact float
    polynomials in sigma (constant term exactly 0 for k >= 1).
    """
    # per-factor: row j = polynomial (in sigma) multiplying x^{-2j}
    polys = [np.zeros(order + 1) for _ in range(order + 1)]
    polys[0][0] = 1.0
    for c in _squared_offsets(n):
        rows = [np.zeros(order + 1) for _ in range(order + 1)]
        # binom(-sigma, j) = (-sigma)(-sigma-1)...(-sigma-j+1)/j!
        binom = np.zeros(order + 2)
        binom[0] = 1.0
        factor_rows = []
        for j in range(order + 1):
            factor_rows.append(binom[: order + 1] * ((-c) ** j))
            # multiply polynomial by (-sigma - j): new = -j*old - sigma*old
            nxt = np.zeros_like(binom)
            nxt += -j * binom
            nxt[1:] += -binom[:-1]
            binom = nxt / (j + 1.0)
        for k in range(order + 1):
            acc = np.zeros(order + 1)
            for j in range(k + 1):
                prod = np.convolve(polys[k - j], factor_rows[j])[: order + 1]
                acc += prod
            rows[k] = acc
        polys = rows
    return tuple(polys)


def _eval_poly(coeffs: np.ndarray, sigma: float) -> float:
    return float(np.polynomial.polynomial.polyval(sigma, coeffs))


def _step_sum_value(w: float, x0: float, step: int) -> float:
    """sum over x = x0, x0+step, ... of x^{-w} (analytic continuation)."""
    if step == 1:
        return hurwitz_zeta(w, x0)
    return step ** (-w) * hurwitz_zeta(w, x0 / step)


def _require_subcritical(query: SpectrumQuery):
    if query.operator != "subcritical_gjms":
        raise ValueError(
            "only the order-(n-2) operator has a zeta regular at s=1 here; "
            "the Laplacian series carries a genuine pole"
        )


def _stream_geometry(query: SpectrumQuery, parity: str | None = None):
    """(first x, step) of the x-lattice for the requested stream."""
    n = query.n
    x_first = (n - 1) / 2.0
    if query.space == "projective":
        step = 2
    elif parity is not None:
        if parity not in PARITIES:
            raise ValueError(f"parity must be one of {PARITIES}")
        step = 2
        if parity == "odd":
            x_first += 1.0
    else:
        step = 1
    return x_first, step


def spectral_zeta(query: SpectrumQuery, s: float, head_size: int = DEFAULT_HEAD_SIZE,
                  parity: str | None = None) -> float:
    """Evaluate the continued spectral series at real s away from its poles.

    Head: exact termwise summation up to degree ``head_size``.  Tail: the
    x^{-2k} expansion, each term a (possibly step-2) Hurwitz zeta, truncated
    once a rigorous bound on the remainder drops below 1e-13 (error if that
    cannot be met within order 20).
    """
    _require_subcritical(query)
    n = query.n
    if abs(s - 1.0) < POLE_GUARD:
        raise ValueError("use spectral_zeta_at_one for the expansion point s=1")
    sigma = s - 1.0
    x_first, step = _stream_geometry(query, parity)
    prefactor = 2.0 / math.factorial(n - 1)

    # exact head over degrees l with x = l + (n-1)/2 on the stream lattice
    l_first = int(round(x_first - (n - 1) / 2.0))
    head_terms = []
    for l in range(l_first, head_size + 1, step):
        x = l + (n - 1) / 2.0
        lam = float(subcritical_eigenvalue(n, l))
        head_terms.append(x * lam ** (-sigma))
    head = prefactor * math.fsum(head_terms)

    # tail over x >= x_tail
    l_tail = l_first + step * ((head_size - l_first) // step + 1)
    x_tail = l_tail + (n - 1) / 2.0
    polys = _tail_coefficient_polys(n, MAX_TAIL_ORDER)
    tail = 0.0
    for k in range(MAX_TAIL_ORDER + 1):
        w_k = (2 * k - 1) + (n - 2) * sigma
        if abs(w_k - 1.0) < POLE_GUARD:
            raise ValueError(f"s={s} sits on a pole of the continued series (tail order {k})")
        a_k = _eval_poly(polys[k], sigma)
        tail += a_k * _step_sum_value(w_k, x_tail, step)
        # remainder bound: |a_j| summed coefficients, tail sums bounded by the
        # integral test at the next order; super-geometric in x_tail^{-2}
        nxt = k + 1
        if nxt > MAX_TAIL_ORDER:
            raise ValueError("tail expansion did not meet tolerance within order 20")
        w_next = (2 * nxt - 1) + (n - 2) * sigma
        if w_next > 1.5:
            a_bound = float(np.abs(polys[nxt]) @ np.abs(sigma) ** np.arange(len(polys[nxt])))
            zeta_bound = x_tail ** (1.0 - w_next) / (w_next - 1.0) + x_tail ** (-w_next)
            if 2.0 * a_bound * zeta_bound < TAIL_TOLERANCE:
                break
    return head + prefactor * tail


def _finite_part_closed_form(n: int, x_first: float, step: int) -> float:
    """Finite part at s=1 of the x-lattice series (head telescoped away).

    At s=1 every term is (2/(n-1)!) x, so the split point telescopes through
    the Hurwitz recurrence and only two tail orders survive: the k=0 sum
    continued to w=-1, and the k=1 pole whose residue meets a_1'(1) = sum c_i.
    The k=1 Laurent product is assembled honestly from hurwitz_laurent_at_1;
    its finite part enters multiplied by a_1(1) = 0.
    """
    prefactor = 2.0 / math.factorial(n - 1)
    polys = _tail_coefficient_polys(n, 1)
    a1_slope = polys[1][1]          # a_1'(1) = sum of squared offsets
    a1_value = polys[1][0]          # exactly 0.0 by construction

    k0 = _step_sum_value(-1.0, x_first, step)

    # Laurent data in s of the k=1 Hurwitz factor H(w(s)), w = 1 + (n-2) sigma:
    # residue r/(n-2) and finite part of step^{-w} zeta_H(w, x0/step) at w=1.
    base = hurwitz_laurent_at_1(x_first / step if step > 1 else x_first)
    if step == 1:
        h_residue = base.residue / (n - 2)
        h_finite = base.finite_part
    else:
        # step^{-w} = (1/step) e^{-(w-1) ln step} twists the expansion
        h_residue = base.residue / (step * (n - 2))
        h_finite = (base.finite_part - base.residue * math.log(step)) / step
    finite = a1_slope * h_residue + a1_value * h_finite
    return prefactor * (k0 + finite)


def spectral_zeta_at_one(query: SpectrumQuery, parity: str | None = None) -> LaurentValue:
    """Laurent data at s=1: numerically extracted residue, closed-form finite part.

    The residue comes from Richardson-extrapolated symmetric differences of
    the full head+tail evaluator at s = 1 +/- delta, so the regularity of the
    series is observed rather than imposed.
    """
    _require_subcritical(query)
    x_first, step = _stream_geometry(query, parity)
    fp = _finite_part_closed_form(query.n, x_first, step)

    def residue_estimate(delta: float) -> float:
        plus = spectral_zeta(query, 1.0 + delta, parity=parity)
        minus = spectral_zeta(query, 1.0 - delta, parity=parity)
        return delta * (plus - minus) / 2.0

    r1 = residue_estimate(_RESIDUE_DELTA)
    r2 = residue_estimate(2.0 * _RESIDUE_DELTA)
    residue = (4.0 * r1 - r2) / 3.0
    return LaurentValue(residue=residue, finite_part=fp, at=1.0)


def parity_finite_part(n: int, parity: str) -> float:
    """Finite part of the even- or odd-degree half of the sphere series.

    Exposed so the step-2 machinery can be checked to recombine into the full
    series: even + odd must reproduce the sphere finite part.
    """
    query = SpectrumQuery(space="sphere", n=n)
    x_first, step = _stream_geometry(query, parity)
    return _finite_part_closed_form(n, x_first, step)


@dataclass(frozen=True)
class HomogeneousMass:
    mass: float
    normalized_mass: float


def homogeneous_mass(query: SpectrumQuery, params: DimensionParams) -> HomogeneousMass:
    """Constant mass of the homogeneous space: finite part / volume.

    Volume is omega_n for the sphere and omega_n / 2 for projective space;
    the normalized mass adds b_n * scal = b_n n(n-1).
    """
    _require_subcritical(query)
    if params.n != query.n:
        raise ValueError(f"params n={params.n} does not match query n={query.n}")
    fp = spectral_zeta_at_one(query).finite_part
    vol = sphere_volume(query.n)
    if query.space == "projective":
        vol /= 2.0
    mass = fp / vol
    n = query.n
    return HomogeneousMass(mass=mass, normalized_mass=mass + params.b_n * n * (n - 1))
