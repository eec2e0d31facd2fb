"""
Generalized hypergeometric series and the closed forms built on them.

    pFq(top; bottom; z) = sum_n prod (top)_n / prod (bottom)_n * z**n / n!

Regularized form divides term n by prod Gamma(bottom_j + n). For |z| < 1
the series is summed directly in double precision. At z = 1 the terms of
the series used here decay only like n**(-3/2), so the partial sums are
accelerated with mpmath's Levin u-transform.
"""

import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp
from scipy.special import gamma, rgamma, spence

MAX_TERMS = 1_000_000
LEVIN_DPS = 60
LEVIN_MIN_TERMS = 8
LEVIN_MAX_TERMS = 200
DEFAULT_TOL = 1e-15
UNIT_TOL = 1e-10
# best Levin estimate is still accepted at the cap if its error is below this
UNIT_ACCEPT_TOL = 1e-7

CHI_DIMENSIONS = (2, 4, 6)
# below this eps the 10-dim separability function uses its odd power series
SEP10_SERIES_CUTOFF = 0.25
SEP10_SERIES_TERMS = 60


class ConvergenceError(RuntimeError):
    """A series or quadrature did not reach its tolerance within its caps."""

    def __init__(self, message, terms=None, estimate=None, error=None):
        details = [message]
        if terms is not None:
            details.append(f"terms={terms}")
        if estimate is not None:
            details.append(f"estimate={estimate!r}")
        if error is not None:
            details.append(f"error={error!r}")
        super().__init__(", ".join(details))
        self.terms = terms
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class HypSeriesParams:
    top: tuple
    bottom: tuple
    z: float
    regularized: bool = False


def _is_nonpositive_integer(b):
    return b <= 0 and float(b).is_integer()


def _direct_sum(params, tol):
    top = [float(a) for a in params.top]
    bottom = [float(b) for b in params.bottom]
    z = float(params.z)

    term = float(np.prod(rgamma(bottom))) if params.regularized else 1.0
    total = 0.0
    for n in range(MAX_TERMS):
        total += term
        ratio = z / (n + 1)
        for a in top:
            ratio *= a + n
        for b in bottom:
            ratio /= b + n
        term *= ratio
        if term == 0.0:
            return total
        # geometric tail bound once the terms are shrinking
        if abs(ratio) < 1.0 and abs(term) / (1.0 - abs(ratio)) <= tol * abs(total):
            return total + term
    raise ConvergenceError("direct hypergeometric sum did not converge", terms=MAX_TERMS, estimate=total)


def _levin_sum(params, tol):
    with mp.workdps(LEVIN_DPS):
        top = [mp.mpf(a) for a in params.top]
        bottom = [mp.mpf(b) for b in params.bottom]
        term = mp.mpf(1)
        if params.regularized:
            for b in bottom:
                term *= mp.rgamma(b)

        levin = mp.levin(method="levin", variant="u")
        partial = mp.mpf(0)
        sums = []
        best = None
        for n in range(LEVIN_MAX_TERMS):
            partial += term
            sums.append(partial)
            ratio = mp.mpf(1) / (n + 1)
            for a in top:
                ratio *= a + n
            for b in bottom:
                ratio /= b + n
            term *= ratio
            if term == 0:
                return float(partial)
            if n + 1 >= LEVIN_MIN_TERMS:
                value, error = levin.update_psum(sums)
                if best is None or error < best[1]:
                    best = (value, error)
                if error <= tol * abs(value):
                    return float(value)

        if best is not None and best[1] <= UNIT_ACCEPT_TOL * abs(best[0]):
            return float(best[0])
    raise ConvergenceError(
        "Levin acceleration did not converge at unit argument",
        terms=LEVIN_MAX_TERMS,
        estimate=None if best is None else float(best[0]),
        error=None if best is None else float(best[1]),
    )


def hyp_series(params, tol=DEFAULT_TOL):
    """
    Sum a generalized hypergeometric series.

    :param params: HypSeriesParams(top, bottom, z, regularized)
    :param tol: relative tolerance (the unit-argument path floors it at UNIT_TOL)
    :raises ValueError: divergent argument or nonpositive-integer bottom parameter
    :raises ConvergenceError: term or acceleration caps reached
    """
    for b in params.bottom:
        if _is_nonpositive_integer(b):
            raise ValueError(f"bottom parameter {b} is a nonpositive integer")
    z = float(params.z)
    if abs(z) < 1.0:
        return _direct_sum(params, tol)
    if z == 1.0:
        excess = sum(params.bottom) - sum(params.top)
        if excess <= 0:
            raise ValueError(f"series diverges at z=1: parameter excess {excess} <= 0")
        return _levin_sum(params, max(tol, UNIT_TOL))
    raise ValueError(f"series diverges for |z| > 1 (z={z})")


def psep_hs(alpha, tol=UNIT_TOL):
    """
    Hilbert-Schmidt separability/PPT probability for Dyson-type index alpha.

    1 - sqrt(pi) 2**(-9a/2 - 5/2) G(3(a+1)/2) G(5a/4 + 19/8) G(2a+2) G(5a/2 + 2) / G(a)
        * 6F5~(1, a+3/2, 5a/4+1, (5a+6)/4, 5a/4+19/8, 3(a+1)/2;
               (a+4)/2, 5a/4+11/8, (5a+7)/4, (5a+9)/4, 2(a+1); 1)

    alpha = 1, 2, 4 give 29/64, 8/33, 26/323.
    """
    a = float(alpha)
    if not a > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    prefactor = (
        math.sqrt(math.pi) * 2.0 ** (-4.5 * a - 2.5)
        * gamma(1.5 * (a + 1)) * gamma(1.25 * a + 19 / 8)
        * gamma(2 * a + 2) * gamma(2.5 * a + 2) / gamma(a)
    )
    params = HypSeriesParams(
        top=(1.0, a + 1.5, 1.25 * a + 1, (5 * a + 6) / 4, 1.25 * a + 19 / 8, 1.5 * (a + 1)),
        bottom=((a + 4) / 2, 1.25 * a + 11 / 8, (5 * a + 7) / 4, (5 * a + 9) / 4, 2 * (a + 1)),
        z=1.0,
        regularized=True,
    )
    return 1.0 - prefactor * hyp_series(params, tol)


def q_det_partition(alpha, tol=UNIT_TOL):
    """Half of psep_hs: the part of the PPT set with |rho^PT| > |rho|."""
    return psep_hs(alpha, tol) / 2.0


def chi_master(d, eps):
    """
    Hilbert-Schmidt separability function for Dyson-type index d:

        eps**d G(d+1)**3 3F2~(-d/2, d/2, d; d/2+1, 3d/2+1; eps**2) / G(d/2+1)**2

    eps = 1 returns the normalization 1 directly.
    """
    if not d > 0:
        raise ValueError(f"d must be positive, got {d}")
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"eps must lie in [0, 1], got {eps}")
    if eps == 1.0:
        return 1.0
    if eps == 0.0:
        return 0.0
    d = float(d)
    params = HypSeriesParams(
        top=(-d / 2, d / 2, d),
        bottom=(d / 2 + 1, 1.5 * d + 1),
        z=eps * eps,
        regularized=True,
    )
    return eps ** d * gamma(d + 1) ** 3 * hyp_series(params) / gamma(d / 2 + 1) ** 2


def chi_dk(d, k, z):
    """Induced-measure separability polynomials chi_{d,k}(z), z = eps**2, for d in {2, 4, 6}."""
    if d not in CHI_DIMENSIONS:
        raise ValueError(f"chi_dk is only known for d in {CHI_DIMENSIONS}, got {d}")
    if k < 0 or int(k) != k:
        raise ValueError(f"k must be a nonnegative integer, got {k}")
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"z must lie in [0, 1], got {z}")
    k = int(k)
    w = (1.0 - z) ** (k + 1)

    if d == 2:
        return 1.0 + w * (-1.0 + z / (k + 3))
    if d == 4:
        inner = (
            -1.0 - (k + 1) * z
            + 2 * (2 * k * k + 14 * k + 21) / ((k + 5) * (k + 6)) * z ** 2
            - 6 * (k + 3) / ((k + 6) * (k + 7)) * z ** 3
        )
        return 1.0 + w * inner
    inner = (
        -1.0 - (k + 1) * z - (k + 1) * (k + 2) / 2 * z ** 2
        + 3 * (3 * k ** 4 + 60 * k ** 3 + 432 * k ** 2 + 1230 * k + 1264)
        / (2 * (k + 7) * (k + 8) * (k + 9)) * z ** 3
        - 6 * (k + 4) * (3 * k * k + 33 * k + 80) / ((k + 8) * (k + 9) * (k + 10)) * z ** 4
        + 30 * (k + 4) * (k + 5) / ((k + 9) * (k + 10) * (k + 11)) * z ** 5
    )
    return 1.0 + w * inner


def dilog(x):
    """Li_2(x) for |x| <= 1 (scipy's Spence function: Li_2(x) = spence(1 - x))."""
    if not -1.0 <= x <= 1.0:
        raise ValueError(f"dilog needs |x| <= 1, got {x}")
    return float(spence(1.0 - x))


def _scalar_or_array(values, like):
    return float(values) if np.ndim(like) == 0 else values


def sep_function_10d(eps):
    """
    Ten-dimensional rebit-retrit X-state separability function of eps = sqrt(eta):

        2 (eps**2 (4 Li2(eps) - Li2(eps**2)) + (1 - eps**4) atanh(eps) + eps**3 - eps) / (pi**2 eps**2)

    Accepts a scalar or an array. Small eps uses the odd power series
    (2/pi**2) sum_j a_j eps**(2j-1), a_j = 4/(2j-1)**2 + 1/(2j+1) - 1/(2j-3).
    """
    e = np.asarray(eps, dtype=np.float64)
    if np.any(~((e > 0.0) & (e <= 1.0))):
        raise ValueError("sep_function_10d needs 0 < eps <= 1")

    out = np.ones_like(e)
    small = e < SEP10_SERIES_CUTOFF
    mid = ~small & (e < 1.0)

    if np.any(small):
        j = np.arange(1, SEP10_SERIES_TERMS + 1, dtype=np.float64)
        coef = 4.0 / (2 * j - 1) ** 2 + 1.0 / (2 * j + 1) - 1.0 / (2 * j - 3)
        es = e[small]
        powers = es[..., None] ** (2 * j - 1)
        out[small] = 2.0 / math.pi ** 2 * np.sum(coef * powers, axis=-1)
    if np.any(mid):
        em = e[mid]
        li = 4.0 * spence(1.0 - em) - spence(1.0 - em * em)
        # (1 - eps**4) atanh(eps), factored so eps -> 1 stays finite
        damped = (1.0 - em) * (1.0 + em) * (1.0 + em * em) * 0.5 * (np.log1p(em) - np.log1p(-em))
        out[mid] = 2.0 * (em * em * li + damped + em ** 3 - em) / (math.pi ** 2 * em * em)
    return _scalar_or_array(out, eps)


def sqrt_sep_function_8d(eta):
    """Eight-dimensional X-state separability function sqrt(eta)."""
    e = np.asarray(eta, dtype=np.float64)
    if np.any(~((e >= 0.0) & (e <= 1.0))):
        raise ValueError("eta must lie in [0, 1]")
    return _scalar_or_array(np.sqrt(e), eta)


def suboptimal_sep_function_10d(eta):
    """Upper-bounding 10-dim function 2 (sqrt((1 - eta) eta) + asin(sqrt(eta))) / pi."""
    e = np.asarray(eta, dtype=np.float64)
    if np.any(~((e >= 0.0) & (e <= 1.0))):
        raise ValueError("eta must lie in [0, 1]")
    values = 2.0 * (np.sqrt((1.0 - e) * e) + np.arcsin(np.sqrt(e))) / math.pi
    return _scalar_or_array(values, eta)


def sep_function_enlarged_retrit(u):
    """Two-retrit X-state with one extra entry: 8 (sqrt(1-u**2) u**2 - sqrt(1-u**2) + 1) / (3 pi u)."""
    e = np.asarray(u, dtype=np.float64)
    if np.any(~((e > 0.0) & (e <= 1.0))):
        raise ValueError("u must lie in (0, 1]")
    root = np.sqrt(1.0 - e * e)
    values = 8.0 * (root * e * e - root + 1.0) / (3.0 * math.pi * e)
    return _scalar_or_array(values, u)
