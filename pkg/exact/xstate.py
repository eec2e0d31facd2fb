"""
X-state separability integrals over eta in (0, 1).

The Hilbert-Schmidt jacobians here have the form

    scale * (P0(eta) + P1(eta) log(eta)) / (eta - 1)**order

whose numerator vanishes to the same order at eta = 1. Near that point the
kernel is evaluated from its Taylor series in t = eta - 1, built once with
numpy polynomial arithmetic.
"""

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as P

from exact.hypergeometric import sep_function_10d, suboptimal_sep_function_10d
from exact.quadrature import quadrature

SERIES_RADIUS = 0.5
SERIES_TERMS = 60
IDENTITY_TOL = 1e-8
QUAD_TOL = 1e-12

# upper bound quoted for the leading-minor separability function; not reproducible
SUBOPTIMAL_PUBLISHED_FORM = "919/5 - 264*log(2)"
SUBOPTIMAL_PUBLISHED = 919 / 5 - 264 * math.log(2)


@dataclass(frozen=True)
class LogKernel:
    """
    scale * (P0 + P1 log eta) / (eta - 1)**order, stable at eta = 1.

    p0 and p1 are ascending coefficients in eta.
    """
    p0: tuple
    p1: tuple
    order: int
    scale: float

    @cached_property
    def series(self):
        """Ascending Taylor coefficients of the kernel (without scale) in t = eta - 1."""
        shift = Polynomial([1.0, 1.0])
        n = SERIES_TERMS + self.order
        log1p = Polynomial([0.0] + [(-1.0) ** (j + 1) / j for j in range(1, n + 1)])
        numerator = Polynomial(self.p0)(shift) + Polynomial(self.p1)(shift) * log1p
        coef = np.zeros(n + 1)
        c = numerator.coef[:n + 1]
        coef[:len(c)] = c
        return coef[self.order:]

    def leading_residual(self):
        """Largest of the Taylor coefficients below `order` (zero in exact arithmetic)."""
        shift = Polynomial([1.0, 1.0])
        log1p = Polynomial([0.0] + [(-1.0) ** (j + 1) / j for j in range(1, self.order + 1)])
        numerator = Polynomial(self.p0)(shift) + Polynomial(self.p1)(shift) * log1p
        low = np.zeros(self.order)
        c = numerator.coef[:self.order]
        low[:len(c)] = c
        return float(np.max(np.abs(low)))

    def __call__(self, eta):
        eta = np.asarray(eta, dtype=np.float64)
        t = eta - 1.0
        out = np.empty_like(eta)
        near = np.abs(t) < SERIES_RADIUS
        far = ~near
        if np.any(near):
            out[near] = P.polyval(t[near], self.series)
        if np.any(far):
            e = eta[far]
            out[far] = (P.polyval(e, self.p0) + P.polyval(e, self.p1) * np.log(e)) / t[far] ** self.order
        return self.scale * out


# 8-dim X-state jacobian: (3 - 3 eta^2 + (eta^2 + 4 eta + 1) log eta) / (eta - 1)^5
KERNEL_8D = LogKernel(
    p0=(3.0, 0.0, -3.0),
    p1=(1.0, 4.0, 1.0),
    order=5,
    scale=math.pi / 40320.0,
)

# 10-dim: (3(eta + 1)(eta^2 + 8 eta + 1) log eta - (eta - 1)(11 eta^2 + 38 eta + 11)) / (eta - 1)^7
KERNEL_10D = LogKernel(
    p0=(11.0, 27.0, -27.0, -11.0),
    p1=(3.0, 27.0, 27.0, 3.0),
    order=7,
    scale=math.pi / 1209600.0,
)


def integrand_8d_numerator(eta):
    return eta * KERNEL_8D(eta)


def integrand_8d_denominator(eta):
    return np.sqrt(eta) * KERNEL_8D(eta)


def integrand_10d_denominator(eta):
    return eta * KERNEL_10D(eta)


def integrand_10d_suboptimal(eta):
    return integrand_10d_denominator(eta) * suboptimal_sep_function_10d(eta)


def integrand_10d_separable(eta):
    return integrand_10d_denominator(eta) * sep_function_10d(np.sqrt(eta))


def integrate(f, tol=QUAD_TOL):
    """Integral of f over (0, 1)."""
    value, _ = quadrature(f, 0.0, 1.0, tol)
    return value


@dataclass(frozen=True)
class IdentityCheck:
    """
    One quadrature check against a closed form.

    published is set when the value in circulation differs from the one the
    stated integrand reproduces; such a check is reported as a known
    discrepancy instead of a failure.
    """
    name: str
    closed_form: str
    expected: float
    computed: float
    relative_error: float
    passed: bool
    published_form: Optional[str] = None
    published: Optional[float] = None

    @property
    def known_discrepancy(self):
        return self.published is not None


def _check(name, closed_form, expected, computed, tol, published_form=None, published=None):
    rel = abs(computed - expected) / abs(expected)
    return IdentityCheck(name, closed_form, expected, computed, rel, rel <= tol, published_form, published)


def verify_xstate_identities(tol=IDENTITY_TOL):
    """
    Confirm the six X-state integral identities by quadrature.

    :return: list of IdentityCheck, one per identity, in a fixed order
    """
    num_8d = integrate(integrand_8d_numerator)
    den_8d = integrate(integrand_8d_denominator)
    den_10d = integrate(integrand_10d_denominator)
    sub_10d = integrate(integrand_10d_suboptimal)
    sep_10d = integrate(integrand_10d_separable)

    return [
        _check("xstate_8d_numerator", "pi/967680", math.pi / 967680, num_8d, tol),
        _check("xstate_8d_denominator", "pi**3/5160960", math.pi ** 3 / 5160960, den_8d, tol),
        _check("xstate_rebit_retrit", "16/(3*pi**2)", 16 / (3 * math.pi ** 2), num_8d / den_8d, tol),
        _check("xstate_10d_denominator", "pi/29030400", math.pi / 29030400, den_10d, tol),
        # the leading-minor function integrates to 71/105, not to the published bound
        _check("xstate_10d_suboptimal_bound", "71/105", 71 / 105, sub_10d / den_10d, tol,
               published_form=SUBOPTIMAL_PUBLISHED_FORM, published=SUBOPTIMAL_PUBLISHED),
        _check("xstate_10d_rebit_retrit", "272/(45*pi**2)",
               272 / (45 * math.pi ** 2), sep_10d / den_10d, tol),
    ]
