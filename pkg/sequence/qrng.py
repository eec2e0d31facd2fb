"""
Generalized golden-ratio quasirandom sequence in exact fixed-point form.

Point n of the d-dimensional sequence is (alpha0 + n * alpha) mod 1, where
alpha_j = 1 / phi_d**j and phi_d is the smallest positive root of
x**(d+1) = x + 1 (d=1 gives the golden ratio, d=2 the plastic constant).

Coordinates and alpha are kept as unsigned 64-bit fractions
(value = integer / 2**64). Mod 1 is then plain wrap-around addition, so any
index can be reached directly (skip-ahead) and a point reached by stepping
is bit-identical to the same point computed from its index.
"""

from dataclasses import dataclass
from functools import cached_property

import mpmath
import numpy as np

FRACTION_BITS = 64
ONE = 1 << FRACTION_BITS
MASK = ONE - 1

DEFAULT_ALPHA0 = 0.5

NEWTON_TOL = 1e-15
NEWTON_MAX_ITER = 10_000
# working precision (bits) for the root polish and the powers 1/phi**j
POLISH_BITS = 192
POLISH_STEPS = 6

# float conversion keeps the top 53 bits, so values stay inside [0, 1)
_FLOAT_SHIFT = np.uint64(FRACTION_BITS - 53)
_FLOAT_SCALE = 2.0 ** -53


def solve_phi(d):
    """
    Smallest positive root of x**(d+1) = x + 1, by Newton iteration in double precision.

    x**(d+1) - x - 1 is convex and increasing on [1, 2], so Newton started to
    the right of the root decreases monotonically onto it.

    :param d: Sequence dimension, d >= 1
    :return: phi_d in (1, 2]
    """
    d = int(d)
    if d < 1:
        raise ValueError(f"sequence dimension must be >= 1, got {d}")

    # 2**(d+1) overflows past d ~ 1000; 1 + 2/d is still right of the root
    x = 2.0 if d <= 1000 else 1.0 + 2.0 / d
    for _ in range(NEWTON_MAX_ITER):
        power = x ** d
        step = (power * x - x - 1.0) / ((d + 1) * power - 1.0)
        x -= step
        if abs(step) <= NEWTON_TOL * x:
            break
    return x


def _polished_phi(d):
    """phi_d refined to POLISH_BITS; call inside an mpmath.workprec block."""
    x = mpmath.mpf(solve_phi(d))
    for _ in range(POLISH_STEPS):
        power = x ** d
        x -= (power * x - x - 1) / ((d + 1) * power - 1)
    return x


def to_fixed(value):
    """Round a real in [0, 1) to the nearest 64-bit fraction (wrapping 1.0 to 0)."""
    with mpmath.workprec(POLISH_BITS):
        return int(mpmath.nint(mpmath.mpf(value) * ONE)) & MASK


def fixed_to_unit(fixed):
    """Convert fixed-point coordinates (uint64 array) to float64 values in [0, 1)."""
    fixed = np.asarray(fixed, dtype=np.uint64)
    return (fixed >> _FLOAT_SHIFT).astype(np.float64) * _FLOAT_SCALE


@dataclass(frozen=True)
class SequenceSpec:
    """
    Immutable description of one d-dimensional sequence.

    alpha holds the fixed-point integers (alpha_j = alpha[j-1] / 2**64);
    alpha0 is the real offset as given, alpha0_fixed its fixed-point form.
    """
    d: int
    alpha0: float
    phi: float
    alpha: tuple
    alpha0_fixed: int

    @cached_property
    def alpha_array(self):
        return np.array(self.alpha, dtype=np.uint64)

    @property
    def alpha_values(self):
        return fixed_to_unit(self.alpha_array)


@dataclass(frozen=True)
class SequenceState:
    """Position n of a sequence together with its fixed-point coordinates."""
    spec: SequenceSpec
    n: int
    coords: tuple

    def point(self):
        return fixed_to_unit(np.array(self.coords, dtype=np.uint64))


def make_sequence(d, alpha0=DEFAULT_ALPHA0):
    """
    Build the sequence spec for dimension d.

    The powers 1/phi**j are formed by repeated multiplication at POLISH_BITS
    and rounded once each to the nearest 64-bit fraction.

    :param d: Sequence dimension, d >= 1
    :param alpha0: Offset added to every coordinate, in [0, 1)
    """
    d = int(d)
    if d < 1:
        raise ValueError(f"sequence dimension must be >= 1, got {d}")
    if not 0.0 <= alpha0 < 1.0:
        raise ValueError(f"alpha0 must lie in [0, 1), got {alpha0}")

    with mpmath.workprec(POLISH_BITS):
        phi = _polished_phi(d)
        inverse = 1 / phi
        power = mpmath.mpf(1)
        alpha = []
        for _ in range(d):
            power *= inverse
            alpha.append(int(mpmath.nint(power * ONE)))

    return SequenceSpec(
        d=d,
        alpha0=alpha0,
        phi=float(phi),
        alpha=tuple(alpha),
        alpha0_fixed=to_fixed(alpha0),
    )


def _coords_at(spec, n):
    return tuple((spec.alpha0_fixed + n * a) & MASK for a in spec.alpha)


def point_at(spec, n):
    """
    Point n of the sequence as d floats in [0, 1).

    Computed with exact integer arithmetic mod 2**64, so there is no
    precision decay at large n.
    """
    n = int(n)
    if n < 0:
        raise ValueError(f"sequence index must be non-negative, got {n}")
    return fixed_to_unit(np.array(_coords_at(spec, n & MASK), dtype=np.uint64))


def state_at(spec, n):
    """Skip-ahead: the SequenceState at index n."""
    n = int(n)
    if n < 0:
        raise ValueError(f"sequence index must be non-negative, got {n}")
    n &= MASK
    return SequenceState(spec=spec, n=n, coords=_coords_at(spec, n))


def advance(state):
    """Step one index forward by wrap-around addition of alpha."""
    coords = tuple((c + a) & MASK for c, a in zip(state.coords, state.spec.alpha))
    return SequenceState(spec=state.spec, n=(state.n + 1) & MASK, coords=coords)


def fixed_block(spec, start, stop):
    """
    Fixed-point coordinates for indices [start, stop), shape (stop - start, d).

    uint64 array arithmetic wraps mod 2**64, which is exactly mod 1 on the
    fractions, so every row matches point_at for its index.
    """
    n = np.arange(start, stop, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return np.uint64(spec.alpha0_fixed) + n[:, None] * spec.alpha_array[None, :]


def points_block(spec, start, stop):
    """Floats in [0, 1) for indices [start, stop), shape (stop - start, d)."""
    return fixed_to_unit(fixed_block(spec, start, stop))
