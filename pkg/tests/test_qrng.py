"""
Unit tests for the fixed-point quasirandom sequence.
Run from the project root: pytest tests/test_qrng.py
"""

import os
import sys
from dataclasses import replace

import mpmath
import numpy as np
import pytest

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from sequence.qrng import (
    MASK,
    ONE,
    advance,
    fixed_block,
    fixed_to_unit,
    make_sequence,
    point_at,
    points_block,
    solve_phi,
    state_at,
    to_fixed,
)


def test_solve_phi_known_constants():
    assert abs(solve_phi(1) - (1 + 5 ** 0.5) / 2) < 1e-15
    # plastic constant
    assert abs(solve_phi(2) - 1.324717957244746) < 1e-15


@pytest.mark.parametrize("d", [1, 36, 64, 144, 256, 324])
def test_phi_residual(d):
    spec = make_sequence(d)
    with mpmath.workprec(128):
        x = mpmath.mpf(spec.phi)
        residual = abs(x ** (d + 1) - x - 1)
    assert residual <= 1e-12
    assert 1.0 < spec.phi <= 2.0


def test_solve_phi_rejects_bad_dimension():
    with pytest.raises(ValueError):
        solve_phi(0)
    with pytest.raises(ValueError):
        make_sequence(0)


def test_make_sequence_rejects_bad_offset():
    with pytest.raises(ValueError):
        make_sequence(4, alpha0=1.0)
    with pytest.raises(ValueError):
        make_sequence(4, alpha0=-0.1)


def test_alpha_is_decreasing_powers():
    spec = make_sequence(8)
    assert len(spec.alpha) == 8
    assert all(a > b for a, b in zip(spec.alpha, spec.alpha[1:]))
    values = spec.alpha_values
    np.testing.assert_allclose(values, spec.phi ** -np.arange(1, 9), rtol=1e-14)


def test_point_zero_is_offset():
    spec = make_sequence(5, alpha0=0.5)
    np.testing.assert_array_equal(point_at(spec, 0), np.full(5, 0.5))
    spec = make_sequence(3, alpha0=0.0)
    np.testing.assert_array_equal(point_at(spec, 0), np.zeros(3))


def test_golden_ratio_first_steps():
    spec = make_sequence(1, alpha0=0.0)
    inv_phi = 2 / (1 + 5 ** 0.5)
    for n in range(1, 20):
        assert abs(point_at(spec, n)[0] - (n * inv_phi) % 1.0) < 1e-12


def test_skip_ahead_matches_stepping():
    spec = make_sequence(64)
    state = state_at(spec, 10 ** 9)
    for _ in range(1000):
        state = advance(state)
    assert state.n == 10 ** 9 + 1000
    assert state.coords == state_at(spec, 10 ** 9 + 1000).coords
    np.testing.assert_array_equal(state.point(), point_at(spec, 10 ** 9 + 1000))


def test_skip_ahead_matches_exact_integers_at_large_n():
    spec = make_sequence(36, alpha0=0.25)
    n = 10 ** 9
    expected = [(spec.alpha0_fixed + n * a) % ONE for a in spec.alpha]
    assert list(state_at(spec, n).coords) == expected


def test_block_rows_match_point_at():
    spec = make_sequence(20)
    start = 10 ** 9 - 3
    block = points_block(spec, start, start + 7)
    assert block.shape == (7, 20)
    for i in range(7):
        np.testing.assert_array_equal(block[i], point_at(spec, start + i))


def test_fixed_block_wraps_mod_one():
    spec = make_sequence(3)
    block = fixed_block(spec, 2 ** 40, 2 ** 40 + 2)
    assert block.dtype == np.uint64
    assert int(block[1, 0]) == (int(block[0, 0]) + spec.alpha[0]) & MASK


def test_points_stay_in_unit_interval():
    spec = make_sequence(32)
    block = points_block(spec, 0, 4096)
    assert np.all(block >= 0.0)
    assert np.all(block < 1.0)


def test_fixed_to_unit_top_of_range_below_one():
    assert fixed_to_unit(np.array([MASK], dtype=np.uint64))[0] < 1.0
    assert to_fixed(0.5) == ONE // 2


def test_negative_index_rejected():
    spec = make_sequence(2)
    with pytest.raises(ValueError):
        point_at(spec, -1)
    with pytest.raises(ValueError):
        state_at(spec, -1)


def test_one_dimensional_sequence_is_equidistributed():
    spec = make_sequence(1, alpha0=0.0)
    u = points_block(spec, 0, 10_000)[:, 0]
    counts, _ = np.histogram(u, bins=10, range=(0.0, 1.0))
    assert counts.min() >= 990
    assert counts.max() <= 1010


def test_plastic_alpha_values():
    spec = make_sequence(2, alpha0=0.5)
    np.testing.assert_allclose(spec.alpha_values, [0.7548776662, 0.5698402910], atol=1e-10)
    assert spec.alpha0 == 0.5


def test_golden_second_point():
    spec = make_sequence(1, alpha0=0.0)
    assert abs(point_at(spec, 1)[0] - 0.61803398874989) < 1e-13
    assert abs(point_at(spec, 2)[0] - 0.23606797749979) < 1e-13


def test_iterated_advance_matches_point_at():
    spec = make_sequence(1, alpha0=0.0)
    state = state_at(spec, 0)
    for _ in range(100_000):
        state = advance(state)
    np.testing.assert_array_equal(state.point(), point_at(spec, 100_000))


def test_advance_wraps_near_one():
    spec = make_sequence(1, alpha0=0.0)
    state = replace(state_at(spec, 0), coords=(MASK,))
    state = advance(state)
    assert state.coords == (spec.alpha[0] - 1,)
    assert 0.0 <= state.point()[0] < 1.0


def test_two_dimensional_grid_counts_beat_pseudorandom():
    n, bins = 102_400, 32
    expected = n / bins ** 2

    def chi_square(points):
        counts, _, _ = np.histogram2d(points[:, 0], points[:, 1], bins=bins, range=[[0, 1], [0, 1]])
        return float(np.sum((counts - expected) ** 2 / expected))

    quasi = chi_square(points_block(make_sequence(2), 0, n))
    pseudo = chi_square(np.random.default_rng(5).random((n, 2)))
    assert quasi < pseudo / 2


def test_two_dimensional_coordinate_means():
    block = points_block(make_sequence(2), 0, 100_000)
    np.testing.assert_allclose(block.mean(axis=0), 0.5, atol=0.005)
