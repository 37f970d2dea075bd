import math

import numpy as np
import pytest

from quench.evolution.types import (
    CONTINUUM_NORMALIZATION,
    BoundAmplitudeSet,
    ContinuumAmplitude,
    ProbabilityBudget,
    SpatialGrid,
    UnitsConvention,
    WavefunctionFrame,
)


@pytest.mark.parametrize("field", ["hbar", "mass", "length_scale"])
@pytest.mark.parametrize("value", [0.0, -1.0, float("inf"), float("nan")])
def test_units_rejects_bad_fields(field, value):
    with pytest.raises(ValueError):
        UnitsConvention(**{field: value})


def test_units_as_dict():
    assert UnitsConvention(length_scale=2.0).as_dict() == {
        "hbar": 1.0,
        "mass": 1.0,
        "length_scale": 2.0,
    }


def test_centered_grid():
    """This tests the periodic grid: right endpoint excluded, scaled by the units."""

    grid = SpatialGrid.centered(10.0, 100, UnitsConvention(length_scale=2.0))
    assert grid.x_min == -20.0
    assert grid.dx == pytest.approx(0.4)
    assert grid.points[-1] == pytest.approx(20.0 - 0.4)
    assert grid.x_max == pytest.approx(grid.points[-1])
    assert len(grid.points) == 100


@pytest.mark.parametrize(
    "kwargs",
    [
        {"x_min": 0.0, "dx": 0.0, "count": 10},
        {"x_min": 0.0, "dx": 1.0, "count": 1},
    ],
)
def test_grid_validation(kwargs):
    with pytest.raises(ValueError):
        SpatialGrid(**kwargs)


def test_centered_grid_bad_width():
    with pytest.raises(ValueError):
        SpatialGrid.centered(-1.0)


def test_bound_amplitude_set_lookup():
    amplitudes = BoundAmplitudeSet((((2,), 0.6 + 0.0j), ((1,), 0.8j)), 1.0)
    assert amplitudes[(1,)] == 0.8j
    assert len(amplitudes) == 2
    assert [p for _, p in amplitudes.probabilities()] == pytest.approx([0.36, 0.64])
    with pytest.raises(KeyError):
        amplitudes[(3,)]


def test_bound_amplitude_set_rejects_excess():
    """This tests that bound probabilities above one are refused."""

    with pytest.raises(ValueError):
        BoundAmplitudeSet((((0,), 0.9), ((1,), 0.5)), 1.0)


def test_continuum_probability():
    """This tests ∫|A|² dk / 2π on a Gaussian density."""

    k = np.linspace(-20.0, 20.0, 4001)
    values = np.sqrt(2.0 * np.pi) * np.exp(-(k**2) / 2.0) / np.pi**0.25
    amplitude = ContinuumAmplitude("even", k, values)
    assert amplitude.probability() == pytest.approx(1.0, abs=1e-10)
    assert amplitude.normalization == CONTINUUM_NORMALIZATION
    assert not amplitude.values.flags.writeable


def test_continuum_probability_uneven_grid():
    """This tests that the measure follows the stored spacing, not a fixed step."""

    amplitude = ContinuumAmplitude("scattering", np.array([0.0, 1.0, 3.0]), np.ones(3))
    assert amplitude.probability() == pytest.approx(3.0 / (2.0 * np.pi), rel=1e-15)
    assert not hasattr(amplitude, "dk")


@pytest.mark.parametrize(
    "k, values, kwargs",
    [
        ([0.0, 1.0], [1.0, 1.0], {"normalization": "δ(k−k′)"}),
        ([0.0, 1.0, 2.0], [1.0, 1.0], {}),
        ([0.0, 0.0], [1.0, 1.0], {}),
        ([0.0, 1.0], [1.0, np.nan], {}),
        ([0.0], [1.0], {}),
    ],
)
def test_continuum_validation(k, values, kwargs):
    with pytest.raises(ValueError):
        ContinuumAmplitude("even", np.array(k), np.array(values), **kwargs)


def test_frame_norm_and_distance():
    grid = SpatialGrid.centered(20.0, 2048)
    x = grid.points
    frame = WavefunctionFrame(grid, 2.0 * np.exp(-(x**2) / 2.0))
    unit = frame.normalized()
    assert unit.norm() == pytest.approx(1.0, abs=1e-12)
    assert frame.norm() == pytest.approx(4.0 * math.sqrt(math.pi), rel=1e-12)
    assert unit.l2_distance(unit) == 0.0
    assert frame.density()[grid.count // 2] == pytest.approx(4.0)


def test_frame_validation():
    grid = SpatialGrid.centered(1.0, 8)
    with pytest.raises(ValueError):
        WavefunctionFrame(grid, np.zeros(7))
    with pytest.raises(ValueError):
        WavefunctionFrame(grid, np.zeros(8)).normalized()
    with pytest.raises(ValueError):
        WavefunctionFrame(grid, np.zeros(8)).l2_distance(
            WavefunctionFrame(SpatialGrid.centered(2.0, 8), np.zeros(8))
        )


def test_probability_budget():
    budget = ProbabilityBudget.from_parts([((1,), 0.25), ((0,), 0.5)], 0.2)
    assert budget.bound_total == pytest.approx(0.75)
    assert budget.total == pytest.approx(0.95)
    assert budget.defect == pytest.approx(0.05)
