import math

import numpy as np
import pytest

from quench.errors import ConvergenceError
from quench.evolution.spectral import probability_budget
from quench.evolution.types import UnitsConvention
from quench.numerics.quadrature import integrate_line
from quench.scenarios import delta
from quench.scenarios.delta import (
    DeltaBasis,
    DeltaParams,
    continuum_probability,
    delta_eigenmodes,
    delta_probabilities,
    p1_even,
    p1_odd,
    q11,
)

THETAS: list[float] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0]


def test_params_from_theta():
    units = UnitsConvention(hbar=2.0, mass=0.5)
    params = DeltaParams.from_theta(3.0, gamma=0.5, units=units)
    assert params.theta == pytest.approx(3.0)
    assert params.velocity == pytest.approx(0.75)
    assert params.beta == pytest.approx(0.5 * 0.5 / 4.0)
    assert params.bound_energy == pytest.approx(-0.25 * 0.5 / 8.0)


@pytest.mark.parametrize("gamma", [0.0, -1.0])
def test_bad_strength(gamma):
    with pytest.raises(ValueError):
        DeltaParams(gamma=gamma)
    with pytest.raises(ValueError):
        DeltaBasis(gamma)


def test_bound_mode_normalized():
    basis = delta_eigenmodes(DeltaParams(gamma=2.0))
    assert basis.beta == 2.0
    norm = integrate_line(lambda x: basis.bound_mode((0,), x) ** 2, breakpoints=(0.0,))
    assert norm.value == pytest.approx(1.0, abs=1e-11)
    with pytest.raises(ValueError):
        basis.bound_mode((1,), np.zeros(3))


@pytest.mark.parametrize("channel", ["even", "odd"])
def test_continuum_orthogonal_to_bound_state(channel):
    """This tests ∫ φ_k φ_0 dx = 0 in both channels."""

    basis = DeltaBasis(1.0)
    overlap = integrate_line(
        lambda x: basis.continuum_mode(channel, 2.3, x) * basis.bound_mode((0,), x),
        breakpoints=(0.0,),
    )
    assert overlap.value == pytest.approx(0.0, abs=1e-11)


def test_continuum_mode_solves_schrodinger():
    """This tests −½ψ'' = ½k²ψ away from the well and the kink condition at it."""

    basis = DeltaBasis(1.0)
    k, h = 1.7, 1e-4
    x = np.array([-2.0, 0.5, 3.0])
    for channel in basis.channels:
        second = (
            basis.continuum_mode(channel, k, x + h)
            - 2.0 * basis.continuum_mode(channel, k, x)
            + basis.continuum_mode(channel, k, x - h)
        ) / h**2
        np.testing.assert_allclose(
            -second, k**2 * basis.continuum_mode(channel, k, x), atol=1e-5
        )

    # ψ'(0+) − ψ'(0−) = −2β ψ(0) for the even channel.
    jump = (
        basis.continuum_mode("even", k, h) - basis.continuum_mode("even", k, 0.0)
    ) / h - (
        basis.continuum_mode("even", k, 0.0) - basis.continuum_mode("even", k, -h)
    ) / h
    assert jump == pytest.approx(-2.0 * basis.continuum_mode("even", k, 0.0), abs=1e-3)


def test_unknown_channel_and_potential():
    basis = DeltaBasis()
    with pytest.raises(ValueError):
        basis.continuum_mode("scattering", 1.0, 0.0)
    with pytest.raises(ValueError):
        basis.potential(np.zeros(3))


def test_q11():
    assert q11(0.0) == 1.0
    assert q11(2.0) == pytest.approx(0.5)


@pytest.mark.parametrize("theta", THETAS)
def test_closed_form_probabilities(theta):
    """This tests bound 16/(θ² + 4)² with the integrated continuum completing it."""

    budget = delta_probabilities(theta)
    assert budget.bound_total == pytest.approx(16.0 / (theta**2 + 4.0) ** 2, abs=1e-14)
    assert budget.total == pytest.approx(1.0, abs=1e-14)
    assert continuum_probability(theta) == pytest.approx(
        1.0 - 16.0 / (theta**2 + 4.0) ** 2, abs=1e-8
    )


def test_numerical_continuum():
    budget = delta_probabilities(1.0, numerical=True)
    assert budget.continuum == pytest.approx(1.0 - 0.64, abs=1e-8)
    assert budget.defect < 1e-8


@pytest.mark.parametrize("numerical", [False, True])
def test_continuum_mismatch_raises(monkeypatch, numerical):
    """This tests that an integral off the closed form is an error, not a value."""

    monkeypatch.setattr(delta, "continuum_probability", lambda theta: 0.75 + 1e-6)
    with pytest.raises(ConvergenceError) as exc:
        delta_probabilities(2.0, numerical=numerical)

    assert exc.value.best_estimate == 0.75 + 1e-6
    assert exc.value.error_estimate == pytest.approx(1e-6, rel=1e-6)


def test_amplitude_phases():
    """This tests that the even density is real and the odd one imaginary."""

    k = np.linspace(0.0, 5.0, 11)
    assert np.isrealobj(p1_even(k, 1.0))
    assert np.all(np.real(p1_odd(k, 1.0)) == 0.0)
    assert np.all(np.imag(p1_odd(k[1:], 1.0)) < 0.0)


def test_closed_form_amplitudes_on_grid():
    basis = DeltaBasis(1.0)
    amplitudes, continuum = basis.closed_form_amplitudes(
        2.0, basis.k_grid(2.0, 4096)
    )
    assert amplitudes.velocity_param == 2.0
    assert amplitudes[(0,)] == pytest.approx(0.5)
    assert probability_budget(amplitudes, continuum).total == pytest.approx(
        1.0, abs=1e-6
    )


def test_k_grid_reach():
    basis = DeltaBasis(0.5)
    grid = basis.k_grid(3.0, 101)
    assert grid[0] == 0.0
    assert grid[-1] == pytest.approx(2.0 * 3.0 + 80.0 * 0.5)
    assert basis.decay_length == 2.0
    assert basis.velocity_param(3.0) == pytest.approx(6.0)
    assert math.isclose(basis.bound_energy((0,)), -0.125)
