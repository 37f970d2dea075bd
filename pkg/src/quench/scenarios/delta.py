"""
The attractive delta well V(x) = −γ δ(x).

It binds a single state φ0 = √β e^{−β|x|} with β = mγ/ħ². The continuum splits
into an even and an odd channel on k ≥ 0:

    φe(k, x) = √2 (k cos kx − β sin k|x|) / √(β² + k²)
    φo(k, x) = √2 sin kx

A quench to velocity v is governed by the Massey parameter θ = ħv/γ alone, with
θβ = mv/ħ. Every amplitude out of the ground state has a closed form.
"""

from __future__ import annotations

import dataclasses
import logging
import math

import numpy as np

from quench.errors import ConvergenceError
from quench.evolution.abc import IEigenbasis
from quench.evolution.types import (
    BoundAmplitudeSet,
    ContinuumAmplitude,
    ProbabilityBudget,
    QuantumNumbers,
    UnitsConvention,
)
from quench.numerics.quadrature import integrate_adaptive

logger = logging.getLogger(__name__)

# Largest disagreement tolerated between the closed-form and the integrated
# continuum probability.
CONTINUUM_TOL: float = 1e-8

# Extra reach of the default momentum grid, in units of β, beyond 2θβ.
K_MARGIN: float = 80.0

GROUND: QuantumNumbers = (0,)


@dataclasses.dataclass(frozen=True)
class DeltaParams:

    """
    Attributes:
        gamma:      Strength γ > 0 of the well.
        velocity:   Velocity v of the well after the quench.
        units:      Units convention.
    """

    gamma: float = 1.0
    velocity: float = 0.0
    units: UnitsConvention = UnitsConvention()

    def __post_init__(self) -> None:
        if not self.gamma > 0.0:
            raise ValueError("The delta well strength must be positive!")

    @classmethod
    def from_theta(
        cls,
        theta: float,
        gamma: float = 1.0,
        units: UnitsConvention = UnitsConvention(),
    ) -> DeltaParams:
        return cls(gamma=gamma, velocity=theta * gamma / units.hbar, units=units)

    @property
    def beta(self) -> float:
        return self.units.mass * self.gamma / self.units.hbar**2

    @property
    def theta(self) -> float:
        return self.units.hbar * self.velocity / self.gamma

    @property
    def bound_energy(self) -> float:
        return -self.gamma**2 * self.units.mass / (2.0 * self.units.hbar**2)


class DeltaBasis(IEigenbasis):

    """The eigenbasis of one delta well; channels "even" and "odd" on k ≥ 0."""

    def __init__(self, gamma: float = 1.0, units: UnitsConvention = UnitsConvention()):
        if not gamma > 0.0:
            raise ValueError("The delta well strength must be positive!")
        self._gamma = gamma
        self._units = units
        self._beta = units.mass * gamma / units.hbar**2

    @property
    def units(self) -> UnitsConvention:
        return self._units

    @property
    def beta(self) -> float:
        return self._beta

    @property
    def bound_states(self) -> tuple[QuantumNumbers, ...]:
        return (GROUND,)

    def bound_energy(self, quantum_numbers: QuantumNumbers) -> float:
        self._check(quantum_numbers)
        return -self._gamma**2 * self._units.mass / (2.0 * self._units.hbar**2)

    def bound_mode(self, quantum_numbers: QuantumNumbers, x: np.ndarray) -> np.ndarray:
        self._check(quantum_numbers)
        return math.sqrt(self._beta) * np.exp(-self._beta * np.abs(x))

    @property
    def channels(self) -> tuple[str, ...]:
        return ("even", "odd")

    def continuum_mode(self, channel: str, k: np.ndarray, x: np.ndarray) -> np.ndarray:
        k = np.asarray(k, dtype=float)
        x = np.asarray(x, dtype=float)
        if channel == "even":
            return (
                math.sqrt(2.0)
                * (k * np.cos(k * x) - self._beta * np.sin(k * np.abs(x)))
                / np.sqrt(self._beta**2 + k**2)
            )
        if channel == "odd":
            return math.sqrt(2.0) * np.sin(k * x)
        raise ValueError(f"The delta well has no '{channel}' channel!")

    def k_grid(self, velocity: float, count: int) -> np.ndarray:
        wavenumber: float = abs(self._units.mass * velocity / self._units.hbar)
        return np.linspace(0.0, 2.0 * wavenumber + K_MARGIN * self._beta, count)

    @property
    def kinks(self) -> tuple[float, ...]:
        return (0.0,)

    @property
    def decay_length(self) -> float:
        return 1.0 / self._beta

    def potential(self, x: np.ndarray) -> np.ndarray:
        raise ValueError("A delta well cannot be represented on a grid!")

    def velocity_param(self, velocity: float) -> float:
        return self._units.hbar * velocity / self._gamma

    def closed_form_amplitudes(
        self, velocity: float, k_grid: np.ndarray
    ) -> tuple[BoundAmplitudeSet, list[ContinuumAmplitude]]:
        theta: float = self.velocity_param(velocity)
        amplitudes = BoundAmplitudeSet(((GROUND, complex(q11(theta))),), theta)
        continuum: list[ContinuumAmplitude] = [
            ContinuumAmplitude("even", k_grid, p1_even(k_grid, theta, self._beta)),
            ContinuumAmplitude("odd", k_grid, p1_odd(k_grid, theta, self._beta)),
        ]
        return amplitudes, continuum

    def _check(self, quantum_numbers: QuantumNumbers) -> None:
        if tuple(quantum_numbers) != GROUND:
            raise ValueError(f"The delta well has no bound state {quantum_numbers}!")


def delta_eigenmodes(params: DeltaParams) -> DeltaBasis:
    """The eigenbasis of the well described by `params`."""

    return DeltaBasis(params.gamma, params.units)


def q11(theta: float) -> float:
    """Survival amplitude 4 / (θ² + 4) of the bound state."""

    return 4.0 / (theta**2 + 4.0)


def _denominator(k: np.ndarray, theta: float, beta: float) -> np.ndarray:
    return (
        beta**4 * (1.0 + theta**2) ** 2
        + k**4
        - 2.0 * beta**2 * k**2 * (theta**2 - 1.0)
    )


def p1_even(k: np.ndarray | float, theta: float, beta: float = 1.0) -> np.ndarray:
    """
    Amplitude density into the even continuum channel, real for real inputs:

        4√2 β^{7/2} θ² k / (√(β² + k²) [β⁴(1 + θ²)² + k⁴ − 2β²k²(θ² − 1)])
    """

    k = np.asarray(k, dtype=float)
    return (
        4.0
        * math.sqrt(2.0)
        * beta**3.5
        * theta**2
        * k
        / (np.sqrt(beta**2 + k**2) * _denominator(k, theta, beta))
    )


def p1_odd(k: np.ndarray | float, theta: float, beta: float = 1.0) -> np.ndarray:
    """
    Amplitude density into the odd continuum channel, purely imaginary:

        −4i√2 β^{5/2} θ k / [β⁴(1 + θ²)² + k⁴ − 2β²k²(θ² − 1)]
    """

    k = np.asarray(k, dtype=float)
    return -4j * math.sqrt(2.0) * beta**2.5 * theta * k / _denominator(k, theta, beta)


def continuum_probability(theta: float, beta: float = 1.0) -> float:
    """
    ∫ (|P_even|² + |P_odd|²) dk / 2π over k ≥ 0 by adaptive quadrature.

    Raises:
        ConvergenceError:
            The quadrature did not converge.
    """

    def integrand(k: np.ndarray) -> np.ndarray:
        return (
            np.abs(p1_even(k, theta, beta)) ** 2 + np.abs(p1_odd(k, theta, beta)) ** 2
        ) / (2.0 * np.pi)

    # The peak sits near k = θβ.
    result = integrate_adaptive(
        integrand, 0.0, decay="algebraic", scale=beta * max(1.0, abs(theta))
    )
    return float(result.value)


def delta_probabilities(theta: float, *, numerical: bool = False) -> ProbabilityBudget:
    """
    Bound and continuum probabilities after a quench at Massey parameter θ.

    The bound probability is 16 / (θ² + 4)² and the continuum its complement.
    With `numerical=True` the continuum is integrated instead; the integrated
    value is always computed and compared with the closed form.

    Raises:
        ConvergenceError:
            The continuum quadrature did not converge, or its value is further than
            `CONTINUUM_TOL` from the closed form.
    """

    bound: float = q11(theta) ** 2
    closed: float = 1.0 - 16.0 / (theta**2 + 4.0) ** 2
    integrated: float = continuum_probability(theta)
    mismatch: float = abs(integrated - closed)
    if not mismatch <= CONTINUUM_TOL:
        raise ConvergenceError(
            f"The delta continuum at theta={theta:g} integrates to {integrated:.12f}, "
            f"the closed form gives {closed:.12f}!",
            best_estimate=integrated,
            error_estimate=mismatch,
        )
    logger.debug("delta continuum at theta=%g off by %.3e", theta, mismatch)

    return ProbabilityBudget.from_parts(
        [(GROUND, bound)], integrated if numerical else closed
    )
