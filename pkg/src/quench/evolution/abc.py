from __future__ import annotations

import abc

import numpy as np

from quench.evolution.types import (
    BoundAmplitudeSet,
    ContinuumAmplitude,
    QuantumNumbers,
    UnitsConvention,
)


class IEigenbasis(metaclass=abc.ABCMeta):

    """This is the interface every one-dimensional scenario eigenbasis implements
    (for example [`DeltaBasis`][quench.scenarios.delta.DeltaBasis])."""

    @property
    @abc.abstractmethod
    def units(self) -> UnitsConvention:
        """This gets the units convention of the basis."""

        ...

    @property
    @abc.abstractmethod
    def bound_states(self) -> tuple[QuantumNumbers, ...]:
        """This gets the quantum numbers of the bound states, ground state first."""

        ...

    @abc.abstractmethod
    def bound_energy(self, quantum_numbers: QuantumNumbers) -> float:
        """This gets the energy of a bound state."""

        ...

    @abc.abstractmethod
    def bound_mode(self, quantum_numbers: QuantumNumbers, x: np.ndarray) -> np.ndarray:
        """This evaluates a normalized static bound eigenmode on `x`."""

        ...

    @property
    @abc.abstractmethod
    def channels(self) -> tuple[str, ...]:
        """This gets the labels of the continuum channels (empty when there is no
        continuum)."""

        ...

    @abc.abstractmethod
    def continuum_mode(self, channel: str, k: np.ndarray, x: np.ndarray) -> np.ndarray:
        """This evaluates static continuum modes, normalized to 2π·δ(k−k′);
        `k` and `x` broadcast against each other."""

        ...

    def continuum_energy(self, k: np.ndarray) -> np.ndarray:
        """This gets the energy ħ²k²/2m of a continuum mode."""

        return self.units.hbar**2 * np.asarray(k) ** 2 / (2.0 * self.units.mass)

    @abc.abstractmethod
    def k_grid(self, velocity: float, count: int) -> np.ndarray:
        """This builds the momentum grid on which continuum amplitudes are stored."""

        ...

    @property
    @abc.abstractmethod
    def kinks(self) -> tuple[float, ...]:
        """This gets the positions where the eigenmodes are not smooth."""

        ...

    @property
    @abc.abstractmethod
    def decay_length(self) -> float:
        """This gets the length over which the ground state falls off by e."""

        ...

    @abc.abstractmethod
    def potential(self, x: np.ndarray) -> np.ndarray:
        """This evaluates the static potential on `x`."""

        ...

    @abc.abstractmethod
    def velocity_param(self, velocity: float) -> float:
        """This converts a velocity to the scenario's dimensionless parameter."""

        ...

    def closed_form_amplitudes(
        self, velocity: float, k_grid: np.ndarray
    ) -> tuple[BoundAmplitudeSet, list[ContinuumAmplitude]] | None:
        """This gets the analytic amplitudes of a quench from the ground state, or
        None when the scenario has none."""

        return None
