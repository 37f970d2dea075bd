"""
A harmonic trap V(x) = m ω² x² / 2 that suddenly moves with velocity v.

With κ = m v² / (2 ħ ω) the amplitudes out of the ground state are

    Q_0n(κ) = (−i)^n e^{−κ/2} κ^{n/2} / √(n!)

built here from Q_00 = e^{−κ/2} by the ladder recursion Q_0n = −i √(κ/n) Q_0,n−1.
The transition probabilities form a Poisson distribution with mean κ; at κ = n
the levels n and n − 1 are exactly equally populated.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.stats import poisson

from quench.errors import TruncationError
from quench.evolution.abc import IEigenbasis
from quench.evolution.types import ProbabilityBudget, QuantumNumbers, UnitsConvention
from quench.numerics.special import hermite

logger = logging.getLogger(__name__)

# Largest probability allowed beyond the truncation level.
TAIL_TOL: float = 1e-12

# Extra Gauss-Hermite nodes on top of the level n.
EXTRA_NODES: int = 80


def default_n_max(kappa: float) -> int:
    """Truncation level κ + 20√κ + 30, enough for a tail below 1e-12."""

    return int(math.ceil(kappa + 20.0 * math.sqrt(kappa) + 30.0))


@dataclasses.dataclass(frozen=True)
class SHOParams:

    """
    Attributes:
        omega:      Trap frequency ω > 0.
        kappa:      κ = m v² / (2 ħ ω) >= 0.
        n_max:      Highest level kept; `default_n_max(kappa)` when None.
        units:      Units convention.
    """

    omega: float = 1.0
    kappa: float = 0.0
    n_max: int | None = None
    units: UnitsConvention = UnitsConvention()

    def __post_init__(self) -> None:
        if not self.omega > 0.0:
            raise ValueError("The trap frequency must be positive!")
        if self.kappa < 0.0:
            raise ValueError("κ cannot be negative!")
        if self.n_max is None:
            object.__setattr__(self, "n_max", default_n_max(self.kappa))
        elif self.n_max < 1:
            raise ValueError("n_max must be at least 1!")

    @property
    def velocity(self) -> float:
        units: UnitsConvention = self.units
        return math.sqrt(2.0 * self.kappa * units.hbar * self.omega / units.mass)

    @property
    def oscillator_length(self) -> float:
        return math.sqrt(self.units.hbar / (self.units.mass * self.omega))

    def energy(self, n: int) -> float:
        return self.units.hbar * self.omega * (n + 0.5)


class SHOBasis(IEigenbasis):

    """Oscillator levels 0..n_max as an eigenbasis with no continuum."""

    def __init__(
        self,
        omega: float = 1.0,
        n_max: int = 30,
        units: UnitsConvention = UnitsConvention(),
    ) -> None:
        self._params = SHOParams(omega=omega, n_max=n_max, units=units)

    @property
    def units(self) -> UnitsConvention:
        return self._params.units

    @property
    def bound_states(self) -> tuple[QuantumNumbers, ...]:
        return tuple((n,) for n in range(self._params.n_max + 1))

    def bound_energy(self, quantum_numbers: QuantumNumbers) -> float:
        return self._params.energy(self._level(quantum_numbers))

    def bound_mode(self, quantum_numbers: QuantumNumbers, x: np.ndarray) -> np.ndarray:
        level: int = self._level(quantum_numbers)
        length: float = self._params.oscillator_length
        xi: np.ndarray = np.asarray(x, dtype=float) / length

        # Normalized Hermite functions by their own recurrence, no factorials.
        previous: np.ndarray = np.zeros_like(xi)
        current: np.ndarray = np.pi**-0.25 * np.exp(-0.5 * xi**2)
        for n in range(1, level + 1):
            previous, current = current, (
                math.sqrt(2.0 / n) * xi * current - math.sqrt((n - 1) / n) * previous
            )
        return current / math.sqrt(length)

    @property
    def channels(self) -> tuple[str, ...]:
        return ()

    def continuum_mode(self, channel: str, k: np.ndarray, x: np.ndarray) -> np.ndarray:
        raise ValueError("The harmonic trap has no continuum!")

    def k_grid(self, velocity: float, count: int) -> np.ndarray:
        return np.empty(0)

    @property
    def kinks(self) -> tuple[float, ...]:
        return ()

    @property
    def decay_length(self) -> float:
        return self._params.oscillator_length

    def potential(self, x: np.ndarray) -> np.ndarray:
        return (
            0.5
            * self.units.mass
            * self._params.omega**2
            * np.asarray(x, dtype=float) ** 2
        )

    def velocity_param(self, velocity: float) -> float:
        omega: float = self._params.omega
        return self.units.mass * velocity**2 / (2.0 * self.units.hbar * omega)

    def _level(self, quantum_numbers: QuantumNumbers) -> int:
        qn: QuantumNumbers = tuple(quantum_numbers)
        if len(qn) != 1 or not 0 <= qn[0] <= self._params.n_max:
            raise ValueError(
                f"Level {quantum_numbers} is outside 0..{self._params.n_max}!"
            )
        return qn[0]


def sho_amplitudes(kappa: float, n_max: int) -> np.ndarray:
    """Q_00..Q_0,n_max by the ladder recursion."""

    if kappa < 0.0:
        raise ValueError("κ cannot be negative!")
    if n_max < 0:
        raise ValueError("n_max cannot be negative!")

    amplitudes: np.ndarray = np.empty(n_max + 1, dtype=complex)
    amplitudes[0] = math.exp(-0.5 * kappa)
    for n in range(1, n_max + 1):
        amplitudes[n] = -1j * math.sqrt(kappa / n) * amplitudes[n - 1]
    return amplitudes


def sho_amplitude(n: int, kappa: float) -> complex:
    """
    Q_0n(κ) = (−i)^n e^{−κ/2} κ^{n/2} / √(n!).

    Example:
        ```py
        >>> sho_amplitude(0, 2.0)
        (0.36787944117144233+0j)
        ```
    """

    return complex(sho_amplitudes(kappa, n)[n])


def sho_tail(kappa: float, n_max: int) -> float:
    """Probability Σ_{n > n_max} |Q_0n|², the Poisson survival function."""

    return float(poisson.sf(n_max, kappa))


def sho_probability_spectrum(
    kappa: float, n_max: int | None = None, *, tail_tol: float = TAIL_TOL
) -> ProbabilityBudget:
    """
    |Q_0n|² for n = 0..n_max; the continuum entry is zero.

    Raises:
        TruncationError:
            More than `tail_tol` lies beyond `n_max`.
    """

    n_max = default_n_max(kappa) if n_max is None else n_max
    tail: float = sho_tail(kappa, n_max)
    if tail > tail_tol:
        suggested: int = int(poisson.isf(tail_tol, kappa)) + 1
        raise TruncationError(
            f"Truncating at n = {n_max} loses {tail:.3e} of the probability at "
            f"κ = {kappa}; use n_max >= {suggested}!",
            tail=tail,
            suggested_n_max=suggested,
        )

    probabilities: np.ndarray = np.abs(sho_amplitudes(kappa, n_max)) ** 2
    return ProbabilityBudget.from_parts(
        [((n,), float(p)) for n, p in enumerate(probabilities)], 0.0
    )


def sho_resonance_check(n: int) -> tuple[float, float]:
    """
    Locate the maximum of |Q_0n(κ)|² numerically and measure how equal the levels
    n and n − 1 are at κ = n.

    Returns:
        argmax_kappa:
            κ maximizing |Q_0n(κ)|², expected n.
        equality_defect:
            ||Q_0n(n)|² − |Q_0,n−1(n)|²|.
    """

    if n < 1:
        raise ValueError("The resonance check needs n >= 1!")

    # The log of |Q_0n|² is smooth and unimodal in κ.
    found = minimize_scalar(
        lambda k: -math.log(abs(sho_amplitude(n, k)) ** 2),
        bounds=(1e-12, 4.0 * n + 10.0),
        method="bounded",
        options={"xatol": 1e-10},
    )
    amplitudes: np.ndarray = sho_amplitudes(float(n), n)
    defect: float = abs(abs(amplitudes[n]) ** 2 - abs(amplitudes[n - 1]) ** 2)
    return float(found.x), defect


def sho_overlap_quadrature(n: int, kappa: float, nodes: int | None = None) -> complex:
    """
    Q_0n by Gauss-Hermite quadrature of ∫ e^{−i √(2κ) ξ} ψ_n(ξ) ψ_0(ξ) dξ, an
    evaluation path independent of the recursion.
    """

    if n < 0 or kappa < 0.0:
        raise ValueError("Need n >= 0 and κ >= 0!")

    xi, weights = np.polynomial.hermite.hermgauss(nodes or n + EXTRA_NODES)
    wavenumber: float = math.sqrt(2.0 * kappa)
    norm: float = math.sqrt(math.pi * 2.0**n * math.factorial(n))
    values: np.ndarray = (
        np.exp(-1j * wavenumber * xi) * np.asarray(hermite(n, xi)) / norm
    )
    return complex(np.sum(weights * values))


def sho_spectrum_sweep(kappas: Sequence[float], levels: Sequence[int]) -> np.ndarray:
    """Table of |Q_0n(κ)|², one row per κ and one column per level n."""

    top: int = max(levels)
    table: np.ndarray = np.empty((len(kappas), len(levels)))
    for row, kappa in enumerate(kappas):
        probabilities: np.ndarray = np.abs(sho_amplitudes(float(kappa), top)) ** 2
        table[row] = probabilities[list(levels)]
    return table
