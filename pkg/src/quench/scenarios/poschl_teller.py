"""
Reflectionless Pöschl-Teller wells

    V(x) = −λ(λ + 1) ħ² / (2 m a²) sech²(x / a),    λ = 1, 2, 3, ...

Bound states are φ_j ∝ P_λ^j(tanh(x/a)) with energies −j² ħ² / (2 a² m) for
j = 1..λ; the ground state is j = λ. Continuum modes follow from the plane wave
by the ladder operators (j tanh(x/a) − a d/dx), j = 1..λ, which yields a
polynomial in tanh(x/a) times e^{ikx}; it is normalized to e^{ikx} as x → +∞
(for λ = 1 the sign convention (−tanh + iak)/(1 + iak) is kept instead). The
dimensionless velocity is κ = a m v / ħ.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from quench.evolution.abc import IEigenbasis
from quench.evolution.spectral import bound_amplitudes, decompose
from quench.evolution.types import (
    DEFAULT_K_COUNT,
    BoundAmplitudeSet,
    ContinuumAmplitude,
    ProbabilityBudget,
    QuantumNumbers,
    UnitsConvention,
)
from quench.numerics.quadrature import integrate_line
from quench.numerics.special import assoc_legendre

logger = logging.getLogger(__name__)

# Half-width of the momentum grid in units of 1/a, centred on k = −κ/a.
K_HALF_WIDTH: float = 25.0

# Default κ sweep for the figure data.
SWEEP_KAPPAS: np.ndarray = np.round(np.arange(0.0, 6.0 + 1e-9, 0.01), 10)


@dataclasses.dataclass(frozen=True)
class PTParams:

    """
    Attributes:
        lam:        Integer strength λ >= 1.
        a:          Width a > 0.
        kappa:      Dimensionless velocity κ = a m v / ħ >= 0.
        units:      Units convention.
    """

    lam: int = 1
    a: float = 1.0
    kappa: float = 0.0
    units: UnitsConvention = UnitsConvention()

    def __post_init__(self) -> None:
        if int(self.lam) != self.lam or self.lam < 1:
            raise ValueError("λ must be a positive integer!")
        if not self.a > 0.0:
            raise ValueError("The well width must be positive!")
        if self.kappa < 0.0:
            raise ValueError("κ cannot be negative!")

    @property
    def velocity(self) -> float:
        return self.kappa * self.units.hbar / (self.a * self.units.mass)

    def bound_energy(self, j: int) -> float:
        return -(j**2) * self.units.hbar**2 / (2.0 * self.a**2 * self.units.mass)


def _sech(z: np.ndarray) -> np.ndarray:
    """sech without overflow for large |z|."""

    e: np.ndarray = np.exp(-np.abs(z))
    return 2.0 * e / (1.0 + e * e)


class PoschlTellerBasis(IEigenbasis):

    """
    Eigenbasis of the integer-λ well; one continuum channel "scattering" over all
    real k. The bound-state normalization constants are computed by quadrature on
    construction. The width a is the length scale of the basis' units.
    """

    def __init__(
        self, lam: int = 1, a: float = 1.0, units: UnitsConvention = UnitsConvention()
    ) -> None:
        PTParams(lam=lam, a=a, units=units)
        self._lam = int(lam)
        self._a = a
        self._units = dataclasses.replace(units, length_scale=a)
        self._norms: dict[int, float] = {
            j: self._normalization(j) for j in range(1, self._lam + 1)
        }

    def _normalization(self, j: int) -> float:
        lam, a = self._lam, self._a

        def density(x: np.ndarray) -> np.ndarray:
            return np.asarray(assoc_legendre(lam, j, np.tanh(x / a))) ** 2 / a

        result = integrate_line(density, scale=a / j, abs_tol=1e-14, rel_tol=1e-13)
        return 1.0 / math.sqrt(result.value)

    @property
    def lam(self) -> int:
        return self._lam

    @property
    def a(self) -> float:
        return self._a

    def normalization(self, j: int) -> float:
        """The constant 𝒩_j of φ_j = 𝒩_j / √a · P_λ^j(tanh(x/a))."""

        return self._norms[j]

    @property
    def units(self) -> UnitsConvention:
        return self._units

    @property
    def bound_states(self) -> tuple[QuantumNumbers, ...]:
        return tuple((j,) for j in range(self._lam, 0, -1))

    def bound_energy(self, quantum_numbers: QuantumNumbers) -> float:
        j: int = self._index(quantum_numbers)
        return -(j**2) * self._units.hbar**2 / (2.0 * self._a**2 * self._units.mass)

    def bound_mode(self, quantum_numbers: QuantumNumbers, x: np.ndarray) -> np.ndarray:
        j: int = self._index(quantum_numbers)
        t: np.ndarray = np.tanh(np.asarray(x, dtype=float) / self._a)
        return (
            self._norms[j]
            / math.sqrt(self._a)
            * np.asarray(assoc_legendre(self._lam, j, t))
        )

    @property
    def channels(self) -> tuple[str, ...]:
        return ("scattering",)

    def continuum_mode(self, channel: str, k: np.ndarray, x: np.ndarray) -> np.ndarray:
        if channel != "scattering":
            raise ValueError(f"The Pöschl-Teller well has no '{channel}' channel!")

        k = np.asarray(k, dtype=float)
        x = np.asarray(x, dtype=float)
        ak: np.ndarray = self._a * k
        t: np.ndarray = np.tanh(x / self._a)

        # Coefficients of the tanh polynomial, lowest order first.
        coefficients: list[np.ndarray] = [np.ones_like(ak, dtype=complex)]
        for j in range(1, self._lam + 1):
            n: int = len(coefficients)
            new: list[np.ndarray] = [
                np.zeros_like(coefficients[0]) for _ in range(n + 1)
            ]
            for p, c in enumerate(coefficients):
                new[p + 1] += (j + p) * c
                new[p] -= 1j * ak * c
                if p >= 1:
                    new[p - 1] -= p * c
            coefficients = [c / (j - 1j * ak) for c in new]

        polynomial: np.ndarray = coefficients[-1]
        for c in reversed(coefficients[:-1]):
            polynomial = polynomial * t + c

        if self._lam == 1:
            polynomial = -polynomial * (1.0 - 1j * ak) / (1.0 + 1j * ak)
        return polynomial * np.exp(1j * k * x)

    def k_grid(self, velocity: float, count: int) -> np.ndarray:
        centre: float = -self._units.mass * velocity / self._units.hbar
        half_width: float = K_HALF_WIDTH / self._a
        return np.linspace(centre - half_width, centre + half_width, count)

    @property
    def kinks(self) -> tuple[float, ...]:
        return ()

    @property
    def decay_length(self) -> float:
        return self._a

    def potential(self, x: np.ndarray) -> np.ndarray:
        depth: float = (
            self._lam * (self._lam + 1) * self._units.hbar**2
            / (2.0 * self._units.mass * self._a**2)
        )
        return -depth * _sech(np.asarray(x, dtype=float) / self._a) ** 2

    def velocity_param(self, velocity: float) -> float:
        return self._a * self._units.mass * velocity / self._units.hbar

    def closed_form_amplitudes(
        self, velocity: float, k_grid: np.ndarray
    ) -> tuple[BoundAmplitudeSet, list[ContinuumAmplitude]] | None:
        if self._lam != 1:
            return None

        kappa: float = self.velocity_param(velocity)
        amplitudes = BoundAmplitudeSet((((1,), complex(pt_q11(kappa))),), kappa)
        continuum = [
            ContinuumAmplitude("scattering", k_grid, pt_p1(k_grid, kappa, self._a))
        ]
        return amplitudes, continuum

    def _index(self, quantum_numbers: QuantumNumbers) -> int:
        qn: QuantumNumbers = tuple(quantum_numbers)
        if len(qn) != 1 or not 1 <= qn[0] <= self._lam:
            raise ValueError(f"λ = {self._lam} has no bound state {quantum_numbers}!")
        return qn[0]


def pt_eigenmodes(params: PTParams) -> PoschlTellerBasis:
    """The eigenbasis of the well described by `params`."""

    return PoschlTellerBasis(params.lam, params.a, params.units)


def pt_q11(kappa: float) -> float:
    """
    Survival amplitude of the λ = 1 bound state, (πκ/2) csch(πκ/2), with the
    κ → 0 limit 1.
    """

    half: float = 0.5 * math.pi * kappa
    if abs(half) < 1e-8:
        return 1.0 - half**2 / 6.0
    if half > 700.0:
        return 2.0 * half * math.exp(-half)
    return half / math.sinh(half)


def pt_p1(k: np.ndarray | float, kappa: float, a: float = 1.0) -> np.ndarray:
    """λ = 1 continuum amplitude π√a κ / (√2 (ak + i)) · sech(π(ak + κ)/2)."""

    k = np.asarray(k, dtype=float)
    return (
        math.pi
        * math.sqrt(a)
        * kappa
        / (math.sqrt(2.0) * (a * k + 1j))
        * _sech(0.5 * math.pi * (a * k + kappa))
    )


def pt_q_ground_lambda2(kappa: float) -> float:
    """λ = 2 ground-state survival πκ(κ² + 4) / (8 sinh(πκ/2))."""

    return pt_q11(kappa) * (kappa**2 + 4.0) / 4.0


def pt_q_excited_lambda2(kappa: float) -> float:
    """|Q| of the λ = 2 ground → excited transition, (π/(4√2)) κ(1 + κ²) sech(πκ/2)."""

    return (
        math.pi / (4.0 * math.sqrt(2.0)) * kappa * (1.0 + kappa**2)
        * float(_sech(0.5 * math.pi * kappa))
    )


def pt_amplitudes_lambda2(
    kappa: float,
    a: float = 1.0,
    *,
    units: UnitsConvention = UnitsConvention(),
    k_count: int = DEFAULT_K_COUNT,
) -> tuple[BoundAmplitudeSet, list[ContinuumAmplitude]]:
    """
    Amplitudes of a λ = 2 quench from the ground state by numerical overlaps.

    Bound entries are keyed (2,) for the ground state and (1,) for the excited
    state.

    Raises:
        ConvergenceError:
            An overlap did not converge.
    """

    params = PTParams(lam=2, a=a, kappa=kappa, units=units)
    basis: PoschlTellerBasis = pt_eigenmodes(params)
    return decompose((2,), basis, params.velocity, k_count=k_count)


def pt_resonance_kappa(lam: int, mu: int) -> float:
    """κ = √(λ² − μ²) at which the λ → μ transition is strongest."""

    if not 1 <= mu < lam:
        raise ValueError(f"The resonance needs 1 <= μ < λ, got λ={lam}, μ={mu}!")
    return math.sqrt(lam**2 - mu**2)


def pt_transition_probability(
    kappa: float,
    lam: int,
    mu: int,
    a: float = 1.0,
    *,
    basis: PoschlTellerBasis | None = None,
) -> float:
    """|⟨μ|ground⟩|² after a quench at κ, from the numerical bound overlaps."""

    basis = basis or PoschlTellerBasis(lam, a)
    velocity: float = kappa * basis.units.hbar / (basis.a * basis.units.mass)
    return abs(bound_amplitudes((lam,), basis, velocity)[(mu,)]) ** 2


def pt_excitation_peak(
    lam: int = 2,
    mu: int = 1,
    kappas: Sequence[float] | None = None,
    *,
    refine: bool = False,
) -> float:
    """
    κ maximizing the λ → μ transition probability over a κ grid (spacing 0.01 on
    [0, 6] by default), optionally refined by a bounded scalar search around the
    grid maximum.
    """

    grid: np.ndarray = SWEEP_KAPPAS if kappas is None else np.asarray(kappas)
    basis = PoschlTellerBasis(lam)
    probabilities: np.ndarray = np.array(
        [pt_transition_probability(k, lam, mu, basis=basis) for k in grid]
    )
    best: int = int(np.argmax(probabilities))
    if not refine:
        return float(grid[best])

    lo: float = float(grid[max(best - 1, 0)])
    hi: float = float(grid[min(best + 1, len(grid) - 1)])
    found = minimize_scalar(
        lambda k: -pt_transition_probability(k, lam, mu, basis=basis),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-8},
    )
    return float(found.x)


def pt_probability_sweep(
    lam: int, kappas: Sequence[float] | None = None, a: float = 1.0
) -> list[tuple[float, ProbabilityBudget]]:
    """
    Bound probabilities and their continuum complement for every κ, the data of
    the survival-versus-velocity figure. λ = 1 uses the closed form; other λ use
    the numerical bound overlaps.
    """

    grid: np.ndarray = SWEEP_KAPPAS if kappas is None else np.asarray(kappas)
    rows: list[tuple[float, ProbabilityBudget]] = []
    basis = PoschlTellerBasis(lam, a)
    for kappa in grid:
        if lam == 1:
            bound = [((1,), pt_q11(float(kappa)) ** 2)]
        else:
            velocity: float = float(kappa) * basis.units.hbar / (a * basis.units.mass)
            bound = bound_amplitudes((lam,), basis, velocity).probabilities()

        total: float = sum(p for _, p in bound)
        rows.append((float(kappa), ProbabilityBudget.from_parts(bound, 1.0 - total)))

    logger.debug("λ=%d sweep over %d values of κ", lam, len(grid))
    return rows
