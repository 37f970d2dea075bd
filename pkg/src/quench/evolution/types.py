"""
Value types shared by the spectral machinery and the grid propagator.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Iterable

import numpy as np
from scipy.integrate import trapezoid

# Allowed excess of a total probability over 1 before an amplitude set is
# rejected as malformed.
UNITARITY_TOL: float = 1e-6

# Tolerance on the discrete norm of a normalized frame.
NORM_TOL: float = 1e-10

# Default number of samples of a stored momentum grid.
DEFAULT_K_COUNT: int = 2048

# Default spatial half-width in units of the length scale.
DEFAULT_X_HALF_WIDTH: float = 40.0

# Default number of spatial samples.
DEFAULT_X_COUNT: int = 4096

CONTINUUM_NORMALIZATION: str = "2π·δ(k−k′)"

QuantumNumbers = tuple[int, ...]


@dataclasses.dataclass(frozen=True)
class UnitsConvention:

    """
    Natural units of a run.

    Attributes:
        hbar:           Reduced Planck constant, > 0.
        mass:           Particle (or reduced) mass, > 0.
        length_scale:   The well's length scale (a or a0), > 0.
    """

    hbar: float = 1.0
    mass: float = 1.0
    length_scale: float = 1.0

    def __post_init__(self) -> None:
        for name in ("hbar", "mass", "length_scale"):
            value: float = getattr(self, name)
            if not value > 0.0 or not math.isfinite(value):
                raise ValueError(f"The units field '{name}' must be positive!")

    def as_dict(self) -> dict[str, float]:
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class SpatialGrid:

    """
    A uniform grid x_i = x_min + i * dx for i = 0..count - 1.

    `SpatialGrid.centered` builds the periodic grid used by the split-step
    propagator (right endpoint excluded).
    """

    x_min: float
    dx: float
    count: int

    def __post_init__(self) -> None:
        if self.dx <= 0.0:
            raise ValueError("The grid spacing must be positive!")
        if self.count < 2:
            raise ValueError("A grid needs at least two points!")

    @classmethod
    def centered(
        cls,
        half_width: float = DEFAULT_X_HALF_WIDTH,
        count: int = DEFAULT_X_COUNT,
        units: UnitsConvention | None = None,
    ) -> SpatialGrid:
        scale: float = 1.0 if units is None else units.length_scale
        if half_width <= 0.0:
            raise ValueError("The grid half-width must be positive!")
        return cls(
            x_min=-half_width * scale, dx=2.0 * half_width * scale / count, count=count
        )

    @property
    def points(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.count)

    @property
    def x_max(self) -> float:
        return self.x_min + self.dx * (self.count - 1)


@dataclasses.dataclass(frozen=True)
class BoundAmplitudeSet:

    """
    Amplitudes into the bound states of the moving well.

    Attributes:
        entries:            (quantum numbers, amplitude) pairs.
        velocity_param:     The scenario's dimensionless velocity (theta or kappa).
    """

    entries: tuple[tuple[QuantumNumbers, complex], ...]
    velocity_param: float

    def __post_init__(self) -> None:
        total: float = sum(abs(a) ** 2 for _, a in self.entries)
        if total > 1.0 + UNITARITY_TOL:
            raise ValueError(
                f"Bound probabilities sum to {total:.10f}, more than one!"
            )

    def __getitem__(self, quantum_numbers: QuantumNumbers) -> complex:
        for qn, amplitude in self.entries:
            if qn == tuple(quantum_numbers):
                return amplitude
        raise KeyError(quantum_numbers)

    def __iter__(self) -> Iterable[tuple[QuantumNumbers, complex]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def probabilities(self) -> list[tuple[QuantumNumbers, float]]:
        return [(qn, abs(a) ** 2) for qn, a in self.entries]


@dataclasses.dataclass(frozen=True, eq=False)
class ContinuumAmplitude:

    """
    An amplitude density on a momentum grid for one continuum channel.

    Continuum modes are normalized to 2π·δ(k−k′), so probabilities are integrals
    of |values|^2 with measure dk / 2π.
    """

    channel: str
    k_grid: np.ndarray
    values: np.ndarray
    normalization: str = CONTINUUM_NORMALIZATION

    def __post_init__(self) -> None:
        if self.normalization != CONTINUUM_NORMALIZATION:
            raise ValueError(
                f"Continuum amplitudes are normalized to {CONTINUUM_NORMALIZATION}!"
            )
        k: np.ndarray = np.asarray(self.k_grid, dtype=float)
        values: np.ndarray = np.asarray(self.values, dtype=complex)
        if k.ndim != 1 or k.shape != values.shape:
            raise ValueError("The momentum grid and the values must be matching 1D!")
        if len(k) < 2 or np.any(np.diff(k) <= 0.0):
            raise ValueError("The momentum grid must be strictly increasing!")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"Channel '{self.channel}' holds non-finite amplitudes!")

        k.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "k_grid", k)
        object.__setattr__(self, "values", values)

    def probability(self) -> float:
        """Integral of |values|^2 dk / 2π on the stored grid (trapezoid rule)."""

        return float(trapezoid(np.abs(self.values) ** 2, self.k_grid) / (2.0 * np.pi))


@dataclasses.dataclass(frozen=True, eq=False)
class WavefunctionFrame:

    """Samples of Ψ(x) on a uniform grid at one instant."""

    grid: SpatialGrid
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self) -> None:
        values: np.ndarray = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.count,):
            raise ValueError(
                f"A frame on {self.grid.count} points got {values.shape} values!"
            )
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def norm(self) -> float:
        """Discrete norm Σ|ψ|²·Δx."""

        return float(np.sum(np.abs(self.values) ** 2) * self.grid.dx)

    def normalized(self) -> WavefunctionFrame:
        norm: float = self.norm()
        if norm == 0.0:
            raise ValueError("A vanishing wavefunction cannot be normalized!")
        return WavefunctionFrame(self.grid, self.values / math.sqrt(norm), self.time)

    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def l2_distance(self, other: WavefunctionFrame) -> float:
        """sqrt(Σ|ψ − φ|²·Δx); both frames must share a grid."""

        if self.grid != other.grid:
            raise ValueError("Frames on different grids cannot be compared!")
        squared: float = float(np.sum(np.abs(self.values - other.values) ** 2))
        return math.sqrt(squared * self.grid.dx)


@dataclasses.dataclass(frozen=True)
class ProbabilityBudget:

    """
    Where the probability went after the quench.

    Attributes:
        bound:          (quantum numbers, probability) per bound state.
        continuum:      Total continuum probability over every channel.
        total:          Sum of the above.
        defect:         |total − 1|.
    """

    bound: tuple[tuple[QuantumNumbers, float], ...]
    continuum: float
    total: float
    defect: float

    @classmethod
    def from_parts(
        cls, bound: Iterable[tuple[QuantumNumbers, float]], continuum: float
    ) -> ProbabilityBudget:
        bound = tuple(bound)
        total: float = sum(p for _, p in bound) + continuum
        return cls(
            bound=bound, continuum=continuum, total=total, defect=abs(total - 1.0)
        )

    @property
    def bound_total(self) -> float:
        return sum(p for _, p in self.bound)
