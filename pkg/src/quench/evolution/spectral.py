"""
Spectral treatment of a sudden quench.

At t = 0 the well starts moving with velocity v. Its eigenmodes are the static
ones, boosted:

    ψ(x, t) = exp(i m v x / ħ − i m v² t / 2ħ) φ(x − v t) exp(−i E t / ħ)

The state just after the quench is still the initial Φ(x), so its amplitudes in
the moving basis are overlaps with the boosted modes at t = 0,

    a_j  = ∫ exp(−i m v x / ħ) φ_j*(x) Φ(x) dx
    b(k) = ∫ exp(−i m v x / ħ) φ_k*(x) Φ(x) dx,

and the state at any later time is

    Ψ(x, t) = Σ a_j ψ_j(x, t) + Σ_channels ∫ b(k) ψ_k(x, t) dk/2π.
"""

import logging
import math
from typing import Callable, Mapping

import numpy as np

from quench.errors import ResolutionError
from quench.evolution.abc import IEigenbasis
from quench.evolution.types import (
    DEFAULT_K_COUNT,
    BoundAmplitudeSet,
    ContinuumAmplitude,
    ProbabilityBudget,
    QuantumNumbers,
    SpatialGrid,
    UnitsConvention,
    WavefunctionFrame,
)
from quench.numerics.quadrature import integrate_line

logger = logging.getLogger(__name__)

# Largest L² distance between an initial state and its t = 0 reconstruction.
RECONSTRUCTION_TOL: float = 1e-6

# Largest deviation of the initial state's norm from one accepted by `decompose`.
INITIAL_NORM_TOL: float = 1e-6

# Half-width of the overlap domain in decay lengths of the ground state.
SUPPORT_DECAYS: float = 40.0

# Number of momenta handled per vectorized block.
K_CHUNK: int = 256

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(24)

Mode = Callable[[np.ndarray], np.ndarray]
MovingMode = Callable[[np.ndarray, float], np.ndarray]
InitialState = QuantumNumbers | Mode | WavefunctionFrame


def boost_mode(
    mode: Mode, energy: float, velocity: float, units: UnitsConvention
) -> MovingMode:
    """
    Turn a static eigenmode φ with energy E into a solution of the moving-well
    Schrödinger equation.

    Args:
        mode:
            The static eigenmode, vectorized over x.
        energy:
            Its energy.
        velocity:
            Velocity of the well.
        units:
            Units convention supplying ħ and m.

    Returns:
        moving_mode:
            (x, t) ↦ exp(i m v x/ħ − i m v² t/2ħ) φ(x − v t) exp(−i E t/ħ).
    """

    wavenumber: float = units.mass * velocity / units.hbar

    def moving(x: np.ndarray, t: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        phase: np.ndarray = wavenumber * x - (
            0.5 * units.mass * velocity**2 + energy
        ) * t / units.hbar
        return np.exp(1j * phase) * mode(x - velocity * t)

    return moving


def _composite_rule(
    lo: float, hi: float, kinks: tuple[float, ...], panel_width: float
) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights on [lo, hi], split at kinks."""

    edges: list[float] = sorted({lo, hi, *(k for k in kinks if lo < k < hi)})
    nodes: list[np.ndarray] = []
    weights: list[np.ndarray] = []
    for a, b in zip(edges[:-1], edges[1:]):
        panels: int = max(1, math.ceil((b - a) / panel_width))
        cuts: np.ndarray = np.linspace(a, b, panels + 1)
        half: np.ndarray = 0.5 * np.diff(cuts)
        mid: np.ndarray = 0.5 * (cuts[1:] + cuts[:-1])
        nodes.append((mid[:, None] + half[:, None] * _NODES[None, :]).ravel())
        weights.append((half[:, None] * _WEIGHTS[None, :]).ravel())

    return np.concatenate(nodes), np.concatenate(weights)


def _sampled_initial(
    initial: InitialState,
    basis: IEigenbasis,
    velocity: float,
    k_grid: np.ndarray,
    support: float | None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nodes, weights and samples of exp(−i m v x/ħ) Φ(x) for the overlaps."""

    if isinstance(initial, WavefunctionFrame):
        x: np.ndarray = initial.grid.points
        w: np.ndarray = np.full(x.shape, initial.grid.dx)
        values: np.ndarray = np.asarray(initial.values)
    else:
        mode: Mode = _as_mode(initial, basis)
        half_width: float = (
            SUPPORT_DECAYS * basis.decay_length if support is None else support
        )
        frequency: float = abs(basis.units.mass * velocity / basis.units.hbar)
        if len(k_grid):
            frequency += float(np.max(np.abs(k_grid)))
        panel_width: float = min(basis.decay_length, 20.0 / (frequency + 1.0))
        x, w = _composite_rule(-half_width, half_width, basis.kinks, panel_width)
        values = np.asarray(mode(x), dtype=complex)

    wavenumber: float = basis.units.mass * velocity / basis.units.hbar
    return x, w, np.exp(-1j * wavenumber * x) * values


def _as_mode(initial: QuantumNumbers | Mode, basis: IEigenbasis) -> Mode:
    if callable(initial):
        return initial

    quantum_numbers: QuantumNumbers = tuple(initial)
    if quantum_numbers not in basis.bound_states:
        raise ValueError(f"{quantum_numbers} is not a bound state of the basis!")
    return lambda x: basis.bound_mode(quantum_numbers, x)


def _bound_overlap(
    mode: Mode, quantum_numbers: QuantumNumbers, basis: IEigenbasis, velocity: float
) -> complex:
    wavenumber: float = basis.units.mass * velocity / basis.units.hbar

    def integrand(x: np.ndarray) -> np.ndarray:
        return (
            np.exp(-1j * wavenumber * x)
            * np.conj(basis.bound_mode(quantum_numbers, x))
            * mode(x)
        )

    result = integrate_line(
        integrand, breakpoints=basis.kinks or (0.0,), scale=basis.decay_length
    )
    return complex(result.value)


def _continuum_overlaps(
    basis: IEigenbasis,
    channel: str,
    k_grid: np.ndarray,
    x: np.ndarray,
    weighted: np.ndarray,
) -> np.ndarray:
    values: np.ndarray = np.empty(len(k_grid), dtype=complex)
    for start in range(0, len(k_grid), K_CHUNK):
        k: np.ndarray = k_grid[start : start + K_CHUNK]
        modes: np.ndarray = basis.continuum_mode(channel, k[:, None], x[None, :])
        values[start : start + K_CHUNK] = np.conj(modes) @ weighted

    return values


def bound_amplitudes(
    initial: QuantumNumbers | Mode, basis: IEigenbasis, velocity: float
) -> BoundAmplitudeSet:
    """
    Only the bound amplitudes a_j of `decompose`, each by adaptive quadrature over
    the whole line.

    Raises:
        ConvergenceError:
            An overlap did not converge.
    """

    mode: Mode = _as_mode(initial, basis)
    entries = tuple(
        (qn, _bound_overlap(mode, qn, basis, velocity)) for qn in basis.bound_states
    )
    return BoundAmplitudeSet(entries, basis.velocity_param(velocity))


def decompose(
    initial: InitialState,
    basis: IEigenbasis,
    velocity: float,
    *,
    k_grid: np.ndarray | None = None,
    k_count: int = DEFAULT_K_COUNT,
    support: float | None = None,
) -> tuple[BoundAmplitudeSet, list[ContinuumAmplitude]]:
    """
    Decompose the state present at the quench in the basis of the moving well.

    Args:
        initial:
            Quantum numbers of a static bound state, a normalized vectorized
            callable Φ(x) or a sampled frame.
        basis:
            The scenario's eigenbasis.
        velocity:
            Velocity of the well after the quench.
        k_grid:
            Momentum grid of the continuum amplitudes; the basis default grid of
            `k_count` points when omitted.
        k_count:
            Size of the default grid.
        support:
            Half-width of the overlap domain for a callable Φ; defaults to
            `SUPPORT_DECAYS` decay lengths of the ground state.

    Returns:
        amplitudes:
            The bound amplitudes a_j.
        continuum:
            One amplitude density b(k) per continuum channel.

    Raises:
        ValueError:
            The initial state is unknown to the basis or not normalized!
        ConvergenceError:
            A bound-state overlap did not converge.
    """

    grid: np.ndarray = (
        basis.k_grid(velocity, k_count) if k_grid is None else np.asarray(k_grid)
    )

    x, w, weighted = _sampled_initial(initial, basis, velocity, grid, support)
    norm: float = float(np.sum(w * np.abs(weighted) ** 2))
    if abs(norm - 1.0) > INITIAL_NORM_TOL:
        raise ValueError(f"The initial state has norm {norm:.8f}, not one!")

    if isinstance(initial, WavefunctionFrame):
        entries = tuple(
            (qn, complex(np.sum(w * np.conj(basis.bound_mode(qn, x)) * weighted)))
            for qn in basis.bound_states
        )
        amplitudes = BoundAmplitudeSet(entries, basis.velocity_param(velocity))
    else:
        amplitudes = bound_amplitudes(initial, basis, velocity)

    continuum: list[ContinuumAmplitude] = [
        ContinuumAmplitude(
            channel=channel,
            k_grid=grid,
            values=_continuum_overlaps(basis, channel, grid, x, w * weighted),
        )
        for channel in basis.channels
    ]

    logger.debug(
        "decomposed onto %d bound states and %d channels of %d momenta",
        len(amplitudes),
        len(continuum),
        len(grid),
    )
    return amplitudes, continuum


def decompose_general(
    initial: InitialState | Mapping[QuantumNumbers, complex],
    basis: IEigenbasis,
    velocity: float,
    **options,
) -> tuple[BoundAmplitudeSet, list[ContinuumAmplitude]]:
    """
    `decompose` for an arbitrary, possibly non-stationary, initial state: a
    superposition {quantum numbers: coefficient} of static bound states, or any
    callable or frame. The state is normalized before the overlaps are taken.
    """

    if isinstance(initial, Mapping):
        coefficients: dict[QuantumNumbers, complex] = {
            tuple(qn): complex(c) for qn, c in initial.items()
        }
        unknown = [qn for qn in coefficients if qn not in basis.bound_states]
        if unknown:
            raise ValueError(f"{unknown} are not bound states of the basis!")
        scale: float = math.sqrt(sum(abs(c) ** 2 for c in coefficients.values()))
        if scale == 0.0:
            raise ValueError("An empty superposition cannot be decomposed!")

        def superposition(x: np.ndarray) -> np.ndarray:
            return sum(
                c / scale * basis.bound_mode(qn, x) for qn, c in coefficients.items()
            )

        return decompose(superposition, basis, velocity, **options)

    if isinstance(initial, WavefunctionFrame):
        return decompose(initial.normalized(), basis, velocity, **options)

    if callable(initial):
        x, w, weighted = _sampled_initial(
            initial, basis, 0.0, np.empty(0), options.get("support")
        )
        norm: float = math.sqrt(float(np.sum(w * np.abs(weighted) ** 2)))
        if norm == 0.0:
            raise ValueError("A vanishing initial state cannot be decomposed!")

        def normalized(x: np.ndarray) -> np.ndarray:
            return initial(x) / norm

        return decompose(normalized, basis, velocity, **options)

    return decompose(initial, basis, velocity, **options)


def reconstruct(
    amplitudes: BoundAmplitudeSet,
    continuum: list[ContinuumAmplitude],
    basis: IEigenbasis,
    velocity: float,
    t: float,
    grid: SpatialGrid,
    *,
    initial: WavefunctionFrame | None = None,
    tol: float = RECONSTRUCTION_TOL,
) -> WavefunctionFrame:
    """
    Assemble Ψ(x, t) from its amplitudes in the moving basis.

    The momentum integrals use the trapezoid rule on the stored grids with
    measure dk/2π; the stored grid spacing bounds the time and distance over
    which the frame is free of periodic images (2π / dk).

    Without `initial` the amplitudes are trusted as given. With it, the t = 0
    round trip of `verify_round_trip` runs first.

    Raises:
        ResolutionError:
            `initial` is given and the t = 0 reconstruction is further than `tol`
            from it.
    """

    if initial is not None:
        verify_round_trip(initial, amplitudes, continuum, basis, velocity, tol)

    x: np.ndarray = grid.points
    units: UnitsConvention = basis.units
    values: np.ndarray = np.zeros(grid.count, dtype=complex)
    for qn, amplitude in amplitudes:
        if amplitude == 0.0:
            continue
        moving: MovingMode = boost_mode(
            lambda s, qn=qn: basis.bound_mode(qn, s),
            basis.bound_energy(qn),
            velocity,
            units,
        )
        values += amplitude * moving(x, t)

    shifted: np.ndarray = x - velocity * t
    frame_phase: np.ndarray = np.exp(
        1j
        * (units.mass * velocity * x - 0.5 * units.mass * velocity**2 * t)
        / units.hbar
    )
    for channel in continuum:
        k_all: np.ndarray = channel.k_grid
        dk: np.ndarray = np.diff(k_all)
        trapezoid: np.ndarray = np.zeros(len(k_all))
        trapezoid[:-1] += 0.5 * dk
        trapezoid[1:] += 0.5 * dk
        weights: np.ndarray = (
            trapezoid
            * channel.values
            * np.exp(-1j * basis.continuum_energy(k_all) * t / units.hbar)
            / (2.0 * np.pi)
        )
        for start in range(0, len(k_all), K_CHUNK):
            block = slice(start, start + K_CHUNK)
            modes: np.ndarray = basis.continuum_mode(
                channel.channel, k_all[block][:, None], shifted[None, :]
            )
            values += frame_phase * (weights[block] @ modes)

    return WavefunctionFrame(grid=grid, values=values, time=t)


def probability_budget(
    amplitudes: BoundAmplitudeSet, continuum: list[ContinuumAmplitude]
) -> ProbabilityBudget:
    """Bound probabilities |a_j|² and the continuum probability Σ ∫|b|² dk/2π."""

    return ProbabilityBudget.from_parts(
        amplitudes.probabilities(), sum(c.probability() for c in continuum)
    )


def verify_round_trip(
    initial: WavefunctionFrame,
    amplitudes: BoundAmplitudeSet,
    continuum: list[ContinuumAmplitude],
    basis: IEigenbasis,
    velocity: float,
    tol: float = RECONSTRUCTION_TOL,
) -> float:
    """
    Reconstruct at t = 0 and compare with the initial frame.

    Returns:
        defect:
            The L² distance between the two.

    Raises:
        ResolutionError:
            The defect exceeds `tol`; the momentum grid is too coarse or short.
    """

    frame: WavefunctionFrame = reconstruct(
        amplitudes, continuum, basis, velocity, 0.0, initial.grid
    )
    defect: float = frame.l2_distance(initial)
    if defect > tol:
        raise ResolutionError(
            f"The t = 0 reconstruction is {defect:.3e} from the initial state "
            f"(tolerance {tol:.1e})!",
            defect=defect,
        )

    logger.debug("round trip defect %.3e", defect)
    return defect
