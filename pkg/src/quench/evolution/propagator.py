"""
Split-step Fourier propagation on a periodic grid, an oracle for the spectral
reconstruction that shares none of its code.
"""

import logging
import math
from typing import Callable

import numpy as np

from quench.errors import DomainTooSmallError
from quench.evolution.types import UnitsConvention, WavefunctionFrame

logger = logging.getLogger(__name__)

# Largest |Ψ| allowed on the outer edge of the grid.
BOUNDARY_TOL: float = 1e-8

# Default time step in natural units.
DEFAULT_DT: float = 1e-3

# Fraction of the grid at either end that counts as the boundary.
EDGE_FRACTION: float = 0.01

# Steps between boundary checks.
CHECK_EVERY: int = 100

Potential = Callable[[np.ndarray], np.ndarray]


class SplitStepPropagator:

    """
    Strang splitting for i ħ ∂Ψ/∂t = −ħ²/2m ∂²Ψ/∂x² + V(x − v t) Ψ.

    One step of length dt is a half kinetic step in momentum space, a full
    potential step with the well at its position at mid-step, and another half
    kinetic step, which keeps the scheme second order in dt for the moving well.
    Stability heuristic: dt · max|V| / ħ and dt · ħ k_max² / 2m should both stay
    well below π, with k_max = π / dx.
    """

    def __init__(
        self,
        potential: Potential,
        velocity: float,
        *,
        dt: float = DEFAULT_DT,
        units: UnitsConvention = UnitsConvention(),
        boundary_tol: float = BOUNDARY_TOL,
    ) -> None:
        """
        Constructor...

        Args:
            potential:      The static potential V(ξ), vectorized.
            velocity:       Velocity v of the well.
            dt:             Time step, > 0.
            units:          Units convention supplying ħ and m.
            boundary_tol:   Largest |Ψ| tolerated at the grid edges.
        """

        if dt <= 0.0:
            raise ValueError("The time step must be positive!")

        self._potential = potential
        self._velocity = velocity
        self._dt = dt
        self._units = units
        self._boundary_tol = boundary_tol

    @property
    def dt(self) -> float:
        return self._dt

    def propagate(
        self, initial: WavefunctionFrame, t_final: float
    ) -> WavefunctionFrame:
        """
        Advance `initial` from its own time to `t_final`.

        The number of steps is rounded up so that the last step lands exactly on
        `t_final`.

        Raises:
            ValueError:
                `t_final` lies before the frame's time!
            DomainTooSmallError:
                |Ψ| at the edges exceeded the boundary tolerance.
        """

        span: float = t_final - initial.time
        if span < 0.0:
            raise ValueError("Cannot propagate backwards in time!")
        if span == 0.0:
            return initial

        steps: int = max(1, math.ceil(span / self._dt - 1e-9))
        dt: float = span / steps
        hbar: float = self._units.hbar
        mass: float = self._units.mass

        x: np.ndarray = initial.grid.points
        k: np.ndarray = 2.0 * np.pi * np.fft.fftfreq(
            initial.grid.count, initial.grid.dx
        )
        half_kinetic: np.ndarray = np.exp(-1j * hbar * k**2 * dt / (4.0 * mass))
        edge: int = max(1, int(EDGE_FRACTION * initial.grid.count))

        psi: np.ndarray = np.array(initial.values, dtype=complex)
        t: float = initial.time
        for step in range(steps):
            psi = np.fft.ifft(half_kinetic * np.fft.fft(psi))
            well: np.ndarray = self._potential(x - self._velocity * (t + 0.5 * dt))
            psi *= np.exp(-1j * well * dt / hbar)
            psi = np.fft.ifft(half_kinetic * np.fft.fft(psi))
            t = initial.time + (step + 1) * dt

            if (step + 1) % CHECK_EVERY == 0 or step + 1 == steps:
                leakage: float = float(
                    max(np.max(np.abs(psi[:edge])), np.max(np.abs(psi[-edge:])))
                )
                if leakage > self._boundary_tol:
                    raise DomainTooSmallError(
                        f"|Ψ| reached {leakage:.3e} at the grid edge by t = {t:.4g}!",
                        leakage=leakage,
                        time=t,
                    )

        logger.debug("split-step: %d steps of %.3e to t = %.4g", steps, dt, t)
        return WavefunctionFrame(grid=initial.grid, values=psi, time=t)


def split_step_propagate(
    initial: WavefunctionFrame,
    potential: Potential,
    velocity: float,
    dt: float = DEFAULT_DT,
    t_final: float = 0.0,
    *,
    units: UnitsConvention = UnitsConvention(),
    boundary_tol: float = BOUNDARY_TOL,
) -> WavefunctionFrame:
    """Propagate `initial` under the moving well V(x − v t) up to `t_final`."""

    propagator = SplitStepPropagator(
        potential, velocity, dt=dt, units=units, boundary_tol=boundary_tol
    )
    return propagator.propagate(initial, t_final)
