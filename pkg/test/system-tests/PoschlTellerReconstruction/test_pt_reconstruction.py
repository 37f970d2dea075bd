import pytest

from quench.evolution.analysis import highest_peak, local_maxima_in_window
from quench.evolution.propagator import split_step_propagate
from quench.evolution.spectral import decompose, reconstruct, verify_round_trip
from quench.evolution.types import SpatialGrid, WavefunctionFrame
from quench.scenarios.poschl_teller import PoschlTellerBasis, PTParams

KAPPA: float = 1.0


def ground_frame(basis: PoschlTellerBasis, grid: SpatialGrid) -> WavefunctionFrame:
    ground = basis.bound_states[0]
    return WavefunctionFrame(grid, basis.bound_mode(ground, grid.points))


def test_lambda1_round_trip():
    """This will rebuild the λ = 1 ground state from the closed-form amplitudes."""

    params = PTParams(lam=1, kappa=KAPPA)
    basis = PoschlTellerBasis(1)
    grid = SpatialGrid.centered(40.0, 2048)
    amplitudes, continuum = basis.closed_form_amplitudes(
        params.velocity, basis.k_grid(params.velocity, 2048)
    )
    defect = verify_round_trip(
        ground_frame(basis, grid), amplitudes, continuum, basis, params.velocity
    )
    assert defect < 1e-6


def test_lambda2_round_trip():
    """This will rebuild the λ = 2 ground state from the numerical overlaps."""

    params = PTParams(lam=2, kappa=KAPPA)
    basis = PoschlTellerBasis(2)
    grid = SpatialGrid.centered(40.0, 2048)
    amplitudes, continuum = decompose((2,), basis, params.velocity, k_count=2048)
    defect = verify_round_trip(
        ground_frame(basis, grid), amplitudes, continuum, basis, params.velocity
    )
    assert defect < 1e-6


@pytest.mark.slow
@pytest.mark.parametrize("t", [5.0, 10.0, 15.0])
@pytest.mark.parametrize("kappa", [1.0, 2.0])
@pytest.mark.parametrize("lam", [1, 2])
def test_reconstruction_matches_split_step(lam, kappa, t):
    """
    This will evolve the quenched ground state twice, spectrally and on a grid,
    and compare the two.
    """

    params = PTParams(lam=lam, kappa=kappa)
    basis = PoschlTellerBasis(lam)
    # Wide enough that the fastest released tail stays off the edges by t = 15.
    grid = SpatialGrid.centered(200.0, 16384)
    k_grid = basis.k_grid(params.velocity, 8192)
    amplitudes, continuum = basis.closed_form_amplitudes(
        params.velocity, k_grid
    ) or decompose(basis.bound_states[0], basis, params.velocity, k_grid=k_grid)

    spectral = reconstruct(amplitudes, continuum, basis, params.velocity, t, grid)
    propagated = split_step_propagate(
        ground_frame(basis, grid), basis.potential, params.velocity, 1e-3, t
    )
    assert spectral.l2_distance(propagated) < 1e-3
    assert spectral.norm() == pytest.approx(1.0, abs=1e-6)


def test_lambda1_peak_tracking():
    """
    This will follow the λ = 1 density at κ = 1: the bound part rides with the well
    at a steady height and the reflectionless well sends nothing ahead at 2vt.
    """

    params = PTParams(lam=1, kappa=KAPPA)
    basis = PoschlTellerBasis(1)
    grid = SpatialGrid.centered(60.0, 4096)
    amplitudes, continuum = basis.closed_form_amplitudes(
        params.velocity, basis.k_grid(params.velocity, 4096)
    )

    heights: list[float] = []
    for t in (5.0, 10.0, 15.0):
        frame = reconstruct(amplitudes, continuum, basis, params.velocity, t, grid)
        centre: float = params.velocity * t
        peak = highest_peak(frame, (centre - 2.0, centre + 2.0))
        assert peak is not None
        assert abs(peak[0] - centre) < 0.5
        heights.append(peak[1])

        w: float = min(5.0, centre / 2.0)
        assert local_maxima_in_window(frame, (2.0 * centre - w, 2.0 * centre + w)) == []

    mean: float = sum(heights) / len(heights)
    for height in heights:
        assert abs(height - mean) <= 0.15 * mean
