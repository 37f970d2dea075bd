import math

import numpy as np
import pytest

from quench.evolution.spectral import bound_amplitudes, decompose, probability_budget
from quench.numerics.quadrature import integrate_line
from quench.scenarios.poschl_teller import (
    PoschlTellerBasis,
    PTParams,
    pt_amplitudes_lambda2,
    pt_eigenmodes,
    pt_excitation_peak,
    pt_p1,
    pt_probability_sweep,
    pt_q11,
    pt_q_excited_lambda2,
    pt_q_ground_lambda2,
    pt_resonance_kappa,
    pt_transition_probability,
)


@pytest.fixture(scope="module")
def basis2() -> PoschlTellerBasis:
    return PoschlTellerBasis(2)


@pytest.mark.parametrize(
    "kwargs", [{"lam": 0}, {"lam": 1.5}, {"a": 0.0}, {"kappa": -1.0}]
)
def test_params_validation(kwargs):
    with pytest.raises(ValueError):
        PTParams(**kwargs)


def test_params_velocity():
    params = PTParams(lam=2, a=2.0, kappa=3.0)
    assert params.velocity == pytest.approx(1.5)
    assert params.bound_energy(1) == pytest.approx(-1.0 / 8.0)
    assert pt_eigenmodes(params).a == 2.0


def test_lambda1_normalization():
    """This tests φ_1 = sech(x) / √2, so 𝒩_1 = 1/√2 up to the Legendre sign."""

    basis = PoschlTellerBasis(1)
    assert basis.normalization(1) == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-12)
    x = np.linspace(-5.0, 5.0, 11)
    np.testing.assert_allclose(
        np.abs(basis.bound_mode((1,), x)),
        1.0 / (math.sqrt(2.0) * np.cosh(x)),
        rtol=1e-12,
    )


def test_bound_states_orthonormal(basis2):
    assert basis2.bound_states == ((2,), (1,))
    for i in (1, 2):
        for j in (1, 2):
            overlap = integrate_line(
                lambda x: basis2.bound_mode((i,), x) * basis2.bound_mode((j,), x)
            )
            assert overlap.value == pytest.approx(float(i == j), abs=1e-11)


def test_bound_energies(basis2):
    assert basis2.bound_energy((2,)) == -2.0
    assert basis2.bound_energy((1,)) == -0.5
    with pytest.raises(ValueError):
        basis2.bound_energy((3,))


@pytest.mark.parametrize("lam", [1, 2, 3])
def test_continuum_mode_solves_schrodinger(lam):
    """This tests −½ψ'' + Vψ = ½k²ψ by finite differences."""

    basis = PoschlTellerBasis(lam)
    k, h = 0.8, 1e-4
    x = np.linspace(-4.0, 4.0, 17)
    psi = basis.continuum_mode("scattering", k, x)
    second = (
        basis.continuum_mode("scattering", k, x + h)
        - 2.0 * psi
        + basis.continuum_mode("scattering", k, x - h)
    ) / h**2
    residual = -0.5 * second + basis.potential(x) * psi - 0.5 * k**2 * psi
    assert np.max(np.abs(residual)) < 1e-5


@pytest.mark.parametrize("lam", [1, 2, 3])
def test_continuum_mode_is_reflectionless(lam):
    """This tests that |ψ_k| tends to one on both sides."""

    basis = PoschlTellerBasis(lam)
    k = np.array([-2.0, 0.3, 1.5])
    for x in (-40.0, 40.0):
        np.testing.assert_allclose(
            np.abs(basis.continuum_mode("scattering", k, x)), 1.0, atol=1e-12
        )


def test_continuum_orthogonal_to_bound_states(basis2):
    for j in (1, 2):
        overlap = integrate_line(
            lambda x: np.conj(basis2.continuum_mode("scattering", 0.7, x))
            * basis2.bound_mode((j,), x)
        )
        assert abs(overlap.value) < 1e-10


def test_unknown_channel(basis2):
    with pytest.raises(ValueError):
        basis2.continuum_mode("even", 1.0, 0.0)


@pytest.mark.parametrize(
    "kappa, expected",
    [(0.0, 1.0), (1.0, (math.pi / 2.0) / math.sinh(math.pi / 2.0)), (2000.0, 0.0)],
)
def test_pt_q11(kappa, expected):
    assert pt_q11(kappa) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("kappa", [0.5, 1.0, 3.0])
def test_lambda1_overlaps_match_closed_form(kappa):
    """This tests the numerical overlaps against q11 and p1."""

    basis = PoschlTellerBasis(1)
    k_grid = np.linspace(-kappa - 5.0, -kappa + 5.0, 41)
    amplitudes, continuum = decompose((1,), basis, kappa, k_grid=k_grid)
    assert amplitudes[(1,)] == pytest.approx(pt_q11(kappa), abs=1e-10)
    np.testing.assert_allclose(continuum[0].values, pt_p1(k_grid, kappa), atol=1e-8)


@pytest.mark.parametrize("kappa", [0.25, 0.5, 1.0, 2.0, 3.0, 4.0])
def test_lambda1_unitarity(kappa):
    basis = PoschlTellerBasis(1)
    k_grid = basis.k_grid(kappa, 4096)
    amplitudes, continuum = basis.closed_form_amplitudes(kappa, k_grid)
    budget = probability_budget(amplitudes, continuum)
    assert budget.total == pytest.approx(1.0, abs=1e-6)


def test_lambda2_closed_forms(basis2):
    """This tests the λ = 2 bound amplitudes against their closed forms."""

    for kappa in (0.5, 1.0, math.sqrt(3.0), 3.0):
        amplitudes = bound_amplitudes((2,), basis2, kappa)
        assert abs(amplitudes[(2,)]) == pytest.approx(
            pt_q_ground_lambda2(kappa), abs=1e-10
        )
        assert abs(amplitudes[(1,)]) == pytest.approx(
            pt_q_excited_lambda2(kappa), abs=1e-10
        )
        assert pt_transition_probability(kappa, 2, 1, basis=basis2) == pytest.approx(
            pt_q_excited_lambda2(kappa) ** 2, abs=1e-10
        )


def test_lambda2_has_no_closed_continuum(basis2):
    assert basis2.closed_form_amplitudes(1.0, np.linspace(-1.0, 1.0, 5)) is None


def test_lambda2_budget():
    amplitudes, continuum = pt_amplitudes_lambda2(1.0, k_count=1024)
    budget = probability_budget(amplitudes, continuum)
    assert budget.total == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("kappa", [1.0, 2.0])
def test_lambda2_budget_from_overlaps(kappa):
    """Test that the numerical λ = 2 overlaps account for all probability."""

    amplitudes, continuum = pt_amplitudes_lambda2(kappa, k_count=2048)
    budget = probability_budget(amplitudes, continuum)
    assert budget.total == pytest.approx(1.0, abs=1e-4)
    assert budget.continuum > 0.0


def test_resonance_kappa():
    assert pt_resonance_kappa(2, 1) == pytest.approx(math.sqrt(3.0))
    with pytest.raises(ValueError):
        pt_resonance_kappa(2, 2)


def test_excitation_peak_near_resonance():
    """This tests the argmax of the λ = 2 excitation on a coarse grid."""

    peak = pt_excitation_peak(2, 1, np.arange(0.0, 4.0, 0.05), refine=True)
    assert peak == pytest.approx(math.sqrt(3.0), abs=0.2)


@pytest.mark.slow
def test_excitation_peak_default_grid():
    assert pt_excitation_peak(2, 1) == pytest.approx(math.sqrt(3.0), abs=0.2)


def test_probability_sweep():
    rows = pt_probability_sweep(1, [0.0, 1.0])
    assert rows[0][1].bound_total == pytest.approx(1.0)
    assert rows[1][1].bound_total == pytest.approx(pt_q11(1.0) ** 2)
    assert rows[1][1].total == pytest.approx(1.0)

    rows = pt_probability_sweep(2, [1.0])
    assert [qn for qn, _ in rows[0][1].bound] == [(2,), (1,)]
