import math

import mpmath
import numpy as np
import pytest
from scipy import constants

from quench.errors import BranchError
from quench.numerics.quadrature import integrate_adaptive
from quench.scenarios.hydrogen import (
    HydrogenParams,
    _continuum_integrand,
    _continuum_radial,
    continuum_integrand_real,
    hydrogen_bound_amplitude,
    hydrogen_continuum_amplitude,
    hydrogen_continuum_coefficient,
    hydrogen_continuum_probability,
    hydrogen_continuum_wavefunction,
    hydrogen_ionization_coefficient,
    hydrogen_kappa2_coefficient,
    hydrogen_kappa2_sequence,
    hydrogen_kappa4_coefficient,
    hydrogen_radial,
    hydrogen_survival,
    kappa_to_temperature,
    radial_moment,
)

KAPPA2: dict[int, float] = {
    6: -0.302617,
    7: -0.297702,
    8: -0.294468,
    9: -0.292225,
    10: -0.290603,
}

KAPPA4: dict[int, float] = {
    6: -0.576334,
    7: -0.572154,
    8: -0.569285,
    9: -0.567241,
    10: -0.565735,
}


def test_params():
    params = HydrogenParams(kappa=0.5, n_max=3)
    assert params.levels() == [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)]
    assert params.velocity == 0.5
    with pytest.raises(ValueError):
        HydrogenParams(kappa=-1.0)
    with pytest.raises(ValueError):
        HydrogenParams(n_max=0)


def test_radial_closed_forms():
    r = np.linspace(0.0, 10.0, 21)
    np.testing.assert_allclose(hydrogen_radial(1, 0, r), 2.0 * np.exp(-r), rtol=1e-14)
    np.testing.assert_allclose(
        hydrogen_radial(2, 1, r),
        r * np.exp(-r / 2.0) / (2.0 * math.sqrt(6.0)),
        rtol=1e-13,
        atol=1e-16,
    )
    assert hydrogen_radial(1, 0, 0.0) == 2.0


@pytest.mark.parametrize("n, l", [(0, 0), (2, 2), (3, -1)])
def test_radial_bad_levels(n, l):
    with pytest.raises(ValueError):
        hydrogen_radial(n, l, 1.0)


def test_radial_negative_radius():
    with pytest.raises(ValueError):
        hydrogen_radial(1, 0, -1.0)


@pytest.mark.parametrize(
    "n1, n2, l", [(3, 3, 0), (5, 5, 2), (12, 12, 7), (2, 4, 1), (3, 7, 0)]
)
def test_radial_orthonormality(n1, n2, l):
    """This tests ∫ R_n1l R_n2l r² dr = δ by the exact moments."""

    moment = float(radial_moment(n1, l, n2, l, 2))
    assert moment == pytest.approx(float(n1 == n2), abs=1e-30)


def test_radial_moment_matches_quadrature():
    exact = float(radial_moment(1, 0, 4, 1, 3))
    numeric = integrate_adaptive(
        lambda r: hydrogen_radial(1, 0, r) * hydrogen_radial(4, 1, r) * r**3,
        0.0,
        scale=0.8,
    )
    assert numeric.value == pytest.approx(exact, abs=1e-11)


def test_radial_moment_divergence():
    with pytest.raises(ValueError):
        radial_moment(1, 0, 2, 0, -1)


@pytest.mark.parametrize("kappa", [0.0, 0.5, 1.0, 3.0])
def test_ground_survival_form_factor(kappa):
    """This tests Q_{10;10} = 16 / (4 + κ²)²."""

    assert hydrogen_bound_amplitude(1, 0, kappa) == pytest.approx(
        16.0 / (4.0 + kappa**2) ** 2, abs=1e-12
    )


def test_bound_amplitude_phase():
    """This tests the i^l phase of the partial waves."""

    amplitude = hydrogen_bound_amplitude(2, 1, 0.5)
    assert abs(amplitude.real) < 1e-15
    assert amplitude.imag > 0.0
    assert hydrogen_bound_amplitude(3, 2, 0.0) == 0j
    with pytest.raises(ValueError):
        hydrogen_bound_amplitude(1, 0, -0.1)


def test_kappa2_published_values():
    for n, value in KAPPA2.items():
        assert hydrogen_kappa2_coefficient(n) == pytest.approx(value, abs=1e-5)


def test_kappa2_dipole_closed_form():
    """
    This tests each increment against the closed-form dipole sum
    D_n²/3 = 2⁸ n⁷ (n−1)^{2n−5} / (3 (n+1)^{2n+5}).
    """

    sequence = hydrogen_kappa2_sequence(15)
    assert sequence[0] == -1
    with mpmath.workdps(50):
        for n in range(2, 16):
            expected = (
                mpmath.mpf(2) ** 8
                * mpmath.mpf(n) ** 7
                * mpmath.mpf(n - 1) ** (2 * n - 5)
                / (3 * mpmath.mpf(n + 1) ** (2 * n + 5))
            )
            increment = sequence[n - 1] - sequence[n - 2]
            assert abs(increment - expected) < mpmath.mpf(10) ** -25


def test_kappa2_increases():
    sequence = [float(c) for c in hydrogen_kappa2_sequence(25)]
    assert all(b > a for a, b in zip(sequence, sequence[1:]))
    assert sequence[-1] < -0.28341


def test_kappa4_published_values():
    for n, value in KAPPA4.items():
        assert hydrogen_kappa4_coefficient(n) == pytest.approx(value, abs=1e-5)


def test_survival_expansion():
    """This tests P_{n<=N}(κ) ≈ 1 + c₂κ² + c₄κ⁴ at small κ."""

    kappa: float = 0.01
    expected = (
        1.0
        + hydrogen_kappa2_coefficient(6) * kappa**2
        + hydrogen_kappa4_coefficient(6) * kappa**4
    )
    assert hydrogen_survival(6, kappa) == pytest.approx(expected, abs=1e-11)
    assert hydrogen_survival(3, 0.0) == pytest.approx(1.0, abs=1e-13)


def test_ionization_coefficient():
    coefficient, tail = hydrogen_ionization_coefficient()
    assert coefficient == pytest.approx(0.28341221595517, abs=1e-10)
    assert tail[0] == pytest.approx(-0.78146725925266, abs=1e-8)


def test_ionization_coefficient_arguments():
    coarse, tail = hydrogen_ionization_coefficient(8, [2, 3, 4])
    assert len(tail) == 3
    assert coarse == pytest.approx(0.2834122, abs=1e-3)
    with pytest.raises(ValueError):
        hydrogen_ionization_coefficient(1)


@pytest.mark.parametrize("u", [0.05, 0.3, 1.0, 2.5, 10.0])
def test_continuum_integrand_branch(u):
    """This tests the principal-branch integrand against its real closed form."""

    with mpmath.workdps(30):
        value = float(_continuum_integrand(mpmath.mpf(u)))
    assert value == pytest.approx(continuum_integrand_real(u), rel=1e-12)


def test_continuum_integrand_real_integral():
    result = integrate_adaptive(
        np.vectorize(continuum_integrand_real), 0.0, decay="algebraic"
    )
    assert result.value == pytest.approx(0.28341221595517, abs=1e-10)


def test_branch_error_is_numerical():
    assert issubclass(BranchError, ArithmeticError)


@pytest.mark.slow
def test_continuum_coefficient():
    """This tests that the continuum side reproduces the extrapolated bound side."""

    assert hydrogen_continuum_coefficient() == pytest.approx(
        hydrogen_ionization_coefficient()[0], abs=1e-10
    )


@pytest.mark.parametrize(
    "k, l, r",
    [(0.3, 0, 0.5), (1.0, 0, 2.0), (1.0, 1, 7.0), (2.5, 2, 3.0), (0.8, 3, 12.0)],
)
def test_continuum_wavefunction_matches_coulomb(k, l, r):
    """This tests R_l(k, r) = 2 F_l(−1/k, kr) / r."""

    with mpmath.workdps(30):
        expected = 2.0 * float(mpmath.coulombf(l, -1.0 / k, k * r)) / r
    assert hydrogen_continuum_wavefunction(k, l, r) == pytest.approx(
        expected, rel=1e-9, abs=1e-12
    )


def test_continuum_wavefunction_arguments():
    assert hydrogen_continuum_wavefunction(1.0, 2, 0.0) == 0.0
    with pytest.raises(ValueError):
        hydrogen_continuum_wavefunction(0.0, 0, 1.0)
    with pytest.raises(ValueError):
        hydrogen_continuum_wavefunction(1.0, -1, 1.0)


@pytest.mark.parametrize("l", [0, 1, 3])
def test_continuum_radial_ode_matches_closed_form(l):
    """This tests the outward integration against the hypergeometric form."""

    k = np.array([0.4, 1.0, 3.0])
    r = np.array([0.5, 2.0, 8.0, 20.0])
    u = _continuum_radial(l, k, r)
    for i, ki in enumerate(k):
        for j, rj in enumerate(r):
            expected = hydrogen_continuum_wavefunction(float(ki), l, float(rj))
            assert u[i, j] / rj == pytest.approx(expected, rel=1e-7, abs=1e-7)


def test_continuum_orthogonal_to_ground_state():
    """This tests ∫ R_0(k) R_10 r² dr = 0, the κ = 0 amplitude."""

    amplitudes = hydrogen_continuum_amplitude(np.array([0.2, 0.7, 1.5, 4.0]), 0, 0.0)
    np.testing.assert_allclose(np.abs(amplitudes), 0.0, atol=1e-8)


def test_continuum_amplitude_arguments():
    with pytest.raises(ValueError):
        hydrogen_continuum_amplitude(np.array([0.0, 1.0]), 0, 0.5)
    with pytest.raises(ValueError):
        hydrogen_continuum_amplitude(1.0, 0, -0.5)


@pytest.mark.slow
def test_completeness():
    """This tests that bound (n <= 30) and continuum probabilities add up to one."""

    kappa: float = 0.5
    bound: float = hydrogen_survival(30, kappa)
    ionized: float = hydrogen_continuum_probability(kappa)
    assert bound + ionized == pytest.approx(1.0, abs=1e-3)


def test_kappa_to_temperature():
    one = kappa_to_temperature(1.0)
    assert one.velocity_over_c == pytest.approx(constants.fine_structure, rel=1e-12)
    assert one.temperature == pytest.approx(1.93e8, rel=1e-2)
    assert kappa_to_temperature(0.1).temperature == pytest.approx(
        one.temperature / 100.0, rel=1e-12
    )
    with pytest.raises(ValueError):
        kappa_to_temperature(-1.0)
