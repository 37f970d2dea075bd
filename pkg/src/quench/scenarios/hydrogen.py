"""
A hydrogen atom whose nucleus suddenly moves with velocity v.

Atomic units are used throughout (ħ = μ = a0 = 1), so the dimensionless velocity
is κ = μ v a0 / ħ. Starting from the 1s state only m = 0 levels are reached and,
by the partial-wave expansion of the boost phase,

    Q_{10;nl}(κ) = √(2l + 1) i^l ∫ j_l(κ r) R_10(r) R_nl(r) r² dr.

For small κ only the (n, 1) levels contribute at order κ²; the κ² coefficient of
the probability of staying bound is extrapolated from the partial sums over
n ≤ N and confirmed by an independent integral over the continuum.

Continuum radial functions are R_l(k, r) = 2 F_l(−1/k, k r) / r with F_l the
regular Coulomb function; they are real and normalized to 2π·δ(k − k′).
"""

from __future__ import annotations

import dataclasses
import logging
import math
from typing import Sequence

import mpmath
import numpy as np
from scipy import constants
from scipy.integrate import solve_ivp
from scipy.special import loggamma

from quench.errors import BranchError, NumericalError
from quench.evolution.types import UnitsConvention
from quench.numerics.acceleration import richardson_extrapolate
from quench.numerics.quadrature import integrate_adaptive
from quench.numerics.special import (
    gamma_abs_complex,
    hyp1f1_complex,
    laguerre_assoc,
    spherical_bessel,
)

logger = logging.getLogger(__name__)

# Working precision of the extended-precision coefficient paths.
COEFFICIENT_DPS: int = 50

# Precision of the continuum-side integral.
CONTINUUM_DPS: int = 30

# Largest relative imaginary part tolerated in the continuum-side integrand.
BRANCH_TOL: float = 1e-10

# Number of κ² coefficients fed to the extrapolation, N = 2..21.
RICHARDSON_TERMS: int = 20

# Outer radius of the continuum overlaps; R_10 has fallen to e^{-40} there.
R_MAX: float = 40.0

# Radius below which Coulomb functions come from their power series.
R_SERIES: float = 0.02

# Terms of that power series.
SERIES_TERMS: int = 40

# Largest momentum of the continuum integral.
K_MAX: float = 12.0

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(16)

# Mass of the hydrogen atom in units of the atomic mass constant.
HYDROGEN_MASS_U: float = 1.00782503223


@dataclasses.dataclass(frozen=True)
class HydrogenParams:

    """
    Attributes:
        kappa:      κ = μ v a0 / ħ >= 0.
        n_max:      Highest principal quantum number summed over.
        units:      Units convention (ħ, μ, a0).
    """

    kappa: float = 0.0
    n_max: int = 10
    units: UnitsConvention = UnitsConvention()

    def __post_init__(self) -> None:
        if self.kappa < 0.0:
            raise ValueError("κ cannot be negative!")
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1!")

    @property
    def velocity(self) -> float:
        units = self.units
        return self.kappa * units.hbar / (units.mass * units.length_scale)

    def levels(self) -> list[tuple[int, int]]:
        """(n, l) for every m = 0 level with n <= n_max."""

        return [(n, l) for n in range(1, self.n_max + 1) for l in range(n)]


def _check_levels(n: int, l: int) -> None:
    if n < 1 or not 0 <= l <= n - 1:
        raise ValueError(f"No hydrogen level with n={n}, l={l}!")


def hydrogen_radial(n: int, l: int, r: float | np.ndarray) -> float | np.ndarray:
    """
    Bound radial function

        R_nl(r) = 2^{l+1} / n² √((n − l − 1)! / (n + l)!) (r/n)^l e^{−r/n}
                  L_{n−l−1}^{2l+1}(2r/n)

    Example:
        ```py
        >>> hydrogen_radial(1, 0, 0.0)
        2.0
        ```
    """

    _check_levels(n, l)
    scalar: bool = np.ndim(r) == 0
    rs: np.ndarray = np.asarray(r, dtype=float)
    if np.any(rs < 0.0):
        raise ValueError("The radius cannot be negative!")

    prefactor: float = 2.0 ** (l + 1) / n**2 * math.exp(
        0.5 * (math.lgamma(n - l) - math.lgamma(n + l + 1))
    )
    values: np.ndarray = (
        prefactor
        * (rs / n) ** l
        * np.exp(-rs / n)
        * np.asarray(laguerre_assoc(n - l - 1, 2 * l + 1, 2.0 * rs / n))
    )
    return float(values) if scalar else values


def _radial_coefficients(n: int, l: int) -> tuple[mpmath.mpf, list[mpmath.mpf]]:
    """R_nl(r) = A Σ_i b_i r^{l+i} e^{−r/n}, in mpmath."""

    degree: int = n - l - 1
    amplitude = (
        mpmath.mpf(2) ** (l + 1)
        / mpmath.mpf(n) ** (2 + l)
        * mpmath.sqrt(mpmath.factorial(degree) / mpmath.factorial(n + l))
    )
    terms = [
        (-1) ** i
        * mpmath.binomial(n + l, degree - i)
        * (mpmath.mpf(2) / n) ** i
        / mpmath.factorial(i)
        for i in range(degree + 1)
    ]
    return amplitude, terms


def radial_moment(
    n1: int, l1: int, n2: int, l2: int, power: int, dps: int = COEFFICIENT_DPS
) -> mpmath.mpf:
    """
    ∫_0^∞ R_{n1 l1}(r) R_{n2 l2}(r) r^power dr exactly, term by term through
    Γ-function integrals, at `dps` digits. `power = 2` gives the overlap.
    """

    _check_levels(n1, l1)
    _check_levels(n2, l2)
    if power + l1 + l2 < 0:
        raise ValueError("The radial moment diverges at the origin!")

    with mpmath.workdps(dps):
        a1, b1 = _radial_coefficients(n1, l1)
        a2, b2 = _radial_coefficients(n2, l2)
        rate = mpmath.mpf(1) / n1 + mpmath.mpf(1) / n2
        total = mpmath.mpf(0)
        for i, bi in enumerate(b1):
            for j, bj in enumerate(b2):
                order: int = l1 + l2 + i + j + power + 1
                total += bi * bj * mpmath.gamma(order) / rate**order
        return +(a1 * a2 * total)


def hydrogen_bound_amplitude(n: int, l: int, kappa: float) -> complex:
    """
    Q_{10;nl}(κ) by adaptive quadrature of the radial integral.

    Raises:
        ConvergenceError:
            The radial quadrature did not converge.
    """

    _check_levels(n, l)
    if kappa < 0.0:
        raise ValueError("κ cannot be negative!")
    if kappa == 0.0 and l > 0:
        return 0j

    def integrand(r: np.ndarray) -> np.ndarray:
        return (
            np.asarray(spherical_bessel(l, kappa * r))
            * np.asarray(hydrogen_radial(1, 0, r))
            * np.asarray(hydrogen_radial(n, l, r))
            * r**2
        )

    result = integrate_adaptive(
        integrand, 0.0, decay="exponential", scale=n / (n + 1.0), abs_tol=1e-14
    )
    return math.sqrt(2 * l + 1) * 1j**l * float(result.value)


def hydrogen_survival(n_max: int, kappa: float) -> float:
    """P_{n<=N}(κ) = Σ_{n<=N} Σ_l |Q_{10;nl}(κ)|²."""

    params = HydrogenParams(kappa=kappa, n_max=n_max)
    return sum(
        abs(hydrogen_bound_amplitude(n, l, kappa)) ** 2 for n, l in params.levels()
    )


def _dipole_terms(n_max: int, dps: int) -> list[mpmath.mpf]:
    """D_n² / 3 with D_n = ∫ R_10 R_n1 r³ dr, for n = 2..n_max."""

    with mpmath.workdps(dps):
        return [radial_moment(1, 0, n, 1, 3, dps) ** 2 / 3 for n in range(2, n_max + 1)]


def hydrogen_kappa2_sequence(
    n_max: int, dps: int = COEFFICIENT_DPS
) -> list[mpmath.mpf]:
    """c₂(N) for N = 1..n_max in mpmath, c₂(1) = −1."""

    with mpmath.workdps(dps):
        sequence = [mpmath.mpf(-1)]
        for term in _dipole_terms(n_max, dps):
            sequence.append(sequence[-1] + term)
        return sequence


def hydrogen_kappa2_coefficient(n_max: int) -> float:
    """
    κ² coefficient c₂(N) of P_{n<=N}(κ) ≈ 1 + c₂(N) κ².

    The 1s survival contributes −1 (from j_0(x) ≈ 1 − x²/6 and ⟨r²⟩ = 3) and every
    (n, 1) level D_n² / 3 (from j_1(x) ≈ x/3); no other level enters at this order.

    Example:
        ```py
        >>> round(hydrogen_kappa2_coefficient(10), 6)
        -0.290603
        ```
    """

    if n_max < 1:
        raise ValueError("n_max must be at least 1!")
    return float(hydrogen_kappa2_sequence(n_max)[-1])


def hydrogen_kappa4_coefficient(n_max: int, dps: int = COEFFICIENT_DPS) -> float:
    """
    κ⁴ coefficient of P_{n<=N}(κ), from the j_0, j_1, j_2 expansions to the next
    order:

        5/8 + Σ_{n=2}^{N} [H_n²/36 − D_n E_n/15 + G_n²/45]

    with H_n = ∫r⁴R_10R_n0, D_n = ∫r³R_10R_n1, E_n = ∫r⁵R_10R_n1 and
    G_n = ∫r⁴R_10R_n2.
    """

    if n_max < 1:
        raise ValueError("n_max must be at least 1!")

    with mpmath.workdps(dps):
        total = mpmath.mpf(5) / 8
        for n in range(2, n_max + 1):
            h = radial_moment(1, 0, n, 0, 4, dps)
            d = radial_moment(1, 0, n, 1, 3, dps)
            e = radial_moment(1, 0, n, 1, 5, dps)
            total += h**2 / 36 - d * e / 15
            if n >= 3:
                total += radial_moment(1, 0, n, 2, 4, dps) ** 2 / 45
        return float(total)


def hydrogen_ionization_coefficient(
    terms: int = RICHARDSON_TERMS, powers: Sequence[int] | None = None
) -> tuple[float, tuple[float, ...]]:
    """
    κ² coefficient of the ionization probability by Richardson extrapolation of
    c₂(N), N = 2..terms + 1.

    Args:
        terms:
            Number of coefficients used.
        powers:
            Tail powers of the fit; 2, 3, ..., terms by default.

    Returns:
        coefficient:
            −lim c₂(N), about 0.283412.
        tail:
            Fitted coefficients of 1/N², 1/N³, ... in c₂(N).
    """

    if terms < 2:
        raise ValueError("The extrapolation needs at least two coefficients!")

    powers = list(range(2, terms + 1)) if powers is None else list(powers)
    sequence = hydrogen_kappa2_sequence(terms + 1)[1:]
    table = richardson_extrapolate(sequence, powers, indices=range(2, terms + 2))

    logger.info(
        "ionization coefficient %.15f from %d terms (spread %.2e)",
        -table.extrapolated,
        terms,
        table.spread(),
    )
    return -table.extrapolated, table.fitted_tail


def _continuum_integrand(u: mpmath.mpf) -> mpmath.mpf:
    """
    The integrand over u of the small-κ continuum probability, with its complex
    powers on the principal branch.

    Raises:
        BranchError:
            The principal-branch product is not real.
    """

    i = mpmath.mpc(0, 1)
    value = (
        256
        * mpmath.pi
        * u
        * mpmath.power((u + i) / (i - u), -i / u)
        * mpmath.power(-1 + 2 * i / (u + i), i / u)
        * (mpmath.coth(mpmath.pi / u) + 1)
        / (3 * (u**2 + 1) ** 5)
        / (2 * mpmath.pi)
    )
    if abs(value.imag) > BRANCH_TOL * abs(value):
        raise BranchError(f"Complex continuum integrand at u = {u}: {value}!")
    return value.real


def continuum_integrand_real(u: float) -> float:
    """
    The same integrand with the branch resolved by hand,

        256 π u e^{−4 arctan(u)/u} · 2 / ((1 − e^{−2π/u}) 3 (u² + 1)⁵) / 2π
    """

    return (
        256.0
        * u
        * math.exp(-4.0 * math.atan(u) / u)
        / (-math.expm1(-2.0 * math.pi / u) * 3.0 * (u**2 + 1.0) ** 5)
    )


def hydrogen_continuum_coefficient(dps: int = CONTINUUM_DPS) -> float:
    """
    κ² coefficient of the ionization probability directly from the continuum,
    by tanh-sinh quadrature over u in (0, ∞) at `dps` digits.

    Raises:
        BranchError:
            The principal-branch integrand was not real somewhere.
    """

    with mpmath.workdps(dps):
        value = mpmath.quad(_continuum_integrand, [0, 1, 4, mpmath.inf])
    logger.debug("continuum coefficient %s", mpmath.nstr(value, 20))
    return float(value)


def _coulomb_log_norm(l: int, k: np.ndarray) -> np.ndarray:
    """log C_l(η) for η = −1/k, C_l = 2^l e^{−πη/2} |Γ(l + 1 + iη)| / (2l + 1)!."""

    return (
        l * math.log(2.0)
        + 0.5 * np.pi / k
        + np.real(loggamma(l + 1.0 - 1j / k))
        - math.lgamma(2 * l + 2)
    )


def hydrogen_continuum_wavefunction(k: float, l: int, r: float) -> float:
    """
    R_l(k, r) through the confluent hypergeometric function,

        2^{l+1} (kr)^{l+1} / (r (2l+1)!) e^{π/2k − ikr} |Γ(l + 1 − i/k)|
        ₁F₁(l + 1 + i/k; 2l + 2; 2ikr)

    The value is real; the product is formed in log space where |Γ| underflows.
    """

    if k <= 0.0:
        raise ValueError("The continuum momentum must be positive!")
    if l < 0 or r < 0.0:
        raise ValueError("Need l >= 0 and r >= 0!")
    if r == 0.0:
        if l != 0:
            return 0.0
        return 2.0 * k * math.exp(_coulomb_log_norm(0, np.array(k)).item())

    rho: float = k * r
    gamma: float = gamma_abs_complex(complex(l + 1, -1.0 / k))
    if gamma > 0.0 and 0.5 * math.pi / k < 700.0:
        norm: float = (
            2.0 ** (l + 1)
            * math.exp(0.5 * math.pi / k)
            * gamma
            / math.factorial(2 * l + 1)
        )
    else:
        norm = 2.0 * math.exp(_coulomb_log_norm(l, np.array(k)).item())

    kummer: complex = hyp1f1_complex(complex(l + 1, 1.0 / k), 2 * l + 2, 2j * rho)
    value: complex = norm * rho ** (l + 1) / r * np.exp(-1j * rho) * kummer
    return float(value.real)


def _coulomb_series(
    l: int, k: np.ndarray, r: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """u = r R_l(k, r) and du/dr from the power series of F_l.

    Both arrays have shape (len(k), len(r)).
    """

    eta: np.ndarray = (-1.0 / k)[:, None]
    rho: np.ndarray = k[:, None] * r[None, :]
    previous: np.ndarray = np.zeros_like(rho)
    current: np.ndarray = np.ones_like(rho)
    series: np.ndarray = np.ones_like(rho)
    derivative: np.ndarray = (l + 1) * np.ones_like(rho)
    for j in range(1, SERIES_TERMS):
        coefficient = (2.0 * eta * current - previous * (j > 1)) / (j * (j + 2 * l + 1))
        previous, current = current, coefficient
        term = current * rho**j
        series = series + term
        derivative = derivative + (j + l + 1) * term

    norm: np.ndarray = 2.0 * np.exp(_coulomb_log_norm(l, k))[:, None]
    u: np.ndarray = norm * rho ** (l + 1) * series
    du: np.ndarray = norm * k[:, None] * rho**l * derivative
    return u, du


def _panels(lo: float, hi: float, width: float) -> tuple[np.ndarray, np.ndarray]:
    count: int = max(1, math.ceil((hi - lo) / width))
    cuts: np.ndarray = np.linspace(lo, hi, count + 1)
    half: np.ndarray = 0.5 * np.diff(cuts)
    mid: np.ndarray = 0.5 * (cuts[1:] + cuts[:-1])
    nodes: np.ndarray = (mid[:, None] + half[:, None] * _NODES[None, :]).ravel()
    weights: np.ndarray = (half[:, None] * _WEIGHTS[None, :]).ravel()
    return nodes, weights


def _continuum_radial(l: int, k: np.ndarray, r: np.ndarray) -> np.ndarray:
    """
    u = r R_l(k, r) on the sorted radii `r >= R_SERIES` for every k at once, by
    integrating u'' = (l(l+1)/r² − 2/r − k²) u outward from the series values.
    """

    start_u, start_du = _coulomb_series(l, k, np.array([R_SERIES]))
    # Linear in u: every k starts from u = 1 and is rescaled at the end.
    scale: np.ndarray = start_u[:, 0]
    k2: np.ndarray = k**2

    def rhs(radius: float, y: np.ndarray) -> np.ndarray:
        u, du = y[: len(k)], y[len(k) :]
        return np.concatenate(
            [du, (l * (l + 1) / radius**2 - 2.0 / radius - k2) * u]
        )

    solution = solve_ivp(
        rhs,
        (R_SERIES, float(r[-1])),
        np.concatenate([np.ones_like(scale), start_du[:, 0] / scale]),
        method="DOP853",
        t_eval=r,
        rtol=1e-11,
        atol=1e-13,
    )
    if not solution.success:
        raise NumericalError(f"Coulomb integration failed: {solution.message}")
    return solution.y[: len(k)] * scale[:, None]


def hydrogen_continuum_amplitude(
    k: float | np.ndarray, l: int, kappa: float
) -> np.ndarray:
    """
    P_l(k) = √(2l + 1) i^l ∫ j_l(κ r) R_l(k, r) R_10(r) r² dr for an array of
    momenta, with the Coulomb functions integrated as an ODE across all k at once.
    """

    ks: np.ndarray = np.atleast_1d(np.asarray(k, dtype=float))
    if np.any(ks <= 0.0):
        raise ValueError("Continuum momenta must be positive!")
    if l < 0 or kappa < 0.0:
        raise ValueError("Need l >= 0 and κ >= 0!")

    inner_r, inner_w = _panels(0.0, R_SERIES, R_SERIES)
    outer_r, outer_w = _panels(R_SERIES, R_MAX, 0.25)
    inner_u, _ = _coulomb_series(l, ks, inner_r)
    outer_u: np.ndarray = _continuum_radial(l, ks, outer_r)

    radii: np.ndarray = np.concatenate([inner_r, outer_r])
    weights: np.ndarray = np.concatenate([inner_w, outer_w]) * (
        np.asarray(spherical_bessel(l, kappa * radii))
        * np.asarray(hydrogen_radial(1, 0, radii))
        * radii
    )
    integral: np.ndarray = np.concatenate([inner_u, outer_u], axis=1) @ weights
    return math.sqrt(2 * l + 1) * 1j**l * integral


def hydrogen_continuum_probability(
    kappa: float, l_max: int = 5, k_max: float = K_MAX
) -> float:
    """Σ_{l<=l_max} ∫_0^{k_max} |P_l(k)|² dk/2π, the ionization probability at κ."""

    ks, weights = _panels(0.0, k_max, 0.5)
    total: float = 0.0
    for l in range(l_max + 1):
        amplitudes: np.ndarray = hydrogen_continuum_amplitude(ks, l, kappa)
        total += float(np.sum(weights * np.abs(amplitudes) ** 2)) / (2.0 * np.pi)
    return total


@dataclasses.dataclass(frozen=True)
class ThermalEquivalent:

    """
    Attributes:
        velocity_over_c:    v / c for the given κ.
        temperature:        T (kelvin) at which hydrogen's v_rms = √(3 k_B T / M)
                            equals that speed.
    """

    velocity_over_c: float
    temperature: float


def kappa_to_temperature(kappa: float) -> ThermalEquivalent:
    """
    Translate κ into a speed (v = α c κ) and the gas temperature with that
    root-mean-square speed. Only an order-of-magnitude illustration.
    """

    if kappa < 0.0:
        raise ValueError("κ cannot be negative!")

    velocity: float = constants.fine_structure * constants.c * kappa
    mass: float = (
        HYDROGEN_MASS_U * constants.physical_constants["atomic mass constant"][0]
    )
    return ThermalEquivalent(
        velocity_over_c=velocity / constants.c,
        temperature=mass * velocity**2 / (3.0 * constants.k),
    )
