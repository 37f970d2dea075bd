"""
Special functions needed by the scenario modules.

Every function accepts either a scalar or a numpy array for its continuous argument
and returns the same shape back (a Python scalar for scalar input). Conventions:

    - `assoc_legendre` carries the Condon-Shortley phase, so that
      P_1^1(x) = -sqrt(1 - x^2).
    - `hermite` is the physicists' polynomial H_n (leading coefficient 2^n).
    - `laguerre_assoc` is the generalized polynomial L_n^alpha with
      L_n^alpha(0) = binom(n + alpha, n).
"""

import cmath
import logging
import math

import mpmath
import numpy as np
from scipy import special as sp

from quench.errors import ConvergenceError

logger = logging.getLogger(__name__)

# Below this |z| the confluent hypergeometric function is summed as a Maclaurin
# series, at or above it the large-|z| expansion is tried first.
ASYMPTOTIC_THRESHOLD: float = 30.0

# Below this argument the spherical Bessel function is evaluated from its
# three-term small-argument series.
BESSEL_SERIES_CUTOFF: float = 1e-3

# Extra orders used above `l` when starting the downward (Miller) recurrence.
MILLER_EXTRA_ORDERS: int = 40

# Largest number of terms the hypergeometric series may use.
MAX_SERIES_TERMS: int = 20000


def _wrap(values: np.ndarray, scalar: bool) -> float | np.ndarray:
    """Hand scalars back as Python floats and arrays as arrays."""

    return float(values) if scalar else values


def assoc_legendre(l: int, m: int, x: float | np.ndarray) -> float | np.ndarray:
    """
    Associated Legendre function P_l^m(x) with the Condon-Shortley phase.

    The upward recurrence in `l` starts from
    P_m^m(x) = (-1)^m (2m - 1)!! (1 - x^2)^(m/2). Negative orders use
    P_l^{-m} = (-1)^m (l - m)!/(l + m)! P_l^m.

    Args:
        l:
            Degree, l >= 0.
        m:
            Order, |m| <= l.
        x:
            Argument(s) in [-1, 1].

    Returns:
        values:
            P_l^m(x).

    Raises:
        ValueError:
            The degree, order or argument is out of range!

    Example:
        ```py
        >>> assoc_legendre(1, 1, 0.0)
        -1.0
        >>> assoc_legendre(1, 0, 0.5)
        0.5
        ```
    """

    if l < 0 or abs(m) > l:
        raise ValueError(f"Legendre indices out of range: l={l}, m={m}!")

    scalar: bool = np.ndim(x) == 0
    xs: np.ndarray = np.asarray(x, dtype=float)
    if np.any(np.abs(xs) > 1.0):
        raise ValueError("The Legendre argument must lie in [-1, 1]!")

    if m < 0:
        mm: int = -m
        factor: float = (-1) ** mm * math.factorial(l - mm) / math.factorial(l + mm)
        return _wrap(factor * np.asarray(assoc_legendre(l, mm, xs)), scalar)

    somx2: np.ndarray = np.sqrt((1.0 - xs) * (1.0 + xs))
    pmm: np.ndarray = np.ones_like(xs)
    odd: float = 1.0
    for _ in range(m):
        pmm = -pmm * odd * somx2
        odd += 2.0

    if l == m:
        return _wrap(pmm, scalar)

    pmmp1: np.ndarray = xs * (2 * m + 1) * pmm
    for ll in range(m + 2, l + 1):
        pll: np.ndarray = (xs * (2 * ll - 1) * pmmp1 - (ll + m - 1) * pmm) / (ll - m)
        pmm, pmmp1 = pmmp1, pll

    return _wrap(pmmp1, scalar)


def hermite(n: int, x: float | np.ndarray) -> float | np.ndarray:
    """
    Physicists' Hermite polynomial from H_{k+1} = 2x H_k - 2k H_{k-1}.

    Example:
        ```py
        >>> hermite(4, 1.0)
        -20.0
        ```
    """

    if n < 0:
        raise ValueError(f"The Hermite order must be non-negative, got {n}!")

    scalar: bool = np.ndim(x) == 0
    xs: np.ndarray = np.asarray(x, dtype=float)
    h_prev: np.ndarray = np.ones_like(xs)
    if n == 0:
        return _wrap(h_prev, scalar)

    h: np.ndarray = 2.0 * xs
    for k in range(1, n):
        h_prev, h = h, 2.0 * xs * h - 2.0 * k * h_prev

    return _wrap(h, scalar)


def laguerre_assoc(n: int, alpha: float, x: float | np.ndarray) -> float | np.ndarray:
    """
    Generalized Laguerre polynomial L_n^alpha(x) from
    (k + 1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1}.

    Example:
        ```py
        >>> laguerre_assoc(1, 1, 1.0)
        1.0
        >>> laguerre_assoc(2, 3, 0.5)
        7.625
        ```
    """

    if n < 0:
        raise ValueError(f"The Laguerre degree must be non-negative, got {n}!")

    scalar: bool = np.ndim(x) == 0
    xs: np.ndarray = np.asarray(x, dtype=float)
    l_prev: np.ndarray = np.ones_like(xs)
    if n == 0:
        return _wrap(l_prev, scalar)

    lk: np.ndarray = 1.0 + alpha - xs
    for k in range(1, n):
        l_prev, lk = lk, ((2 * k + 1 + alpha - xs) * lk - (k + alpha) * l_prev) / (
            k + 1
        )

    return _wrap(lk, scalar)


def _bessel_series(l: int, x: np.ndarray) -> np.ndarray:
    """Three terms of the small-argument series of j_l."""

    double_factorial: float = float(np.prod(np.arange(1, 2 * l + 2, 2)))
    x2: np.ndarray = x * x
    return (
        x**l
        / double_factorial
        * (1.0 - x2 / (2 * (2 * l + 3)) + x2 * x2 / (8 * (2 * l + 3) * (2 * l + 5)))
    )


def _bessel_upward(l: int, x: np.ndarray) -> np.ndarray:
    """Upward recurrence, stable for x >= l."""

    j_prev: np.ndarray = np.sin(x) / x
    if l == 0:
        return j_prev

    j: np.ndarray = j_prev / x - np.cos(x) / x
    for n in range(1, l):
        j_prev, j = j, (2 * n + 1) / x * j - j_prev

    return j


def _bessel_downward(l: int, x: np.ndarray) -> np.ndarray:
    """
    Miller's downward recurrence normalized with sum_n (2n + 1) j_n^2 = 1.

    The running values are rescaled whenever they grow past 1e200 so that tiny
    arguments cannot overflow.
    """

    start: int = l + MILLER_EXTRA_ORDERS + int(np.max(x, initial=0.0))
    j_next: np.ndarray = np.zeros_like(x)
    j: np.ndarray = np.full_like(x, 1e-300)
    j_l: np.ndarray = np.zeros_like(x)
    norm: np.ndarray = (2 * start + 1) * j * j
    if start == l:
        j_l = j.copy()

    for n in range(start, 0, -1):
        j_next, j = j, (2 * n + 1) / x * j - j_next
        big: np.ndarray = np.abs(j) > 1e200
        if np.any(big):
            scale: np.ndarray = np.where(big, 1e-200, 1.0)
            j, j_next, j_l = j * scale, j_next * scale, j_l * scale
            norm = norm * scale * scale

        norm = norm + (2 * n - 1) * j * j
        if n - 1 == l:
            j_l = j.copy()

    return j_l / np.sqrt(norm)


def spherical_bessel(l: int, x: float | np.ndarray) -> float | np.ndarray:
    """
    Spherical Bessel function of the first kind j_l(x) for x >= 0.

    The argument range is split three ways: a series below
    `BESSEL_SERIES_CUTOFF`, upward recurrence for x >= l and Miller's downward
    recurrence in between. j_l(0) = 1 if l == 0 else 0.

    Example:
        ```py
        >>> spherical_bessel(0, 0.0)
        1.0
        >>> round(spherical_bessel(2, 1.0), 8)
        0.06203505
        ```
    """

    if l < 0:
        raise ValueError(f"The Bessel order must be non-negative, got {l}!")

    scalar: bool = np.ndim(x) == 0
    xs: np.ndarray = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs < 0.0):
        raise ValueError("The spherical Bessel argument must be non-negative!")

    out: np.ndarray = np.zeros_like(xs)
    small: np.ndarray = xs < BESSEL_SERIES_CUTOFF
    upward: np.ndarray = ~small & (xs >= l)
    downward: np.ndarray = ~small & ~upward

    out[small] = _bessel_series(l, xs[small])
    if np.any(upward):
        out[upward] = _bessel_upward(l, xs[upward])
    if np.any(downward):
        out[downward] = _bessel_downward(l, xs[downward])

    return float(out[0]) if scalar else out.reshape(np.shape(x))


def gamma_abs_complex(z: complex) -> float:
    """
    |Gamma(z)| from the principal complex log-gamma (Stirling series with
    recurrence and reflection, as implemented by `scipy.special.loggamma`).

    Raises:
        ValueError:
            z is a pole of the gamma function!

    Example:
        ```py
        >>> gamma_abs_complex(1)
        1.0
        ```
    """

    zc: complex = complex(z)
    if zc.imag == 0.0 and zc.real <= 0.0 and zc.real == math.floor(zc.real):
        raise ValueError(f"Gamma has a pole at z={zc.real}!")

    return float(math.exp(sp.loggamma(zc).real))


def _pochhammer_series(
    p: complex, q: complex, w: complex, tol: float
) -> tuple[complex, bool]:
    """
    Sum sum_s (p)_s (q)_s / s! w^s while the terms keep shrinking.

    Returns the partial sum and whether the smallest term fell below `tol`
    relative to it. Terms may grow for the first |p| + |q| orders; growth after
    that, or any term above 1e8, means the expansion is of no use here.
    """

    settle: int = int(abs(p) + abs(q)) + 2
    term: complex = 1.0 + 0.0j
    total: complex = term
    for s in range(MAX_SERIES_TERMS):
        new_term: complex = term * (p + s) * (q + s) / (s + 1) * w
        if abs(new_term) > 1e8 or (s >= settle and abs(new_term) > abs(term)):
            return total, False

        term = new_term
        total += term
        if abs(term) <= tol * abs(total):
            return total, True

    return total, False


def _hyp1f1_asymptotic(a: complex, b: complex, z: complex) -> complex | None:
    """
    Large-|z| expansion of 1F1 for Re z >= 0; None if it does not reach
    machine accuracy for these parameters.
    """

    sign: float = 1.0 if z.imag >= 0.0 else -1.0
    log_z: complex = cmath.log(z)
    tol: float = 1e-16

    first, ok_first = _pochhammer_series(a, a - b + 1, -1.0 / z, tol)
    second, ok_second = _pochhammer_series(b - a, 1 - a, 1.0 / z, tol)
    if not (ok_first and ok_second):
        return None

    log_gamma_b: complex = complex(sp.loggamma(b))
    part_first: complex = (
        cmath.exp(log_gamma_b + sign * 1j * math.pi * a - a * log_z)
        * complex(sp.rgamma(b - a))
        * first
    )
    part_second: complex = (
        cmath.exp(log_gamma_b + z + (a - b) * log_z) * complex(sp.rgamma(a)) * second
    )
    return part_first + part_second


def _hyp1f1_series(a: complex, b: complex, z: complex) -> complex:
    """
    Maclaurin series summed in extended precision.

    For oscillatory arguments the partial sums cancel by up to e^|z|, so the
    working precision grows with |z| and |a|.
    """

    digits: int = 25 + int((abs(z) + abs(a)) / math.log(10.0))
    with mpmath.workdps(digits):
        am, bm, zm = mpmath.mpc(a), mpmath.mpc(b), mpmath.mpc(z)
        term = mpmath.mpc(1)
        total = mpmath.mpc(1)
        eps = mpmath.mpf(10) ** (-18)
        for s in range(MAX_SERIES_TERMS):
            term = term * (am + s) / (bm + s) * zm / (s + 1)
            total += term
            if s > abs(z) and abs(term) <= eps * abs(total):
                return complex(total)

    raise ConvergenceError(
        f"1F1({a}; {b}; {z}) series did not converge in {MAX_SERIES_TERMS} terms!",
        best_estimate=complex(total),
        error_estimate=float(abs(term)),
        evaluations=MAX_SERIES_TERMS,
    )


def hyp1f1_complex(a: complex, b: complex, z: complex) -> complex:
    """
    Kummer's confluent hypergeometric function 1F1(a; b; z) for complex input.

    Branches:
        - |z| < `ASYMPTOTIC_THRESHOLD`: Maclaurin series in extended precision.
        - |z| >= `ASYMPTOTIC_THRESHOLD`: Kummer's transformation to Re z >= 0
          followed by the two-sided large-|z| expansion, accepted only when its
          smallest term reaches machine accuracy; otherwise the series is used.

    Args:
        a:
            Numerator parameter.
        b:
            Denominator parameter, not a non-positive integer.
        z:
            Argument.

    Returns:
        value:
            1F1(a; b; z).

    Raises:
        ValueError:
            b is a non-positive integer!
        ConvergenceError:
            The series did not converge within `MAX_SERIES_TERMS` terms.

    Example:
        ```py
        >>> hyp1f1_complex(1, 1, 0.3 + 0.4j)  # e^z
        (1.2434...+0.5256...j)
        ```
    """

    ac, bc, zc = complex(a), complex(b), complex(z)
    if bc.imag == 0.0 and bc.real <= 0.0 and bc.real == math.floor(bc.real):
        raise ValueError(f"b={bc.real} is a non-positive integer!")

    if zc == 0.0:
        return 1.0 + 0.0j

    if abs(zc) >= ASYMPTOTIC_THRESHOLD:
        if zc.real < 0.0:
            value: complex | None = _hyp1f1_asymptotic(bc - ac, bc, -zc)
            if value is not None:
                return cmath.exp(zc) * value
        else:
            value = _hyp1f1_asymptotic(ac, bc, zc)
            if value is not None:
                return value

        logger.debug("1F1 asymptotic branch rejected for a=%s, |z|=%g", ac, abs(zc))

    return _hyp1f1_series(ac, bc, zc)
