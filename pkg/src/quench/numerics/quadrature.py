"""
Adaptive Gauss-Legendre quadrature on finite intervals and half-lines.

Integrands are vectorized: they receive a 1D numpy array of abscissae and must
return an array of the same length (real or complex).

Every panel is integrated with a 10- and a 21-point Gauss-Legendre rule; the
difference is the panel's error estimate. Panels are bisected in batches
(every panel whose error exceeds its share of the tolerance) until the summed
error estimate is below max(abs_tol, rel_tol * |value|).

Half-lines [a, inf) are compactified onto t in [0, 1):

    - decay="algebraic":    x = a + s t / (1 - t),   dx = s / (1 - t)^2 dt
    - decay="exponential":  x = a - s log(1 - t),    dx = s / (1 - t) dt

where `s` is the scale (default 1). The rational map suits integrands that fall
off as a power (order >= 2), the logarithmic one turns e^{-x/s} into a
polynomial in (1 - t).
"""

import dataclasses
import logging
from typing import Callable

import numpy as np

from quench.errors import ConvergenceError

logger = logging.getLogger(__name__)

# Default absolute tolerance for scalar integrals.
ABS_TOL: float = 1e-12

# Default relative tolerance for scalar integrals.
REL_TOL: float = 1e-10

# Largest number of integrand evaluations one call may spend.
MAX_EVALUATIONS: int = 2_000_000

_LOW_NODES, _LOW_WEIGHTS = np.polynomial.legendre.leggauss(10)
_HIGH_NODES, _HIGH_WEIGHTS = np.polynomial.legendre.leggauss(21)

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclasses.dataclass(frozen=True)
class QuadratureResult:

    """
    Outcome of one adaptive integration.

    Attributes:
        value:              The integral (float or complex).
        error_estimate:     Summed panel error estimate, >= 0.
        evaluations:        Number of integrand evaluations, >= 1.
    """

    value: complex | float
    error_estimate: float
    evaluations: int

    def __post_init__(self) -> None:
        if self.error_estimate < 0.0:
            raise ValueError("The error estimate cannot be negative!")
        if self.evaluations < 1:
            raise ValueError("A quadrature needs at least one evaluation!")

    def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
        """Combine the results over two adjoining domains."""

        return QuadratureResult(
            value=self.value + other.value,
            error_estimate=self.error_estimate + other.error_estimate,
            evaluations=self.evaluations + other.evaluations,
        )


def _panels(
    f: Integrand, lo: np.ndarray, hi: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate a batch of panels at once; returns (values, error estimates)."""

    half: np.ndarray = 0.5 * (hi - lo)
    mid: np.ndarray = 0.5 * (hi + lo)
    x_low: np.ndarray = (mid[:, None] + half[:, None] * _LOW_NODES[None, :]).ravel()
    x_high: np.ndarray = (mid[:, None] + half[:, None] * _HIGH_NODES[None, :]).ravel()
    f_low: np.ndarray = np.asarray(f(x_low)).reshape(len(lo), -1)
    f_high: np.ndarray = np.asarray(f(x_high)).reshape(len(lo), -1)
    low: np.ndarray = half * (f_low @ _LOW_WEIGHTS)
    high: np.ndarray = half * (f_high @ _HIGH_WEIGHTS)
    return high, np.abs(high - low)


def _adaptive(
    f: Integrand, a: float, b: float, abs_tol: float, rel_tol: float, max_eval: int
) -> QuadratureResult:
    """Batch-bisecting adaptive quadrature over [a, b]."""

    per_panel: int = len(_LOW_NODES) + len(_HIGH_NODES)
    edges: np.ndarray = np.linspace(a, b, 5)
    lo: np.ndarray = edges[:-1]
    hi: np.ndarray = edges[1:]
    values, errors = _panels(f, lo, hi)
    evaluations: int = per_panel * len(lo)

    # Converged panels leave the active set and are accumulated here.
    done_value: complex | float = 0.0
    done_error: float = 0.0
    while True:
        total: complex = done_value + values.sum()
        error: float = done_error + float(errors.sum())
        target: float = max(abs_tol, rel_tol * abs(total))
        if error <= target:
            break

        if evaluations >= max_eval:
            raise ConvergenceError(
                f"Quadrature over [{a}, {b}] did not reach {target:.3e} "
                f"(estimate {error:.3e}) within {max_eval} evaluations!",
                best_estimate=total,
                error_estimate=error,
                evaluations=evaluations,
            )

        width: np.ndarray = hi - lo
        share: np.ndarray = target * width / (b - a)
        split: np.ndarray = errors > share
        if not np.any(split):
            split = errors == errors.max()

        done_value = done_value + values[~split].sum()
        done_error += float(errors[~split].sum())
        mid: np.ndarray = 0.5 * (lo[split] + hi[split])
        lo = np.concatenate([lo[split], mid])
        hi = np.concatenate([mid, hi[split]])
        values, errors = _panels(f, lo, hi)
        evaluations += per_panel * len(lo)

    value: complex | float = total
    if not np.iscomplexobj(values):
        value = float(np.real(total))

    logger.debug(
        "quadrature on [%g, %g]: %d evaluations, error %.2e", a, b, evaluations, error
    )
    return QuadratureResult(value=value, error_estimate=error, evaluations=evaluations)


def integrate_adaptive(
    f: Integrand,
    a: float,
    b: float = np.inf,
    *,
    decay: str = "exponential",
    scale: float = 1.0,
    abs_tol: float = ABS_TOL,
    rel_tol: float = REL_TOL,
    max_evaluations: int = MAX_EVALUATIONS,
) -> QuadratureResult:
    """
    Integrate `f` over [a, b] where b may be +inf.

    Args:
        f:
            Vectorized integrand.
        a:
            Lower limit (finite).
        b:
            Upper limit, finite or `numpy.inf`.
        decay:
            "exponential" or "algebraic", selects the half-line map; ignored on
            finite intervals.
        scale:
            Length scale `s` of the half-line map.
        abs_tol:
            Absolute tolerance.
        rel_tol:
            Relative tolerance.
        max_evaluations:
            Evaluation budget.

    Returns:
        result:
            Value, error estimate and evaluation count.

    Raises:
        ValueError:
            Bad limits, scale or decay option!
        ConvergenceError:
            The tolerance was not met within the evaluation budget.

    Example:
        ```py
        >>> integrate_adaptive(lambda k: np.exp(-k), 0.0).value
        1.0
        >>> integrate_adaptive(lambda k: 1 / (1 + k**2), 0.0, decay="algebraic").value
        1.5707963267948966
        ```
    """

    if not np.isfinite(a):
        raise ValueError("The lower limit must be finite!")
    if b < a:
        raise ValueError(f"Integration limits out of order: [{a}, {b}]!")
    if scale <= 0.0:
        raise ValueError("The half-line scale must be positive!")

    if np.isfinite(b):
        return _adaptive(f, a, b, abs_tol, rel_tol, max_evaluations)

    if decay == "algebraic":

        def mapped(t: np.ndarray) -> np.ndarray:
            return f(a + scale * t / (1.0 - t)) * scale / (1.0 - t) ** 2

    elif decay == "exponential":

        def mapped(t: np.ndarray) -> np.ndarray:
            return f(a - scale * np.log1p(-t)) * scale / (1.0 - t)

    else:
        raise ValueError(f"Unknown decay option '{decay}'!")

    return _adaptive(mapped, 0.0, 1.0, abs_tol, rel_tol, max_evaluations)


def integrate_line(
    f: Integrand,
    *,
    breakpoints: tuple[float, ...] = (0.0,),
    decay: str = "exponential",
    scale: float = 1.0,
    abs_tol: float = ABS_TOL,
    rel_tol: float = REL_TOL,
) -> QuadratureResult:
    """
    Integrate over the whole real line, splitting at every breakpoint so that no
    panel straddles a kink.
    """

    points: list[float] = sorted(breakpoints) if breakpoints else [0.0]
    result: QuadratureResult = integrate_adaptive(
        lambda x: f(-x),
        -points[0],
        decay=decay,
        scale=scale,
        abs_tol=abs_tol,
        rel_tol=rel_tol,
    )
    for left, right in zip(points[:-1], points[1:]):
        result = result + integrate_adaptive(
            f, left, right, abs_tol=abs_tol, rel_tol=rel_tol
        )

    return result + integrate_adaptive(
        f, points[-1], decay=decay, scale=scale, abs_tol=abs_tol, rel_tol=rel_tol
    )
