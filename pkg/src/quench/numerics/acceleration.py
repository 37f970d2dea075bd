"""
Richardson extrapolation of partial-sum sequences with known tail powers.

A sequence S_N with S_N = S + c_1 N^{-p_1} + c_2 N^{-p_2} + ... is extrapolated by
fitting S and the first m coefficients to m + 1 consecutive terms. The fits are
solved in extended precision (mpmath) since the linear systems are as badly
conditioned as a Vandermonde matrix in 1 / N.
"""

import dataclasses
import logging
from typing import Sequence

import mpmath

logger = logging.getLogger(__name__)

# Working precision of the fits.
FIT_DPS: int = 50


@dataclasses.dataclass(frozen=True)
class AccelerationTable:

    """
    Attributes:
        raw_sequence:   The input sequence S_N.
        indices:        The N attached to each term.
        order:          Number of tail powers that were fitted.
        extrapolated:   Limit estimated from the last order + 1 terms.
        fitted_tail:    Tail coefficients c_1..c_order of that final fit.
        tableau:        tableau[j][i] is the estimate of order j + 1 from the
                        window ending at term i + j + 1 (rows get shorter).
    """

    raw_sequence: tuple[float, ...]
    indices: tuple[float, ...]
    order: int
    extrapolated: float
    fitted_tail: tuple[float, ...]
    tableau: tuple[tuple[float, ...], ...]

    def spread(self) -> float:
        """Difference between the two highest order estimates, a cheap error bar."""

        if self.order < 2:
            return float("inf")
        return abs(self.tableau[-1][-1] - self.tableau[-2][-1])


def _fit(
    values: Sequence[mpmath.mpf], indices: Sequence[mpmath.mpf], powers: Sequence[int]
) -> list[mpmath.mpf]:
    """Solve for [S, c_1, ..., c_m] from exactly m + 1 terms."""

    matrix = mpmath.matrix(len(values), len(powers) + 1)
    for row, n in enumerate(indices):
        matrix[row, 0] = 1
        for col, p in enumerate(powers):
            matrix[row, col + 1] = mpmath.mpf(1) / mpmath.power(n, p)

    solution = mpmath.lu_solve(matrix, mpmath.matrix(list(values)))
    return [solution[i] for i in range(len(powers) + 1)]


def richardson_extrapolate(
    sequence: Sequence[float | mpmath.mpf],
    powers: Sequence[int],
    indices: Sequence[float] | None = None,
) -> AccelerationTable:
    """
    Extrapolate `sequence` to N -> inf assuming tail powers `powers`.

    Args:
        sequence:
            Partial sums S_N (floats or mpmath numbers, the latter keep their
            precision through the fit).
        powers:
            Distinct positive tail exponents, in the order they are peeled off.
        indices:
            The N of each term; defaults to 1, 2, 3, ...

    Returns:
        table:
            The full extrapolation tableau and the final estimate.

    Raises:
        ValueError:
            Repeated or non-positive powers, mismatched indices or a sequence
            shorter than len(powers) + 1!

    Example:
        ```py
        >>> seq = [1.0 + 1.0 / n**2 for n in range(1, 6)]
        >>> richardson_extrapolate(seq, [2]).extrapolated
        1.0
        ```
    """

    powers = list(powers)
    if not powers:
        raise ValueError("At least one tail power is needed!")
    if len(set(powers)) != len(powers):
        raise ValueError(f"Tail powers must be distinct, got {powers}!")
    if min(powers) <= 0:
        raise ValueError("Tail powers must be positive!")
    if len(sequence) < len(powers) + 1:
        raise ValueError(
            f"{len(powers)} tail powers need at least {len(powers) + 1} terms, "
            f"got {len(sequence)}!"
        )

    if indices is None:
        indices = list(range(1, len(sequence) + 1))
    if len(indices) != len(sequence):
        raise ValueError("The indices must match the sequence term for term!")

    with mpmath.workdps(FIT_DPS):
        values = [mpmath.mpf(s) for s in sequence]
        ns = [mpmath.mpf(n) for n in indices]

        tableau: list[tuple[float, ...]] = []
        final: list[mpmath.mpf] = []
        for order in range(1, len(powers) + 1):
            row: list[float] = []
            for end in range(order + 1, len(values) + 1):
                window = slice(end - order - 1, end)
                fit = _fit(values[window], ns[window], powers[:order])
                row.append(float(fit[0]))
                if order == len(powers) and end == len(values):
                    final = fit
            tableau.append(tuple(row))

    logger.debug(
        "richardson: %d terms, %d powers, limit %.15g",
        len(values),
        len(powers),
        float(final[0]),
    )
    return AccelerationTable(
        raw_sequence=tuple(float(s) for s in sequence),
        indices=tuple(float(n) for n in indices),
        order=len(powers),
        extrapolated=float(final[0]),
        fitted_tail=tuple(float(c) for c in final[1:]),
        tableau=tuple(tableau),
    )

