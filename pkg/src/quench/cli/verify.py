"""
Regression manifest of the published numbers.

Every item computes one quantity, compares it with its expected value and
records the runtime. Tolerances can be overridden per item by name.
"""

from __future__ import annotations

import dataclasses
import logging
import math
import time
from typing import Callable, Iterable, Mapping

import numpy as np

from quench.evolution.spectral import bound_amplitudes, probability_budget
from quench.fileIO.table import ResultTable
from quench.scenarios.delta import continuum_probability, delta_probabilities
from quench.scenarios.hydrogen import (
    hydrogen_continuum_coefficient,
    hydrogen_ionization_coefficient,
    hydrogen_kappa2_coefficient,
    hydrogen_kappa4_coefficient,
)
from quench.scenarios.poschl_teller import (
    PoschlTellerBasis,
    pt_excitation_peak,
    pt_q11,
)
from quench.scenarios.sho import (
    sho_amplitudes,
    sho_overlap_quadrature,
    sho_probability_spectrum,
    sho_resonance_check,
)

logger = logging.getLogger(__name__)

IONIZATION_COEFFICIENT: float = 0.28341221595516952094
IONIZATION_TAIL: float = -0.78146725925265723860

# Velocities at which the λ = 1 probabilities must add up to one.
PT_UNITARITY_KAPPAS: tuple[float, ...] = (0.25, 0.5, 1.0, 2.0, 4.0)

KAPPA2_PUBLISHED: dict[int, float] = {
    6: -0.302617,
    7: -0.297702,
    8: -0.294468,
    9: -0.292225,
    10: -0.290603,
}

KAPPA4_PUBLISHED: dict[int, float] = {
    6: -0.576334,
    7: -0.572154,
    8: -0.569285,
    9: -0.567241,
    10: -0.565735,
}


@dataclasses.dataclass(frozen=True)
class ManifestItem:

    """
    Attributes:
        name:       Unique name, also the key of tolerance overrides.
        compute:    Produces the measured value.
        expected:   The value it must reproduce.
        tol:        Largest accepted |measured − expected|.
        slow:       Takes more than a few seconds.
    """

    name: str
    compute: Callable[[], float]
    expected: float
    tol: float
    slow: bool = False


@dataclasses.dataclass(frozen=True)
class ItemResult:
    name: str
    measured: float
    expected: float
    tol: float
    passed: bool
    runtime: float
    error: str = ""


@dataclasses.dataclass(frozen=True)
class VerificationReport:
    results: tuple[ItemResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[ItemResult]:
        return [r for r in self.results if not r.passed]

    def as_table(self) -> ResultTable:
        return ResultTable.from_rows(
            "verification",
            (
                "item",
                "measured",
                "expected",
                "tolerance",
                "passed",
                "runtime_s",
                "error",
            ),
            [
                (
                    r.name,
                    r.measured,
                    r.expected,
                    r.tol,
                    "yes" if r.passed else "no",
                    round(r.runtime, 3),
                    r.error,
                )
                for r in self.results
            ],
        )


def _pt_unitarity(kappa: float) -> float:
    basis = PoschlTellerBasis(1)
    k_grid = basis.k_grid(kappa, 4096)
    amplitudes, continuum = basis.closed_form_amplitudes(kappa, k_grid)
    return probability_budget(amplitudes, continuum).total


def _pt_q11_overlap(kappa: float) -> float:
    amplitude = bound_amplitudes((1,), PoschlTellerBasis(1), kappa)[(1,)]
    return abs(amplitude) - pt_q11(kappa)


def _sho_equality_defect() -> float:
    return max(sho_resonance_check(n)[1] for n in range(1, 16))


def _sho_recursion_vs_quadrature() -> float:
    worst: float = 0.0
    for kappa in (0.5, 1.0, 5.0, 10.0):
        recursion = sho_amplitudes(kappa, 15)
        for n in range(16):
            worst = max(worst, abs(recursion[n] - sho_overlap_quadrature(n, kappa)))
    return worst


def default_manifest() -> list[ManifestItem]:
    """Every published number the package reproduces, with its tolerance."""

    items: list[ManifestItem] = []
    for theta in (0.1, 0.5, 1.0, 2.0, 5.0, 10.0):
        items.append(
            ManifestItem(
                f"delta_bound_theta_{theta:g}",
                lambda th=theta: delta_probabilities(th).bound_total,
                16.0 / (theta**2 + 4.0) ** 2,
                1e-10,
            )
        )
        items.append(
            ManifestItem(
                f"delta_continuum_theta_{theta:g}",
                lambda th=theta: continuum_probability(th),
                1.0 - 16.0 / (theta**2 + 4.0) ** 2,
                1e-8,
            )
        )

    for kappa in PT_UNITARITY_KAPPAS:
        items.append(
            ManifestItem(
                f"pt_lambda1_unitarity_kappa_{kappa:g}",
                lambda k=kappa: _pt_unitarity(k),
                1.0,
                1e-6,
            )
        )
    items.append(
        ManifestItem("pt_lambda1_q11_overlap", lambda: _pt_q11_overlap(1.0), 0.0, 1e-10)
    )
    items.append(
        ManifestItem(
            "pt_lambda2_excitation_argmax",
            lambda: pt_excitation_peak(2, 1),
            math.sqrt(3.0),
            0.2,
            slow=True,
        )
    )

    items.extend(
        [
            ManifestItem(
                "sho_q03_at_kappa_1",
                lambda: abs(sho_amplitudes(1.0, 3)[3]),
                math.exp(-0.5) / math.sqrt(6.0),
                1e-14,
            ),
            ManifestItem("sho_resonance_equality", _sho_equality_defect, 0.0, 1e-14),
            ManifestItem(
                "sho_total_probability",
                lambda: sho_probability_spectrum(10.0).total,
                1.0,
                1e-12,
            ),
            ManifestItem(
                "sho_recursion_vs_quadrature", _sho_recursion_vs_quadrature, 0.0, 1e-10
            ),
        ]
    )

    for n, value in KAPPA2_PUBLISHED.items():
        items.append(
            ManifestItem(
                f"hydrogen_kappa2_N{n}",
                lambda n=n: hydrogen_kappa2_coefficient(n),
                value,
                1e-5,
            )
        )
    for n, value in KAPPA4_PUBLISHED.items():
        items.append(
            ManifestItem(
                f"hydrogen_kappa4_N{n}",
                lambda n=n: hydrogen_kappa4_coefficient(n),
                value,
                1e-5,
            )
        )

    items.extend(
        [
            ManifestItem(
                "hydrogen_ionization",
                lambda: hydrogen_ionization_coefficient()[0],
                IONIZATION_COEFFICIENT,
                1e-10,
            ),
            ManifestItem(
                "hydrogen_ionization_tail",
                lambda: hydrogen_ionization_coefficient()[1][0],
                IONIZATION_TAIL,
                1e-8,
            ),
            ManifestItem(
                "hydrogen_continuum_integral",
                hydrogen_continuum_coefficient,
                IONIZATION_COEFFICIENT,
                1e-10,
                slow=True,
            ),
        ]
    )
    return items


def _evaluate(item: ManifestItem, tol: float) -> ItemResult:
    start: float = time.perf_counter()
    try:
        measured: float = float(item.compute())
    except ArithmeticError as exc:
        return ItemResult(
            item.name,
            float("nan"),
            item.expected,
            tol,
            False,
            time.perf_counter() - start,
            f"{type(exc).__name__}: {exc}",
        )

    runtime: float = time.perf_counter() - start
    passed: bool = bool(np.isfinite(measured)) and abs(measured - item.expected) <= tol
    return ItemResult(item.name, measured, item.expected, tol, passed, runtime)


def verify_paper_numbers(
    tolerances: Mapping[str, float] | None = None,
    items: Iterable[ManifestItem] | None = None,
    *,
    include_slow: bool = True,
) -> VerificationReport:
    """
    Run the manifest.

    Args:
        tolerances:
            Per-item tolerance overrides by item name.
        items:
            The manifest; `default_manifest()` when None.
        include_slow:
            Also run the items marked slow.

    Returns:
        report:
            Measured against expected, tolerance, verdict and runtime per item.

    Raises:
        ValueError:
            A tolerance override names no item!
    """

    tolerances = dict(tolerances or {})
    manifest: list[ManifestItem] = list(default_manifest() if items is None else items)
    unknown: set[str] = set(tolerances) - {item.name for item in manifest}
    if unknown:
        raise ValueError(f"Tolerance overrides for unknown items {sorted(unknown)}!")

    results: list[ItemResult] = []
    for item in manifest:
        if item.slow and not include_slow:
            continue
        result: ItemResult = _evaluate(item, tolerances.get(item.name, item.tol))
        log = logger.info if result.passed else logger.error
        log(
            "%-40s %s measured %.15g expected %.15g (tol %.1e, %.2f s)",
            result.name,
            "PASS" if result.passed else "FAIL",
            result.measured,
            result.expected,
            result.tol,
            result.runtime,
        )
        results.append(result)

    return VerificationReport(tuple(results))
