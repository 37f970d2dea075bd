"""
Scenario runners of the `run` subcommand.

Each runner turns a `RunConfig` into result tables: probabilities per parameter
value, density frames (x, |ψ|², Re ψ, Im ψ) at the requested times and, for
hydrogen, the coefficient tables. Sweep points are computed on a thread pool
sized by QUENCH_THREADS; results keep the sweep order and files are written one
after the other.
"""

from __future__ import annotations

import logging
import pathlib
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Sequence, TypeVar

from quench.cli.config import RunConfig, thread_count
from quench.evolution.abc import IEigenbasis
from quench.evolution.spectral import decompose, reconstruct
from quench.evolution.types import (
    DEFAULT_K_COUNT,
    DEFAULT_X_COUNT,
    DEFAULT_X_HALF_WIDTH,
    BoundAmplitudeSet,
    ContinuumAmplitude,
    SpatialGrid,
    UnitsConvention,
)
from quench.fileIO.table import Metadata, ResultTable
from quench.fileIO.writer import Writer
from quench.scenarios.delta import DeltaBasis, DeltaParams, delta_probabilities
from quench.scenarios.hydrogen import (
    hydrogen_continuum_coefficient,
    hydrogen_ionization_coefficient,
    hydrogen_kappa2_sequence,
    hydrogen_kappa4_coefficient,
    hydrogen_survival,
)
from quench.scenarios.poschl_teller import (
    PoschlTellerBasis,
    PTParams,
    pt_excitation_peak,
    pt_probability_sweep,
    pt_resonance_kappa,
)
from quench.scenarios.sho import (
    TAIL_TOL,
    SHOBasis,
    SHOParams,
    default_n_max,
    sho_probability_spectrum,
    sho_spectrum_sweep,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

FRAME_COLUMNS: tuple[str, ...] = ("t", "x", "density", "re_psi", "im_psi")


def parallel_map(function: Callable[[T], R], values: Sequence[T]) -> list[R]:
    """`function` over `values` on QUENCH_THREADS threads, results in input order."""

    threads: int = thread_count()
    if threads == 1 or len(values) < 2:
        return [function(v) for v in values]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(function, values))


def _sweep_values(config: RunConfig, name: str, default: float) -> list[float]:
    if config.sweep is None:
        return [float(config.parameter(name, default))]
    if config.sweep.name != name:
        raise ValueError(
            f"The {config.scenario} scenario sweeps '{name}', "
            f"not '{config.sweep.name}'!"
        )
    return config.sweep.values()


def _frames(
    config: RunConfig,
    basis: IEigenbasis,
    velocity: float,
    amplitudes: BoundAmplitudeSet,
    continuum: list[ContinuumAmplitude],
) -> ResultTable:
    grid = SpatialGrid.centered(
        float(config.parameter("half_width", DEFAULT_X_HALF_WIDTH)),
        int(config.parameter("x_count", DEFAULT_X_COUNT)),
        basis.units,
    )
    rows: list[tuple[float, ...]] = []
    for t in config.times:
        frame = reconstruct(amplitudes, continuum, basis, velocity, t, grid)
        density = frame.density()
        rows.extend(
            (t, float(x), float(d), float(v.real), float(v.imag))
            for x, d, v in zip(grid.points, density, frame.values)
        )
    return ResultTable.from_rows("frames", FRAME_COLUMNS, rows)


def run_delta(config: RunConfig) -> list[ResultTable]:
    gamma: float = float(config.parameter("gamma", 1.0))
    numerical: bool = bool(config.parameter("numerical", False))
    thetas: list[float] = _sweep_values(config, "theta", 1.0)

    budgets = parallel_map(
        lambda th: delta_probabilities(th, numerical=numerical), thetas
    )
    tables: list[ResultTable] = [
        ResultTable.from_rows(
            "probabilities",
            ("theta", "bound", "continuum", "total"),
            [
                (th, b.bound_total, b.continuum, b.total)
                for th, b in zip(thetas, budgets)
            ],
        )
    ]

    if config.times:
        params = DeltaParams.from_theta(thetas[0], gamma)
        basis = DeltaBasis(gamma, params.units)
        k_count: int = int(config.parameter("k_count", DEFAULT_K_COUNT))
        amplitudes, continuum = basis.closed_form_amplitudes(
            params.velocity, basis.k_grid(params.velocity, k_count)
        )
        tables.append(_frames(config, basis, params.velocity, amplitudes, continuum))
    return tables


def run_pt(config: RunConfig) -> list[ResultTable]:
    lam: int = int(config.parameter("lambda", 1))
    a: float = float(config.parameter("a", 1.0))
    kappas: list[float] = _sweep_values(config, "kappa", 1.0)

    rows = parallel_map(lambda k: pt_probability_sweep(lam, [k], a)[0], kappas)
    levels: list[int] = list(range(lam, 0, -1))
    tables: list[ResultTable] = [
        ResultTable.from_rows(
            "probabilities",
            ("kappa", *(f"bound_{j}" for j in levels), "continuum", "total"),
            [
                (kappa, *(p for _, p in budget.bound), budget.continuum, budget.total)
                for kappa, budget in rows
            ],
        )
    ]

    if lam >= 2 and config.parameter("peak", False):
        tables.append(
            ResultTable.from_rows(
                "resonance",
                ("lambda", "mu", "argmax_kappa", "sqrt_lambda2_minus_mu2"),
                [
                    (lam, mu, pt_excitation_peak(lam, mu), pt_resonance_kappa(lam, mu))
                    for mu in range(1, lam)
                ],
            )
        )

    if config.times:
        params = PTParams(lam=lam, a=a, kappa=kappas[0])
        basis = PoschlTellerBasis(lam, a)
        k_count: int = int(config.parameter("k_count", DEFAULT_K_COUNT))
        k_grid = basis.k_grid(params.velocity, k_count)
        closed = basis.closed_form_amplitudes(params.velocity, k_grid)
        amplitudes, continuum = closed or decompose(
            (lam,), basis, params.velocity, k_grid=k_grid
        )
        tables.append(_frames(config, basis, params.velocity, amplitudes, continuum))
    return tables


def run_sho(config: RunConfig) -> list[ResultTable]:
    omega: float = float(config.parameter("omega", 1.0))
    kappas: list[float] = _sweep_values(config, "kappa", 1.0)
    tail_tol: float = config.tolerances.get("tail", TAIL_TOL)

    tables: list[ResultTable] = []
    if config.sweep is not None:
        levels: list[int] = list(range(int(config.parameter("levels", 6))))
        table = sho_spectrum_sweep(kappas, levels)
        tables.append(
            ResultTable.from_rows(
                "spectrum_sweep",
                ("kappa", *(f"level_{n}" for n in levels)),
                [(k, *map(float, row)) for k, row in zip(kappas, table)],
            )
        )
    else:
        kappa: float = kappas[0]
        n_max: int = int(config.parameter("n_max", default_n_max(kappa)))
        budget = sho_probability_spectrum(kappa, n_max, tail_tol=tail_tol)
        tables.append(
            ResultTable.from_rows(
                "spectrum",
                ("kappa", "n", "probability"),
                [(kappa, qn[0], p) for qn, p in budget.bound],
            )
        )

    if config.times:
        params = SHOParams(omega=omega, kappa=kappas[0])
        basis = SHOBasis(omega, params.n_max, params.units)
        amplitudes, continuum = decompose((0,), basis, params.velocity)
        tables.append(_frames(config, basis, params.velocity, amplitudes, continuum))
    return tables


def run_hydrogen(config: RunConfig) -> list[ResultTable]:
    n_max: int = int(config.parameter("n_max", 10))
    if n_max < 2:
        raise ValueError("The hydrogen tables need n_max >= 2!")

    c2 = hydrogen_kappa2_sequence(n_max)
    c4 = parallel_map(hydrogen_kappa4_coefficient, list(range(2, n_max + 1)))
    tables: list[ResultTable] = [
        ResultTable.from_rows(
            "coefficients",
            ("N", "kappa2", "kappa4"),
            [(n, float(c2[n - 1]), c4[n - 2]) for n in range(2, n_max + 1)],
        )
    ]

    if config.sweep is not None or "kappa" in config.parameters:
        kappas: list[float] = _sweep_values(config, "kappa", 0.0)
        survival = parallel_map(lambda k: hydrogen_survival(n_max, k), kappas)
        tables.append(
            ResultTable.from_rows(
                "survival",
                ("kappa", "N", "survival"),
                [(k, n_max, s) for k, s in zip(kappas, survival)],
            )
        )

    if config.parameter("ionization", False):
        extrapolated, tail = hydrogen_ionization_coefficient()
        continuum: float = hydrogen_continuum_coefficient()
        tables.append(
            ResultTable.from_rows(
                "ionization",
                ("quantity", "value"),
                [
                    ("richardson", extrapolated),
                    ("continuum", continuum),
                    ("difference", abs(extrapolated - continuum)),
                    ("tail_inverse_N2", tail[0]),
                    ("tail_inverse_N3", tail[1]),
                ],
            )
        )
        logger.info("ionization probability ≈ %.14f κ²", extrapolated)
    return tables


RUNNERS: dict[str, Callable[[RunConfig], list[ResultTable]]] = {
    "delta": run_delta,
    "pt": run_pt,
    "sho": run_sho,
    "hydrogen": run_hydrogen,
}


def execute(config: RunConfig) -> list[ResultTable]:
    """Compute every table the configuration asks for."""

    logger.info("running scenario %s with %s", config.scenario, config.parameters)
    return RUNNERS[config.scenario](config)


def units_of(config: RunConfig) -> UnitsConvention:
    length: Any = config.parameter("a", 1.0) if config.scenario == "pt" else 1.0
    return UnitsConvention(length_scale=float(length))


def write_tables(
    tables: Sequence[ResultTable],
    directory: pathlib.Path,
    metadata: Metadata,
    fmt: str,
    *,
    prefix: str,
    overwrite: bool = False,
) -> list[pathlib.Path]:
    directory.mkdir(parents=True, exist_ok=True)
    written: list[pathlib.Path] = []
    for table in tables:
        path = directory / f"{prefix}_{table.name}.{fmt}"
        written.append(
            Writer.write(path, table, metadata, fmt=fmt, overwrite=overwrite)
        )
        logger.info("wrote %d records to %s", len(table), path)
    return written


def run(config: RunConfig, *, overwrite: bool = False) -> list[pathlib.Path]:
    """
    Execute a configuration and write its tables into `config.output`.

    Returns:
        written:
            Paths of the files written; empty when no output is configured.

    Raises:
        ValueError:
            The parameters do not fit the scenario!
        NumericalError:
            A computation did not reach its tolerance.
        OSError:
            An output file already exists and `overwrite` is False!
    """

    tables: list[ResultTable] = execute(config)
    if config.output is None:
        for table in tables:
            logger.info("%s: %d records", table.name, len(table))
        return []

    metadata = Metadata.for_config(
        config.as_dict(), units_of(config).as_dict(), config.scenario
    )
    return write_tables(
        tables,
        config.output,
        metadata,
        config.fmt,
        prefix=config.scenario,
        overwrite=overwrite,
    )
