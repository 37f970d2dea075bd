"""
Run configuration of the command-line driver.

The same keys are accepted from flags and from a JSON file:

    {
        "scenario": "pt",
        "parameters": {"lambda": 1, "kappa": 1.0},
        "sweep": {"name": "kappa", "start": 0.0, "stop": 6.0, "step": 0.01},
        "times": [0, 5, 10, 15],
        "output": "results",
        "format": "csv",
        "tolerances": {"hydrogen_ionization": 1e-10},
        "seed": 0
    }
"""

from __future__ import annotations

import dataclasses
import math
import os
import pathlib
from typing import Any, Mapping, Sequence

import numpy as np

SCENARIOS: dict[str, str] = {
    "delta": "Attractive delta well, Massey parameter theta",
    "pt": "Reflectionless Pöschl-Teller well, strength lambda and kappa = a m v / ħ",
    "sho": "Harmonic trap, kappa = m v² / (2 ħ ω)",
    "hydrogen": "Hydrogen atom from 1s, kappa = μ v a0 / ħ",
}

FORMATS: tuple[str, ...] = ("csv", "json")

# Environment variable holding the number of sweep worker threads.
THREADS_ENV: str = "QUENCH_THREADS"

# Largest number of points a sweep may expand to.
MAX_SWEEP_POINTS: int = 100_000


@dataclasses.dataclass(frozen=True)
class Sweep:

    """
    Attributes:
        name:       Parameter being swept.
        start:      First value.
        stop:       Last value (included when it lies on the grid).
        step:       Spacing, > 0.
    """

    name: str
    start: float
    stop: float
    step: float

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("A sweep needs a parameter name!")
        for value in (self.start, self.stop, self.step):
            if not math.isfinite(value):
                raise ValueError("Sweep bounds must be finite!")
        if self.step <= 0.0:
            raise ValueError("The sweep step must be positive!")
        if self.stop < self.start:
            raise ValueError("The sweep must not run backwards!")
        if (self.stop - self.start) / self.step + 1 > MAX_SWEEP_POINTS:
            raise ValueError(f"The sweep exceeds {MAX_SWEEP_POINTS} points!")

    @classmethod
    def parse(cls, text: str) -> Sweep:
        """Parse NAME:START:STOP:STEP, for example `kappa:0:6:0.01`."""

        parts: list[str] = text.split(":")
        if len(parts) != 4:
            raise ValueError(f"Expected NAME:START:STOP:STEP, got '{text}'!")
        try:
            start, stop, step = (float(p) for p in parts[1:])
        except ValueError as exc:
            raise ValueError(f"Non-numeric sweep bounds in '{text}'!") from exc
        return cls(parts[0], start, stop, step)

    def values(self) -> list[float]:
        count: int = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        values = np.round(self.start + self.step * np.arange(count), 12)
        return [float(v) for v in values]


def parse_times(text: str) -> tuple[float, ...]:
    """Parse a comma separated list of times, `0,5,10,15`."""

    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise ValueError(f"Times must be numbers, got '{text}'!") from exc


def parse_assignment(text: str) -> tuple[str, Any]:
    """Parse NAME=VALUE; numbers become float or int, true/false become bool."""

    name, sep, raw = text.partition("=")
    if not sep or not name:
        raise ValueError(f"Expected NAME=VALUE, got '{text}'!")

    lowered: str = raw.strip().lower()
    if lowered in ("true", "false"):
        return name.strip(), lowered == "true"
    try:
        return name.strip(), int(raw)
    except ValueError:
        pass
    try:
        return name.strip(), float(raw)
    except ValueError:
        return name.strip(), raw.strip()


def thread_count() -> int:
    """Sweep worker threads from QUENCH_THREADS, one by default."""

    raw: str = os.environ.get(THREADS_ENV, "1")
    try:
        threads: int = int(raw)
    except ValueError as exc:
        raise ValueError(f"{THREADS_ENV} must be an integer, got '{raw}'!") from exc
    if threads < 1:
        raise ValueError(f"{THREADS_ENV} must be at least 1!")
    return threads


@dataclasses.dataclass(frozen=True)
class RunConfig:

    """
    Attributes:
        scenario:       One of `SCENARIOS`.
        parameters:     Scenario parameters such as theta, lambda, kappa, n_max.
        sweep:          Optional parameter sweep.
        times:          Times of the density frames, >= 0.
        output:         Directory receiving the result files; nothing is written
                        when None.
        fmt:            "csv" or "json".
        tolerances:     Tolerance overrides by name.
        seed:           Reserved; every computation is deterministic.
    """

    scenario: str
    parameters: Mapping[str, Any] = dataclasses.field(default_factory=dict)
    sweep: Sweep | None = None
    times: tuple[float, ...] = ()
    output: pathlib.Path | None = None
    fmt: str = "csv"
    tolerances: Mapping[str, float] = dataclasses.field(default_factory=dict)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ValueError(
                f"Unknown scenario '{self.scenario}', use one of {list(SCENARIOS)}!"
            )
        if self.fmt not in FORMATS:
            raise ValueError(f"Unknown format '{self.fmt}', use one of {FORMATS}!")
        if any(not math.isfinite(t) or t < 0.0 for t in self.times):
            raise ValueError("Times must be finite and non-negative!")
        for name, tol in self.tolerances.items():
            if not tol > 0.0:
                raise ValueError(f"The tolerance '{name}' must be positive!")

        object.__setattr__(self, "parameters", dict(self.parameters))
        object.__setattr__(self, "tolerances", dict(self.tolerances))
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        if self.output is not None:
            object.__setattr__(self, "output", pathlib.Path(self.output))

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> RunConfig:
        """Build a configuration from decoded JSON or flag values."""

        unknown: set[str] = set(data) - {
            "scenario",
            "parameters",
            "sweep",
            "times",
            "output",
            "format",
            "tolerances",
            "seed",
        }
        if unknown:
            raise ValueError(f"Unknown configuration keys {sorted(unknown)}!")
        if "scenario" not in data:
            raise ValueError("The configuration needs a scenario!")

        sweep: Any = data.get("sweep")
        if isinstance(sweep, str):
            sweep = Sweep.parse(sweep)
        elif isinstance(sweep, Mapping):
            sweep = Sweep(**sweep)

        times: Any = data.get("times", ())
        if isinstance(times, str):
            times = parse_times(times)
        elif not isinstance(times, Sequence):
            raise ValueError("Times must be a list of numbers!")

        return cls(
            scenario=str(data["scenario"]),
            parameters=dict(data.get("parameters") or {}),
            sweep=sweep,
            times=tuple(times),
            output=data.get("output"),
            fmt=str(data.get("format", "csv")),
            tolerances={k: float(v) for k, v in (data.get("tolerances") or {}).items()},
            seed=int(data.get("seed", 0)),
        )

    def as_dict(self) -> dict[str, Any]:
        """The configuration as plain JSON-ready data, hashed into file headers."""

        return {
            "scenario": self.scenario,
            "parameters": dict(sorted(self.parameters.items())),
            "sweep": None if self.sweep is None else dataclasses.asdict(self.sweep),
            "times": list(self.times),
            "format": self.fmt,
            "tolerances": dict(sorted(self.tolerances.items())),
            "seed": self.seed,
        }

    def parameter(self, name: str, default: Any) -> Any:
        return self.parameters.get(name, default)
