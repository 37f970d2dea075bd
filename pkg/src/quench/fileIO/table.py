"""
Result tables and the metadata header every output file carries.

A table is a list of records sharing the same columns. The CSV and JSON writers
emit the same records; the header holds the schema version, the package version,
a SHA-256 hash of the run configuration and the units convention.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from importlib import metadata as importlib_metadata
from typing import Any, Iterator, Mapping, Sequence

# Bumped whenever a column set or the header layout changes.
SCHEMA_VERSION: str = "1.0"

Cell = float | int | str


def package_version() -> str:
    try:
        return importlib_metadata.version("quench")
    except importlib_metadata.PackageNotFoundError:
        from quench import __version__

        return __version__


def config_hash(config: Mapping[str, Any]) -> str:
    """SHA-256 of the configuration serialized with sorted keys."""

    encoded: bytes = json.dumps(config, sort_keys=True, default=str).encode("utf-8")
    return hashlib.sha256(encoded).hexdigest()


@dataclasses.dataclass(frozen=True)
class Metadata:

    """
    Attributes:
        config_hash:        SHA-256 of the run configuration.
        units:              The units convention of the scenario.
        scenario:           Scenario name.
        schema_version:     Version of the table layout.
        package_version:    Version of this package.
    """

    config_hash: str
    units: Mapping[str, float]
    scenario: str = ""
    schema_version: str = SCHEMA_VERSION
    package_version: str = dataclasses.field(default_factory=package_version)

    @classmethod
    def for_config(
        cls, config: Mapping[str, Any], units: Mapping[str, float], scenario: str = ""
    ) -> Metadata:
        return cls(
            config_hash=config_hash(config), units=dict(units), scenario=scenario
        )

    def as_dict(self) -> dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "package_version": self.package_version,
            "scenario": self.scenario,
            "config_hash": self.config_hash,
            "units": dict(self.units),
        }


@dataclasses.dataclass(frozen=True)
class ResultTable:

    """
    Attributes:
        name:       What the table holds, for example "probabilities".
        columns:    Column names.
        rows:       Records, each with one cell per column.
    """

    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple[Cell, ...], ...] = ()

    def __post_init__(self) -> None:
        if not self.columns:
            raise ValueError("A table needs at least one column!")
        if len(set(self.columns)) != len(self.columns):
            raise ValueError(f"Repeated column names in {self.columns}!")
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(
                    f"Row {row} has {len(row)} cells for {len(self.columns)} columns!"
                )

    @classmethod
    def from_rows(
        cls, name: str, columns: Sequence[str], rows: Sequence[Sequence[Cell]]
    ) -> ResultTable:
        return cls(name, tuple(columns), tuple(tuple(row) for row in rows))

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[tuple[Cell, ...]]:
        return iter(self.rows)

    def records(self) -> list[dict[str, Cell]]:
        return [dict(zip(self.columns, row)) for row in self.rows]

    def column(self, name: str) -> list[Cell]:
        if name not in self.columns:
            raise ValueError(f"No column named '{name}'!")
        index: int = self.columns.index(name)
        return [row[index] for row in self.rows]
