from __future__ import annotations

import abc
import pathlib
from typing import Any

from quench.fileIO.table import Metadata, ResultTable


class IReader(metaclass=abc.ABCMeta):

    """This is an interface for the [`Reader`][quench.fileIO.reader.Reader] class."""

    @staticmethod
    @abc.abstractmethod
    def read(filename: str | pathlib.Path) -> dict[str, Any]:
        """Read a run configuration from file."""

        ...


class IWriter(metaclass=abc.ABCMeta):

    """This is an interface for the [`Writer`][quench.fileIO.writer.Writer] class."""

    @staticmethod
    @abc.abstractmethod
    def write(
        filename: str | pathlib.Path,
        table: ResultTable,
        metadata: Metadata,
        *,
        fmt: str | None = None,
        overwrite: bool = False,
    ) -> pathlib.Path:
        """Write a result table and its metadata header to file."""

        ...
