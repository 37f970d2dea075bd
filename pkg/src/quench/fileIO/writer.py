import csv
import json
import os
import pathlib

from .abc import IWriter
from .table import Metadata, ResultTable

FORMATS: tuple[str, ...] = ("csv", "json")


class Writer(IWriter):

    """
    This class implements a basic writer class. It writes one result table to a CSV
    or JSON file. A CSV file starts with `# key: value` metadata lines followed by a
    header row and one line per record; a JSON file holds the same metadata and
    records as an object. This class should not be directly created by the user.
    """

    @staticmethod
    def write(
        filename: str | pathlib.Path,
        table: ResultTable,
        metadata: Metadata,
        *,
        fmt: str | None = None,
        overwrite: bool = False,
    ) -> pathlib.Path:
        """
        Write a result table and its metadata header to file.

        Args:
            filename:
                File to write to.
            table:
                Records to write.
            metadata:
                Header written above the records.
            fmt:
                "csv" or "json"; taken from the file suffix when None.
            overwrite:
                Replace an existing file instead of failing.

        Returns:
            filepath:
                The path that was written.

        Raises:
            OSError:
                The file already exists and `overwrite` is False!
            ValueError:
                Unknown format!
        """

        if isinstance(filename, str):
            filename = pathlib.Path(filename)

        fmt = fmt or filename.suffix.lstrip(".").lower()
        if fmt not in FORMATS:
            raise ValueError(f"Unknown output format '{fmt}', use one of {FORMATS}!")

        filepath: pathlib.Path = pathlib.Path(os.getcwd()) / filename
        if os.path.exists(filepath) and not overwrite:
            raise OSError(f"{filepath} already exists!")

        with open(filepath, "w", newline="") as f:
            if fmt == "csv":
                for key, value in metadata.as_dict().items():
                    if isinstance(value, dict):
                        value = ",".join(f"{k}={v!r}" for k, v in value.items())
                    f.write(f"# {key}: {value}\n")
                f.write(f"# table: {table.name}\n")
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(table.columns)
                for row in table:
                    writer.writerow(
                        [
                            repr(cell) if isinstance(cell, float) else cell
                            for cell in row
                        ]
                    )
            else:
                json.dump(
                    {
                        "metadata": metadata.as_dict(),
                        "table": table.name,
                        "columns": list(table.columns),
                        "records": table.records(),
                    },
                    f,
                    indent=2,
                )
                f.write("\n")

        return filepath
