import json
import os
import pathlib
from typing import Any

from .abc import IReader


class Reader(IReader):

    """
    This class implements a basic reader class. It reads a run configuration from a
    JSON file whose keys are the same as the command-line flags (for example
    `scenario`, `parameters`, `sweep`, `times`). This class should not be directly
    created by the user.
    """

    @staticmethod
    def read(filename: str | pathlib.Path) -> dict[str, Any]:
        """
        Read a run configuration from file.

        Args:
            filename:
                Configuration file, relative to the working directory or absolute.

        Returns:
            config:
                The decoded configuration.

        Raises:
            OSError:
                The file doesn't exist!
            ValueError:
                The file is not a JSON object!
        """

        if isinstance(filename, str):
            filename = pathlib.Path(filename)

        filepath: pathlib.Path = pathlib.Path(os.getcwd()) / filename
        if not os.path.exists(filepath):
            raise OSError(f"{filepath} doesn't exist!")

        with open(filepath, "r") as f:
            try:
                config: Any = json.load(f)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{filepath} is not valid JSON: {exc.msg}!") from exc

        if not isinstance(config, dict):
            raise ValueError(f"{filepath} must hold a JSON object!")
        return config
