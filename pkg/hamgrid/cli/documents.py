"""
File plumbing shared by the commands: reading documents, writing results and
turning library errors into exit codes.
"""

from __future__ import annotations

import contextlib
import json
import sys
from pathlib import Path
from typing import *  # type: ignore

import revel
import uniserde

from .. import io_formats
from ..errors import HamgridError
from ..io_formats import Document, DocumentFormat

__all__ = [
    "EXIT_YES",
    "EXIT_NO",
    "EXIT_ERROR",
    "parse_count",
    "reporting_errors",
    "read_document",
    "write_output",
    "sidecar_path",
    "write_sidecar",
    "read_sidecar",
]


EXIT_YES = 0
EXIT_NO = 1
EXIT_ERROR = 2


def parse_count(value: str, name: str) -> int:
    """
    Parses a non-negative integer flag. Scientific notation such as `5e7` is
    accepted, as long as the value is integral.
    """
    try:
        number = float(value)
    except ValueError:
        revel.fatal(
            f"`--{name}` expects a number, not `{value}`",
            status_code=EXIT_ERROR,
        )

    if number < 0 or not number.is_integer():
        revel.fatal(
            f"`--{name}` expects a non-negative integer, not `{value}`",
            status_code=EXIT_ERROR,
        )

    return int(number)


@contextlib.contextmanager
def reporting_errors() -> Iterator[None]:
    """
    Reports library and file errors and exits with the error status.
    """
    try:
        yield
    except HamgridError as err:
        revel.fatal(
            f"{type(err).__name__}: {err.message}",
            status_code=EXIT_ERROR,
        )
    except OSError as err:
        revel.fatal(str(err), status_code=EXIT_ERROR)


def read_document(path: Path, *expected: DocumentFormat) -> Document:
    """
    Parses the file at `path`, which must be one of the `expected` formats.
    """
    text = path.read_text(encoding="utf-8")
    doc = io_formats.parse_document(text)

    if expected and doc.format not in expected:
        revel.fatal(
            f"`{path}` is a {doc.format} document, but a"
            f" {' or '.join(expected)} document was expected",
            status_code=EXIT_ERROR,
        )

    return doc


def write_output(text: str, output: Path | None) -> None:
    """
    Writes a result to `output`, or to standard output if no path was given.
    """
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return

    output.write_text(text, encoding="utf-8")


def sidecar_path(output: Path) -> Path:
    return output.with_name(output.name + ".corr.json")


def write_sidecar(output: Path, corr: uniserde.Serde) -> Path:
    path = sidecar_path(output)
    path.write_text(json.dumps(corr.as_json(), indent=2), encoding="utf-8")
    return path


def read_sidecar(grid_path: Path) -> uniserde.JsonDoc | None:
    """
    Loads the correspondence sidecar of a compiled grid file, if it has one.
    """
    path = sidecar_path(grid_path)

    if not path.exists():
        return None

    return json.loads(path.read_text(encoding="utf-8"))
