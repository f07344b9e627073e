"""
Gadget geometries shipped with the package, plus the machinery to place and
validate them.

The geometries live in `gadget-files/` as plain text resources, in the format
read by `hamgrid.io_formats.parse_gadget`. They are loaded on first use.
"""

from __future__ import annotations

import dataclasses
import functools

from .. import utils
from . import contracts as contracts
from .template import *


def available() -> list[str]:
    """
    The names of all gadgets shipped as resource files.
    """
    return sorted(path.stem for path in utils.GADGETS_DIR.glob("*.gadget"))


@functools.cache
def load(name: str) -> GadgetTemplate:
    """
    Loads a shipped gadget by name and attaches its contract. The result is
    cached, so repeated loads are free.


    ## Raises

    `FileNotFoundError`: If no gadget of that name is shipped.

    `ParseError`: If the resource file is malformed.
    """
    # Imported here, since the parser itself depends on the template types
    from .. import io_formats

    path = utils.GADGETS_DIR / f"{name}.gadget"
    template = io_formats.parse_gadget(path.read_text(encoding="utf-8"))

    return dataclasses.replace(
        template,
        contract=contracts.CONTRACTS.get(template.name),
    )
