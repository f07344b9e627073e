from __future__ import annotations

from pathlib import Path
from typing import *  # type: ignore

import revel
import tomlkit
import tomlkit.exceptions
import uniserde

import hamgrid

from . import ham_core

__all__ = ["HamgridConfig"]

T = TypeVar("T")


CONFIG_FILE_NAME = "hamgrid.toml"


# (section, key) -> (type, default, comment)
DEFAULTS: dict[tuple[str, str], tuple[type, Any, str]] = {
    ("oracle", "budget"): (
        int,
        ham_core.DEFAULT_BUDGET,
        "Node expansions the exact search may spend before giving up",
    ),
    ("compile", "spacing"): (
        int,
        4,
        "Extra cells between neighboring gadgets",
    ),
    ("compile", "max-spacing"): (
        int,
        64,
        "The compilers retry with doubled spacing up to this value",
    ),
    ("gen", "seed"): (int, 1, "Seed for random instance generation"),
    ("gen", "min-pixels"): (int, 10, "Smallest generated instance"),
    ("gen", "max-pixels"): (int, 200, "Largest generated instance"),
    ("render", "scale"): (float, 40.0, "Length of a lattice edge in SVG units"),
    ("render", "margin"): (float, 20.0, "Blank border around the drawing"),
}


class HamgridConfig:
    """
    Settings read from a `hamgrid.toml` file.

    Keys missing from the file fall back to built-in defaults. Command line
    flags take precedence over both, see `hamgrid.utils.first_non_null`.
    """

    def __init__(
        self,
        *,
        file_path: Path | None,
        toml_dict: uniserde.JsonDoc,
    ) -> None:
        # Path to the `hamgrid.toml` file, if one was found
        self.file_path = file_path

        # All values from the file, reorganized into the format
        #
        # {
        #   (section, key): value
        # }
        self._toml_dict: dict[tuple[str, str], Any] = {}

        for section_name, section in toml_dict.items():
            if not isinstance(section, dict):
                continue

            for key_name, value in section.items():
                self._toml_dict[section_name, key_name] = value

    def get_key(
        self,
        section_name: str,
        key_name: str,
        key_type: Type[T],
        default_value: Any,
    ) -> T:
        """
        Fetches the value of a key from the configuration. If the key is
        missing, the default value is returned instead. Values of the wrong
        type raise a `TypeError`.
        """
        # Try to get the key
        try:
            value = self._toml_dict[(section_name, key_name)]

        # There is no value, use the default
        except KeyError:
            value = default_value

        # Make sure the value is the correct type. Booleans are ints in Python,
        # but never a sensible value for any of these keys.
        if isinstance(value, key_type) and not isinstance(value, bool):
            return value

        if key_type is float and isinstance(value, int):
            return float(value)  # type: ignore

        raise TypeError(
            f"`{CONFIG_FILE_NAME}` contains an invalid value for"
            f" `{section_name}.{key_name}`: expected {key_type.__name__}, got"
            f" {type(value).__name__}",
        )

    def _get_default(self, section_name: str, key_name: str) -> Any:
        key_type, default, _ = DEFAULTS[(section_name, key_name)]
        return self.get_key(section_name, key_name, key_type, default)

    @property
    def oracle_budget(self) -> int:
        """
        How many node expansions the exact Hamiltonian cycle search may spend.
        """
        return self._get_default("oracle", "budget")

    @property
    def compile_spacing(self) -> int:
        return self._get_default("compile", "spacing")

    @property
    def compile_max_spacing(self) -> int:
        return self._get_default("compile", "max-spacing")

    @property
    def gen_seed(self) -> int:
        return self._get_default("gen", "seed")

    @property
    def gen_min_pixels(self) -> int:
        return self._get_default("gen", "min-pixels")

    @property
    def gen_max_pixels(self) -> int:
        return self._get_default("gen", "max-pixels")

    @property
    def render_scale(self) -> float:
        return self._get_default("render", "scale")

    @property
    def render_margin(self) -> float:
        return self._get_default("render", "margin")

    @staticmethod
    def create(path: Path) -> HamgridConfig:
        """
        Write a new `hamgrid.toml` file at the given file path, containing all
        default values along with comments explaining them.

        Note: Unlike the constructor of this class, this method has the side
        effect that the file is immediately written to disk.
        """
        document = tomlkit.document()
        document.add(
            tomlkit.comment(
                "Configuration for hamgrid. Command line flags override the"
                " values in here."
            )
        )

        for (section_name, key_name), (
            _,
            default,
            comment,
        ) in DEFAULTS.items():
            try:
                section = document[section_name]
            except KeyError:
                section = tomlkit.table()
                document[section_name] = section

            section.add(tomlkit.comment(comment))  # type: ignore
            section.add(key_name, default)  # type: ignore

        # Write the resulting file
        with path.open("w", encoding="utf-8") as file:
            file.write(tomlkit.dumps(document))

        return HamgridConfig(
            file_path=path,
            toml_dict=document.unwrap(),
        )

    @staticmethod
    def try_locate_and_load(start: Path | None = None) -> HamgridConfig:
        """
        Searches upward from `start` (the working directory by default) for a
        `hamgrid.toml` file and loads it. Throws `FileNotFoundError` if the
        file can't be found.
        """
        for directory in iter_directories_upward(start):
            path = directory / CONFIG_FILE_NAME

            if path.exists():
                break
        else:
            raise FileNotFoundError(f"{CONFIG_FILE_NAME} not found")

        hamgrid._logger.debug(f"Loading configuration from `{path}`")

        with path.open(encoding="utf-8") as f:
            toml_dict = tomlkit.load(f).unwrap()

        return HamgridConfig(file_path=path, toml_dict=toml_dict)

    @staticmethod
    def load_or_default(start: Path | None = None) -> HamgridConfig:
        """
        Like `try_locate_and_load`, but returns a configuration holding only
        the built-in defaults if no file exists. A file that exists but can't
        be read is a fatal error.
        """
        try:
            return HamgridConfig.try_locate_and_load(start)

        # No such file, use the defaults
        except FileNotFoundError:
            return HamgridConfig(file_path=None, toml_dict={})

        # Anything OS related
        except OSError as e:
            revel.fatal(
                f"Cannot read `{CONFIG_FILE_NAME}`: {e}",
                status_code=2,
            )

        # Invalid syntax
        except tomlkit.exceptions.TOMLKitError as e:
            revel.fatal(
                f"There is a problem with `{CONFIG_FILE_NAME}`: {e}",
                status_code=2,
            )


def iter_directories_upward(path: Path | None = None) -> Iterable[Path]:
    if path is None:
        path = Path.cwd()

    path = path.absolute()

    yield path
    yield from path.parents
