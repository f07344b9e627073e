from pathlib import Path

import pytest
import tomlkit

from hamgrid import ham_core
from hamgrid.project_config import (
    CONFIG_FILE_NAME,
    DEFAULTS,
    HamgridConfig,
    iter_directories_upward,
)


def test_defaults_without_a_file() -> None:
    config = HamgridConfig(file_path=None, toml_dict={})

    assert config.oracle_budget == ham_core.DEFAULT_BUDGET
    assert config.compile_spacing == 4
    assert config.gen_max_pixels == 200
    assert config.render_scale == 40.0


def test_every_default_has_a_property() -> None:
    config = HamgridConfig(file_path=None, toml_dict={})

    for section, key in DEFAULTS:
        name = f"{section}_{key.replace('-', '_')}"
        assert getattr(config, name) == DEFAULTS[section, key][1], name


def test_create_writes_every_default(tmp_path: Path) -> None:
    path = tmp_path / CONFIG_FILE_NAME
    config = HamgridConfig.create(path)

    assert config.file_path == path

    written = tomlkit.loads(path.read_text(encoding="utf-8")).unwrap()

    for (section, key), (_, default, _) in DEFAULTS.items():
        assert written[section][key] == default


def test_values_are_found_in_parent_directories(tmp_path: Path) -> None:
    (tmp_path / CONFIG_FILE_NAME).write_text(
        "[compile]\nspacing = 9\n\n[render]\nscale = 12\n",
        encoding="utf-8",
    )
    nested = tmp_path / "a" / "b"
    nested.mkdir(parents=True)

    config = HamgridConfig.load_or_default(nested)

    assert config.file_path == tmp_path / CONFIG_FILE_NAME
    assert config.compile_spacing == 9
    assert config.compile_max_spacing == 64

    # Integers are fine where floats are expected
    assert config.render_scale == 12.0
    assert isinstance(config.render_scale, float)


def test_wrong_types_are_rejected() -> None:
    config = HamgridConfig(
        file_path=None,
        toml_dict={"gen": {"seed": "seven", "min-pixels": True}},
    )

    with pytest.raises(TypeError):
        config.gen_seed

    with pytest.raises(TypeError):
        config.gen_min_pixels


def test_invalid_files_are_fatal(tmp_path: Path) -> None:
    (tmp_path / CONFIG_FILE_NAME).write_text("[gen\n", encoding="utf-8")

    with pytest.raises(SystemExit):
        HamgridConfig.load_or_default(tmp_path)


def test_directories_upward(tmp_path: Path) -> None:
    directories = list(iter_directories_upward(tmp_path / "x"))

    assert directories[0] == tmp_path / "x"
    assert directories[1] == tmp_path
    assert directories[-1] == Path(tmp_path.anchor)
