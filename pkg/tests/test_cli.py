import json
from pathlib import Path
from typing import Callable

import pytest

from hamgrid import cli, complexity, grid_graph, io_formats
from hamgrid.cli import documents
from hamgrid.errors import ParseError
from hamgrid.grid_graph import build
from hamgrid.ham_core import CycleCertificate, verify_cycle
from hamgrid.lattice import Coord, GridKind
from hamgrid.project_config import CONFIG_FILE_NAME
from hamgrid.regions import CellRegion
from hamgrid.sat import Clause, SatEmbedding


@pytest.mark.parametrize(
    "text, value",
    [("0", 0), ("1000", 1000), ("5e7", 50_000_000), ("2.0", 2)],
)
def test_parse_count(text: str, value: int) -> None:
    assert documents.parse_count(text, "budget") == value


@pytest.mark.parametrize("text", ["lots", "-1", "1.5"])
def test_parse_count_rejects_junk(text: str) -> None:
    with pytest.raises(SystemExit) as info:
        documents.parse_count(text, "budget")

    assert info.value.code == documents.EXIT_ERROR


def test_library_errors_become_exit_codes() -> None:
    with pytest.raises(SystemExit) as info:
        with documents.reporting_errors():
            raise ParseError("Broken", 3)

    assert info.value.code == documents.EXIT_ERROR

    with pytest.raises(SystemExit) as info:
        with documents.reporting_errors():
            raise FileNotFoundError("missing.grid")

    assert info.value.code == documents.EXIT_ERROR


def test_read_document_checks_the_format(tmp_path: Path) -> None:
    path = tmp_path / "one.grid"
    path.write_text(
        io_formats.serialize_grid(build(GridKind.SQUARE, [(0, 0), (1, 0)])),
        encoding="utf-8",
    )

    assert documents.read_document(path, "grid").format == "grid"
    assert documents.read_document(path).format == "grid"

    with pytest.raises(SystemExit):
        documents.read_document(path, "sat", "trvb")


def test_write_output(
    tmp_path: Path,
    capsys: pytest.CaptureFixture[str],
) -> None:
    documents.write_output("grid square\n", None)
    assert capsys.readouterr().out == "grid square\n"

    path = tmp_path / "out.grid"
    documents.write_output("grid square\n", path)
    assert path.read_text(encoding="utf-8") == "grid square\n"


def test_sidecars(tmp_path: Path) -> None:
    grid = tmp_path / "compiled.grid"

    assert documents.sidecar_path(grid) == tmp_path / "compiled.grid.corr.json"
    assert documents.read_sidecar(grid) is None

    region = CellRegion(id=2, anchors=[[0, 0], [1, 0]])
    written = documents.write_sidecar(grid, region)

    assert written == documents.sidecar_path(grid)
    assert json.loads(written.read_text(encoding="utf-8"))["id"] == 2
    assert documents.read_sidecar(grid) == region.as_json()


def _write_grid(path: Path, coords: list[tuple[int, int]]) -> Path:
    path.write_text(
        io_formats.serialize_grid(build(GridKind.SQUARE, coords)),
        encoding="utf-8",
    )
    return path


def _block(width: int, height: int) -> list[tuple[int, int]]:
    return [(x, y) for x in range(width) for y in range(height)]


def _exit_code(function: Callable[[], object]) -> int | str | None:
    with pytest.raises(SystemExit) as info:
        function()

    return info.value.code


@pytest.fixture
def workdir(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    monkeypatch.chdir(tmp_path)
    return tmp_path


def test_classify_prints_the_complexity(
    workdir: Path,
    capsys: pytest.CaptureFixture[str],
) -> None:
    path = _write_grid(workdir / "block.grid", _block(4, 3))
    _, label = complexity.label(
        grid_graph.classify(build(GridKind.SQUARE, _block(4, 3)))
    )

    cli.classify(str(path))
    out = capsys.readouterr().out

    assert "complexity:" in out
    assert label in out

    cli.classify(str(path), json=True)
    doc = json.loads(capsys.readouterr().out)

    assert doc["complexity"] == label


def test_solve_writes_a_certificate_that_verifies(
    workdir: Path,
    capsys: pytest.CaptureFixture[str],
) -> None:
    grid = workdir / "tree.grid"
    cli.gen("square", seed=4, min_pixels=6, max_pixels=12, output=str(grid))

    cert = workdir / "tree.cycle"
    cli.solve(str(grid), output=str(cert))

    kind, parsed = io_formats.parse_certificate(
        cert.read_text(encoding="utf-8")
    )
    g = io_formats.parse_grid(grid.read_text(encoding="utf-8"))

    assert kind is GridKind.SQUARE
    assert verify_cycle(g, parsed)

    capsys.readouterr()
    cli.verify(str(grid), str(cert))

    assert "Hamiltonian cycle" in capsys.readouterr().out


def test_solve_to_stdout(
    workdir: Path,
    capsys: pytest.CaptureFixture[str],
) -> None:
    grid = _write_grid(workdir / "block.grid", _block(4, 3))

    cli.solve(str(grid))
    out = capsys.readouterr().out

    assert out.startswith("cycle square\n")
    assert out.count("\ne ") == 12


@pytest.mark.parametrize("output", [None, "block.cycle"])
def test_solve_reports_missing_cycles(
    workdir: Path,
    capsys: pytest.CaptureFixture[str],
    output: str | None,
) -> None:
    # 5 black and 4 white vertices
    grid = _write_grid(workdir / "block.grid", _block(3, 3))

    code = _exit_code(lambda: cli.solve(str(grid), output=output))

    assert code == documents.EXIT_NO
    assert "no Hamiltonian cycle" in capsys.readouterr().out
    assert not (workdir / "block.cycle").exists()


def test_solve_errors(workdir: Path) -> None:
    grid = _write_grid(workdir / "block.grid", _block(4, 3))

    missing = _exit_code(lambda: cli.solve(str(workdir / "missing.grid")))
    junk_budget = _exit_code(lambda: cli.solve(str(grid), budget="lots"))

    assert missing == documents.EXIT_ERROR
    assert junk_budget == documents.EXIT_ERROR


def test_verify_rejects_bad_certificates(workdir: Path) -> None:
    grid = _write_grid(workdir / "block.grid", _block(2, 3))
    square = CycleCertificate.from_edges(
        [
            (Coord(0, 0), Coord(1, 0)),
            (Coord(1, 0), Coord(1, 1)),
            (Coord(1, 1), Coord(0, 1)),
            (Coord(0, 1), Coord(0, 0)),
        ]
    )

    short = workdir / "short.cycle"
    short.write_text(
        io_formats.serialize_certificate(square, GridKind.SQUARE),
        encoding="utf-8",
    )

    wrong_kind = workdir / "hex.cycle"
    wrong_kind.write_text("cycle hexagonal\n", encoding="utf-8")

    assert (
        _exit_code(lambda: cli.verify(str(grid), str(short)))
        == documents.EXIT_NO
    )
    assert (
        _exit_code(lambda: cli.verify(str(grid), str(wrong_kind)))
        == documents.EXIT_ERROR
    )


def test_gen_is_reproducible(
    workdir: Path,
    capsys: pytest.CaptureFixture[str],
) -> None:
    args = ["gen", "hexagonal", "--seed", "11", "--max-pixels", "30"]

    cli.run(args + ["-o", "first.grid"])
    cli.run(args + ["--output", "second.grid"])

    first = (workdir / "first.grid").read_bytes()

    assert first == (workdir / "second.grid").read_bytes()

    capsys.readouterr()
    cli.run(args)

    assert capsys.readouterr().out.encode("utf-8") == first

    g = io_formats.parse_grid(first.decode("utf-8"))
    report = grid_graph.classify(g)

    assert report.kind is GridKind.HEXAGONAL
    assert report.connected and report.thin and report.polygonal


@pytest.mark.parametrize(
    "embedding, verdict",
    [
        (SatEmbedding(1, (Clause(True, 1, (1, 1, 1)),)), "satisfiable:"),
        (
            SatEmbedding(
                1,
                (
                    Clause(True, 1, (1, 1, 1)),
                    Clause(False, 1, (1, 1, 1)),
                ),
            ),
            "unsatisfiable",
        ),
    ],
)
def test_reduce_sat_writes_the_sidecar(
    workdir: Path,
    capsys: pytest.CaptureFixture[str],
    embedding: SatEmbedding,
    verdict: str,
) -> None:
    formula = workdir / "formula.sat"
    formula.write_text(io_formats.serialize_sat(embedding), encoding="utf-8")

    cli.reduce_sat(str(formula), output="formula.grid", check=True)
    out = capsys.readouterr().out

    assert verdict in out
    assert (workdir / "formula.grid").exists()
    assert documents.read_sidecar(workdir / "formula.grid") is not None


def test_render_draws_the_certificate(workdir: Path) -> None:
    grid = _write_grid(workdir / "block.grid", _block(4, 3))
    cli.solve(str(grid), output="block.cycle")
    cli.render(str(grid), certificate="block.cycle", output="block.svg")

    assert "<svg" in (workdir / "block.svg").read_text(encoding="utf-8")


def test_init_refuses_to_overwrite(workdir: Path) -> None:
    cli.init()

    assert (workdir / CONFIG_FILE_NAME).exists()
    assert _exit_code(cli.init) == documents.EXIT_ERROR
