import json as json_module
import logging
import sys
from pathlib import Path
from typing import Literal

import revel
from revel import *  # type: ignore

import hamgrid

from .. import (
    complexity,
    grid_graph,
    generate,
    io_formats,
    reduce_hex,
    reduce_sq,
    solver,
)
from ..grid_graph import GridGraph
from ..ham_core import CycleCertificate, verify_cycle
from ..lattice import GridKind
from ..project_config import CONFIG_FILE_NAME, HamgridConfig
from ..sat import SatEmbedding
from ..trvb import Multigraph
from ..utils import first_non_null
from .documents import (
    EXIT_ERROR,
    EXIT_NO,
    parse_count,
    read_document,
    read_sidecar,
    reporting_errors,
    write_output,
    write_sidecar,
)

_logger = logging.getLogger(__name__)

__all__ = [
    "app",
    "run",
]

revel.GLOBAL_STYLES.add_alias("primary", ["cyan"])

app = revel.App(
    nicename="hamgrid",
    command_name="hamgrid",
    summary="Hamiltonian cycles in square, triangular and hexagonal grids",
    details="""
hamgrid classifies grid graphs, decides whether they have a Hamiltonian cycle
and compiles NP-hard problems into grid graphs.

Grid graphs, SAT embeddings, TRVB instances and cycle certificates are plain
text files. Results go to standard output unless `-o` names a file.

Exit codes: 0 means success or "yes", 1 a definite "no" and 2 an error or an
exhausted search budget.
""",
    version=hamgrid.__version__,
)


def run(argv: list[str] | None = None) -> None:
    """
    Runs the command line interface. `-o` is accepted as a short form of
    `--output`.
    """
    if argv is None:
        argv = sys.argv[1:]

    app.run(["--output" if a == "-o" else a for a in argv])


def _optional_path(value: str | None) -> Path | None:
    return None if value is None else Path(value)


def _grid(path: Path) -> GridGraph:
    doc = read_document(path, "grid")
    assert isinstance(doc.payload, GridGraph), doc
    return doc.payload


def _certificate(path: Path, kind: GridKind) -> CycleCertificate:
    doc = read_document(path, "certificate")
    assert isinstance(doc.payload, CycleCertificate), doc

    if doc.kind is not kind:
        fatal(
            f"`{path}` is a {doc.kind.value if doc.kind else '?'} certificate,"
            f" but the grid is {kind.value}",
            status_code=EXIT_ERROR,
        )

    return doc.payload


@app.command(
    summary="Report which grid graph classes a graph belongs to",
    parameters=[
        revel.Parameter("path", summary="The grid file to classify"),
        revel.Parameter("json", summary="Print the report as JSON"),
    ],
    details="""
The `classify` command checks connectivity, minimum degree, thinness,
polygonality, solidity and the other properties the complexity of
Hamiltonicity depends on. It also prints the complexity known for the most
specific class the graph belongs to.
""",
)
def classify(path: str, /, *, json: bool = False) -> None:
    with reporting_errors():
        g = _grid(Path(path))
        report = grid_graph.classify(g)
        row, label = complexity.label(report)

    if json:
        doc = report.as_json()
        doc["class"] = row.name
        doc["complexity"] = label
        write_output(_json_text(doc), None)
        return

    def mark(value: bool) -> str:
        return "[green]yes[/]" if value else "[red]no[/]"

    print(f"[bold]{report.kind.value}[/] grid graph")
    print(
        f"{report.vertex_count} vertices, {report.edge_count} edges,"
        f" {report.pixel_count} pixels, {report.hole_count} holes"
    )
    print(f"connected:       {mark(report.connected)}")
    print(f"min degree >= 2: {mark(report.min_degree_ok)}")
    print(f"thin:            {mark(report.thin)}")
    print(f"polygonal:       {mark(report.polygonal)}")
    print(f"solid:           {mark(report.solid)}")
    print(f"superthin:       {mark(report.superthin)}")
    print(f"degree-bounded:  {mark(report.degree_bounded)}")

    note = row.note.get(report.kind)
    suffix = f" ({note})" if note else ""
    print(f"class: [primary]{row.name}[/]{suffix}")
    print(f"complexity: [bold]{label}[/]")


def _json_text(doc: object) -> str:
    return json_module.dumps(doc, indent=2) + "\n"


@app.command(
    summary="Find a Hamiltonian cycle",
    parameters=[
        revel.Parameter("path", summary="The grid file to solve"),
        revel.Parameter(
            "budget",
            summary="Node expansions the exact search may spend, e.g. 5e7",
        ),
        revel.Parameter("output", summary="Where to write the certificate"),
    ],
    details="""
The `solve` command picks the best algorithm for the graph. Thin polygonal
square and hexagonal graphs are solved in polynomial time. Everything else
falls back to an exact search limited by `--budget`.

Exits with 0 and prints a certificate if a cycle was found, 1 if there is
none, and 2 if the budget ran out.
""",
)
def solve(
    path: str,
    /,
    *,
    budget: str | None = None,
    output: str | None = None,
) -> None:
    target = _optional_path(output)
    config = HamgridConfig.load_or_default()
    limit = first_non_null(
        None if budget is None else parse_count(budget, "budget"),
        config.oracle_budget,
    )

    with reporting_errors():
        g = _grid(Path(path))
        outcome = solver.solve(g, limit)

    _logger.debug(f"Solved `{path}` using the {outcome.method} route")

    if outcome.status == "exhausted":
        error(
            f"The search ran out of budget after {outcome.result.expansions}"
            f" expansions. Try a larger `--budget`."
        )
        sys.exit(EXIT_ERROR)

    if outcome.status == "none":
        warning("The graph has no Hamiltonian cycle")
        sys.exit(EXIT_NO)

    cert = outcome.result.certificate
    assert cert is not None, outcome

    with reporting_errors():
        write_output(io_formats.serialize_certificate(cert, g.kind), target)

    if target is not None:
        success(f"Hamiltonian cycle written to `{target}`")


@app.command(
    name="reduce-sat",
    summary="Compile a SAT embedding into a square grid graph",
    parameters=[
        revel.Parameter("path", summary="The SAT embedding to compile"),
        revel.Parameter(
            "spacing",
            summary="Extra cells between neighboring variable gadgets",
        ),
        revel.Parameter("output", summary="Where to write the grid"),
        revel.Parameter(
            "check",
            summary="Also decide satisfiability by brute force",
        ),
    ],
    details="""
The `reduce-sat` command compiles a planar monotone rectilinear 3SAT embedding
into a polygonal square grid graph which is Hamiltonian exactly if the formula
is satisfiable. If `--output` is given, the correspondence between variables
and pixels is written next to it, with `.corr.json` appended to its name.
""",
)
def reduce_sat(
    path: str,
    /,
    *,
    spacing: int | None = None,
    output: str | None = None,
    check: bool = False,
) -> None:
    target = _optional_path(output)
    config = HamgridConfig.load_or_default()

    with reporting_errors():
        doc = read_document(Path(path), "sat")
        embedding = doc.payload
        assert isinstance(embedding, SatEmbedding), doc

        g, corr = reduce_sq.compile(
            embedding,
            spacing=first_non_null(spacing, config.compile_spacing),
            max_spacing=config.compile_max_spacing,
        )
        write_output(io_formats.serialize_grid(g), target)

        if target is not None:
            sidecar = write_sidecar(target, corr)
            success(f"Wrote `{target}` and `{sidecar}`")

    if check:
        found = reduce_sq.solve_formula_brute_force(embedding)
        stream = sys.stderr if target is None else sys.stdout

        if found is None:
            stream.write("unsatisfiable\n")
        else:
            stream.write(f"satisfiable: {found}\n")


@app.command(
    name="reduce-trvb",
    summary="Compile a TRVB instance into a thin hexagonal grid graph",
    parameters=[
        revel.Parameter("path", summary="The TRVB instance to compile"),
        revel.Parameter(
            "spacing",
            summary="Extra cells between neighboring vertex gadgets",
        ),
        revel.Parameter("output", summary="Where to write the grid"),
    ],
    details="""
The `reduce-trvb` command compiles a planar 6-regular Tree-Residue
Vertex-Breaking instance, with every vertex breakable, into a thin hexagonal
grid graph which is Hamiltonian exactly if some set of breaks leaves a tree.
If `--output` is given, the correspondence between vertices and pixels is
written next to it, with `.corr.json` appended to its name.
""",
)
def reduce_trvb(
    path: str,
    /,
    *,
    spacing: int | None = None,
    output: str | None = None,
) -> None:
    target = _optional_path(output)
    config = HamgridConfig.load_or_default()

    with reporting_errors():
        doc = read_document(Path(path), "trvb")
        m = doc.payload
        assert isinstance(m, Multigraph), doc

        g, corr = reduce_hex.compile(
            m,
            spacing=first_non_null(spacing, config.compile_spacing),
        )
        write_output(io_formats.serialize_grid(g), target)

        if target is not None:
            sidecar = write_sidecar(target, corr)
            success(f"Wrote `{target}` and `{sidecar}`")


@app.command(
    summary="Check a Hamiltonian cycle certificate",
    parameters=[
        revel.Parameter("grid", summary="The grid file"),
        revel.Parameter("certificate", summary="The certificate to check"),
    ],
    details="""
The `verify` command checks that a certificate is a Hamiltonian cycle of the
grid graph. Exits with 0 if it is and 1 if it isn't.

If the grid was compiled by `reduce-sat` or `reduce-trvb` and its
correspondence file is present, the satisfying assignment or breaking set is
read off the cycle and printed as well.
""",
)
def verify(grid: str, certificate: str, /) -> None:
    with reporting_errors():
        g = _grid(Path(grid))
        cert = _certificate(Path(certificate), g.kind)
        verdict = verify_cycle(g, cert)

    if not verdict:
        error(f"Not a Hamiltonian cycle: {verdict.detail}")
        sys.exit(EXIT_NO)

    success("The certificate is a Hamiltonian cycle")

    with reporting_errors():
        sidecar = read_sidecar(Path(grid))

        if sidecar is None:
            return

        if "variables" in sidecar:
            corr = reduce_sq.SquareCorrespondence.from_json(sidecar)
            assignment = reduce_sq.extract_assignment(corr, cert)
            print(f"Satisfying assignment: {assignment}")
        else:
            corr = reduce_hex.HexCorrespondence.from_json(sidecar)
            broken = reduce_hex.extract_breaking_set(corr, cert)
            print(f"Breaking set: {sorted(broken)}")


@app.command(
    summary="Draw a grid graph as SVG",
    parameters=[
        revel.Parameter("path", summary="The grid file to draw"),
        revel.Parameter(
            "certificate",
            summary="A certificate to draw on top of the graph",
        ),
        revel.Parameter("output", summary="Where to write the SVG"),
    ],
)
def render(
    path: str,
    /,
    *,
    certificate: str | None = None,
    output: str | None = None,
) -> None:
    config = HamgridConfig.load_or_default()

    with reporting_errors():
        g = _grid(Path(path))
        overlay = (
            None
            if certificate is None
            else _certificate(Path(certificate), g.kind)
        )
        svg = io_formats.render_svg(
            g,
            overlay,
            scale=config.render_scale,
            margin=config.render_margin,
        )
        write_output(svg, _optional_path(output))


@app.command(
    summary="Generate a random thin polygonal grid graph",
    parameters=[
        revel.Parameter("kind", summary="The lattice to generate on"),
        revel.Parameter("seed", summary="Seed for the random generator"),
        revel.Parameter("min_pixels", summary="Smallest allowed size"),
        revel.Parameter("max_pixels", summary="Largest allowed size"),
        revel.Parameter(
            "shape",
            summary="Grow from one pixel (`tree`) or around a hole (`ring`)",
        ),
        revel.Parameter("output", summary="Where to write the grid"),
    ],
    details="""
The `gen` command grows a random connected, thin, polygonal grid graph. The
same seed always produces the same file.
""",
)
def gen(
    kind: Literal["square", "triangular", "hexagonal"],
    /,
    *,
    seed: int | None = None,
    min_pixels: int | None = None,
    max_pixels: int | None = None,
    shape: Literal["tree", "ring"] = "tree",
    output: str | None = None,
) -> None:
    config = HamgridConfig.load_or_default()

    with reporting_errors():
        g = generate.generate(
            GridKind(kind),
            seed=first_non_null(seed, config.gen_seed),
            min_pixels=first_non_null(min_pixels, config.gen_min_pixels),
            max_pixels=first_non_null(max_pixels, config.gen_max_pixels),
            shape=shape,
        )
        write_output(io_formats.serialize_grid(g), _optional_path(output))


@app.command(
    summary=f"Create a `{CONFIG_FILE_NAME}` with all default settings",
    details=f"""
The `init` command writes a `{CONFIG_FILE_NAME}` file into the working
directory. Every setting is listed with its default value and a comment
explaining it. Command line flags take precedence over the file.
""",
)
def init() -> None:
    path = Path.cwd() / CONFIG_FILE_NAME

    if path.exists():
        fatal(f"`{path}` already exists", status_code=EXIT_ERROR)

    with reporting_errors():
        HamgridConfig.create(path)

    success(f"Created `{path}`")

