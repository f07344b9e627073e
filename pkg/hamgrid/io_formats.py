"""
Plain text formats for grid graphs, TRVB instances, SAT embeddings, cycle
certificates and gadgets, plus SVG rendering.

All formats are line oriented. Each line starts with a keyword, `#` starts a
comment and blank lines are ignored. Serialization is canonical, so equal
values always produce identical text.

```
grid hexagonal          vx 0 1                  vars 3
v 1 0                   e 0 0 0                 clause + 1 1 2 3
v 2 0                   rot 0 0 0               clause - 1 1 1 2 legs 0 1 0
...                     ...                     ...

cycle square            gadget turn square
e 0 0 1 0               stub-length 2
e 1 0 1 1               cell 0 0
...                     port 0 -1 0 2
```
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import *  # type: ignore

import drawsvg as draw

from . import lattice
from .errors import (
    CellError,
    CoordinateError,
    HamgridError,
    InvariantViolation,
    MonotonicityError,
    ParseError,
    TrvbIdError,
)
from .gadgets.template import GadgetTemplate, Port
from .grid_graph import GridGraph, build, edge_key, make_edge, vertex_key
from .ham_core import CycleCertificate
from .lattice import Cell, Coord, GridKind
from .sat import Clause, SatEmbedding
from .trvb import Multigraph

__all__ = [
    "Document",
    "DocumentFormat",
    "parse_document",
    "serialize_document",
    "parse_grid",
    "serialize_grid",
    "parse_trvb",
    "serialize_trvb",
    "parse_sat",
    "serialize_sat",
    "parse_certificate",
    "serialize_certificate",
    "parse_gadget",
    "serialize_gadget",
    "render_svg",
]


DocumentFormat = Literal["grid", "trvb", "sat", "certificate", "gadget"]

Payload = Union[
    GridGraph, Multigraph, SatEmbedding, CycleCertificate, GadgetTemplate
]


@dataclass(frozen=True)
class Document:
    """
    Any parsed document.

    ## Attributes

    `format`: Which kind of document this is.

    `payload`: The parsed value.

    `kind`: The lattice of grid graphs and certificates, `None` otherwise.
    """

    format: DocumentFormat
    payload: Payload
    kind: GridKind | None = None


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for number, line in enumerate(text.splitlines(), start=1):
        tokens = line.split("#", 1)[0].split()

        if tokens:
            yield number, tokens


def _int(token: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"Expected an integer, not `{token}`", line) from None


def _expect_arity(tokens: list[str], count: int, line: int) -> None:
    if len(tokens) != count:
        raise ParseError(
            f"`{tokens[0]}` lines take {count - 1} values, but"
            f" {len(tokens) - 1} were given",
            line,
        )


def _kind(token: str, line: int) -> GridKind:
    try:
        return GridKind(token)
    except ValueError:
        options = ", ".join(k.value for k in GridKind)
        raise ParseError(
            f"Unknown grid kind `{token}`. Expected one of {options}",
            line,
        ) from None


def _header(
    text: str,
    keyword: str,
    arity: int,
) -> tuple[list[str], Iterator[tuple[int, list[str]]]]:
    lines = _lines(text)

    try:
        line, tokens = next(lines)
    except StopIteration:
        raise ParseError(f"The document is empty, expected `{keyword}`")

    if tokens[0] != keyword:
        raise ParseError(
            f"Expected the document to start with `{keyword}`, not"
            f" `{tokens[0]}`",
            line,
        )

    _expect_arity(tokens, arity, line)
    return tokens, lines


def _unknown(tokens: list[str], line: int) -> NoReturn:
    raise ParseError(f"Unexpected keyword `{tokens[0]}`", line)


# Grid graphs


def parse_grid(text: str) -> GridGraph:
    """
    Parses a grid graph. The first line names the lattice, every following
    line a vertex.


    ## Raises

    `ParseError`: If a line is malformed, a vertex is listed twice, or a
        coordinate isn't a vertex of the lattice.
    """
    header, lines = _header(text, "grid", 2)
    kind = _kind(header[1], 1)
    seen: dict[Coord, int] = {}

    for line, tokens in lines:
        if tokens[0] != "v":
            _unknown(tokens, line)

        _expect_arity(tokens, 3, line)
        c = Coord(_int(tokens[1], line), _int(tokens[2], line))

        if c in seen:
            raise ParseError(
                f"The vertex {tuple(c)} was already listed on line"
                f" {seen[c]}",
                line,
            )

        try:
            lattice.validate_coord(kind, c)
        except CoordinateError as err:
            raise ParseError(err.message, line) from None

        seen[c] = line

    return build(kind, seen)


def serialize_grid(g: GridGraph) -> str:
    parts = [f"grid {g.kind.value}\n"]
    parts.extend(f"v {a} {b}\n" for a, b in g.vertices)
    return "".join(parts)


# TRVB instances


def parse_trvb(text: str) -> Multigraph:
    """
    Parses a TRVB instance: `vx` lines declare vertices and their breakable
    flag, `e` lines edges, and optional `rot` lines the counterclockwise
    order of edges around a vertex. Self-loops are listed twice in `rot`.


    ## Raises

    `ParseError`: If a line is malformed, an id is declared twice or unknown,
        or the rotation system is incomplete.
    """
    breakable: dict[int, bool] = {}
    edges: dict[int, tuple[int, int]] = {}
    rotation: dict[int, tuple[int, ...]] = {}
    rotation_lines: dict[int, int] = {}
    edge_lines: dict[int, int] = {}

    for line, tokens in _lines(text):
        keyword = tokens[0]

        if keyword == "vx":
            _expect_arity(tokens, 3, line)
            vertex = _int(tokens[1], line)

            if tokens[2] not in ("0", "1"):
                raise ParseError(
                    f"The breakable flag must be 0 or 1, not `{tokens[2]}`",
                    line,
                )

            if vertex in breakable:
                raise ParseError(f"Vertex {vertex} is declared twice", line)

            breakable[vertex] = tokens[2] == "1"

        elif keyword == "e":
            _expect_arity(tokens, 4, line)
            edge_id, u, v = (_int(t, line) for t in tokens[1:])

            if edge_id in edges:
                raise ParseError(f"Edge {edge_id} is declared twice", line)

            edges[edge_id] = (u, v)
            edge_lines[edge_id] = line

        elif keyword == "rot":
            if len(tokens) < 2:
                raise ParseError("`rot` lines need a vertex id", line)

            vertex = _int(tokens[1], line)

            if vertex in rotation:
                raise ParseError(
                    f"The rotation at vertex {vertex} is given twice", line
                )

            rotation[vertex] = tuple(_int(t, line) for t in tokens[2:])
            rotation_lines[vertex] = line

        else:
            _unknown(tokens, line)

    for edge_id, (u, v) in edges.items():
        for end in (u, v):
            if end not in breakable:
                raise ParseError(
                    f"Edge {edge_id} references the undeclared vertex {end}",
                    edge_lines[edge_id],
                )

    if rotation:
        for vertex in breakable:
            if vertex not in rotation:
                raise ParseError(
                    f"The rotation system doesn't cover vertex {vertex}"
                )

        for vertex, order in rotation.items():
            line = rotation_lines[vertex]

            for edge_id in order:
                if edge_id not in edges:
                    raise ParseError(
                        f"The rotation at vertex {vertex} lists the unknown"
                        f" edge {edge_id}",
                        line,
                    )

                u, v = edges[edge_id]
                allowed = (u == vertex) + (v == vertex)

                if order.count(edge_id) != allowed:
                    raise ParseError(
                        f"The rotation at vertex {vertex} lists edge"
                        f" {edge_id} {order.count(edge_id)} times, but it has"
                        f" {allowed} ends there",
                        line,
                    )

    try:
        return Multigraph(
            breakable=dict(sorted(breakable.items())),
            edges=dict(sorted(edges.items())),
            rotation=dict(sorted(rotation.items())) if rotation else None,
        )
    except (TrvbIdError, InvariantViolation) as err:
        raise ParseError(err.message) from None


def serialize_trvb(m: Multigraph) -> str:
    parts: list[str] = []

    for vertex, flag in sorted(m.breakable.items()):
        parts.append(f"vx {vertex} {int(flag)}\n")

    for edge_id, (u, v) in sorted(m.edges.items()):
        parts.append(f"e {edge_id} {u} {v}\n")

    if m.rotation is not None:
        for vertex, order in sorted(m.rotation.items()):
            parts.append(" ".join(map(str, ["rot", vertex, *order])) + "\n")

    return "".join(parts)


# SAT embeddings


def _literal(token: str, positive: bool, line: int) -> int:
    negated = token.startswith("-")
    variable = _int(token.lstrip("+-"), line)

    if negated and positive:
        raise MonotonicityError(
            f"The clause lies above the axis, so it can't contain the negative"
            f" literal `{token}`",
            line,
        )

    if token.startswith("+") and not positive:
        raise MonotonicityError(
            f"The clause lies below the axis, so it can't contain the positive"
            f" literal `{token}`",
            line,
        )

    return variable


def parse_sat(text: str) -> SatEmbedding:
    """
    Parses a monotone rectilinear 3SAT embedding.

    Clause lines read `clause <+|-> <level> <i> <j> <k>`, optionally followed
    by `legs <s1> <s2> <s3>` to place the legs explicitly. Literals may carry
    an explicit sign, which must match the clause's side.


    ## Raises

    `ParseError`: If a line is malformed or references an unknown variable.

    `MonotonicityError`: If a literal's sign doesn't match its clause's side.

    `PlanarityError`: If legs would cross clause segments.
    """
    header, lines = _header(text, "vars", 2)
    count = _int(header[1], 1)

    if count < 1:
        raise ParseError("An embedding needs at least one variable", 1)

    clauses: list[Clause] = []

    for line, tokens in lines:
        if tokens[0] != "clause":
            _unknown(tokens, line)

        if len(tokens) not in (6, 10) or (
            len(tokens) == 10 and tokens[6] != "legs"
        ):
            raise ParseError(
                "Expected `clause <+|-> <level> <i> <j> <k>`, optionally"
                " followed by `legs <s1> <s2> <s3>`",
                line,
            )

        if tokens[1] not in ("+", "-"):
            raise ParseError(
                f"The clause side must be `+` or `-`, not `{tokens[1]}`", line
            )

        positive = tokens[1] == "+"
        level = _int(tokens[2], line)
        variables = tuple(_literal(t, positive, line) for t in tokens[3:6])
        slots = (
            tuple(_int(t, line) for t in tokens[7:10])
            if len(tokens) == 10
            else None
        )

        for v in variables:
            if not 1 <= v <= count:
                raise ParseError(
                    f"x{v} doesn't exist, only x1..x{count} do", line
                )

        try:
            clauses.append(
                Clause(positive, level, variables, slots)  # type: ignore
            )
        except HamgridError as err:
            raise ParseError(err.message, line) from None

    embedding = SatEmbedding(count, tuple(clauses))
    embedding.validate()
    return embedding


def serialize_sat(e: SatEmbedding) -> str:
    parts = [f"vars {e.variable_count}\n"]

    for clause in e.clauses:
        tokens = ["clause", clause.sign, clause.level, *clause.variables]

        if clause.slots is not None:
            tokens.extend(["legs", *clause.slots])

        parts.append(" ".join(map(str, tokens)) + "\n")

    return "".join(parts)


# Certificates


def parse_certificate(text: str) -> tuple[GridKind, CycleCertificate]:
    """
    Parses a cycle certificate: a header naming the lattice, followed by one
    `e <a1> <b1> <a2> <b2>` line per edge.


    ## Raises

    `ParseError`: If a line is malformed or an edge is listed twice.
    """
    header, lines = _header(text, "cycle", 2)
    kind = _kind(header[1], 1)
    edges: set[tuple[Coord, Coord]] = set()

    for line, tokens in lines:
        if tokens[0] != "e":
            _unknown(tokens, line)

        _expect_arity(tokens, 5, line)
        a1, b1, a2, b2 = (_int(t, line) for t in tokens[1:])

        try:
            u = lattice.validate_coord(kind, (a1, b1))
            v = lattice.validate_coord(kind, (a2, b2))
        except CoordinateError as err:
            raise ParseError(err.message, line) from None

        edge = make_edge(u, v)
        if edge in edges:
            raise ParseError("The edge is listed twice", line)

        edges.add(edge)

    return kind, CycleCertificate(frozenset(edges))


def serialize_certificate(cert: CycleCertificate, kind: GridKind) -> str:
    parts = [f"cycle {kind.value}\n"]
    parts.extend(
        f"e {u.a} {u.b} {v.a} {v.b}\n" for u, v in cert.sorted_edges()
    )
    return "".join(parts)


# Gadgets


def _cell(kind: GridKind, tokens: list[str], line: int) -> Cell:
    orientation = tokens[2] if len(tokens) == 3 else "none"

    try:
        return Cell(
            kind,
            Coord(_int(tokens[0], line), _int(tokens[1], line)),
            orientation,  # type: ignore
        )
    except CellError as err:
        raise ParseError(err.message, line) from None


def parse_gadget(text: str) -> GadgetTemplate:
    """
    Parses a gadget geometry. `cell` lines list the body, and
    `port <id> <a> <b> <direction>` lines the first stub cell of every wire
    along with the direction pointing away from the body. The contract isn't
    part of the file.


    ## Raises

    `ParseError`: If a line is malformed, or the geometry is inconsistent.
    """
    header, lines = _header(text, "gadget", 3)
    name = header[1]
    kind = _kind(header[2], 1)
    stub_length = 2
    cells: list[Cell] = []
    ports: list[Port] = []

    for line, tokens in lines:
        keyword = tokens[0]

        if keyword == "stub-length":
            _expect_arity(tokens, 2, line)
            stub_length = _int(tokens[1], line)
        elif keyword == "cell":
            if len(tokens) not in (3, 4):
                raise ParseError("Expected `cell <a> <b> [orientation]`", line)

            cells.append(_cell(kind, tokens[1:], line))
        elif keyword == "port":
            _expect_arity(tokens, 5, line)
            ports.append(
                Port(
                    id=_int(tokens[1], line),
                    cell=_cell(kind, tokens[2:4], line),
                    direction=_int(tokens[4], line),
                )
            )
        else:
            _unknown(tokens, line)

    try:
        return GadgetTemplate(
            name=name,
            kind=kind,
            cells=frozenset(cells),
            ports=tuple(ports),
            stub_length=stub_length,
        )
    except HamgridError as err:
        raise ParseError(err.message) from None


def serialize_gadget(t: GadgetTemplate) -> str:
    parts = [
        f"gadget {t.name} {t.kind.value}\n",
        f"stub-length {t.stub_length}\n",
    ]
    cells = sorted(
        t.cells, key=lambda c: (*vertex_key(c.anchor), c.orientation)
    )

    for cell in cells:
        a, b = cell.anchor
        suffix = "" if cell.orientation == "none" else f" {cell.orientation}"
        parts.append(f"cell {a} {b}{suffix}\n")

    for port in t.ports:
        a, b = port.cell.anchor
        parts.append(f"port {port.id} {a} {b} {port.direction}\n")

    return "".join(parts)


# Dispatch


_FIRST_KEYWORDS: dict[str, DocumentFormat] = {
    "grid": "grid",
    "vx": "trvb",
    "e": "trvb",
    "rot": "trvb",
    "vars": "sat",
    "cycle": "certificate",
    "gadget": "gadget",
}


def parse_document(text: str) -> Document:
    """
    Parses any document, telling the format apart by its first keyword.


    ## Raises

    `ParseError`: If the format can't be determined, or the document is
        malformed.
    """
    first = next(_lines(text), None)

    if first is None:
        raise ParseError("The document is empty")

    line, tokens = first
    format = _FIRST_KEYWORDS.get(tokens[0])

    if format == "grid":
        g = parse_grid(text)
        return Document("grid", g, g.kind)

    if format == "trvb":
        return Document("trvb", parse_trvb(text))

    if format == "sat":
        return Document("sat", parse_sat(text))

    if format == "certificate":
        kind, cert = parse_certificate(text)
        return Document("certificate", cert, kind)

    if format == "gadget":
        t = parse_gadget(text)
        return Document("gadget", t, t.kind)

    raise ParseError(f"Can't tell the format from `{tokens[0]}`", line)


def serialize_document(doc: Document) -> str:
    payload = doc.payload

    if isinstance(payload, GridGraph):
        return serialize_grid(payload)

    if isinstance(payload, Multigraph):
        return serialize_trvb(payload)

    if isinstance(payload, SatEmbedding):
        return serialize_sat(payload)

    if isinstance(payload, CycleCertificate):
        assert doc.kind is not None, doc
        return serialize_certificate(payload, doc.kind)

    return serialize_gadget(payload)


# Rendering


def render_svg(
    g: GridGraph,
    overlay: CycleCertificate | Iterable[Cell] | None = None,
    *,
    scale: float = 40,
    margin: float = 20,
) -> str:
    """
    Draws a grid graph as SVG: vertices as dots and edges as thin segments.

    The overlay is either a certificate, whose edges are drawn bold, or a set
    of cells, which are shaded. The output only depends on the arguments.
    """
    positions = {v: lattice.embed(g.kind, v) for v in g.vertices}

    if positions:
        xs = [x for x, _ in positions.values()]
        ys = [y for _, y in positions.values()]
        min_x, max_x, min_y, max_y = min(xs), max(xs), min(ys), max(ys)
    else:
        min_x = max_x = min_y = max_y = 0.0

    width = (max_x - min_x) * scale + 2 * margin
    height = (max_y - min_y) * scale + 2 * margin

    # SVG's y axis points down
    def project(c: tuple[int, int]) -> tuple[float, float]:
        x, y = lattice.embed(g.kind, c)
        return (
            round((x - min_x) * scale + margin, 3),
            round((max_y - y) * scale + margin, 3),
        )

    width, height = math.ceil(width), math.ceil(height)
    d = draw.Drawing(width, height)
    d.append(draw.Rectangle(0, 0, width, height, fill="white"))

    bold: list[tuple[Coord, Coord]] = []

    if isinstance(overlay, CycleCertificate):
        bold = overlay.sorted_edges()
    elif overlay is not None:
        for cell in sorted(set(overlay)):
            points = [
                p for c in lattice.pixel_corners(cell) for p in project(c)
            ]
            d.append(
                draw.Lines(*points, close=True, fill="#9cc3e6", stroke="none")
            )

    for u, v in sorted(g.edges, key=edge_key):
        d.append(
            draw.Line(
                *project(u), *project(v), stroke="#888888", stroke_width=1.5
            )
        )

    for u, v in bold:
        d.append(
            draw.Line(
                *project(u),
                *project(v),
                stroke="#c0392b",
                stroke_width=5,
                stroke_linecap="round",
            )
        )

    for v in g.vertices:
        d.append(draw.Circle(*project(v), 4, fill="black"))

    return d.as_svg()
