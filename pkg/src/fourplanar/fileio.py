"""Text drawing format, JSON reports, move logs and DOT/SVG export.

Drawing files are line based, UTF-8::

    fourplanar-drawing 1
    vertices a b c
    edge e1 a b x1
    crossing x1 e1 e2 +1
    rotation a e1+ e3-
    coord a 0.000000 1.000000      (optional)
    bend e1 0.500000 0.250000      (optional)
    end

Serialization is canonical: ids in natural order, each rotation starting
at its smallest edge end, so equal drawings give identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Iterable

from .discharge import STAGES, CertificateReport
from .drawing import CrossingRec, DrawingSpec, EdgeRec, Planarization
from .errors import ParseError, TotalMismatchError
from .topomap import Diagnostic, NodeKind, natural_key

__all__ = [
    "HEADER",
    "parse_drawing",
    "serialize_drawing",
    "read_drawing",
    "write_drawing",
    "canonical",
    "frac_str",
    "report_dict",
    "to_dot",
    "to_svg",
]

HEADER = "fourplanar-drawing 1"


def _check_id(token: str, lineno: int) -> str:
    if not token or token[-1] in "+-" or any(ch.isspace() for ch in token):
        raise ParseError(f"line {lineno}: invalid id {token!r}")
    return token


def parse_drawing(text: str) -> DrawingSpec:
    lines = text.splitlines()
    body = [(i + 1, ln.split()) for i, ln in enumerate(lines) if ln.strip() and not ln.lstrip().startswith("#")]
    if not body or " ".join(body[0][1]) != HEADER:
        raise ParseError(f"missing header {HEADER!r}")
    if " ".join(body[-1][1]) != "end":
        raise ParseError("missing 'end' line (truncated file?)")
    vertices: list[str] = []
    edges: list[EdgeRec] = []
    crossings: list[CrossingRec] = []
    rotations: dict[str, tuple[str, ...]] = {}
    coords: dict[str, tuple[float, float]] = {}
    bends: dict[str, tuple[float, float]] = {}
    for lineno, tok in body[1:-1]:
        kind, args = tok[0], tok[1:]
        try:
            if kind == "vertices":
                vertices += [_check_id(a, lineno) for a in args]
            elif kind == "edge":
                if len(args) < 3:
                    raise ParseError(f"line {lineno}: edge needs id, tail and head")
                eid, tail, head, *xs = args
                edges.append(EdgeRec(_check_id(eid, lineno), tail, head, tuple(xs)))
            elif kind == "crossing":
                if len(args) != 4:
                    raise ParseError(f"line {lineno}: crossing needs id, two edges and orientation")
                cid, a, b, o = args
                if o not in ("+1", "-1", "1"):
                    raise ParseError(f"line {lineno}: orientation must be +1 or -1")
                crossings.append(CrossingRec(_check_id(cid, lineno), (a, b), int(o)))
            elif kind == "rotation":
                if not args:
                    raise ParseError(f"line {lineno}: rotation needs a vertex")
                if args[0] in rotations:
                    raise ParseError(f"line {lineno}: second rotation for {args[0]}")
                rotations[args[0]] = tuple(args[1:])
            elif kind in ("coord", "bend"):
                if len(args) != 3:
                    raise ParseError(f"line {lineno}: {kind} needs id x y")
                (coords if kind == "coord" else bends)[args[0]] = (float(args[1]), float(args[2]))
            else:
                raise ParseError(f"line {lineno}: unknown record {kind!r}")
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
    for v in vertices:
        rotations.setdefault(v, ())
    return DrawingSpec(tuple(vertices), tuple(edges), tuple(crossings), rotations, coords, bends)


def _rotate_min(seq: tuple[str, ...]) -> tuple[str, ...]:
    if not seq:
        return seq
    i = min(range(len(seq)), key=lambda k: natural_key(seq[k]))
    return seq[i:] + seq[:i]


def canonical(spec: DrawingSpec) -> DrawingSpec:
    """Same drawing with ids sorted and rotations normalized."""
    return DrawingSpec(
        tuple(sorted(spec.vertices, key=natural_key)),
        tuple(sorted(spec.edges, key=lambda e: natural_key(e.id))),
        tuple(sorted(spec.crossings, key=lambda c: natural_key(c.id))),
        {v: _rotate_min(tuple(spec.rotations.get(v, ()))) for v in sorted(spec.vertices, key=natural_key)},
        {k: spec.coords[k] for k in sorted(spec.coords, key=natural_key)},
        {k: spec.bends[k] for k in sorted(spec.bends, key=natural_key)},
    )


def serialize_drawing(spec: DrawingSpec) -> str:
    c = canonical(spec)
    out = [HEADER, "vertices " + " ".join(c.vertices) if c.vertices else "vertices"]
    for e in c.edges:
        out.append(" ".join(["edge", e.id, e.tail, e.head, *e.crossings]))
    for x in c.crossings:
        out.append(f"crossing {x.id} {x.edges[0]} {x.edges[1]} {x.orientation:+d}")
    for v, rot in c.rotations.items():
        out.append(" ".join(["rotation", v, *rot]))
    for v, (x, y) in c.coords.items():
        out.append(f"coord {v} {x:.6f} {y:.6f}")
    for e, (x, y) in c.bends.items():
        out.append(f"bend {e} {x:.6f} {y:.6f}")
    out.append("end")
    return "\n".join(out) + "\n"


def read_drawing(path: str) -> DrawingSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_drawing(fh.read())
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not UTF-8 text") from exc


def write_drawing(spec: DrawingSpec, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_drawing(spec))


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def frac_str(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _diag(d: Diagnostic) -> dict[str, str]:
    return {"rule": d.rule, "where": d.where, "message": d.message}


def report_dict(
    report: CertificateReport,
    command: str,
    validation: Iterable[Diagnostic] = (),
) -> dict[str, Any]:
    """JSON-ready certificate report; every rational is an exact ``p/q`` string."""
    faces = []
    for fid in sorted(report.classes, key=natural_key):
        cls = report.classes[fid]
        v, _, _ = cls.partition("-")
        faces.append(
            {
                "id": fid,
                "class": cls,
                "v": int(v),
                "size": report.sizes.get(fid),
                "required": frac_str(report.required[fid]),
                "charges": {s: frac_str(report.stages[s][fid]) for s in STAGES},
            }
        )
    totals = []
    expected = report.expected_total
    for s, tot in report.totals().items():
        ok = tot == expected
        totals.append({"stage": s, "sum": frac_str(tot), "expected": frac_str(expected), "ok": ok})
        if not ok:
            raise TotalMismatchError(f"conservation broken at {s}: {tot} != {expected}")
    census: dict[str, int] = {}
    for cls in report.classes.values():
        census[cls] = census.get(cls, 0) + 1
    return {
        "command": command,
        "n": report.n,
        "edges": report.m,
        "crossings": report.crossings,
        "validation": [_diag(d) for d in validation],
        "census": dict(sorted(census.items())),
        "blocks": [
            {"center": b.center, "interior": list(b.interior), "boundary_edges": list(b.boundary_edges)}
            for b in report.blocks
        ],
        "faces": faces,
        "totals": totals,
        "diagnostics": [_diag(d) for d in report.diagnostics],
        "deficient": report.deficient,
        "verdict": report.verdict,
        "bound": report.bound_line(),
        "bound_holds": report.bound_holds(),
        "census_silent": report.census_silent,
    }


def dump_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------


def to_dot(p: Planarization) -> str:
    cmap = p.map
    out = ["graph planarization {"]
    for node in cmap.nodes:
        if cmap.kinds[node] is NodeKind.VERTEX:
            out.append(f'  "{node}" [shape=circle];')
        else:
            out.append(f'  "{node}" [shape=point, xlabel="{node}"];')
    for d in range(0, len(cmap), 2):
        a, b = cmap.origin[d], cmap.origin[d ^ 1]
        out.append(f'  "{a}" -- "{b}" [label="{cmap.labels[d]}"];')
    out.append("}")
    return "\n".join(out) + "\n"


def to_svg(spec: DrawingSpec, size: int = 800) -> str:
    """SVG of a generated drawing; raises ``ValueError`` without coordinates."""
    missing = [v for v in spec.vertices if v not in spec.coords]
    if missing:
        raise ValueError(
            "SVG export needs vertex coordinates, which only generated drawings carry "
            f"(missing for {len(missing)} vertices)"
        )
    pts = list(spec.coords.values()) + list(spec.bends.values())
    xs = [x for x, _ in pts]
    ys = [y for _, y in pts]
    lo_x, lo_y = min(xs), min(ys)
    span = max(max(xs) - lo_x, max(ys) - lo_y) or 1.0
    pad = 20

    def tr(pt: tuple[float, float]) -> tuple[float, float]:
        return (pad + (pt[0] - lo_x) / span * (size - 2 * pad), size - pad - (pt[1] - lo_y) / span * (size - 2 * pad))

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">']
    for e in sorted(spec.edges, key=lambda e: natural_key(e.id)):
        (x1, y1), (x2, y2) = tr(spec.coords[e.tail]), tr(spec.coords[e.head])
        if e.id in spec.bends:
            cx, cy = tr(spec.bends[e.id])
            out.append(
                f'<path d="M {x1:.2f} {y1:.2f} Q {cx:.2f} {cy:.2f} {x2:.2f} {y2:.2f}" '
                f'fill="none" stroke="#c0392b" stroke-width="1"><title>{e.id}</title></path>'
            )
        else:
            out.append(
                f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                f'stroke="black" stroke-width="2"><title>{e.id}</title></line>'
            )
    for v in sorted(spec.vertices, key=natural_key):
        x, y = tr(spec.coords[v])
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="black"><title>{v}</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
