import json

import pytest

from builders import random_polyline, single_crossing
from fourplanar.discharge import certify
from fourplanar.drawing import planarize
from fourplanar.errors import ParseError
from fourplanar.extremal import generate_optimal, hex1
from fourplanar.fileio import (
    canonical,
    dump_json,
    frac_str,
    parse_drawing,
    read_drawing,
    report_dict,
    serialize_drawing,
    to_dot,
    to_svg,
    write_drawing,
)


@pytest.mark.parametrize("make", [hex1, lambda: generate_optimal(4), single_crossing, lambda: random_polyline(3)])
def test_round_trip_is_byte_identical(make):
    spec = make()
    text = serialize_drawing(spec)
    again = parse_drawing(text)
    assert again.without_geometry() == canonical(spec).without_geometry()
    assert serialize_drawing(again) == text


def test_file_round_trip(tmp_path):
    path = tmp_path / "opt2.txt"
    write_drawing(generate_optimal(2), str(path))
    assert serialize_drawing(read_drawing(str(path))) == path.read_text()


def test_comments_and_blank_lines_ignored():
    text = serialize_drawing(hex1())
    noisy = "# comment\n\n" + text.replace("\nend", "\n\n# trailing\nend")
    assert parse_drawing(noisy) == parse_drawing(text)


@pytest.mark.parametrize(
    "mutate,needle",
    [
        (lambda t: t.split("\n", 1)[1], "header"),
        (lambda t: t.replace("\nend\n", "\n"), "end"),
        (lambda t: t.replace(" -1\n", " -2\n", 1), "orientation"),
        (lambda t: t.replace("vertices", "vertex", 1), "unknown record"),
        (lambda t: t.replace("\nend", "\ncoord v1 0 zero\nend"), "line"),
    ],
)
def test_parse_errors(mutate, needle):
    with pytest.raises(ParseError, match=needle):
        parse_drawing(mutate(serialize_drawing(hex1())))


def test_frac_str():
    from fractions import Fraction

    assert frac_str(Fraction(-1, 9)) == "-1/9" and frac_str(3) == "3/1"


def test_report_fields():
    report = certify(planarize(generate_optimal(2)))
    data = json.loads(dump_json(report_dict(report, "certify x")))
    assert data["verdict"] == "Certified" and data["edges"] == 24 and data["n"] == 6
    assert len(data["faces"]) == 50 and len(data["blocks"]) == 2
    face = data["faces"][0]
    assert set(face["charges"]) == {"ch0", "settled", "ch1", "ch2", "ch3", "ch4", "ch5"}
    assert all("/" in v for v in face["charges"].values())
    assert all(t["ok"] and t["sum"] == "16/1" for t in data["totals"])
    assert data["bound_holds"]


def test_dot_export():
    dot = to_dot(planarize(single_crossing()))
    assert dot.startswith("graph planarization {")
    assert dot.count(" -- ") == 6


def test_svg_export():
    svg = to_svg(generate_optimal(2))
    assert svg.startswith("<svg") and svg.count("<circle") == 6 and svg.count("<path") == 18
    with pytest.raises(ValueError, match="coordinates"):
        to_svg(generate_optimal(2).without_geometry())
