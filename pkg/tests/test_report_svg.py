import json
import math
import xml.etree.ElementTree as ET
from fractions import Fraction

import numpy as np

from lojax.field import GaussianRational
from lojax.report import dumps, to_jsonable, write_rows
from lojax.svgplot import scatter_svg


def test_jsonable_types():
    obj = {
        "q": Fraction(2, 3),
        "g": GaussianRational(1, Fraction(1, 2)),
        "z": 1 + 2j,
        "inf": math.inf,
        "nan": float("nan"),
        "arr": np.array([1.5, 2.5]),
        "b": np.bool_(True),
        "i": np.int64(4),
    }
    out = to_jsonable(obj)
    assert out["q"] == "2/3" and out["z"] == [1.0, 2.0]
    assert out["inf"] == "inf" and out["nan"] == "nan"
    assert out["arr"] == [1.5, 2.5] and out["b"] is True and out["i"] == 4


def test_dumps_round_trips_floats_exactly():
    xs = [0.1, 1 / 3, 2.0**-40, 6.02214076e23, -0.0]
    back = json.loads(dumps({"xs": xs}))
    assert back["xs"] == xs
    assert dumps({"xs": xs}) == dumps({"xs": list(xs)})


def test_dumps_layout():
    text = dumps({"a": [1, 2], "b": {"c": []}, "d": [{"e": 1}]})
    assert '"a": [1, 2]' in text and '"c": []' in text and text.endswith("}\n")


def test_write_rows(tmp_path):
    write_rows(tmp_path / "r.csv", ["a", "b"], [[0.1, "x"]])
    assert (tmp_path / "r.csv").read_text().splitlines() == ["a,b", "0.1,x"]


def test_svg_is_well_formed_and_deterministic():
    series = [("r=1", [0.0, 1.0, 2.0], [0.0, 1.5, 3.1]), ("r<2>", [1.0], [1.0])]
    svg = scatter_svg(series, [("slope 3/2", 1.5, 0.0)], title="a & b", xlabel="log s", ylabel="log q")
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")
    assert "a &amp; b" in svg and "r&lt;2&gt;" in svg
    assert svg == scatter_svg(series, [("slope 3/2", 1.5, 0.0)], title="a & b", xlabel="log s", ylabel="log q")


def test_svg_handles_degenerate_input():
    ET.fromstring(scatter_svg([("one", [1.0], [1.0])]))
    ET.fromstring(scatter_svg([("empty", [], [])]))
