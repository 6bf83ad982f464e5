from fractions import Fraction
from pathlib import Path

import pytest

from examples_data import CELLS_Q, R2_Q, R3_Q
from wmdskit.cone import cone_from_generators
from wmdskit.plotting import PlotError, golden_text, render_svg, section_data, section_vertices

GOLDEN = Path(__file__).parent / "golden"


@pytest.mark.parametrize("Q,name", [(CELLS_Q, "ex_cells_section.tsv"), (R3_Q, "ex322_section.tsv")])
def test_golden_sections(Q, name):
    text = golden_text(Q)
    assert text == (GOLDEN / name).read_text()
    assert len({line.split("\t")[0] for line in text.splitlines()[1:]}) == 6


@pytest.mark.parametrize("Q", [CELLS_Q, R3_Q, R2_Q])
def test_svg_deterministic(Q):
    a, b = render_svg(Q, title="x"), render_svg(Q, title="x")
    assert a == b and a.startswith(b"<?xml")


def test_svg_with_nef_marker():
    ray = cone_from_generators([(1, 1, 1)], 3)
    assert render_svg(CELLS_Q, nef=ray) == render_svg(CELLS_Q, nef=ray)
    assert render_svg(CELLS_Q, nef=ray) != render_svg(CELLS_Q)


def test_section_vertices_ccw():
    C = cone_from_generators([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1)], 3)
    vs = section_vertices(C)
    assert len(vs) == 4 and all(sum(v) == 1 for v in vs)
    area = sum(p[1] * q[2] - q[1] * p[2] for p, q in zip(vs, vs[1:] + vs[:1]))
    assert area > 0


def test_rank_two_section():
    d = section_data(R2_Q)
    assert [len(v) for _, v in d["chambers"]] == [2, 2]
    assert d["anticanonical"] == (Fraction(1, 2), Fraction(1, 2))


def test_plot_errors():
    with pytest.raises(PlotError):
        section_data([[1, 0, 0, 0, 1], [0, 1, 0, 0, 1], [0, 0, 1, 0, 1], [0, 0, 0, 1, 1]])
    with pytest.raises(PlotError):
        section_vertices(cone_from_generators([(1, -1)], 2))
