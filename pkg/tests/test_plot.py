from __future__ import annotations

import xml.dom.minidom

import pytest

from tatekit import lattice as lat
from tatekit.basefield import QQ
from tatekit.errors import ArityUnsupported
from tatekit.geometry import OpenProfile
from tatekit.liftings import falsify_tate, lift, twisted
from tatekit.plot import BLANK, HATCHED, SHADED, ascii_plot, grid, plot_support, svg_plot
from tatekit.series import polynomial

BOX = (range(-3, 4), range(-3, 4))


def test_standard_lattice_is_a_half_plane():
    g = grid(lat.standard(2, 0), BOX)
    for y, row in zip(range(3, -4, -1), g):
        assert row == [SHADED if y >= 0 else BLANK] * 7


def test_series_cells():
    a = polynomial(QQ, 2, {(0, 0): 1, (-2, 1): 1}, (2, None))
    g = grid(a, BOX)
    assert g[3 - 0][3 + 0] == SHADED and g[3 - 1][3 - 2] == SHADED
    assert g[3 - 0][3 + 2] == HATCHED and g[3 - 0][3 + 1] == BLANK


def test_falsifier_image_is_a_descending_staircase():
    spec = twisted("neg-identity", 5)
    v = falsify_tate(spec, 5)
    images = {}
    for _, d in spec.gens:
        images.update(dict(lift(spec, polynomial(QQ, 1, {(d,): 1})).terms))
    row1 = grid(polynomial(QQ, 2, images), (range(-8, 1), range(0, 2)))[0]
    shaded = [x for x, c in zip(range(-8, 1), row1) if c == SHADED]
    assert shaded == [-6, -5, -4, -3, -2]
    assert {w.exponent[0] for w in v.witnesses} <= set(shaded)


def test_open_profile_thins_out_to_the_left():
    # U_i = {a1 >= -i} below the threshold: smaller and smaller opens as i falls.
    V = OpenProfile(threshold=0, base=0, slope=-1)
    xs, ys = range(-8, 4), range(-4, 10)
    g = grid(V, (xs, ys), axes=(2, 1))
    columns = [[row[k] for row in g].count(SHADED) for k in range(len(xs))]
    assert columns[8:] == [len(ys)] * 4
    assert columns[:8] == sorted(columns[:8]) and min(columns) > 0


def test_formats_and_arity():
    one = lat.standard(1, 0)
    assert ascii_plot(one, (range(-2, 3),)).splitlines()[1] == "..###"
    with pytest.raises(ArityUnsupported):
        svg_plot(one, (range(-2, 3),))
    svg = plot_support(lat.standard(2, 0), BOX, fmt="svg")
    assert svg.startswith("<svg") and svg.count("<rect") == 49
    assert svg == plot_support(lat.standard(2, 0), BOX, fmt="svg")
    three = lat.standard(3, 1)
    assert grid(three, BOX, axes=(1, 3), fixed={2: 0})[3 - 1] == [SHADED] * 7


def test_svg_title_is_escaped():
    svg = plot_support(lat.standard(2, 0), (range(-2, 3), range(-2, 3)), "svg", title="{a2<0: ZERO} & more")
    xml.dom.minidom.parseString(svg)
    assert "&lt;" in svg and "&amp;" in svg
