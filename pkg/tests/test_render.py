import pytest

from pseudoseg.arrangements import (ZoneResult, enumerate_k_segments, k_zone,
                                    random_wiring, realize_wiring)
from pseudoseg.audit import random_stick_config
from pseudoseg.errors import InvalidSize, UnknownId
from pseudoseg.psibuild import build_star_psi
from pseudoseg.psifamily import PsiFamily
from pseudoseg.rational import rat
from pseudoseg.render import RenderSpec, render_arrangement, render_family
from pseudoseg.render import _fmt


def test_fmt_decimal_forms():
    assert _fmt(rat(0)) == "0"
    assert _fmt(rat(2)) == "2"
    assert _fmt(rat(-15, 8)) == "-1.875"
    assert _fmt(rat(1, 3)) == "0.333333333333"
    assert _fmt(rat(1, 7)) == "0.142857142857"
    assert _fmt(rat(10 ** 14, 3)) == "33333333333300"
    assert _fmt(rat(1, 10 ** 6)) == "0.000001"


def test_spec_validation():
    with pytest.raises(InvalidSize):
        RenderSpec(width=0)
    with pytest.raises(InvalidSize):
        RenderSpec(palette="neon")
    with pytest.raises(InvalidSize):
        RenderSpec(layers=("curves", "glitter"))


def test_family_element_counts():
    fam = build_star_psi(5)
    svg = render_family(fam)
    assert svg.count('<path class="curve"') == 15
    assert svg.count('<circle class="disk"') == 5
    assert svg.startswith('<?xml version="1.0"')
    assert "</svg>" in svg


def test_family_determinism():
    fam = build_star_psi(5)
    spec = RenderSpec(width=640, height=480)
    assert render_family(fam, spec) == render_family(fam, spec)


def test_family_layers():
    fam = build_star_psi(3)
    no_disks = RenderSpec(layers=("curves", "labels"))
    svg = render_family(fam, no_disks)
    assert svg.count('<circle class="disk"') == 0
    assert svg.count('<path class="curve"') == 6
    assert svg.count('<text class="label"') == 6
    bare = render_family(fam, RenderSpec(layers=("curves",)))
    assert bare.count("<text") == 0


def test_empty_family_is_empty_canvas():
    svg = render_family(PsiFamily(()))
    assert svg.count("<path") == 0
    assert svg.count("<circle") == 0
    assert "</svg>" in svg


def test_mono_palette():
    fam = build_star_psi(3)
    svg = render_family(fam, RenderSpec(palette="mono"))
    assert svg.count('stroke="#222222"') == 6


def test_sticks_layer():
    cfg = random_stick_config(7, 3, 5)
    fam = PsiFamily(tuple(s.curve for s in cfg.segments))
    svg = render_family(fam, sticks=cfg.sticks)
    assert svg.count('<path class="stick"') == 7
    assert svg.count('<path class="curve"') == 3
    off = render_family(fam, RenderSpec(layers=("curves",)),
                        sticks=cfg.sticks)
    assert off.count('<path class="stick"') == 0


def test_arrangement_base_and_labels():
    cells = realize_wiring(random_wiring(3, 1))
    svg = render_arrangement(cells)
    assert svg.count('<path class="wire"') == 3
    assert svg.count('<text class="label"') == 3
    assert svg.count('<path class="zone"') == 0
    assert svg.count('<path class="kseg"') == 0


def test_arrangement_zone_highlight():
    cells = realize_wiring(random_wiring(4, 2))
    zone = k_zone(cells, 2, 1)
    svg = render_arrangement(cells, zone)
    assert svg.count('<path class="zone"') == zone.size


def test_arrangement_kseg_overlay():
    cells = realize_wiring(random_wiring(3, 1))
    segs = enumerate_k_segments(cells, 3)
    svg = render_arrangement(cells, segs)
    assert svg.count('<path class="kseg"') == len(segs)
    one = render_arrangement(cells, segs[0])
    assert one.count('<path class="kseg"') == 1


def test_arrangement_rejects_unknown_edge():
    cells = realize_wiring(random_wiring(3, 1))
    fake = ZoneResult(1, 1, "upper", ((99, 0),), 1, 10, True)
    with pytest.raises(UnknownId):
        render_arrangement(cells, fake)


def test_arrangement_determinism():
    cells = realize_wiring(random_wiring(4, 9))
    zone = k_zone(cells, 1, 2)
    spec = RenderSpec(palette="mono")
    assert render_arrangement(cells, zone, spec) == \
        render_arrangement(cells, zone, spec)
