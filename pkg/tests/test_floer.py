import pytest

from annkh.floer import ASGrading, GeneratorModel, as_grading, check_theorem, surface_euler
from annkh.resolution import enumerate_enhanced, resolve
from annkh.tangle import parse_diagram

from corpus import BASE


def test_surface_euler():
    assert [surface_euler(m) for m in (0, 1, 4)] == [2, 1, -2]
    with pytest.raises(ValueError):
        surface_euler(-1)


def core_states(m):
    d = parse_diagram(f"m={m}; closure=annular")
    return enumerate_enhanced(resolve(d, ()))


def test_as_grading_examples():
    plus, minus = core_states(1)
    assert as_grading(GeneratorModel.of(minus), 1) == ASGrading(1)   # +1/2
    assert as_grading(GeneratorModel.of(plus), 1) == ASGrading(-1)   # -1/2
    both_up = core_states(2)[0]
    assert as_grading(GeneratorModel.of(both_up), 2) == ASGrading(-2)
    assert str(ASGrading(-1)) == "-1/2" and str(ASGrading(2)) == "1"


def test_inconsistent_occupied_count():
    plus, _ = core_states(1)
    with pytest.raises(ValueError):
        as_grading(GeneratorModel(plus, 1), 1)
    with pytest.raises(ValueError):
        as_grading(GeneratorModel.of(plus), 2)


def test_range_endpoints():
    for s in core_states(3):
        g = GeneratorModel.of(s)
        a = as_grading(g, 3).twice
        assert (a == -3) == (g.occupied == 0)
        assert (a == 3) == (g.occupied == 3)
        assert sum(1 for x in s.arrows() if x > 0) + g.occupied == 3


def test_check_theorem_examples():
    rep = check_theorem(parse_diagram(BASE["essential_unknot"]))
    assert rep.ok and rep.checked == 2
    assert [(r.k, r.twice_as) for r in rep.rows] == [(1, -1), (-1, 1)]
    rep = check_theorem(parse_diagram(BASE["trivial_circle"]))
    assert rep.ok and [(r.k, r.twice_as) for r in rep.rows] == [(0, 0), (0, 0)]
    rep = check_theorem(parse_diagram(BASE["trefoil"]))
    assert rep.ok and rep.checked == 30
    assert "30 states checked, 0 failures" in rep.table()
    assert rep.to_json()["failures"] == 0


def test_check_theorem_needs_annular_closure():
    with pytest.raises(ValueError):
        check_theorem(parse_diagram("m=0; slices=[[cup@1],[cap@1]]"))
