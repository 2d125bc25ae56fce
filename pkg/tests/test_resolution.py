import pytest

from annkh.resolution import (ResolutionIndex, arc_rotation_contribution, edge_cobordism,
                              enumerate_enhanced, j_degree, k_degree, oracle_orientation, resolve)
from annkh.tangle import parse_diagram

from corpus import closed_corpus

S1 = parse_diagram("m=2; slices=[[x+@1]]; closure=annular")


def test_sigma1_resolutions():
    f0 = resolve(S1, (0,))
    assert len(f0.circles) == 2 and all(c.essential for c in f0.circles)
    f1 = resolve(S1, (1,))
    assert len(f1.circles) == 1 and not f1.circles[0].essential


def test_identity_closure_is_one_essential_circle():
    f = resolve(parse_diagram("m=1; closure=annular"), ())
    assert len(f.circles) == 1
    assert f.circles[0].winding == 1


def test_winding_values():
    triv = resolve(parse_diagram("m=0; slices=[[cup@1],[cap@1]]; closure=annular"), ())
    assert triv.circles[0].winding == 0
    e1 = resolve(parse_diagram("m=2; slices=[[cap@1],[cup@1]]; closure=annular"), ())
    (c,) = e1.circles
    assert c.winding == 0 and sorted(c.gamma0_crossings) == [-1, 1]


def test_enumerate_enhanced_order():
    f = resolve(S1, (0,))
    assert [s.eps for s in enumerate_enhanced(f)] == [(1, 1), (1, -1), (-1, 1), (-1, -1)]
    e1 = resolve(parse_diagram("m=2; slices=[[cap@1],[cup@1]]; closure=annular"), ())
    assert len(enumerate_enhanced(e1)) == 2


def test_k_and_j_degrees():
    core = resolve(parse_diagram("m=1; closure=annular"), ())
    plus, minus = enumerate_enhanced(core)
    assert (k_degree(plus), k_degree(minus)) == (1, -1)
    assert (j_degree(plus), j_degree(minus)) == (1, -1)
    two = enumerate_enhanced(resolve(S1, (0,)))
    assert k_degree(two[1]) == 0 and j_degree(two[1]) == 0


def test_j_degree_needs_a_closed_state():
    open_ = resolve(parse_diagram("m=1; slices=[[x+@1]]".replace("m=1", "m=2")), (0,))
    with pytest.raises(ValueError):
        j_degree(enumerate_enhanced(open_)[0])


def test_east_tangent_rule():
    # counterclockwise trivial circle: cup left to right, cap right to left
    assert arc_rotation_contribution("cup", True) + arc_rotation_contribution("cap", False) == 1
    assert arc_rotation_contribution("cup", False) + arc_rotation_contribution("cap", True) == -1
    assert arc_rotation_contribution("vertical", True) == 0


def test_edge_cobordisms():
    e = edge_cobordism(S1, ResolutionIndex((0,)), 0)
    assert e.kind == "merge" and e.sources == (0, 1) and e.targets == (0,)
    # Reidemeister-1 kink: the x- smoothing from 0 to 1 pinches off a small circle
    kink = parse_diagram("m=1; slices=[[cup@2],[x-@1],[cap@2]]; closure=annular")
    assert edge_cobordism(kink, ResolutionIndex((0,)), 0).kind == "split"
    # an untouched circle keeps its identity
    d = parse_diagram("m=3; slices=[[x+@1]]; closure=annular")
    e = edge_cobordism(d, ResolutionIndex((0,)), 0)
    assert len(e.carry) == 1


def test_fast_rule_matches_oracle_everywhere():
    from annkh.resolution import all_indices
    n = 0
    for d in closed_corpus().values():
        for I in all_indices(d.n_crossings):
            f = resolve(d, I)
            for c in f.circles:
                assert oracle_orientation(f, c) == (c.rotation, c.winding)
                n += 1
            # essential circle count has the parity of m
            assert sum(c.essential for c in f.circles) % 2 == d.m % 2
    assert n > 100


def test_k_range_and_parity():
    from annkh.resolution import all_indices
    for d in closed_corpus().values():
        for I in all_indices(d.n_crossings):
            for s in enumerate_enhanced(resolve(d, I)):
                k = k_degree(s)
                assert abs(k) <= d.m and (k - d.m) % 2 == 0
                assert k == sum(s.arrows())
