import pytest

from annkh.f2 import block_homology, rank_f2
from annkh.invariants import euler_sj
from annkh.khcomplex import (annular_part, apply_merge, apply_split, build_complex, cube, dump_lines,
                             MAX_CROSSINGS)
from annkh.tangle import braid_closure, mirror, parse_diagram

from corpus import closed_corpus


def gens(C):
    return sorted((g.i, g.j, g.k) for g in C.generators)


def test_frobenius_tables():
    assert apply_merge(1, 1) == 1
    assert apply_merge(1, -1) == -1 and apply_merge(-1, 1) == -1
    assert apply_merge(-1, -1) == 0
    assert apply_split(1) == [(1, -1), (-1, 1)]
    assert apply_split(-1) == [(-1, -1)]


def test_split_then_merge_vanishes_mod_2():
    terms = [apply_merge(a, b) for a, b in apply_split(1)]
    assert terms == [-1, -1]  # two equal terms cancel over F2


def test_essential_unknot_complex():
    C = build_complex(parse_diagram("m=1; closure=annular"))
    assert gens(C) == [(0, -1, -1), (0, 1, 1)]
    assert all(M.is_zero() for M in C.differential.values())


def test_trivial_circle_complex():
    C = build_complex(parse_diagram("m=0; slices=[[cup@1],[cap@1]]; closure=annular"))
    assert gens(C) == [(0, -1, 0), (0, 1, 0)]


def test_sigma1_complex():
    C = build_complex(parse_diagram("m=2; slices=[[x+@1]]; closure=annular"))
    assert len(C.degrees[0]) == 4 and len(C.degrees[1]) == 2
    assert rank_f2(C.differential[0]) == 2
    assert rank_f2(annular_part(C).differential[0]) == 1


def test_reduced_unknot():
    C = build_complex(parse_diagram("m=1; marked=0; closure=annular"), reduced=True)
    dims = block_homology(C.keys(), C.differential, block=lambda key: (key[0],))
    assert dims == {(0, 0): 1}


def test_reduced_trefoil():
    d = parse_diagram("m=2; marked=6; slices=[[x+@1],[x+@1],[x+@1]]; closure=annular")
    C = build_complex(d, reduced=True)
    dims = block_homology(C.keys(), C.differential, block=lambda key: (key[0],))
    assert dims == {(0, 2): 1, (2, 6): 1, (3, 8): 1}


def test_unreduced_trefoil():
    d = parse_diagram("m=2; slices=[[x+@1],[x+@1],[x+@1]]; closure=annular")
    C = build_complex(d)
    dims = block_homology(C.keys(), C.differential, block=lambda key: (key[0],))
    # over F2 the positive trefoil has Kh in (i, j) = (0,1),(0,3),(2,5),(2,7),(3,7),(3,9)
    assert dims == {(0, 1): 1, (0, 3): 1, (2, 5): 1, (2, 7): 1, (3, 7): 1, (3, 9): 1}


def test_errors():
    with pytest.raises(ValueError):
        build_complex(parse_diagram("m=2; slices=[[x+@1]]"))
    with pytest.raises(ValueError):
        build_complex(parse_diagram("m=1; closure=annular"), reduced=True)
    big = braid_closure([1] * (MAX_CROSSINGS + 1), 2)
    with pytest.raises(ValueError, match="force"):
        cube(big)


def test_structure_on_corpus():
    for name, d in closed_corpus().items():
        C = build_complex(d)
        A = annular_part(C)
        assert C.d_squared_zero() and A.d_squared_zero(), name
        assert C.check_gradings() == [], name
        assert annular_part(A).differential == A.differential
        assert len(C.generators) == sum(2 ** len(f.circles) for f in cube(d).values())
        for g in C.generators:
            assert abs(g.k) <= d.m and (g.k - d.m) % 2 == 0


def test_reduced_generator_count():
    d = parse_diagram("m=2; marked=6; slices=[[x+@1],[x+@1],[x+@1]]; closure=annular")
    C = build_complex(d, reduced=True)
    assert len(C.generators) == sum(2 ** (len(f.circles) - 1) for f in cube(d).values())
    assert C.d_squared_zero()


def test_mirror_euler_characteristic():
    for d in closed_corpus().values():
        assert euler_sj(build_complex(mirror(d))) == euler_sj(build_complex(d)).invert_variables("q", "t")


def test_parallel_cube_matches_serial():
    d = braid_closure([1, -2] * 6, 3)  # 12 crossings, above the pool threshold
    assert [f.circles for f in cube(d, threads=2).values()] == [f.circles for f in cube(d, threads=1).values()]


def test_dump_format():
    lines = dump_lines(build_complex(parse_diagram("m=2; slices=[[x+@1]]; closure=annular")))
    gen_lines = [ln for ln in lines if ln.startswith("gen ")]
    entries = [ln for ln in lines if not ln.startswith("gen ")]
    assert len(gen_lines) == 6
    assert len(entries) == 3 and all(len(e.split()) == 5 for e in entries)
