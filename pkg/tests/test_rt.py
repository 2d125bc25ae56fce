import pytest

from annkh.polynomial import q_poly
from annkh.resolution import all_indices
from annkh.rt import (BlockMatrixQ, check_k_equivariance, check_weight_preservation, closure_relation,
                      quantum_trace, rt_matrix, rt_matrix_resolution, rt_raw_entries, rt_raw_matrix,
                      sj_via_trace, weight)
from annkh.invariants import jones, sj_statesum
from annkh.tangle import Closure, parse_diagram, with_closure

from corpus import tangle_corpus

U, D = 1, -1
QQ = q_poly({1: 1, -1: 1})
E1 = parse_diagram("m=2; slices=[[cap@1],[cup@1]]")


def test_weight():
    assert weight((U, U, D, U, D)) == 1
    assert weight((U,) * 4) == 4
    assert weight(()) == 0


def test_identity_blocks():
    M = rt_matrix_resolution(parse_diagram("m=1"))
    assert M.blocks == {1: ((q_poly({0: 1}),),), -1: ((q_poly({0: 1}),),)}
    M2 = rt_matrix_resolution(parse_diagram("m=2"))
    for lam, rows in M2.blocks.items():
        n = len(rows)
        assert all(rows[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))


def test_e1_block():
    M = rt_matrix_resolution(E1)
    assert M.basis(0) == [(U, D), (D, U)]
    assert M.blocks[0] == ((q_poly({-1: 1}), q_poly({0: 1})), (q_poly({0: 1}), q_poly({1: 1})))
    assert M.blocks[2][0][0].is_zero() and M.blocks[-2][0][0].is_zero()


def test_flat_tangle_equals_its_resolution():
    assert rt_matrix(E1) == rt_matrix_resolution(E1)


def test_temperley_lieb_relation():
    e1e1 = parse_diagram("m=2; slices=[[cap@1],[cup@1],[cap@1],[cup@1]]")
    assert rt_matrix(e1e1) == rt_matrix(E1).scale(QQ)
    assert rt_matrix(E1) @ rt_matrix(E1) == rt_matrix(e1e1)


def test_closed_diagram_is_scalar_jones():
    d = parse_diagram("m=0; slices=[[cup@1],[x+@1],[x+@1],[x+@1],[cap@1]]")
    M = rt_matrix(d)
    assert list(M.blocks) == [0]
    assert M.blocks[0][0][0] == jones(d)


def test_quantum_trace_examples():
    assert quantum_trace(rt_matrix(parse_diagram("m=1"))) == QQ
    assert quantum_trace(rt_matrix(E1)) == QQ
    assert quantum_trace(BlockMatrixQ.zero(2)).is_zero()


def test_sj_via_trace_examples():
    ident = parse_diagram("m=1")
    assert str(sj_via_trace(ident)) == "q*t + q^-1*t^-1"
    assert sj_via_trace(E1) == QQ
    s1 = parse_diagram("m=2; slices=[[x+@1]]")
    assert sj_via_trace(s1) == sj_statesum(with_closure(s1, Closure.ANNULAR))


def test_off_block_entries_rejected():
    raw = dict(rt_raw_entries(E1))
    raw[((U, U), (D, D))] = q_poly({0: 1})
    assert not check_weight_preservation(raw)
    with pytest.raises(ValueError):
        BlockMatrixQ.from_entries(2, raw)


def test_closed_input_rejected():
    with pytest.raises(ValueError):
        rt_matrix(parse_diagram("m=1; closure=annular"))
    with pytest.raises(ValueError):
        rt_matrix(parse_diagram("m=0; slices=[[cup@1]]"))


def test_corpus_identities():
    for name, T in tangle_corpus().items():
        L = with_closure(T, Closure.ANNULAR)
        for I in all_indices(T.n_crossings):
            assert check_weight_preservation(rt_raw_entries(T, I)), name
        raw = rt_raw_matrix(T)
        assert check_weight_preservation(raw) and check_k_equivariance(raw), name
        M = rt_matrix(T)
        assert quantum_trace(M) == jones(L), name
        assert sj_via_trace(T, M) == sj_statesum(L), name
        assert sj_via_trace(T, M).evaluate(t=1) == quantum_trace(M), name
        for I in all_indices(T.n_crossings):
            assert all(c.ok for c in closure_relation(T, I)), name


def test_closure_bijection_count():
    T = parse_diagram("m=2; slices=[[x+@1],[x+@1],[x+@1]]")
    n = sum(len(closure_relation(T, I)) for I in all_indices(3))
    assert n == 30  # the number of enhanced states of the trefoil closure
