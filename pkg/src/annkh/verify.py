"""The full cross-module verification suite behind ``annkh check``.

Each check returns a :class:`CheckResult`; a failing check carries the first
counterexample it met.  Everything is exact, so there are no tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass

from .f2 import block_homology, spectral_pages
from .floer import check_theorem
from .invariants import (NotInSubring, annular_homology, euler_sj, jones, jones_from_bracket,
                         sj_statesum, to_zform)
from .khcomplex import annular_part, build_complex, cube
from .resolution import ResolutionIndex, oracle_orientation
from .rt import (BlockMatrixQ, ONE, check_k_equivariance, check_weight_preservation,
                 closure_relation, quantum_trace, rt_raw_entries, rt_raw_matrix, sj_via_trace)
from .tangle import Closure, TangleDiagram, mirror, with_closure


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        tail = f": {self.detail}" if self.detail else ""
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}{tail}"


def _result(name: str, failure: str | None, note: str = "") -> CheckResult:
    return CheckResult(name, failure is None, failure if failure is not None else note)


def open_tangle(d: TangleDiagram) -> TangleDiagram:
    return with_closure(d, Closure.NONE) if d.m_bottom else TangleDiagram(0, d.slices, Closure.NONE)


def corrupt(entries: dict) -> dict:
    """Negative control: add a unit entry from the all-down to the all-up vector."""
    if not entries:
        raise ValueError("cannot corrupt an empty matrix")
    m = len(next(iter(entries))[0])
    if m == 0:
        raise ValueError("a 0-strand tangle has no off-block positions")
    out = dict(entries)
    key = ((1,) * m, (-1,) * m)
    out[key] = out.get(key, ONE * 0) + ONE
    return out


def run_checks(d: TangleDiagram, threads: int | None = None, force: bool = False,
               inject_fault: bool = False) -> list[CheckResult]:
    if not d.is_closed:
        raise ValueError("check needs a closed diagram")
    if d.closure is not Closure.ANNULAR:
        d = TangleDiagram(d.m_bottom, d.slices, Closure.ANNULAR, d.marked_arc, d.orientation_overrides)
    flats = cube(d, threads, force)
    C = build_complex(d, flats=flats)
    A = annular_part(C)
    out: list[CheckResult] = []

    out.append(_result("d^2 = 0 (full and annular)",
                       None if C.d_squared_zero() and A.d_squared_zero() else "nonzero d^2"))
    bad = C.check_gradings()
    out.append(_result("differential gradings di=+1, dj=0, dk in {0,-2}", bad[0] if bad else None))
    expected = sum(2 ** len(f.circles) for f in flats.values())
    out.append(_result("generator count = sum 2^c(I)",
                       None if expected == len(C.generators) else f"{len(C.generators)} != {expected}",
                       str(expected)))

    failure = None
    for bits in sorted(flats):
        f = flats[bits]
        for c in f.circles:
            sign, wind = oracle_orientation(f, c)
            if sign != c.rotation or wind != c.winding:
                failure = f"resolution {ResolutionIndex(bits)} circle {c.id}"
                break
        if failure:
            break
    out.append(_result("east-tangent rule matches polyline oracle", failure))

    rep = check_theorem(d, flats)
    first = rep.failures[0] if rep.failures else None
    out.append(_result("k = -2 A_S on every enhanced state",
                       f"{first.bits}/{first.signs}: k={first.k}, 2A_S={first.twice_as}" if first else None,
                       f"{rep.checked} states"))

    sj = sj_statesum(d, flats)
    AH = annular_homology(C)
    agree = euler_sj(C) == sj and euler_sj(AH) == sj
    out.append(_result("SJ: complex = annular homology = state sum", None if agree else f"state sum {sj}"))

    J = jones(d, flats)
    failure = None
    if sj.evaluate(t=1) != J:
        failure = "SJ at t=1 differs from jones"
    elif jones_from_bracket(d) != J:
        failure = f"bracket oracle gives {jones_from_bracket(d)}, state sum {J}"
    out.append(_result("Jones specialization and bracket oracle", failure))

    try:
        zf = to_zform(sj)
        failure = None if zf.expand() == sj else "z-form does not expand back"
    except NotInSubring as exc:
        failure = str(exc)
    out.append(_result("SJ lies in Z[q^+-1][z]", failure))

    T = open_tangle(d)
    failure = None
    per_res = {bits: rt_raw_entries(T, bits) for bits in sorted(flats)}
    for bits, raw in per_res.items():
        if inject_fault:
            raw = corrupt(raw)
        if not check_weight_preservation(raw):
            failure = f"resolution {ResolutionIndex(bits)}"
            break
    raw = rt_raw_matrix(T, signs_from=d, per_resolution=per_res)
    if failure is None and not check_weight_preservation(raw):
        failure = "assembled matrix"
    out.append(_result("RT matrices preserve weight spaces", failure))
    out.append(_result("K-equivariance of J(T)", None if check_k_equivariance(raw) else "K J K^-1 != J"))

    M = BlockMatrixQ.from_entries(T.m_bottom, raw)
    tq = quantum_trace(M)
    out.append(_result("quantum trace = Jones of closure", None if tq == J else f"tr_q = {tq}"))
    sv = sj_via_trace(T, M)
    out.append(_result("weighted trace = SJ of closure", None if sv == sj else f"trace gives {sv}"))

    failure = None
    n = 0
    if T.m_bottom:
        for bits in sorted(flats):
            for c in closure_relation(T, bits):
                n += 1
                if not c.ok:
                    failure = f"resolution {c.bits}, arrows {c.arrows}: j(S')={c.j_closed}, j(S)+k={c.j_tangle + c.k}"
                    break
            if failure:
                break
    out.append(_result("closing states: j(S') = j(S) + k", failure, f"{n} states"))

    pages = spectral_pages(C.keys(), C.differential)
    e1 = {(i, j, k): v for (k, i, j), v in pages[0].dims.items()}
    kh_total = sum(block_homology(C.keys(), C.differential, block=lambda key: (key[0],)).values())
    failure = None
    if e1 != AH:
        failure = "E1 differs from annular homology"
    elif not pages[-1].final or pages[-1].total != kh_total:
        failure = f"E_inf total {pages[-1].total} != Kh total {kh_total}"
    out.append(_result("spectral sequence: E1 = Kh*, E_inf total = Kh total", failure,
                       f"E1 {pages[0].total} -> E_inf {pages[-1].total}"))

    Jm = jones(mirror(d))
    out.append(_result("mirror: J(mirror)(q) = J(q^-1)",
                       None if Jm == J.invert_variables("q") else f"mirror gives {Jm}"))
    return out
