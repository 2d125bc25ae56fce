"""Reshetikhin-Turaev state sums for m-strand tangles on weight spaces of V^(x)m.

A basis vector of V^(x)m is an arrow sequence; ``+1`` is an up arrow and
``-1`` a down arrow.  For a flat tangle the matrix entry at (top a, bottom b)
sums q^j over orientations of the tangle whose boundary arrows read b along
the bottom and a along the top, with j the east-tangent count.  An oriented
strand leaving a bottom point upward puts an up arrow there; at the top an
up arrow means the strand arrives from below.

Matrices live in weight blocks.  A dense ``(a, b) -> entry`` dictionary is
kept only as the raw output of the state enumeration so that weight
preservation can be checked before blocking.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping

from .polynomial import Laurent
from .resolution import (FlatDiagram, ResolutionIndex, all_indices, arc_rotation_contribution,
                         oracle_orientation, resolve)
from .tangle import Closure, TangleDiagram, count_crossings, with_closure

ArrowSeq = tuple[int, ...]
QV = ("q",)
ZERO = Laurent({}, QV)
ONE = Laurent.constant(1, QV)


def qpow(n: int) -> Laurent:
    return Laurent({(n,): 1}, QV)


def weight(a: ArrowSeq) -> int:
    return sum(a)


def arrows_str(a: ArrowSeq) -> str:
    return "".join("u" if x > 0 else "d" for x in a) or "()"


def weight_basis(m: int, lam: int) -> list[ArrowSeq]:
    """Arrow sequences of weight ``lam``, up arrows sorting first."""
    return [a for a in product((1, -1), repeat=m) if sum(a) == lam]


def weights(m: int) -> list[int]:
    return list(range(m, -m - 1, -2))


@dataclass(frozen=True)
class BlockMatrixQ:
    m: int
    blocks: dict  # weight -> tuple of rows (tuples of Laurent) in weight_basis order

    @classmethod
    def zero(cls, m: int) -> BlockMatrixQ:
        blocks = {}
        for lam in weights(m):
            n = len(weight_basis(m, lam))
            blocks[lam] = tuple(tuple(ZERO for _ in range(n)) for _ in range(n))
        return cls(m, blocks)

    @classmethod
    def from_entries(cls, m: int, entries: Mapping[tuple[ArrowSeq, ArrowSeq], Laurent]) -> BlockMatrixQ:
        """Block a dense entry map; a nonzero off-block entry is an error."""
        for (a, b), v in entries.items():
            if weight(a) != weight(b) and not v.is_zero():
                raise ValueError(f"entry ({arrows_str(a)}, {arrows_str(b)}) crosses weight spaces")
        blocks = {}
        for lam in weights(m):
            basis = weight_basis(m, lam)
            blocks[lam] = tuple(tuple(entries.get((a, b), ZERO) for b in basis) for a in basis)
        return cls(m, blocks)

    def basis(self, lam: int) -> list[ArrowSeq]:
        return weight_basis(self.m, lam)

    def entry(self, a: ArrowSeq, b: ArrowSeq) -> Laurent:
        if weight(a) != weight(b):
            return ZERO
        basis = self.basis(weight(a))
        return self.blocks[weight(a)][basis.index(a)][basis.index(b)]

    def dense(self) -> dict[tuple[ArrowSeq, ArrowSeq], Laurent]:
        out = {}
        for lam, rows in self.blocks.items():
            basis = self.basis(lam)
            for a, row in zip(basis, rows):
                for b, v in zip(basis, row):
                    if not v.is_zero():
                        out[(a, b)] = v
        return out

    def __add__(self, other: BlockMatrixQ) -> BlockMatrixQ:
        if self.m != other.m:
            raise ValueError("strand counts differ")
        return BlockMatrixQ(self.m, {lam: tuple(tuple(x + y for x, y in zip(r, s))
                                                for r, s in zip(self.blocks[lam], other.blocks[lam]))
                                     for lam in self.blocks})

    def scale(self, c: Laurent) -> BlockMatrixQ:
        return BlockMatrixQ(self.m, {lam: tuple(tuple(c * x for x in r) for r in rows)
                                     for lam, rows in self.blocks.items()})

    def __matmul__(self, other: BlockMatrixQ) -> BlockMatrixQ:
        out = {}
        for lam, A in self.blocks.items():
            B = other.blocks[lam]
            n = len(A)
            out[lam] = tuple(tuple(sum((A[i][k] * B[k][j] for k in range(n)), ZERO) for j in range(n))
                             for i in range(n))
        return BlockMatrixQ(self.m, out)

    def trace(self, lam: int) -> Laurent:
        return sum((row[i] for i, row in enumerate(self.blocks[lam])), ZERO)

    def is_zero(self) -> bool:
        return all(v.is_zero() for rows in self.blocks.values() for r in rows for v in r)


# ---------------------------------------------------------------------------
# tangle states


@dataclass(frozen=True)
class TangleState:
    """An orientation of every component of a resolved tangle.

    ``directions`` maps piece index to traversal direction; ``bottom`` and
    ``top`` are the boundary arrow sequences; ``j`` is the east-tangent total.
    """
    flat: FlatDiagram
    directions: tuple[tuple[int, bool], ...]
    bottom: ArrowSeq
    top: ArrowSeq
    j: int

    @property
    def k(self) -> int:
        return weight(self.top)


def _check_open(T: TangleDiagram):
    if T.closure is not Closure.NONE:
        raise ValueError("RT matrices need an open tangle (closure=none)")
    if T.m_bottom != T.m_top:
        raise ValueError(f"tangle has {T.m_bottom} bottom and {T.m_top} top endpoints")


def tangle_states(f: FlatDiagram, circles: bool = True) -> list[TangleState]:
    """All 2^(paths + circles) orientations of a resolved open tangle.

    With ``circles=False`` only the paths are oriented and closed circles are
    left out of ``directions`` and ``j``.
    """
    T = f.diagram
    m, H = T.m_bottom, T.height
    comps = [(p.steps, False) for p in f.paths]
    if circles:
        comps += [(c.steps, True) for c in f.circles]
    phantom = H == 0  # no slices: each strand is a zero-length path
    out = []
    choices = [(True, False)] * (m if phantom else len(comps))
    for choice in product(*choices):
        if phantom:
            arrows = tuple(1 if c else -1 for c in choice)
            out.append(TangleState(f, (), arrows, arrows, 0))
            continue
        dirs: dict[int, bool] = {}
        bottom: dict[int, int] = {}
        top: dict[int, int] = {}
        j = 0
        for (steps, closed), fwd in zip(comps, choice):
            seq = steps if fwd else tuple((p, not s) for p, s in reversed(steps))
            for p, s in seq:
                dirs[p] = s
                j += arc_rotation_contribution(f.pieces[p].kind, s)
            if closed:
                continue
            p0, s0 = seq[0]
            p1, s1 = seq[-1]
            first = f.pieces[p0].start if s0 else f.pieces[p0].end
            last = f.pieces[p1].end if s1 else f.pieces[p1].start
            for pt, leaving in ((first, True), (last, False)):
                h, x = pt
                if h == 0:
                    bottom[x] = 1 if leaving else -1
                elif h == H:
                    top[x] = -1 if leaving else 1
                else:
                    raise AssertionError(f"path ends inside the tangle at {pt}")
        out.append(TangleState(f, tuple(sorted(dirs.items())),
                               tuple(bottom[i] for i in range(1, m + 1)),
                               tuple(top[i] for i in range(1, m + 1)), j))
    return out


def rt_raw_entries(T: TangleDiagram, I: ResolutionIndex | tuple = ()) -> dict[tuple[ArrowSeq, ArrowSeq], Laurent]:
    """Dense (top, bottom) -> sum of q^j for one resolution of T.

    Each closed circle has rotation +-1 whichever way it is oriented, so it
    contributes the factor q + q^-1 and only the paths are enumerated.
    """
    _check_open(T)
    f = resolve(T, I)
    loops = (qpow(1) + qpow(-1)) ** len(f.circles)
    out: dict[tuple[ArrowSeq, ArrowSeq], Laurent] = {}
    for s in tangle_states(f, circles=False):
        key = (s.top, s.bottom)
        out[key] = out.get(key, ZERO) + qpow(s.j) * loops
    return {k: v for k, v in out.items() if not v.is_zero()}


def rt_matrix_resolution(T: TangleDiagram, I: ResolutionIndex | tuple = ()) -> BlockMatrixQ:
    return BlockMatrixQ.from_entries(T.m_bottom, rt_raw_entries(T, I))


def _shift_coefficients(T: TangleDiagram, signs_from: TangleDiagram | None):
    # crossing signs come from the oriented annular closure, as for SJ
    ref = signs_from if signs_from is not None else (
        with_closure(T, Closure.ANNULAR) if T.m_bottom else T)
    cc = count_crossings(ref)
    for I in all_indices(T.n_crossings):
        w = I.weight
        sign = -1 if (w - cc.n_minus) % 2 else 1
        yield I, qpow(w + cc.n_plus - 2 * cc.n_minus) * sign


def rt_raw_matrix(T: TangleDiagram, signs_from: TangleDiagram | None = None,
                  per_resolution: Mapping[tuple, dict] | None = None) -> dict:
    """Dense assembled J(T); used to test weight preservation before blocking.

    ``per_resolution`` may supply already computed :func:`rt_raw_entries`
    keyed by resolution bits.
    """
    _check_open(T)
    total: dict[tuple[ArrowSeq, ArrowSeq], Laurent] = {}
    for I, coeff in _shift_coefficients(T, signs_from):
        raw = per_resolution[I.bits] if per_resolution is not None else rt_raw_entries(T, I)
        for key, v in raw.items():
            total[key] = total.get(key, ZERO) + coeff * v
    return {k: v for k, v in total.items() if not v.is_zero()}


def rt_matrix(T: TangleDiagram, signs_from: TangleDiagram | None = None) -> BlockMatrixQ:
    """Sum over resolutions of (-1)^(|I|-n-) q^(|I|+n+-2n-) J(T_I).

    ``signs_from`` names the closed diagram whose orientation fixes n+ and n-;
    by default that is the annular closure of ``T``.
    """
    return BlockMatrixQ.from_entries(T.m_bottom, rt_raw_matrix(T, signs_from))


def quantum_trace(M: BlockMatrixQ) -> Laurent:
    return sum((qpow(lam) * M.trace(lam) for lam in M.blocks), ZERO)


def sj_via_trace(T: TangleDiagram, M: BlockMatrixQ | None = None,
                 signs_from: TangleDiagram | None = None) -> Laurent:
    """Sum over weights of (qt)^lam times the trace of the weight-lam block."""
    M = M if M is not None else rt_matrix(T, signs_from)
    total = Laurent({}, ("q", "t"))
    for lam in M.blocks:
        tr = M.trace(lam).with_variables(("q", "t"))
        total = total + tr * Laurent.monomial(1, ("q", "t"), q=lam, t=lam)
    return total


def check_weight_preservation(entries: Mapping[tuple[ArrowSeq, ArrowSeq], Laurent]) -> bool:
    return all(v.is_zero() for (a, b), v in entries.items() if weight(a) != weight(b))


def check_k_equivariance(entries: Mapping[tuple[ArrowSeq, ArrowSeq], Laurent]) -> bool:
    """K J K^-1 = J, with K acting on a basis vector by q^weight."""
    return all(qpow(weight(a) - weight(b)) * v == v for (a, b), v in entries.items())


# ---------------------------------------------------------------------------
# closing tangle states


@dataclass(frozen=True)
class ClosureCheck:
    bits: ResolutionIndex
    arrows: ArrowSeq
    j_tangle: int
    k: int
    j_closed: int
    k_closed: int

    @property
    def ok(self) -> bool:
        return self.j_closed == self.j_tangle + self.k and self.k_closed == self.k


def closure_relation(T: TangleDiagram, I: ResolutionIndex | tuple = ()) -> list[ClosureCheck]:
    """Close every state with matching top and bottom arrows and read off its gradings.

    The closed state's circle signs come from the polyline oracle rather than
    the east-tangent rule, so the comparison j(S') = j(S) + k is not circular.
    """
    _check_open(T)
    if not isinstance(I, ResolutionIndex):
        I = ResolutionIndex(tuple(I))
    ft = resolve(T, I)
    L = with_closure(T, Closure.ANNULAR)
    fc = resolve(L, I)
    key = {(pc.kind, pc.start, pc.end): i for i, pc in enumerate(ft.pieces)}
    oracle = [oracle_orientation(fc, c) for c in fc.circles]
    out = []
    for s in tangle_states(ft):
        if s.top != s.bottom:
            continue
        dirs = dict(s.directions)
        j_closed = 0
        k_closed = 0
        for c, (sign, wind) in zip(fc.circles, oracle):
            p, fwd = c.steps[0]
            pc = fc.pieces[p]
            if pc.kind == "closure":
                along = fwd == (s.top[pc.start[1] - 1] > 0)
            else:
                along = fwd == dirs[key[(pc.kind, pc.start, pc.end)]]
            eps = sign if along else -sign
            j_closed += eps
            k_closed += eps * wind
        out.append(ClosureCheck(I, s.top, s.j, s.k, j_closed, k_closed))
    return out
