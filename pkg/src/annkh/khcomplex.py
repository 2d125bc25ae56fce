"""The Khovanov cube complex over F2 with its (i, j, k) gradings.

Generators are enhanced states.  With n+ / n- positive / negative crossings,
a state at cube vertex I has

    i = |I| - n-
    j = (#ccw - #cw circles) + |I| + n+ - 2 n-
    k = sum over essential circles of the circle's sign

The reduced complex keeps only states whose marked circle is clockwise
(``-``) and shifts j up by one so the reduced unknot sits at j = 0.

Edge maps use Khovanov's Frobenius algebra V = F2<v+, v->:

    merge:  ++ -> +,  +- -> -,  -+ -> -,  -- -> 0
    split:  +  -> +- + -+,      -  -> --
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from .f2 import SparseMatrixF2, check_d_squared
from .resolution import (EnhancedState, FlatDiagram, MergeSplit, ResolutionIndex,
                         all_indices, edge_cobordism, enumerate_enhanced, j_degree,
                         k_degree, resolve)
from .tangle import TangleDiagram, count_crossings

# 2**n cube vertices; refuse bigger cubes unless forced
MAX_CROSSINGS = 24
# below this many vertices a process pool costs more than it saves
PARALLEL_THRESHOLD = 1 << 11


class FiltrationError(ValueError):
    pass


def apply_merge(a: int, b: int) -> int:
    """Product in V with +1 for v+ (the unit) and -1 for v-; 0 means the zero vector."""
    if a == 1:
        return b
    if b == 1:
        return a
    return 0


def apply_split(a: int) -> list[tuple[int, int]]:
    """Coproduct in V as a list of tensor terms (an F2 sum)."""
    if a == 1:
        return [(1, -1), (-1, 1)]
    return [(-1, -1)]


@dataclass(frozen=True)
class Generator:
    bits: tuple[int, ...]
    eps: tuple[int, ...]
    i: int
    j: int
    k: int

    @property
    def key(self) -> tuple[int, int]:
        return (self.j, self.k)

    def signs(self) -> str:
        return "".join("+" if e > 0 else "-" for e in self.eps)


@dataclass
class GradedComplexF2:
    degrees: dict[int, list[Generator]]
    differential: dict[int, SparseMatrixF2]
    reduced: bool = False
    annular: bool = False
    m: int = 0
    index: dict = field(default_factory=dict, repr=False)

    @property
    def generators(self) -> list[Generator]:
        return [g for i in sorted(self.degrees) for g in self.degrees[i]]

    def keys(self) -> dict[int, list[tuple[int, int]]]:
        return {i: [g.key for g in gens] for i, gens in self.degrees.items()}

    def d_squared_zero(self) -> bool:
        return check_d_squared(self.differential)

    def entries(self) -> Iterable[tuple[Generator, Generator]]:
        for i, M in sorted(self.differential.items()):
            src, tgt = self.degrees[i], self.degrees[i + 1]
            for r, c in sorted(M.entries, key=lambda rc: (rc[1], rc[0])):
                yield src[c], tgt[r]

    def check_gradings(self) -> list[str]:
        """Violations of di = +1, dj = 0, dk in {0, -2}; empty when fine."""
        bad = []
        for s, t in self.entries():
            if t.i != s.i + 1 or t.j != s.j or (t.k - s.k) not in (0, -2):
                bad.append(f"{s.bits}/{s.signs()} -> {t.bits}/{t.signs()}")
        return bad


def _resolve_all(d: TangleDiagram, threads: int | None) -> list[FlatDiagram]:
    indices = list(all_indices(d.n_crossings))
    threads = threads if threads is not None else (os.cpu_count() or 1)
    if threads > 1 and len(indices) >= PARALLEL_THRESHOLD:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(resolve, [d] * len(indices), indices, chunksize=64))
    return [resolve(d, I) for I in indices]


def cube(d: TangleDiagram, threads: int | None = None, force: bool = False) -> dict[tuple, FlatDiagram]:
    if d.n_crossings > MAX_CROSSINGS and not force:
        raise ValueError(f"{d.n_crossings} crossings means 2^{d.n_crossings} resolutions; pass force=True")
    return {f.index.bits: f for f in _resolve_all(d, threads)}


def _generator(s: EnhancedState, n_plus: int, n_minus: int, reduced: bool) -> Generator:
    w = s.resolution.weight
    j = j_degree(s) + w + n_plus - 2 * n_minus + (1 if reduced else 0)
    return Generator(s.resolution.bits, s.eps, w - n_minus, j, k_degree(s))


def build_complex(d: TangleDiagram, reduced: bool = False, threads: int | None = None,
                  force: bool = False, flats: dict | None = None) -> GradedComplexF2:
    if not d.is_closed:
        raise ValueError("Khovanov complex needs a closed diagram")
    if reduced and d.marked_arc is None:
        raise ValueError("reduced homology needs a marked arc")
    cc = count_crossings(d)
    flats = flats or cube(d, threads, force)
    n = d.n_crossings

    degrees: dict[int, list[Generator]] = {}
    index: dict[tuple, int] = {}
    marked: dict[tuple, int | None] = {}
    for bits in sorted(flats, key=lambda b: (sum(b), b)):
        f = flats[bits]
        mc = f.marked_circle() if reduced else None
        marked[bits] = mc
        frozen = {mc: -1} if mc is not None else None
        for s in enumerate_enhanced(f, frozen):
            g = _generator(s, cc.n_plus, cc.n_minus, reduced)
            lst = degrees.setdefault(g.i, [])
            index[(bits, s.eps)] = len(lst)
            lst.append(g)

    entries: dict[int, list[tuple[int, int]]] = {}
    for bits, f in flats.items():
        I = ResolutionIndex(bits)
        src_i = I.weight - cc.n_minus
        for c in range(n):
            if bits[c]:
                continue
            J = I.flip(c)
            tgt = flats[J.bits]
            edge = edge_cobordism(d, I, c, f, tgt)
            states = enumerate_enhanced(f, {marked[bits]: -1} if reduced else None)
            for s in states:
                col = index[(bits, s.eps)]
                for eps in edge_image(edge, s.eps, len(tgt.circles)):
                    if reduced and eps[marked[J.bits]] != -1:
                        raise AssertionError("edge map left the reduced subcomplex")
                    entries.setdefault(src_i, []).append((index[(J.bits, eps)], col))

    diff = {}
    for i, ents in entries.items():
        diff[i] = SparseMatrixF2.from_entries(len(degrees.get(i + 1, [])), len(degrees[i]), ents)
    return GradedComplexF2(degrees, diff, reduced=reduced, m=d.m_bottom if d.closure.value == "annular" else 0,
                           index=index)


def edge_image(edge: MergeSplit, eps: tuple[int, ...], n_target: int) -> list[tuple[int, ...]]:
    """Target sign vectors of the edge map applied to one basis state."""
    base = [0] * n_target
    for s, t in edge.carry:
        base[t] = eps[s]
    out = []
    if edge.kind == "merge":
        a, b = (eps[x] for x in edge.sources)
        val = apply_merge(a, b)
        if val == 0:
            return []
        base[edge.targets[0]] = val
        out.append(tuple(base))
    else:
        t1, t2 = edge.targets
        for x, y in apply_split(eps[edge.sources[0]]):
            v = list(base)
            v[t1], v[t2] = x, y
            out.append(tuple(v))
    return out


def annular_part(C: GradedComplexF2) -> GradedComplexF2:
    """Associated graded complex: drop every differential entry that lowers k."""
    diff = {}
    for i, M in C.differential.items():
        src, tgt = C.degrees[i], C.degrees[i + 1]
        keep = []
        for r, c in M.entries:
            dk = tgt[r].k - src[c].k
            if dk == 0:
                keep.append((r, c))
            elif dk != -2:
                raise FiltrationError(f"entry with k change {dk} at degree {i}")
        diff[i] = SparseMatrixF2(M.rows, M.cols, frozenset(keep))
    return GradedComplexF2(C.degrees, diff, reduced=C.reduced, annular=True, m=C.m, index=C.index)


def dump_lines(C: GradedComplexF2) -> list[str]:
    """Generator table and sparse differential, one line per item."""
    lines = []
    for i in sorted(C.degrees):
        for n, g in enumerate(C.degrees[i]):
            lines.append(f"gen {g.i} {g.j} {g.k} {n} {''.join(map(str, g.bits)) or '-'} {g.signs()}")
    for i, M in sorted(C.differential.items()):
        for r, c in sorted(M.entries, key=lambda rc: (rc[1], rc[0])):
            g = C.degrees[i][c]
            lines.append(f"{g.i} {g.j} {g.k} {r} {c}")
    return lines
