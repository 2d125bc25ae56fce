"""Exact linear algebra over F2, homology dimensions, and spectral-sequence pages.

Vectors are Python ints used as bitsets (bit ``r`` = coordinate ``r``), so
row operations are single XORs.  Elimination always pivots on the lowest set
bit, which makes every intermediate result reproducible.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class SparseMatrixF2:
    rows: int
    cols: int
    entries: frozenset  # of (row, col)

    def __post_init__(self):
        for r, c in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[tuple[int, int]]) -> SparseMatrixF2:
        """Build from a list of positions; repeated positions cancel mod 2."""
        acc: set[tuple[int, int]] = set()
        for e in entries:
            acc ^= {e}
        return cls(rows, cols, frozenset(acc))

    @classmethod
    def identity(cls, n: int) -> SparseMatrixF2:
        return cls(n, n, frozenset((i, i) for i in range(n)))

    def columns(self) -> list[int]:
        """Each column as a bitset over rows."""
        cols = [0] * self.cols
        for r, c in self.entries:
            cols[c] |= 1 << r
        return cols

    def __matmul__(self, other: SparseMatrixF2) -> SparseMatrixF2:
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        by_row = defaultdict(list)
        for r, c in other.entries:
            by_row[r].append(c)
        acc: set[tuple[int, int]] = set()
        for r, k in self.entries:
            for c in by_row.get(k, ()):
                acc ^= {(r, c)}
        return SparseMatrixF2(self.rows, other.cols, frozenset(acc))

    def is_zero(self) -> bool:
        return not self.entries


def reduce_basis(vectors: Iterable[int]) -> dict[int, int]:
    """Echelon form keyed by pivot (lowest set bit)."""
    pivots: dict[int, int] = {}
    for v in vectors:
        while v:
            low = v & -v
            if low in pivots:
                v ^= pivots[low]
            else:
                pivots[low] = v
                break
    return pivots


def rank_of(vectors: Iterable[int]) -> int:
    return len(reduce_basis(vectors))


def rank_f2(M: SparseMatrixF2) -> int:
    return rank_of(M.columns())


def kernel_combinations(images: Sequence[int]) -> list[int]:
    """Bitsets over ``range(len(images))`` spanning the kernel of ``i -> images[i]``."""
    pivots: dict[int, tuple[int, int]] = {}
    kernel = []
    for i, v in enumerate(images):
        combo = 1 << i
        while v:
            low = v & -v
            if low in pivots:
                pv, pc = pivots[low]
                v ^= pv
                combo ^= pc
            else:
                pivots[low] = (v, combo)
                break
        if not v:
            kernel.append(combo)
    return kernel


def combine(vectors: Sequence[int], combo: int) -> int:
    out = 0
    while combo:
        low = combo & -combo
        out ^= vectors[low.bit_length() - 1]
        combo ^= low
    return out


def nullity(M: SparseMatrixF2) -> int:
    return M.cols - rank_f2(M)


# ---------------------------------------------------------------------------
# graded chain complexes
#
# A complex is described by ``degrees[i]`` -> list of grading keys (one per
# generator, in basis order) and ``diff[i]`` -> SparseMatrixF2 from degree i
# to degree i + 1.  Keys are tuples such as (j, k); the differential must
# preserve whatever part of the key is used for blocking.


def _column_images(diff: dict[int, SparseMatrixF2], i: int, n: int) -> list[int]:
    M = diff.get(i)
    if M is None:
        return [0] * n
    return M.columns()


def check_d_squared(diff: dict[int, SparseMatrixF2]) -> bool:
    for i, M in diff.items():
        N = diff.get(i + 1)
        if N is not None and not (N @ M).is_zero():
            return False
    return True


def block_homology(degrees: dict[int, list[tuple]], diff: dict[int, SparseMatrixF2],
                   block=lambda key: key) -> dict[tuple, int]:
    """Homology dimensions keyed by ``(i,) + block(key)``.

    ``block`` selects the part of each generator's key that the differential
    preserves; blocks are handled independently.
    """
    out: dict[tuple, int] = {}
    for i, keys in sorted(degrees.items()):
        cols_out = _column_images(diff, i, len(keys))
        prev_keys = degrees.get(i - 1, [])
        cols_in = _column_images(diff, i - 1, len(prev_keys))
        groups: dict[tuple, list[int]] = defaultdict(list)
        for idx, key in enumerate(keys):
            groups[block(key)].append(idx)
        in_groups: dict[tuple, list[int]] = defaultdict(list)
        for idx, key in enumerate(prev_keys):
            in_groups[block(key)].append(idx)
        for b, idxs in groups.items():
            rk_out = rank_of(cols_out[x] for x in idxs)
            rk_in = rank_of(cols_in[x] for x in in_groups.get(b, []))
            dim = len(idxs) - rk_out - rk_in
            if dim < 0:
                raise AssertionError("negative homology dimension; d^2 != 0?")
            if dim:
                out[(i,) + tuple(b)] = dim
    return out


@dataclass(frozen=True)
class PageTable:
    r: int
    dims: dict  # (k, i, j) -> dim
    final: bool = False

    @property
    def total(self) -> int:
        return sum(self.dims.values())


def _page_dims(levels_i: list[int], cols_out: list[int], levels_next: list[int],
               imgs_in: list[int], levels_prev: list[int], r: int) -> dict[int, int]:
    """E_r dimensions at each filtration level for one homological degree of one block.

    Filtration F_p = span of generators with level <= p; the differential
    never raises the level, so F_p is a subcomplex.  With levels stepping by
    2, E_r^p = Z_r^p / (Z_{r-1}^{p-2} + B_r^p) where
    Z_r^p = {x in F_p : dx in F_{p-2r}} and B_r^p = F_p  cap  d(F_{p+2r-2}).
    """
    n = len(levels_i)

    def mask_above(levels, bound):
        m = 0
        for idx, lv in enumerate(levels):
            if lv > bound:
                m |= 1 << idx
        return m

    def Z(rr: int, p: int) -> list[int]:
        basis = [idx for idx in range(n) if levels_i[idx] <= p]
        above = mask_above(levels_next, p - 2 * rr)
        imgs = [cols_out[idx] & above for idx in basis]
        unit = [1 << b for b in basis]
        return [combine(unit, c) for c in kernel_combinations(imgs)]

    def B(rr: int, p: int) -> list[int]:
        src = [imgs_in[idx] for idx, lv in enumerate(levels_prev) if lv <= p + 2 * rr - 2]
        above = mask_above(levels_i, p)
        combos = kernel_combinations([v & above for v in src])
        return [combine(src, c) for c in combos]

    out = {}
    for p in sorted(set(levels_i)):
        z = Z(r, p)
        if not z:
            continue
        denom = Z(r - 1, p - 2) + B(r, p)
        dim = rank_of(z) - rank_of(denom)
        if dim:
            out[p] = dim
    return out


def spectral_pages(degrees: dict[int, list[tuple]], diff: dict[int, SparseMatrixF2],
                   max_page: int | None = None) -> list[PageTable]:
    """Pages E_1, E_2, ... of the filtration by k, ending at E_infinity.

    Generator keys are ``(j, k)``; the differential must preserve j and change
    k by 0 or -2.  Each page maps ``(k, i, j)`` to a dimension.  The last page
    returned is flagged ``final`` once its total equals that of E_infinity
    (dimensions never grow from page to page, so equality means stable).
    """
    for i, M in diff.items():
        src, tgt = degrees.get(i, []), degrees.get(i + 1, [])
        for r_, c_ in M.entries:
            (j0, k0), (j1, k1) = src[c_], tgt[r_]
            if j0 != j1 or (k1 - k0) not in (0, -2):
                raise ValueError(f"differential entry breaks the filtration: {(j0, k0)} -> {(j1, k1)}")

    all_k = [k for keys in degrees.values() for _, k in keys]
    span = (max(all_k) - min(all_k)) // 2 + 2 if all_k else 1

    def page(r: int) -> dict:
        dims = {}
        for i, keys in degrees.items():
            cols_out = _column_images(diff, i, len(keys))
            nxt = degrees.get(i + 1, [])
            prev = degrees.get(i - 1, [])
            imgs_in = _column_images(diff, i - 1, len(prev))
            by_j: dict[int, list[int]] = defaultdict(list)
            for idx, (j, _) in enumerate(keys):
                by_j[j].append(idx)
            for j, idxs in by_j.items():
                pos = {g: n for n, g in enumerate(idxs)}
                nxt_idx = [x for x, (jj, _) in enumerate(nxt) if jj == j]
                npos = {g: n for n, g in enumerate(nxt_idx)}
                prev_idx = [x for x, (jj, _) in enumerate(prev) if jj == j]
                # re-express vectors in local block coordinates
                local_out = [_remap(cols_out[g], npos) for g in idxs]
                local_in = [_remap(imgs_in[g], pos) for g in prev_idx]
                res = _page_dims([keys[g][1] for g in idxs], local_out,
                                 [nxt[g][1] for g in nxt_idx], local_in,
                                 [prev[g][1] for g in prev_idx], r)
                for p, dim in res.items():
                    dims[(p, i, j)] = dim
        return dims

    infinity = page(span)
    target = sum(infinity.values())
    pages = []
    r = 1
    while True:
        dims = page(r)
        total = sum(dims.values())
        final = total == target
        pages.append(PageTable(r, dims, final))
        if final or (max_page is not None and r >= max_page):
            break
        r += 1
    return pages


def _remap(v: int, pos: dict[int, int]) -> int:
    out = 0
    while v:
        low = v & -v
        g = low.bit_length() - 1
        out |= 1 << pos[g]
        v ^= low
    return out
