"""Complete resolutions, resolution circles, and enhanced states.

A resolved diagram is a set of *pieces* joining endpoints ``(height,
position)``: verticals, cups, caps and (for annular closures) closure arcs.
Every piece has a forward direction (verticals upward, cups and caps left to
right, closure arcs from the top of the tangle back to its bottom).

Geometric picture: strands sit at abscissa ``x = position``, slice ``h``
spans heights ``[h, h + 1]``, and closure arc ``i`` leaves the top at
``x = i``, runs left around the rectangle at offset ``i`` and re-enters at
the bottom.  The annulus axis sits at ``x = 0`` mid-height, inside every
closure arc, and the ray gamma0 runs from the axis to the left through the
closure arcs.  A strand heading up in the tangle therefore travels
counterclockwise around the axis.

Two independent ways of reading orientation data off a circle live here:

* the fast east-tangent rule (:func:`arc_rotation_contribution`), which
  counts how often the unit tangent passes due east;
* a polyline realization (:func:`realize_circle`) whose shoelace area and
  explicit ray crossings act as a brute-force oracle for the fast rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Sequence

from .tangle import Closure, Kind, Point, TangleDiagram


@dataclass(frozen=True)
class Piece:
    kind: str  # "vertical", "cup", "cap", "closure"
    start: Point
    end: Point
    arc: int | None = None       # arc id when the piece is an unresolved arc
    crossing: int | None = None  # crossing index when it comes from a smoothing


@dataclass(frozen=True)
class ResolutionIndex:
    bits: tuple[int, ...]

    @property
    def weight(self) -> int:
        return sum(self.bits)

    def flip(self, i: int) -> ResolutionIndex:
        b = list(self.bits)
        b[i] ^= 1
        return ResolutionIndex(tuple(b))

    def __str__(self) -> str:
        return "".join(map(str, self.bits)) or "-"


def all_indices(n: int):
    for bits in product((0, 1), repeat=n):
        yield ResolutionIndex(bits)


Step = tuple[int, bool]  # (piece index, traversed forward?)


def arc_rotation_contribution(kind: str, forward: bool) -> int:
    """East-tangent count of one oriented piece.

    A cup traversed left to right turns its tangent counterclockwise through
    east (+1); a cap traversed left to right turns clockwise through east
    (-1).  Right-to-left traversals pass through west instead and verticals
    never point east.  A closure arc traversed top to bottom turns left at
    the top (through west) and right-to-up at the bottom (through east,
    counterclockwise): +1; the reverse traversal gives -1.
    """
    if kind == "cup":
        return 1 if forward else 0
    if kind == "cap":
        return -1 if forward else 0
    if kind == "closure":
        return 1 if forward else -1
    return 0


def gamma0_sign(kind: str, forward: bool) -> int:
    """Signed crossing of the outward ray gamma0 with one oriented piece."""
    if kind == "closure":
        return 1 if forward else -1
    return 0


@dataclass(frozen=True)
class Circle:
    """A resolution circle with a deterministic reference traversal.

    ``steps`` starts at the circle's least piece and follows the piece's
    forward direction.  ``rotation`` is the east-tangent total of that
    traversal (+1 means the reference traversal is counterclockwise).
    """
    id: int
    steps: tuple[Step, ...]
    rotation: int
    gamma0_crossings: tuple[int, ...]
    points: frozenset

    @property
    def essential(self) -> bool:
        return sum(self.gamma0_crossings) != 0

    @property
    def winding(self) -> int:
        return winding(self)

    @property
    def ccw_steps(self) -> tuple[Step, ...]:
        """The traversal in counterclockwise (``+``) orientation."""
        if self.rotation == 1:
            return self.steps
        return tuple((p, not f) for p, f in reversed(self.steps))


@dataclass(frozen=True)
class Path:
    """An open component of a resolved tangle, from one boundary point to another."""
    steps: tuple[Step, ...]
    points: frozenset


def winding(c: Circle) -> int:
    """Signed gamma0 crossings of the circle oriented counterclockwise."""
    return c.rotation * sum(c.gamma0_crossings)


@dataclass
class FlatDiagram:
    diagram: TangleDiagram
    index: ResolutionIndex
    pieces: tuple[Piece, ...]
    circles: tuple[Circle, ...]
    paths: tuple[Path, ...]

    @cached_property
    def circle_of_point(self) -> dict[Point, int]:
        return {pt: c.id for c in self.circles for pt in c.points}

    @cached_property
    def circle_of_piece(self) -> dict[int, int]:
        return {p: c.id for c in self.circles for p, _ in c.steps}

    @property
    def is_closed(self) -> bool:
        return not self.paths

    def marked_circle(self) -> int | None:
        arc = self.diagram.marked_arc
        if arc is None:
            return None
        for i, pc in enumerate(self.pieces):
            if pc.arc == arc:
                return self.circle_of_piece[i]
        raise ValueError(f"marked arc {arc} not found among pieces")


# ---------------------------------------------------------------------------
# building and tracing


def static_pieces(d: TangleDiagram) -> list[Piece]:
    """Pieces that do not depend on the resolution (everything but crossings)."""
    out = []
    for a in d.arcs:
        if a.crossing is None:
            out.append(Piece(a.kind, a.start, a.end, arc=a.id))
    return out


def smoothing_pieces(d: TangleDiagram, crossing: int, bit: int) -> list[Piece]:
    """Pieces replacing one crossing.

    The 0-smoothing of ``x+`` keeps the two strands vertical and its
    1-smoothing is a cap below a cup; ``x-`` has the roles swapped, so a
    mirror exchanges smoothings through the crossing kind alone.
    """
    c = d.crossings[crossing]
    h = c.slice
    (a, b), (u, v) = c.inputs, c.outputs
    vertical = (bit == 0) == (c.kind is Kind.CROSS_POS)
    if vertical:
        return [Piece("vertical", (h, a), (h + 1, u), crossing=crossing),
                Piece("vertical", (h, b), (h + 1, v), crossing=crossing)]
    return [Piece("cap", (h, a), (h, b), crossing=crossing),
            Piece("cup", (h + 1, u), (h + 1, v), crossing=crossing)]


def _trace(pieces: Sequence[Piece]) -> tuple[list[tuple[list[Step], bool]], dict]:
    inc: dict[Point, list[tuple[int, bool]]] = {}
    for i, pc in enumerate(pieces):
        inc.setdefault(pc.start, []).append((i, True))
        inc.setdefault(pc.end, []).append((i, False))

    def walk(first: int, forward: bool):
        steps = [(first, forward)]
        cur, fwd = first, forward
        while True:
            pc = pieces[cur]
            at = pc.end if fwd else pc.start
            nxt = [x for x in inc[at] if x != (cur, not fwd)]
            if not nxt:
                return steps, False
            cur, fwd = nxt[0]
            if (cur, fwd) == steps[0]:
                return steps, True
            steps.append((cur, fwd))

    seen: set[int] = set()
    comps = []
    for i in range(len(pieces)):
        if i in seen:
            continue
        steps, closed = walk(i, True)
        if not closed:
            back, _ = walk(i, False)
            steps = [(x, not f) for x, f in reversed(back)][:-1] + steps
        seen.update(x for x, _ in steps)
        comps.append((steps, closed))
    return comps, inc


def _piece_order(pc: Piece) -> tuple:
    return (min(pc.start, pc.end), max(pc.start, pc.end))


def resolve(d: TangleDiagram, I: ResolutionIndex | Sequence[int]) -> FlatDiagram:
    """Replace every crossing by its smoothing and trace the resulting circles."""
    if not isinstance(I, ResolutionIndex):
        I = ResolutionIndex(tuple(I))
    if len(I.bits) != d.n_crossings:
        raise ValueError(f"resolution has {len(I.bits)} bits but the diagram has {d.n_crossings} crossings")
    pieces = static_pieces(d)
    for c, bit in enumerate(I.bits):
        pieces.extend(smoothing_pieces(d, c, bit))
    # deterministic piece order independent of how they were generated
    pieces.sort(key=_piece_order)
    comps, _ = _trace(pieces)

    raw_circles = []
    paths = []
    for steps, closed in comps:
        pts = set()
        for p, _ in steps:
            pts.add(pieces[p].start)
            pts.add(pieces[p].end)
        if not closed:
            paths.append(Path(tuple(steps), frozenset(pts)))
            continue
        least = min(p for p, _ in steps)
        k = [p for p, _ in steps].index(least)
        steps = steps[k:] + steps[:k]
        if not steps[0][1]:
            steps = [(p, not f) for p, f in reversed(steps)]
            steps = steps[-1:] + steps[:-1]
        raw_circles.append((steps, frozenset(pts)))

    raw_circles.sort(key=lambda sc: min(sc[1]))
    circles = []
    for cid, (steps, pts) in enumerate(raw_circles):
        rot = sum(arc_rotation_contribution(pieces[p].kind, f) for p, f in steps)
        gam = tuple(gamma0_sign(pieces[p].kind, f) for p, f in steps if pieces[p].kind == "closure")
        circles.append(Circle(cid, tuple(steps), rot, gam, pts))
    paths.sort(key=lambda p: min(p.points))
    return FlatDiagram(d, I, tuple(pieces), tuple(circles), tuple(paths))


# ---------------------------------------------------------------------------
# geometric realization oracle


def _scale(d: TangleDiagram) -> int:
    # integer coordinates: one unit of height is 8 * (max width + 2) grid steps,
    # so cup and cap offsets (1/(2 (w + 2))) and the ray height are whole numbers
    return 8 * (max(d.widths) + 2)


def _piece_polyline(d: TangleDiagram, pc: Piece, S: int) -> list[tuple[int, int]]:
    H = d.height
    (h0, x0), (h1, x1) = pc.start, pc.end
    delta = S // (2 * (max(d.widths) + 2))
    if pc.kind == "vertical":
        return [(S * x0, S * h0), (S * x1, S * h1)]
    if pc.kind == "cap":
        return [(S * x0, S * h0), (S * x0, S * h0 + delta), (S * x1, S * h0 + delta), (S * x1, S * h0)]
    if pc.kind == "cup":
        return [(S * x0, S * h0), (S * x0, S * h0 - delta), (S * x1, S * h0 - delta), (S * x1, S * h0)]
    i = x0
    return [(S * i, S * H), (S * i, S * (H + i)), (-S * i, S * (H + i)),
            (-S * i, -S * i), (S * i, -S * i), (S * i, 0)]


def realize_circle(f: FlatDiagram, c: Circle, steps=None) -> list[tuple[int, int]]:
    """Closed integer polyline (last vertex repeats the first) for a traversal of ``c``."""
    S = _scale(f.diagram)
    pts: list[tuple[int, int]] = []
    for p, fwd in (steps or c.steps):
        line = _piece_polyline(f.diagram, f.pieces[p], S)
        if not fwd:
            line = line[::-1]
        if pts and pts[-1] == line[0]:
            line = line[1:]
        pts.extend(line)
    if pts[0] != pts[-1]:
        raise AssertionError("traversal does not close up")
    return pts


def signed_area(poly) -> Fraction:
    s = 0
    for (x0, y0), (x1, y1) in zip(poly, poly[1:]):
        s += x0 * y1 - x1 * y0
    return Fraction(s, 2)


def ray_crossings(poly, y0) -> int:
    """Signed crossings of the leftward ray from ``(0, y0)`` with the polyline."""
    total = 0
    for (x0, ya), (x1, yb) in zip(poly, poly[1:]):
        if (ya - y0) * (yb - y0) >= 0:
            if ya == y0 or yb == y0:
                raise AssertionError("ray passes through a vertex")
            continue
        # sign of the crossing abscissa without dividing
        num = x0 * (yb - ya) + (x1 - x0) * (y0 - ya)
        if (num < 0) == (yb > ya):
            total += -1 if yb > ya else 1
    return total


def oracle_orientation(f: FlatDiagram, c: Circle) -> tuple[int, int]:
    """(orientation sign of the reference traversal, winding under ccw) from geometry."""
    poly = realize_circle(f, c)
    area = signed_area(poly)
    if area == 0:
        raise AssertionError("degenerate circle")
    sign = 1 if area > 0 else -1
    # a quarter-unit offset keeps the ray off every vertex height (whole units and h +- delta)
    S = _scale(f.diagram)
    y0 = S * f.diagram.height // 2 + S // 4
    return sign, sign * ray_crossings(poly, y0)


# ---------------------------------------------------------------------------
# enhanced states


@dataclass(frozen=True)
class EnhancedState:
    """A resolution with one sign per circle: ``+1`` counterclockwise, ``-1`` clockwise."""
    flat: FlatDiagram
    eps: tuple[int, ...]

    @property
    def resolution(self) -> ResolutionIndex:
        return self.flat.index

    def signs(self) -> str:
        return "".join("+" if e > 0 else "-" for e in self.eps)

    def arrows(self) -> tuple[int, ...]:
        """Arrow at each closure arc in strand order: +1 up, -1 down."""
        f = self.flat
        out = {}
        for c, e in zip(f.circles, self.eps):
            for p, fwd in c.ccw_steps:
                pc = f.pieces[p]
                if pc.kind == "closure":
                    # forward closure traversal continues a strand heading up
                    out[pc.start[1]] = (1 if fwd else -1) * e
        return tuple(out[i] for i in sorted(out))


def enumerate_enhanced(f: FlatDiagram, frozen: dict[int, int] | None = None) -> list[EnhancedState]:
    """All sign choices, lexicographic in circle id with ``+`` first."""
    frozen = frozen or {}
    choices = [(frozen[c.id],) if c.id in frozen else (1, -1) for c in f.circles]
    return [EnhancedState(f, eps) for eps in product(*choices)]


def k_degree(s: EnhancedState) -> int:
    return sum(e * c.winding for c, e in zip(s.flat.circles, s.eps))


def j_degree(s: EnhancedState) -> int:
    if not s.flat.is_closed:
        raise ValueError("j_degree needs a closed diagram; use the tangle state sum for open tangles")
    return sum(s.eps)


# ---------------------------------------------------------------------------
# cube edges


@dataclass(frozen=True)
class MergeSplit:
    kind: str                       # "merge" or "split"
    sources: tuple[int, ...]        # touched circle ids at the source vertex
    targets: tuple[int, ...]        # touched circle ids at the target vertex
    carry: tuple[tuple[int, int], ...]  # untouched circles, source id -> target id


def edge_cobordism(d: TangleDiagram, I: ResolutionIndex, i: int,
                   source: FlatDiagram | None = None, target: FlatDiagram | None = None) -> MergeSplit:
    """Describe the saddle from ``I`` to ``I + e_i`` (requires ``I[i] == 0``)."""
    if I.bits[i] != 0:
        raise ValueError("edge must start at a vertex with bit 0")
    J = I.flip(i)
    src = source or resolve(d, I)
    tgt = target or resolve(d, J)
    c = d.crossings[i]
    h = c.slice
    corners = [(h, c.inputs[0]), (h, c.inputs[1]), (h + 1, c.outputs[0]), (h + 1, c.outputs[1])]
    s_touch = sorted({src.circle_of_point[p] for p in corners})
    t_touch = sorted({tgt.circle_of_point[p] for p in corners})
    carry = []
    for circ in src.circles:
        if circ.id in s_touch:
            continue
        carry.append((circ.id, tgt.circle_of_point[min(circ.points)]))
    if len(s_touch) == 2 and len(t_touch) == 1:
        kind = "merge"
    elif len(s_touch) == 1 and len(t_touch) == 2:
        kind = "split"
    else:
        raise AssertionError(f"edge changes circle count unexpectedly: {s_touch} -> {t_touch}")
    return MergeSplit(kind, tuple(s_touch), tuple(t_touch), tuple(carry))
