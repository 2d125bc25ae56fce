"""Slice-word tangle diagrams and their text/JSON input language.

A diagram is read bottom to top as a list of slices.  Each slice lists the
non-identity items it contains; every strand not consumed by an item passes
straight through.  Positions are 1-based indices into the slice's *input*
strands.  A cup at position ``p`` is inserted immediately left of input
strand ``p`` (``p = width + 1`` puts it at the right end), so with one item
per slice the cup's left leg lands at output position ``p``.

Text format (``#`` starts a comment; statements split on newlines or ``;``)::

    m=2
    closure=annular
    marked=4
    orient 0 backward
    slice: x+@1
    slice: x-@1

``slices=[[x+@1],[x+@1]]`` is accepted as a compact alternative to repeated
``slice:`` lines.  The JSON mirror is
``{"m": 2, "closure": "annular", "slices": [[{"kind": "x+", "at": 1}]]}``
with optional ``"marked"`` and ``"orient"`` keys.

Arc ids are 0-based: slices bottom to top, pieces left to right within a
slice with pass-through strands included (a crossing contributes the strand
leaving its bottom-left leg first, then the one leaving its bottom-right
leg), and annular closure arcs last in strand order.  Component ids are 0-based in order of each component's least
arc id.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property

Point = tuple[int, int]  # (height, 1-based position)


class DiagramError(ValueError):
    """Invalid diagram input; carries a source location when one is known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + message)


class Kind(Enum):
    VERTICAL = "id"
    CUP = "cup"
    CAP = "cap"
    CROSS_POS = "x+"
    CROSS_NEG = "x-"

    @property
    def is_crossing(self) -> bool:
        return self in (Kind.CROSS_POS, Kind.CROSS_NEG)

    @property
    def inputs(self) -> int:
        return {Kind.VERTICAL: 1, Kind.CUP: 0}.get(self, 2)

    @property
    def outputs(self) -> int:
        return {Kind.VERTICAL: 1, Kind.CAP: 0}.get(self, 2)


class Closure(Enum):
    ANNULAR = "annular"
    NONE = "none"


@dataclass(frozen=True)
class SliceItem:
    kind: Kind
    position: int

    def __str__(self) -> str:
        return f"{self.kind.value}@{self.position}"


@dataclass(frozen=True)
class PlacedItem:
    """A slice item with its resolved input and output strand positions."""
    kind: Kind
    position: int
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]


@dataclass(frozen=True)
class Arc:
    """One strand segment of the unresolved diagram.

    ``start``/``end`` are in the arc's forward direction: verticals and
    crossing strands bottom to top, cups and caps left to right, closure
    arcs from the top of the tangle to its bottom.
    """
    id: int
    kind: str  # "vertical", "cup", "cap", "over", "under", "closure"
    slice: int | None
    start: Point
    end: Point
    crossing: int | None = None


@dataclass(frozen=True)
class Component:
    id: int
    steps: tuple[tuple[int, bool], ...]  # (arc id, traversed forward?)
    closed: bool

    @property
    def arcs(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.steps)


@dataclass(frozen=True)
class CrossingCount:
    n_plus: int
    n_minus: int

    @property
    def writhe(self) -> int:
        return self.n_plus - self.n_minus


@dataclass(frozen=True)
class Crossing:
    index: int
    slice: int
    kind: Kind
    inputs: tuple[int, int]
    outputs: tuple[int, int]
    left_arc: int   # strand from bottom-left to top-right
    right_arc: int  # strand from bottom-right to top-left

    @property
    def over_arc(self) -> int:
        return self.left_arc if self.kind is Kind.CROSS_POS else self.right_arc


def place_slice(items, width: int, where: tuple[int, int] | None = None) -> tuple[tuple[PlacedItem, ...], int]:
    """Lay out one slice over ``width`` input strands, filling in verticals."""
    line, col = where or (None, None)
    cups: dict[int, SliceItem] = {}
    starts: dict[int, SliceItem] = {}
    for it in items:
        if it.kind is Kind.CUP:
            if not 1 <= it.position <= width + 1:
                raise DiagramError(f"{it} out of range for width {width}", line, col)
            if it.position in cups:
                raise DiagramError(f"two cups at position {it.position}", line, col)
            cups[it.position] = it
        else:
            last = it.position + it.kind.inputs - 1
            if it.position < 1 or last > width:
                raise DiagramError(f"{it} out of range for width {width}", line, col)
            if it.position in starts:
                raise DiagramError(f"overlapping items at position {it.position}", line, col)
            starts[it.position] = it
    placed = []
    out = 0
    p = 1
    used = set()
    while p <= width + 1:
        if p in cups:
            placed.append(PlacedItem(Kind.CUP, p, (), (out + 1, out + 2)))
            out += 2
        if p > width:
            break
        it = starts.get(p)
        if it is None:
            if p in used:
                raise DiagramError(f"overlapping items at position {p}", line, col)
            placed.append(PlacedItem(Kind.VERTICAL, p, (p,), (out + 1,)))
            out += 1
            p += 1
            continue
        span = tuple(range(p, p + it.kind.inputs))
        if any(s in used for s in span) or any(s in starts and s != p for s in span):
            raise DiagramError(f"overlapping items at position {p}", line, col)
        used.update(span)
        outs = tuple(range(out + 1, out + 1 + it.kind.outputs))
        out += it.kind.outputs
        placed.append(PlacedItem(it.kind, p, span, outs))
        for s in span[1:]:
            if s in cups:
                raise DiagramError(f"cup at {s} splits the legs of {it}", line, col)
        p += it.kind.inputs
    return tuple(placed), out


@dataclass(frozen=True)
class TangleDiagram:
    m_bottom: int
    slices: tuple[tuple[SliceItem, ...], ...] = ()
    closure: Closure = Closure.NONE
    marked_arc: int | None = None
    orientation_overrides: tuple[tuple[int, bool], ...] = ()  # (component id, forward?)
    _placed: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.m_bottom < 0:
            raise DiagramError("m must be non-negative")
        # canonical form: explicit verticals dropped, items in position order
        canon = tuple(tuple(sorted((it for it in row if it.kind is not Kind.VERTICAL),
                                   key=lambda it: (it.position, it.kind is not Kind.CUP)))
                      for row in self.slices)
        object.__setattr__(self, "slices", canon)
        placed = []
        width = self.m_bottom
        for h, items in enumerate(self.slices):
            row, width = place_slice(items, width)
            placed.append(row)
        object.__setattr__(self, "_placed", tuple(placed))
        if self.closure is Closure.ANNULAR and width != self.m_bottom:
            raise DiagramError(f"annular closure needs equal widths, got bottom {self.m_bottom} and top {width}")
        if self.marked_arc is not None:
            if not 0 <= self.marked_arc < len(self.arcs):
                raise DiagramError(f"marked arc {self.marked_arc} does not exist")
            if self.arcs[self.marked_arc].crossing is not None:
                raise DiagramError(f"marked arc {self.marked_arc} passes through a crossing")
        n_comp = len(self.components)
        for cid, _ in self.orientation_overrides:
            if not 0 <= cid < n_comp:
                raise DiagramError(f"orientation override for missing component {cid}")

    # -- geometry ---------------------------------------------------------

    @property
    def height(self) -> int:
        return len(self.slices)

    @cached_property
    def widths(self) -> tuple[int, ...]:
        ws = [self.m_bottom]
        for row in self._placed:
            ws.append(sum(len(p.outputs) for p in row))
        return tuple(ws)

    @property
    def m_top(self) -> int:
        return self.widths[-1]

    @property
    def m(self) -> int:
        return self.m_bottom

    @property
    def placed(self) -> tuple[tuple[PlacedItem, ...], ...]:
        return self._placed

    @property
    def is_closed(self) -> bool:
        """True when the diagram has no free endpoints."""
        if self.closure is Closure.ANNULAR:
            return True
        return self.m_bottom == 0 and self.m_top == 0

    @cached_property
    def crossings(self) -> tuple[Crossing, ...]:
        out = []
        arc_of = {}
        for a in self.arcs:
            if a.crossing is not None:
                arc_of.setdefault(a.crossing, []).append(a.id)
        for h, row in enumerate(self._placed):
            for p in row:
                if p.kind.is_crossing:
                    idx = len(out)
                    left, right = arc_of[idx]
                    out.append(Crossing(idx, h, p.kind, p.inputs, p.outputs, left, right))
        return tuple(out)

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @cached_property
    def arcs(self) -> tuple[Arc, ...]:
        arcs: list[Arc] = []
        n_cross = 0
        for h, row in enumerate(self._placed):
            for p in row:
                if p.kind is Kind.VERTICAL:
                    arcs.append(Arc(len(arcs), "vertical", h, (h, p.inputs[0]), (h + 1, p.outputs[0])))
                elif p.kind is Kind.CUP:
                    arcs.append(Arc(len(arcs), "cup", h, (h + 1, p.outputs[0]), (h + 1, p.outputs[1])))
                elif p.kind is Kind.CAP:
                    arcs.append(Arc(len(arcs), "cap", h, (h, p.inputs[0]), (h, p.inputs[1])))
                else:
                    a, b = p.inputs
                    c, d = p.outputs
                    pos = p.kind is Kind.CROSS_POS
                    arcs.append(Arc(len(arcs), "over" if pos else "under", h, (h, a), (h + 1, d), n_cross))
                    arcs.append(Arc(len(arcs), "under" if pos else "over", h, (h, b), (h + 1, c), n_cross))
                    n_cross += 1
        if self.closure is Closure.ANNULAR:
            top = self.height
            for i in range(1, self.m_bottom + 1):
                arcs.append(Arc(len(arcs), "closure", None, (top, i), (0, i)))
        return tuple(arcs)

    @property
    def closure_arcs(self) -> tuple[Arc, ...]:
        return tuple(a for a in self.arcs if a.kind == "closure")

    @cached_property
    def components(self) -> tuple[Component, ...]:
        return tuple(trace_link_components(self))

    def component_of_arc(self) -> dict[int, int]:
        return {a: c.id for c in self.components for a in c.arcs}

    def __str__(self) -> str:
        return serialize(self)


# ---------------------------------------------------------------------------
# component tracing and crossing signs


def _incidence(arcs) -> dict[Point, list[tuple[int, bool]]]:
    """Map each endpoint to the (arc, endpoint-is-start) pairs touching it."""
    inc: dict[Point, list[tuple[int, bool]]] = {}
    for a in arcs:
        inc.setdefault(a.start, []).append((a.id, True))
        inc.setdefault(a.end, []).append((a.id, False))
    return inc


def trace_link_components(d: TangleDiagram) -> list[Component]:
    """Partition the arcs into components, each oriented by its default or override rule.

    Through a crossing a strand keeps going on the same arc, so tracing only
    needs the endpoint incidences.  Open components are traced from one of
    their boundary endpoints.
    """
    arcs = d.arcs
    inc = _incidence(arcs)
    seen: set[int] = set()
    comps: list[Component] = []
    overrides = dict(d.orientation_overrides)

    def walk(first: int, forward: bool) -> tuple[list[tuple[int, bool]], bool]:
        steps = []
        arc, fwd = first, forward
        while True:
            steps.append((arc, fwd))
            a = arcs[arc]
            at = a.end if fwd else a.start
            others = [x for x in inc[at] if x != (arc, not fwd)]
            if not others:
                return steps, False
            arc, is_start = others[0]
            fwd = is_start
            if (arc, fwd) == steps[0]:
                return steps, True

    for a in arcs:
        if a.id in seen:
            continue
        steps, closed = walk(a.id, True)
        if not closed:
            back, _ = walk(a.id, False)
            # back starts with (a.id, False); reversed it ends with (a.id, True)
            steps = [(x, not f) for x, f in reversed(back)][:-1] + steps
        ids = {x for x, _ in steps}
        seen |= ids
        least = min(ids)
        # rotate / reverse so that the least arc is traversed forward
        if closed:
            i = [x for x, _ in steps].index(least)
            steps = steps[i:] + steps[:i]
        least_fwd = dict(steps)[least]
        if not least_fwd:
            steps = _reverse(steps, closed)
        cid = len(comps)
        if overrides.get(cid, True) is False:
            steps = _reverse(steps, closed)
        comps.append(Component(cid, tuple(steps), closed))
    return comps


def _reverse(steps, closed):
    rev = [(x, not f) for x, f in reversed(steps)]
    if closed:
        # keep the same starting arc
        rev = rev[-1:] + rev[:-1]
    return rev


def arc_directions(d: TangleDiagram) -> dict[int, bool]:
    """Whether each arc is traversed forward under the chosen orientations."""
    return {a: f for c in d.components for a, f in c.steps}


def crossing_signs(d: TangleDiagram) -> list[int]:
    """Sign of each crossing: +1 right-handed, -1 left-handed.

    With both strands pointing up, ``x+`` (over strand bottom-left to
    top-right) is positive; reversing either strand flips the sign.
    """
    dirs = arc_directions(d)
    signs = []
    for c in d.crossings:
        base = 1 if c.kind is Kind.CROSS_POS else -1
        up_left = 1 if dirs[c.left_arc] else -1
        up_right = 1 if dirs[c.right_arc] else -1
        signs.append(base * up_left * up_right)
    return signs


def count_crossings(d: TangleDiagram) -> CrossingCount:
    signs = crossing_signs(d)
    return CrossingCount(signs.count(1), signs.count(-1))


def mirror(d: TangleDiagram) -> TangleDiagram:
    swap = {Kind.CROSS_POS: Kind.CROSS_NEG, Kind.CROSS_NEG: Kind.CROSS_POS}
    slices = tuple(tuple(SliceItem(swap.get(it.kind, it.kind), it.position) for it in row)
                   for row in d.slices)
    return replace(d, slices=slices)


def with_closure(d: TangleDiagram, closure: Closure) -> TangleDiagram:
    """The same slice word under a different closure (overrides are dropped
    when the component structure changes)."""
    if closure is d.closure:
        return d
    return TangleDiagram(d.m_bottom, d.slices, closure)


# ---------------------------------------------------------------------------
# parsing and serialization

_ITEM_RE = re.compile(r"\s*(id|cup|cap|x\+|x-)\s*@\s*(\d+)\s*$")
_KINDS = {k.value: k for k in Kind}


def _parse_item(text: str, line: int, col: int) -> SliceItem:
    mt = _ITEM_RE.match(text)
    if not mt:
        raise DiagramError(f"bad slice item {text.strip()!r}", line, col)
    return SliceItem(_KINDS[mt.group(1)], int(mt.group(2)))


def _parse_items(body: str, line: int, col: int) -> tuple[SliceItem, ...]:
    items = []
    if not body.strip():
        return ()
    offset = 0
    for chunk in body.split(","):
        lead = len(chunk) - len(chunk.lstrip())
        items.append(_parse_item(chunk, line, col + offset + lead))
        offset += len(chunk) + 1
    return tuple(items)


def _statements(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        raw = raw.split("#", 1)[0]
        col = 0
        for part in raw.split(";"):
            stripped = part.strip()
            if stripped:
                yield stripped, lineno, col + len(part) - len(part.lstrip()) + 1
            col += len(part) + 1


def parse_diagram(text: str) -> TangleDiagram:
    """Parse a diagram from the text DSL or its JSON mirror."""
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DiagramError(exc.msg, exc.lineno, exc.colno) from None
        return from_json(data)

    m = None
    closure = Closure.NONE
    marked = None
    orient: dict[int, bool] = {}
    slices: list[tuple[SliceItem, ...]] = []
    locs: list[tuple[int, int]] = []
    for stmt, line, col in _statements(text):
        if stmt.startswith("slice:") or stmt == "slice":
            body = stmt[len("slice:"):] if stmt.startswith("slice:") else ""
            slices.append(_parse_items(body, line, col + 6))
            locs.append((line, col))
            continue
        mt = re.fullmatch(r"orient\s+(\d+)\s+(forward|backward)", stmt)
        if mt:
            orient[int(mt.group(1))] = mt.group(2) == "forward"
            continue
        mt = re.fullmatch(r"(\w+)\s*=\s*(.*)", stmt, re.S)
        if not mt:
            raise DiagramError(f"cannot parse {stmt!r}", line, col)
        key, val = mt.group(1), mt.group(2).strip()
        if key == "m":
            if not val.isdigit():
                raise DiagramError(f"m must be a non-negative integer, got {val!r}", line, col)
            m = int(val)
        elif key == "closure":
            try:
                closure = Closure(val)
            except ValueError:
                raise DiagramError(f"closure must be annular or none, got {val!r}", line, col) from None
        elif key == "marked":
            if not val.isdigit():
                raise DiagramError(f"marked must be an arc id, got {val!r}", line, col)
            marked = int(val)
        elif key == "slices":
            inner = val.strip()
            if not (inner.startswith("[") and inner.endswith("]")):
                raise DiagramError("slices must be a bracketed list", line, col)
            inner = inner[1:-1].strip()
            base = col + mt.start(2) + 1
            for sm in re.finditer(r"\[([^\[\]]*)\]|([^\s,])", inner):
                if sm.group(2):
                    raise DiagramError(f"unexpected {sm.group(2)!r} in slices", line, base + sm.start())
                slices.append(_parse_items(sm.group(1), line, base + sm.start(1) + 1))
                locs.append((line, base + sm.start()))
        else:
            raise DiagramError(f"unknown key {key!r}", line, col)
    if m is None:
        raise DiagramError("missing m=<int> header")
    return _build(m, slices, closure, marked, orient, locs)


def _build(m, slices, closure, marked, orient, locs=None) -> TangleDiagram:
    # validate slice by slice first so width errors carry a location
    width = m
    for h, items in enumerate(slices):
        where = locs[h] if locs else (None, None)
        _, width = place_slice(items, width, where)
    return TangleDiagram(m, tuple(slices), closure, marked, tuple(sorted(orient.items())))


def from_json(data: dict) -> TangleDiagram:
    if not isinstance(data, dict) or "m" not in data:
        raise DiagramError("JSON diagram needs an object with key 'm'")
    try:
        slices = []
        for row in data.get("slices", []):
            items = []
            for it in row:
                kind = _KINDS.get(it["kind"])
                if kind is None:
                    raise DiagramError(f"unknown item kind {it['kind']!r}")
                items.append(SliceItem(kind, int(it["at"])))
            slices.append(tuple(items))
        closure = Closure(data.get("closure", "none"))
        orient = {int(k): v == "forward" for k, v in data.get("orient", {}).items()}
        return _build(int(data["m"]), slices, closure, data.get("marked"), orient)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DiagramError):
            raise
        raise DiagramError(f"bad JSON diagram: {exc}") from None


def to_json(d: TangleDiagram) -> dict:
    out: dict = {"m": d.m_bottom, "closure": d.closure.value,
                 "slices": [[{"kind": it.kind.value, "at": it.position} for it in row]
                            for row in d.slices]}
    if d.marked_arc is not None:
        out["marked"] = d.marked_arc
    if d.orientation_overrides:
        out["orient"] = {str(c): "forward" if f else "backward" for c, f in d.orientation_overrides}
    return out


def serialize(d: TangleDiagram) -> str:
    lines = [f"m={d.m_bottom}", f"closure={d.closure.value}"]
    if d.marked_arc is not None:
        lines.append(f"marked={d.marked_arc}")
    for cid, fwd in d.orientation_overrides:
        lines.append(f"orient {cid} {'forward' if fwd else 'backward'}")
    for row in d.slices:
        lines.append(("slice: " + ", ".join(str(it) for it in row)).rstrip())
    return "\n".join(lines) + "\n"


def braid_closure(word, strands: int) -> TangleDiagram:
    """Annular closure of a braid word given as signed generator indices."""
    rows = []
    for g in word:
        if g == 0 or abs(g) >= strands:
            raise DiagramError(f"bad braid generator {g} on {strands} strands")
        rows.append((SliceItem(Kind.CROSS_POS if g > 0 else Kind.CROSS_NEG, abs(g)),))
    return TangleDiagram(strands, tuple(rows), Closure.ANNULAR)
