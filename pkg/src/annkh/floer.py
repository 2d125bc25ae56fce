"""Combinatorial Alexander_S grading and the check k = -2 A_S.

A sutured Floer generator is modelled by the enhanced state it corresponds
to.  The m points where the link meets gamma0 are the branch points of the
double cover; a point is *occupied* exactly when the state's arrow there
points down.  With chi(S) = 2 - m from Riemann-Hurwitz,

    A_S = (chi(S) - 2 + 2 * occupied) / 2 = -m/2 + occupied.

A_S is a half-integer, so it is stored doubled.  The letter t in the
trivialization of the Chern class has nothing to do with the polynomial
variable t of SJ.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .resolution import EnhancedState, enumerate_enhanced, k_degree
from .khcomplex import cube
from .tangle import Closure, TangleDiagram


def surface_euler(m: int) -> int:
    if m < 0:
        raise ValueError("strand count must be non-negative")
    return 2 - m


@dataclass(frozen=True)
class ASGrading:
    twice: int

    def __str__(self) -> str:
        return str(self.twice // 2) if self.twice % 2 == 0 else f"{self.twice}/2"


@dataclass(frozen=True)
class GeneratorModel:
    state: EnhancedState
    occupied: int

    @classmethod
    def of(cls, s: EnhancedState) -> GeneratorModel:
        return cls(s, sum(1 for a in s.arrows() if a < 0))


def as_grading(g: GeneratorModel, m: int) -> ASGrading:
    arrows = g.state.arrows()
    if len(arrows) != m:
        raise ValueError(f"state meets gamma0 {len(arrows)} times, expected {m}")
    if g.occupied != sum(1 for a in arrows if a < 0):
        raise ValueError("occupied count does not match the state's down arrows")
    direct = -m + 2 * g.occupied
    via_chi = surface_euler(m) - 2 + 2 * g.occupied
    if direct != via_chi:
        raise AssertionError("the two A_S formulas disagree")
    return ASGrading(direct)


@dataclass(frozen=True)
class StateCheck:
    bits: str
    signs: str
    k: int
    twice_as: int

    @property
    def ok(self) -> bool:
        return self.k == -self.twice_as


@dataclass
class TheoremReport:
    m: int
    rows: list[StateCheck] = field(default_factory=list)

    @property
    def checked(self) -> int:
        return len(self.rows)

    @property
    def failures(self) -> list[StateCheck]:
        return [r for r in self.rows if not r.ok]

    @property
    def ok(self) -> bool:
        return not self.failures

    def table(self) -> str:
        lines = [f"{'bits':<10} {'signs':<8} {'k':>4} {'2*A_S':>6}  result"]
        for r in self.rows:
            lines.append(f"{r.bits:<10} {r.signs:<8} {r.k:>4} {r.twice_as:>6}  {'OK' if r.ok else 'FAIL'}")
        lines.append(f"{self.checked} states checked, {len(self.failures)} failures")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"m": self.m, "checked": self.checked, "failures": len(self.failures),
                "states": [{"bits": r.bits, "signs": r.signs, "k": r.k, "twice_as": r.twice_as,
                            "ok": r.ok} for r in self.rows]}


def check_theorem(d: TangleDiagram, flats: dict | None = None) -> TheoremReport:
    """Compare k with -2 A_S on every enhanced state of a closed annular diagram."""
    if d.closure is not Closure.ANNULAR:
        raise ValueError("the A_S comparison needs an annular closure")
    flats = flats or cube(d)
    m = d.m_bottom
    report = TheoremReport(m)
    for bits in sorted(flats, key=lambda b: (sum(b), b)):
        for s in enumerate_enhanced(flats[bits]):
            a = as_grading(GeneratorModel.of(s), m)
            report.rows.append(StateCheck("".join(map(str, bits)) or "-", s.signs(), k_degree(s), a.twice))
    return report
