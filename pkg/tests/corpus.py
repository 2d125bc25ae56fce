"""Diagrams shared by the test modules."""

from annkh.tangle import Closure, TangleDiagram, mirror, parse_diagram, with_closure

BASE = {
    "essential_unknot": "m=1; closure=annular",
    "trivial_circle": "m=0; slices=[[cup@1],[cap@1]]; closure=annular",
    "identity2": "m=2; closure=annular",
    "e1": "m=2; slices=[[cap@1],[cup@1]]; closure=annular",
    "sigma1": "m=2; slices=[[x+@1]]; closure=annular",
    "sigma1_2": "m=2; slices=[[x+@1],[x+@1]]; closure=annular",
    "trefoil": "m=2; slices=[[x+@1],[x+@1],[x+@1]]; closure=annular",
    "figure_eight": "m=3; slices=[[x+@1],[x-@2],[x+@1],[x-@2]]; closure=annular",
    "borromean": "m=3; slices=[[x+@1],[x-@2],[x+@1],[x-@2],[x+@1],[x-@2]]; closure=annular",
    "kink": "m=1; slices=[[cup@2],[x+@1],[cap@2]]; closure=annular",
    "bigon": "m=1; slices=[[cup@2],[x+@1],[x-@2],[cap@2]]; closure=annular",
    "mixed": "m=2; slices=[[cup@3],[x+@2],[x-@3, x+@1],[cap@2]]; closure=annular",
}


def closed_corpus() -> dict[str, TangleDiagram]:
    """Every base diagram together with its mirror."""
    out = {}
    for name, text in BASE.items():
        d = parse_diagram(text)
        out[name] = d
        out[name + "~"] = mirror(d)
    return out


def tangle_corpus() -> dict[str, TangleDiagram]:
    """The open tangles whose annular closures make up the closed corpus (m >= 1)."""
    return {name: with_closure(d, Closure.NONE) for name, d in closed_corpus().items() if d.m_bottom}


def flat_closure(c: int, u: int) -> TangleDiagram:
    """c circles of which u are trivial: c - u parallel strands plus u cup/cap pairs."""
    m = c - u
    rows = []
    for _ in range(u):
        rows += [f"[cup@{m + 1}]", f"[cap@{m + 1}]"]
    return parse_diagram(f"m={m}; slices=[{','.join(rows)}]; closure=annular")
