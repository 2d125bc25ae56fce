"""Polynomial invariants: the annular Euler characteristic SJ, the Jones
polynomial, the z-form over Z[q^+-1][z], and the skein-variable substitution.

Conventions: SJ lives in Z[q^+-1, t^+-1] and z = q*t + (q*t)^-1.  The Jones
polynomial is the unnormalized one (unknot = q + q^-1), i.e. SJ at t = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping

from .f2 import block_homology
from .khcomplex import GradedComplexF2, annular_part, cube
from .polynomial import Laurent
from .resolution import enumerate_enhanced, j_degree, k_degree
from .tangle import TangleDiagram, count_crossings

QT = ("q", "t")
q = Laurent.monomial(1, QT, q=1)
t = Laurent.monomial(1, QT, t=1)
Z_GEN = q * t + Laurent.monomial(1, QT, q=-1, t=-1)


class NotInSubring(ValueError):
    pass


def euler_from_dims(dims: Mapping[tuple, int]) -> Laurent:
    """Sum of (-1)^i q^j t^k dim over an (i, j, k) table; a missing k counts as 0."""
    terms: dict[tuple[int, int], int] = {}
    for key, dim in dims.items():
        i, j = key[0], key[1]
        k = key[2] if len(key) > 2 else 0
        terms[(j, k)] = terms.get((j, k), 0) + (-1) ** (i % 2) * dim
    return Laurent(terms, QT)


def euler_sj(source) -> Laurent:
    """SJ from a complex (generator count) or from a triply graded dimension table."""
    if isinstance(source, GradedComplexF2):
        dims: dict[tuple, int] = {}
        for g in source.generators:
            key = (g.i, g.j, g.k)
            dims[key] = dims.get(key, 0) + 1
        return euler_from_dims(dims)
    return euler_from_dims(source)


def annular_homology(C: GradedComplexF2) -> dict[tuple, int]:
    """(i, j, k) dimensions of the homology of the associated graded complex."""
    A = C if C.annular else annular_part(C)
    return block_homology(A.keys(), A.differential)


def _require_closed(d: TangleDiagram):
    if not d.is_closed:
        raise ValueError("invariant needs a closed diagram")


def sj_statesum(d: TangleDiagram, flats: dict | None = None) -> Laurent:
    """Sum over all enhanced states of (-1)^i q^(j shifted) t^k."""
    _require_closed(d)
    cc = count_crossings(d)
    flats = flats or cube(d)
    terms: dict[tuple[int, int], int] = {}
    for bits, f in flats.items():
        w = sum(bits)
        sign = -1 if (w - cc.n_minus) % 2 else 1
        shift = w + cc.n_plus - 2 * cc.n_minus
        for s in enumerate_enhanced(f):
            key = (j_degree(s) + shift, k_degree(s))
            terms[key] = terms.get(key, 0) + sign
    return Laurent(terms, QT)


def flat_sj(c: int, u: int) -> Laurent:
    """(q + q^-1)^u z^(c - u): SJ of c circles of which u are trivial."""
    return (q + q ** -1) ** u * Z_GEN ** (c - u)


def jones(d: TangleDiagram, flats: dict | None = None) -> Laurent:
    return sj_statesum(d, flats).evaluate(t=1)


# ---------------------------------------------------------------------------
# z-form and skein form


@dataclass(frozen=True)
class ZForm:
    coeffs: tuple[Laurent, ...]  # coeffs[n] multiplies z^n; polynomials in one variable

    def expand(self) -> Laurent:
        total = Laurent({}, QT)
        for n, c in enumerate(self.coeffs):
            total = total + c * Z_GEN ** n
        return total

    def format(self, ascending: bool = False) -> str:
        return format_zpoly(self.coeffs, ascending)

    def __str__(self) -> str:
        return self.format()


def format_zpoly(coeffs, ascending: bool = False) -> str:
    parts = []
    for n in range(len(coeffs) - 1, -1, -1):
        c = coeffs[n]
        if c.is_zero():
            continue
        zpart = "" if n == 0 else ("z" if n == 1 else f"z^{n}")
        if c == 1 and zpart:
            parts.append(zpart)
            continue
        body = c.format(compact=True, ascending=ascending)
        if len(c) > 1:
            body = f"({body})"
        parts.append(f"{body}*{zpart}" if zpart else body)
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def to_zform(p: Laurent) -> ZForm:
    """Write p as a polynomial in z with Z[q^+-1] coefficients.

    z is monic in t of degree 1 (leading term q*t), so peeling off the top
    t-degree terms one power of z at a time is exact; anything left over
    means p is not in the subring.
    """
    p = p.with_variables(QT) if p.variables != QT else p
    coeffs: dict[int, Laurent] = {}
    rest = p
    while not rest.is_zero():
        top = rest.max_degree("t")
        if top < 0:
            raise NotInSubring(f"remainder {rest} has only negative t-degrees")
        lead = rest.coefficient_of("t", top)  # polynomial in q
        c = lead * Laurent.gen("q") ** (-top)
        coeffs[top] = c
        rest = rest - c * Z_GEN ** top
        if not rest.is_zero() and rest.max_degree("t") >= top:
            raise AssertionError("z-reduction did not lower the t-degree")
    size = max(coeffs) + 1 if coeffs else 0
    return ZForm(tuple(coeffs.get(n, Laurent({}, ("q",))) for n in range(size)))


def to_skein_form(zf: ZForm) -> ZForm:
    """Substitute q = -a^-2 in every coefficient; powers of z are untouched."""
    minus_a_inv2 = Laurent({(-2,): -1}, ("a",))
    return ZForm(tuple(c.with_variables(("q",)).substitute("q", minus_a_inv2) for c in zf.coeffs))


def format_skein(zf: ZForm) -> str:
    return zf.format(ascending=True)


# ---------------------------------------------------------------------------
# Kauffman bracket oracle
#
# Evaluates the bracket by pushing Temperley-Lieb matchings through the slice
# word, never touching the circle tracer used elsewhere.  Variable A; a
# crossing x+ expands as A <vertical> + A^-1 <cap-cup>, x- the other way.


def kauffman_bracket(d: TangleDiagram) -> Laurent:
    """Unnormalized bracket <D> in A with one factor (-A^2 - A^-2) per loop."""
    _require_closed(d)
    A = Laurent.gen("A")
    delta = -(A ** 2) - A ** -2
    m = d.m_bottom
    # a state is a perfect matching on bottom labels ("b", i) and current strands ("c", i)
    start = {}
    for i in range(1, m + 1):
        start[("b", i)] = ("c", i)
        start[("c", i)] = ("b", i)
    states: dict[frozenset, Laurent] = {_freeze(start): Laurent.constant(1, ("A",))}

    for row in d.placed:
        new_states: dict[frozenset, Laurent] = {}
        for key, coeff in states.items():
            for match, w, loops in _apply_row(dict(key), row):
                c = coeff * (A ** w) * (delta ** loops)
                fk = _freeze(match)
                new_states[fk] = new_states.get(fk, Laurent({}, ("A",))) + c
        states = new_states

    total = Laurent({}, ("A",))
    for key, coeff in states.items():
        match = dict(key)
        loops = 0
        if d.closure.value == "annular":
            # join top strand i to bottom label i
            match, loops = _close(match, m)
        total = total + coeff * delta ** loops
    return total


def _freeze(match: dict) -> frozenset:
    return frozenset(match.items())


def _apply_row(match: dict, row) -> list[tuple[dict, int, int]]:
    """Expand one slice; yields (new matching, power of A, closed loops)."""
    options: list[list[tuple[str, tuple, tuple, int]]] = []
    for it in row:
        kind = it.kind.value
        if kind == "x+":
            options.append([("vert", it.inputs, it.outputs, 1), ("hor", it.inputs, it.outputs, -1)])
        elif kind == "x-":
            options.append([("hor", it.inputs, it.outputs, 1), ("vert", it.inputs, it.outputs, -1)])
        elif kind == "id":
            options.append([("vert1", it.inputs, it.outputs, 0)])
        elif kind == "cup":
            options.append([("cup", it.inputs, it.outputs, 0)])
        else:
            options.append([("cap", it.inputs, it.outputs, 0)])

    out = []
    for choice in product(*options):
        m = dict(match)
        loops = 0
        power = 0
        # relabel current strands through the slice: old ("c", p) -> new ("n", q)
        for kind, ins, outs, pw in choice:
            power += pw
            if kind == "vert1":
                _rename(m, ("c", ins[0]), ("n", outs[0]))
            elif kind == "vert":
                _rename(m, ("c", ins[0]), ("n", outs[0]))
                _rename(m, ("c", ins[1]), ("n", outs[1]))
            elif kind == "cup":
                m[("n", outs[0])] = ("n", outs[1])
                m[("n", outs[1])] = ("n", outs[0])
            elif kind == "cap":
                loops += _join(m, ("c", ins[0]), ("c", ins[1]))
            else:  # "hor": cap on the inputs, cup on the outputs
                loops += _join(m, ("c", ins[0]), ("c", ins[1]))
                m[("n", outs[0])] = ("n", outs[1])
                m[("n", outs[1])] = ("n", outs[0])
        m = {(("c", a[1]) if a[0] == "n" else a): (("c", b[1]) if b[0] == "n" else b)
             for a, b in m.items()}
        out.append((m, power, loops))
    return out


def _rename(m: dict, old, new):
    partner = m.pop(old)
    if partner == old:
        raise AssertionError("self-matched point")
    m[new] = partner
    m[partner] = new


def _join(m: dict, a, b) -> int:
    """Connect two points with an arc; returns 1 if that closes a loop."""
    pa = m.pop(a)
    if pa == b:
        m.pop(b)
        return 1
    pb = m.pop(b)
    m[pa] = pb
    m[pb] = pa
    return 0


def _close(match: dict, m: int) -> tuple[dict, int]:
    loops = 0
    for i in range(1, m + 1):
        loops += _join(match, ("c", i), ("b", i))
    if match:
        raise AssertionError("closure left unmatched points")
    return match, loops


def jones_from_bracket(d: TangleDiagram) -> Laurent:
    """Jones polynomial via (-A^3)^-w <D>, then A^2 = -q^-1.

    The bracket counts every loop with (-A^2 - A^-2), which becomes q + q^-1,
    so the result is normalized to the unknot's q + q^-1 like :func:`jones`.
    """
    A = Laurent.gen("A")
    w = count_crossings(d).writhe
    f = (-(A ** 3)) ** (-w) * kauffman_bracket(d)
    terms: dict[tuple[int], int] = {}
    for (e,), c in f.items():
        if e % 2:
            raise AssertionError("odd power of A in normalized bracket")
        half = e // 2
        # A^(2h) = (-q^-1)^h
        terms[(-half,)] = terms.get((-half,), 0) + c * (-1) ** (half % 2)
    return Laurent(terms, ("q",))
