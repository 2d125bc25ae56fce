"""Exact integer Laurent polynomials in a few named variables.

Polynomials are immutable and stored sparsely as ``{exponent tuple: coeff}``.
Operations between polynomials over different variable sets promote both
sides to the union of the variables, so a polynomial in ``q`` can be added
to one in ``q, t`` without ceremony.
"""

from __future__ import annotations

from typing import Iterable, Mapping


class Laurent:
    __slots__ = ("variables", "_terms")

    def __init__(self, terms: Mapping[tuple[int, ...], int] | None = None,
                 variables: tuple[str, ...] = ("q", "t")):
        self.variables = tuple(variables)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(self.variables):
                raise ValueError(f"exponent {exps} does not match variables {self.variables}")
            if c:
                clean[exps] = clean.get(exps, 0) + int(c)
                if not clean[exps]:
                    del clean[exps]
        self._terms = clean

    # -- construction -----------------------------------------------------

    @classmethod
    def constant(cls, c: int, variables: tuple[str, ...] = ("q", "t")) -> Laurent:
        return cls({(0,) * len(variables): c}, variables)

    @classmethod
    def monomial(cls, coeff: int = 1, variables: tuple[str, ...] = ("q", "t"), **exps: int) -> Laurent:
        unknown = set(exps) - set(variables)
        if unknown:
            raise ValueError(f"unknown variables {sorted(unknown)}")
        return cls({tuple(exps.get(v, 0) for v in variables): coeff}, variables)

    @classmethod
    def gen(cls, name: str, variables: tuple[str, ...] | None = None) -> Laurent:
        variables = variables or (name,)
        return cls.monomial(1, variables, **{name: 1})

    # -- access -----------------------------------------------------------

    @property
    def terms(self) -> dict[tuple[int, ...], int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, **exps: int) -> int:
        return self._terms.get(tuple(exps.get(v, 0) for v in self.variables), 0)

    def degrees(self, var: str) -> list[int]:
        i = self.variables.index(var)
        return sorted({e[i] for e in self._terms})

    def max_degree(self, var: str) -> int:
        return max(self.degrees(var))

    def min_degree(self, var: str) -> int:
        return min(self.degrees(var))

    def coefficient_of(self, var: str, power: int) -> Laurent:
        """The coefficient of ``var**power`` as a polynomial in the remaining variables."""
        i = self.variables.index(var)
        rest = self.variables[:i] + self.variables[i + 1:]
        return Laurent({e[:i] + e[i + 1:]: c for e, c in self._terms.items() if e[i] == power}, rest)

    # -- variable bookkeeping -------------------------------------------------

    def with_variables(self, variables: Iterable[str]) -> Laurent:
        variables = tuple(variables)
        for v, col in zip(self.variables, zip(*self._terms) if self._terms else []):
            if v not in variables and any(col):
                raise ValueError(f"cannot drop variable {v!r} with nonzero exponents")
        idx = {v: i for i, v in enumerate(self.variables)}
        terms = {}
        for e, c in self._terms.items():
            terms[tuple(e[idx[v]] if v in idx else 0 for v in variables)] = c
        return Laurent(terms, variables)

    def _promote(self, other) -> tuple[Laurent, Laurent]:
        if not isinstance(other, Laurent):
            other = Laurent.constant(int(other), self.variables)
        if other.variables == self.variables:
            return self, other
        union = self.variables + tuple(v for v in other.variables if v not in self.variables)
        return self.with_variables(union), other.with_variables(union)

    def _canonical(self) -> frozenset:
        out = []
        for e, c in self._terms.items():
            out.append((tuple(sorted((v, x) for v, x in zip(self.variables, e) if x)), c))
        return frozenset(out)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> Laurent:
        a, b = self._promote(other)
        terms = dict(a._terms)
        for e, c in b._terms.items():
            terms[e] = terms.get(e, 0) + c
        return Laurent(terms, a.variables)

    __radd__ = __add__

    def __neg__(self) -> Laurent:
        return Laurent({e: -c for e, c in self._terms.items()}, self.variables)

    def __sub__(self, other) -> Laurent:
        a, b = self._promote(other)
        return a + (-b)

    def __rsub__(self, other) -> Laurent:
        return (-self) + other

    def __mul__(self, other) -> Laurent:
        a, b = self._promote(other)
        terms: dict[tuple[int, ...], int] = {}
        for e1, c1 in a._terms.items():
            for e2, c2 in b._terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Laurent(terms, a.variables)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Laurent:
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials can be inverted")
            (e, c), = self._terms.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials can be inverted")
            return Laurent({tuple(x * n for x in e): c ** -n}, self.variables)
        result = Laurent.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Laurent.constant(other, self.variables)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self._canonical() == other._canonical()

    def __hash__(self) -> int:
        return hash(self._canonical())

    # -- substitutions ----------------------------------------------------

    def evaluate(self, **values: int) -> Laurent:
        """Set the given variables to integer values (typically ``t=1``)."""
        keep = tuple(v for v in self.variables if v not in values)
        terms: dict[tuple[int, ...], int] = {}
        for e, c in self._terms.items():
            coeff = c
            key = []
            for v, x in zip(self.variables, e):
                if v in values:
                    val = values[v]
                    if x < 0 and val not in (1, -1):
                        raise ValueError("negative power of a non-unit value")
                    coeff *= val ** x if x >= 0 else val ** (-x)
                else:
                    key.append(x)
            terms[tuple(key)] = terms.get(tuple(key), 0) + coeff
        return Laurent(terms, keep)

    def invert_variables(self, *names: str) -> Laurent:
        """Substitute ``v -> v**-1`` for each named variable."""
        flip = [v in names for v in self.variables]
        return Laurent({tuple(-x if f else x for x, f in zip(e, flip)): c
                        for e, c in self._terms.items()}, self.variables)

    def substitute(self, var: str, value: Laurent) -> Laurent:
        """Replace ``var`` by a polynomial; negative powers need a unit monomial."""
        i = self.variables.index(var)
        rest = self.variables[:i] + self.variables[i + 1:]
        result = Laurent({}, rest)
        for e, c in self._terms.items():
            base = Laurent({e[:i] + e[i + 1:]: c}, rest)
            result = result + base * value ** e[i]
        return result

    # -- printing ---------------------------------------------------------

    def sorted_terms(self, ascending: bool = False) -> list[tuple[tuple[int, ...], int]]:
        # last variable is the most significant key: (t, q) for ("q", "t")
        return sorted(self._terms.items(), key=lambda kv: kv[0][::-1], reverse=not ascending)

    def format(self, compact: bool = False, ascending: bool = False) -> str:
        if not self._terms:
            return "0"
        parts = []
        for n, (e, c) in enumerate(self.sorted_terms(ascending)):
            factors = []
            for v, x in zip(self.variables, e):
                if x == 1:
                    factors.append(v)
                elif x:
                    factors.append(f"{v}^{x}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            if n == 0:
                parts.append(("-" if c < 0 else "") + body)
            elif compact:
                parts.append(("-" if c < 0 else "+") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def to_json(self) -> list[dict[str, int]]:
        return [dict(zip(self.variables, e), c=c) for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data: list[dict[str, int]], variables: tuple[str, ...] = ("q", "t")) -> Laurent:
        return cls({tuple(d.get(v, 0) for v in variables): d["c"] for d in data}, variables)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Laurent({self.format()!r}, variables={self.variables})"


def q_poly(terms: Mapping[int, int]) -> Laurent:
    """Build a polynomial in ``q`` alone from ``{power: coeff}``."""
    return Laurent({(e,): c for e, c in terms.items()}, ("q",))


Q = Laurent.gen("q")
QT_q = Laurent.monomial(1, ("q", "t"), q=1)
QT_t = Laurent.monomial(1, ("q", "t"), t=1)
