"""Sparse multivariate polynomials with exact integer or rational coefficients.

A :class:`Poly` is an immutable map from exponent tuples to nonzero
coefficients over a fixed, ordered tuple of variable names.  Coefficients are
Python ints whenever possible and :class:`fractions.Fraction` otherwise.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence


class AlgebraError(ValueError):
    """Raised on variable-set mismatches and inexact divisions."""


def normalize(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Rational):
        return normalize(Fraction(c.numerator, c.denominator))
    raise TypeError(f"unsupported coefficient {c!r}")


def _grlex_key(item):
    exp = item[0]
    return (sum(exp), exp)


def format_coeff(c) -> str:
    c = normalize(c)
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def parse_coeff(s) -> "int | Fraction":
    if isinstance(s, (int, Fraction)):
        return normalize(s)
    return normalize(Fraction(str(s).strip()))


class Poly:
    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping | None = None, *, _clean: bool = False):
        self.vars = tuple(vars)
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            n = len(self.vars)
            clean = {}
            for exp, c in terms.items():
                exp = tuple(exp)
                if len(exp) != n:
                    raise AlgebraError(f"exponent {exp} does not match variables {self.vars}")
                c = normalize(c)
                if c:
                    clean[exp] = clean.get(exp, 0) + c
                    if not clean[exp]:
                        del clean[exp]
            self.terms = clean
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def zero(cls, vars):
        return cls(vars, {}, _clean=True)

    @classmethod
    def const(cls, vars, c):
        vars = tuple(vars)
        c = normalize(c)
        return cls(vars, {(0,) * len(vars): c} if c else {}, _clean=True)

    @classmethod
    def one(cls, vars):
        return cls.const(vars, 1)

    @classmethod
    def var(cls, vars, name, power: int = 1):
        vars = tuple(vars)
        if name not in vars:
            raise AlgebraError(f"unknown variable {name!r} for {vars}")
        exp = [0] * len(vars)
        exp[vars.index(name)] = power
        return cls(vars, {tuple(exp): 1}, _clean=True)

    @classmethod
    def monomial(cls, vars, exp, c=1):
        return cls(vars, {tuple(exp): c})

    # basic queries ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.sorted_terms())

    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=_grlex_key, reverse=True)

    def constant_term(self):
        return self.terms.get((0,) * len(self.vars), 0)

    def is_constant(self) -> bool:
        z = (0,) * len(self.vars)
        return all(e == z for e in self.terms)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        if not self.terms:
            return -1
        i = self.vars.index(name)
        return max(e[i] for e in self.terms)

    def weighted_degrees(self, weights: Sequence[int]) -> set:
        return {sum(w * a for w, a in zip(weights, e)) for e in self.terms}

    def __eq__(self, other):
        if isinstance(other, Poly):
            if self.vars != other.vars:
                return False
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise AlgebraError(f"variable mismatch: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.vars, other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly(self.vars, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = normalize(other)
            if not other:
                return Poly.zero(self.vars)
            return Poly(self.vars, {e: normalize(c * other) for e, c in self.terms.items()}, _clean=True)
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self.terms, other.terms
        if not a or not b:
            return Poly.zero(self.vars)
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = get(e, 0) + ca * cb
        return Poly(self.vars, {e: normalize(c) for e, c in out.items() if c}, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise AlgebraError("negative power")
        result = Poly.one(self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c):
        return self * c

    def leading(self):
        """(exponent, coefficient) of the graded-lex leading term."""
        return max(self.terms.items(), key=_grlex_key)

    def exact_div(self, other) -> "Poly":
        """Quotient q with self == q * other; raises if the division is inexact."""
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("division by zero polynomial")
        lead_e, lead_c = other.leading()
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            e, c = max(rem.items(), key=_grlex_key)
            diff = tuple(x - y for x, y in zip(e, lead_e))
            if min(diff, default=0) < 0:
                raise AlgebraError("inexact division")
            if isinstance(c, int) and isinstance(lead_c, int) and c % lead_c == 0:
                q = c // lead_c
            else:
                q = normalize(Fraction(c) / lead_c)
            quot[diff] = q
            for eo, co in other.terms.items():
                t = tuple(x + y for x, y in zip(diff, eo))
                v = rem.get(t, 0) - q * co
                if v:
                    rem[t] = normalize(v)
                else:
                    rem.pop(t, None)
        return Poly(self.vars, quot, _clean=True)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return self.exact_div(other)

    # structure --------------------------------------------------------
    def as_univariate(self, name: str) -> dict:
        """Map k -> coefficient Poly (same vars, exponent of ``name`` zeroed)."""
        i = self.vars.index(name)
        buckets: dict = {}
        for e, c in self.terms.items():
            k = e[i]
            buckets.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: Poly(self.vars, t, _clean=True) for k, t in buckets.items()}

    def coeff_of(self, name: str, k: int) -> "Poly":
        i = self.vars.index(name)
        return Poly(self.vars, {e[:i] + (0,) + e[i + 1:]: c for e, c in self.terms.items() if e[i] == k}, _clean=True)

    def embed(self, new_vars: Sequence[str]) -> "Poly":
        """Re-express over ``new_vars``; raises if a used variable is missing."""
        new_vars = tuple(new_vars)
        if new_vars == self.vars:
            return self
        pos = []
        for j, name in enumerate(self.vars):
            if name in new_vars:
                pos.append(new_vars.index(name))
            else:
                if any(e[j] for e in self.terms):
                    raise AlgebraError(f"variable {name!r} is used and absent from {new_vars}")
                pos.append(None)
        out = {}
        m = len(new_vars)
        for e, c in self.terms.items():
            ne = [0] * m
            for j, p in enumerate(pos):
                if p is not None:
                    ne[p] = e[j]
            out[tuple(ne)] = c
        return Poly(new_vars, out, _clean=True)

    def rename(self, mapping: Mapping[str, str]) -> "Poly":
        return Poly(tuple(mapping.get(v, v) for v in self.vars), self.terms, _clean=True)

    def used_vars(self) -> tuple:
        return tuple(v for j, v in enumerate(self.vars) if any(e[j] for e in self.terms))

    def specialize_zero(self, names: Iterable[str]) -> "Poly":
        idx = [self.vars.index(n) for n in names if n in self.vars]
        return Poly(self.vars, {e: c for e, c in self.terms.items() if all(e[i] == 0 for i in idx)}, _clean=True)

    def subs(self, values: Mapping[str, object], target_vars: Sequence[str] | None = None) -> "Poly":
        """Substitute Polys or numbers for variables; result lives over ``target_vars``."""
        target = tuple(target_vars) if target_vars is not None else self.vars
        images = []
        for name in self.vars:
            if name in values:
                v = values[name]
                images.append(v.embed(target) if isinstance(v, Poly) else Poly.const(target, v))
            else:
                images.append(Poly.var(target, name) if name in target else None)
        powers: dict = {}

        def pw(j, k):
            key = (j, k)
            if key not in powers:
                if images[j] is None:
                    raise AlgebraError(f"variable {self.vars[j]!r} has no image")
                powers[key] = images[j] ** k
            return powers[key]

        acc: dict = {}
        for e, c in self.terms.items():
            t = Poly.const(target, c)
            for j, k in enumerate(e):
                if k:
                    t = t * pw(j, k)
            for te, tc in t.terms.items():
                v = acc.get(te, 0) + tc
                if v:
                    acc[te] = v
                else:
                    acc.pop(te, None)
        return Poly(target, {e: normalize(c) for e, c in acc.items()}, _clean=True)

    def evaluate(self, values: Mapping[str, object]):
        """Numeric evaluation; every variable must be assigned."""
        total = 0
        for e, c in self.terms.items():
            t = c
            for name, k in zip(self.vars, e):
                if k:
                    t = t * values[name] ** k
            total += t
        return normalize(total) if isinstance(total, (int, Fraction)) else total

    def divmod_monic(self, g: "Poly", name: str):
        """Division by ``g``, monic in ``name``; remainder has ``name``-degree < deg g."""
        g = self._coerce(g)
        gu = g.as_univariate(name)
        m = max(gu)
        if gu[m] != 1:
            raise AlgebraError(f"divisor is not monic in {name}")
        f = self.as_univariate(name)
        if not f or max(f) < m:
            return Poly.zero(self.vars), self
        i = self.vars.index(name)
        zero = Poly.zero(self.vars)
        top = max(f)
        rem = {k: f.get(k, zero) for k in range(top + 1)}
        quot = {}
        for k in range(top, m - 1, -1):
            lead = rem[k]
            if not lead:
                continue
            quot[k - m] = lead
            for j, gj in gu.items():
                rem[k - m + j] = rem[k - m + j] - lead * gj
        def assemble(parts):
            out = {}
            for k, p in parts.items():
                for e, c in p.terms.items():
                    out[e[:i] + (k,) + e[i + 1:]] = c
            return Poly(self.vars, out, _clean=True)
        return assemble(quot), assemble({k: v for k, v in rem.items() if k < m})

    def mod_monic(self, g: "Poly", name: str) -> "Poly":
        return self.divmod_monic(g, name)[1]

    def integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    # serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [{"exp": list(e), "coeff": format_coeff(c)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Poly":
        if not isinstance(obj, Mapping) or "vars" not in obj or "terms" not in obj:
            raise AlgebraError("polynomial JSON needs 'vars' and 'terms'")
        vars = tuple(obj["vars"])
        terms = {}
        for t in obj["terms"]:
            e = tuple(int(x) for x in t["exp"])
            terms[e] = terms.get(e, 0) + parse_coeff(t["coeff"])
        return cls(vars, terms)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (name if k == 1 else f"{name}^{k}") for name, k in zip(self.vars, e) if k
            )
            neg = c < 0
            a = -c if neg else c
            if mono:
                body = mono if a == 1 else f"{format_coeff(a)}*{mono}"
            else:
                body = format_coeff(a)
            if not pieces:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append((" - " if neg else " + ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"Poly({self.vars}, {str(self)!r})"

    @classmethod
    def parse(cls, text: str, vars: Sequence[str]) -> "Poly":
        return parse_poly(text, vars)


_BINOPS = {ast.Add, ast.Sub, ast.Mult, ast.Pow, ast.Div}


def parse_poly(text: str, vars: Sequence[str]) -> Poly:
    """Parse an expression such as ``"3 - 2*t + t^2"`` over ``vars``.

    Supports ``+ - * ^ **``, parentheses, integer and decimal literals and
    division by constants.
    """
    vars = tuple(vars)
    src = str(text).replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise AlgebraError(f"cannot parse polynomial {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return Poly.const(vars, Fraction(str(node.value)))
        if isinstance(node, ast.Name):
            if node.id not in vars:
                raise AlgebraError(f"unknown variable {node.id!r} in {text!r}")
            return Poly.var(vars, node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if not b.is_constant() or not b:
                    raise AlgebraError("only division by nonzero constants is supported")
                return a * (Fraction(1) / Fraction(b.constant_term()))
            if not b.is_constant() or not isinstance(b.constant_term(), int) or b.constant_term() < 0:
                raise AlgebraError("exponents must be nonnegative integers")
            return a ** b.constant_term()
        raise AlgebraError(f"unsupported syntax in {text!r}")

    return ev(tree)
