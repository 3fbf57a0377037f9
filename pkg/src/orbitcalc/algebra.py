"""Polynomials in one variable over a coefficient ring, and the quantum ring of P^r.

The coefficient ring is a :class:`Poly` ring over ``ctx.coeff_vars``: the
Chern generators ``c1..c{r+1}`` in the universal case, ``u, v`` in split mode,
or nothing at all non-equivariantly.  Elements of the quantum ring are finite
series ``a_0 + a_1 hbar + ...`` with each ``a_k`` reduced modulo ``F``; under
``hbar -> F(z)`` the ring is just polynomials in ``z`` written F-adically.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .poly import AlgebraError, Poly


class UniPoly:
    """Polynomial in ``z`` with :class:`Poly` coefficients over ``ring``."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: Sequence[str], coeffs: Iterable[Poly] = ()):
        self.ring = tuple(ring)
        cs = []
        for c in coeffs:
            if not isinstance(c, Poly):
                c = Poly.const(self.ring, c)
            elif c.vars != self.ring:
                raise AlgebraError(f"coefficient over {c.vars}, expected {self.ring}")
            cs.append(c)
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, ring):
        return cls(ring, ())

    @classmethod
    def const(cls, ring, c):
        return cls(ring, (c if isinstance(c, Poly) else Poly.const(ring, c),))

    @classmethod
    def z_power(cls, ring, k: int, c=1):
        ring = tuple(ring)
        zero = Poly.zero(ring)
        lead = c if isinstance(c, Poly) else Poly.const(ring, c)
        return cls(ring, [zero] * k + [lead])

    @classmethod
    def from_poly(cls, p: Poly, name: str, ring: Sequence[str]) -> "UniPoly":
        """Split a Poly in ``name`` (plus variables of ``ring``) into z-coefficients."""
        ring = tuple(ring)
        parts = p.as_univariate(name) if name in p.vars else {0: p}
        if not parts:
            return cls.zero(ring)
        top = max(parts)
        zero = Poly.zero(ring)
        return cls(ring, [parts[k].embed(ring) if k in parts else zero for k in range(top + 1)])

    def to_poly(self, name: str, vars: Sequence[str]) -> Poly:
        vars = tuple(vars)
        i = vars.index(name)
        out = {}
        for k, c in enumerate(self.coeffs):
            for e, v in c.embed(vars).terms.items():
                out[e[:i] + (k,) + e[i + 1:]] = v
        return Poly(vars, out)

    # queries -----------------------------------------------------------
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, j: int) -> Poly:
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return Poly.zero(self.ring)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.ring == other.ring and self.coeffs == other.coeffs
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __repr__(self):
        return f"UniPoly({self.to_poly('z', ('z',) + self.ring)})"

    def __str__(self):
        return str(self.to_poly("z", ("z",) + self.ring))

    # arithmetic --------------------------------------------------------
    def _check(self, other: "UniPoly"):
        if not isinstance(other, UniPoly):
            raise TypeError(f"expected UniPoly, got {type(other).__name__}")
        if other.ring != self.ring:
            raise AlgebraError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other):
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UniPoly(self.ring, out)

    def __neg__(self):
        return UniPoly(self.ring, [-c for c in self.coeffs])

    def __sub__(self, other):
        self._check(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Poly):
            return UniPoly(self.ring, [c * other for c in self.coeffs])
        if isinstance(other, int):
            return UniPoly(self.ring, [c * other for c in self.coeffs])
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly.zero(self.ring)
        zero = Poly.zero(self.ring)
        out = [zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
        return UniPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = UniPoly.const(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, k: int) -> "UniPoly":
        """Multiply by z^k."""
        if not self.coeffs:
            return self
        return UniPoly(self.ring, [Poly.zero(self.ring)] * k + list(self.coeffs))

    def divmod(self, g: "UniPoly"):
        """Division with remainder by a divisor that is monic in z."""
        self._check(g)
        m = g.degree()
        if m < 0:
            raise ZeroDivisionError("division by zero polynomial")
        if g.coeffs[-1] != 1:
            raise AlgebraError("divisor must be monic")
        if self.degree() < m:
            return UniPoly.zero(self.ring), self
        rem = list(self.coeffs)
        quot = [Poly.zero(self.ring)] * (len(rem) - m)
        gc = g.coeffs
        for k in range(len(rem) - 1, m - 1, -1):
            lead = rem[k]
            if not lead:
                continue
            quot[k - m] = lead
            for j in range(m):
                if gc[j]:
                    rem[k - m + j] = rem[k - m + j] - lead * gc[j]
            rem[k] = Poly.zero(self.ring)
        return UniPoly(self.ring, quot), UniPoly(self.ring, rem[:m])

    def exact_div(self, g: "UniPoly") -> "UniPoly":
        q, rem = self.divmod(g)
        if rem:
            raise AlgebraError("inexact division")
        return q

    def evaluate(self, x: Poly) -> Poly:
        """Horner evaluation at a ring element."""
        acc = Poly.zero(self.ring)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def embed(self, ring: Sequence[str]) -> "UniPoly":
        ring = tuple(ring)
        return UniPoly(ring, [c.embed(ring) for c in self.coeffs])

    def map_coeffs(self, fn) -> "UniPoly":
        return UniPoly(self.ring, [fn(c) for c in self.coeffs])


class QuantumContext:
    """Dimension ``r`` together with a monic degree ``r+1`` polynomial ``F``.

    ``weights`` assigns a grading to the coefficient variables for which ``F``
    is homogeneous of degree ``r+1`` (with ``z`` of degree 1).  The fast class
    engine relies on this grading.
    """

    __slots__ = ("r", "coeff_vars", "F", "weights", "name", "_powers")

    def __init__(self, r: int, F: UniPoly, weights: Sequence[int], name: str = "custom"):
        if r < 0:
            raise AlgebraError("r must be nonnegative")
        if F.degree() != r + 1 or F.coeffs[-1] != 1:
            raise AlgebraError("F must be monic of degree r+1")
        self.r = r
        self.coeff_vars = F.ring
        self.F = F
        self.weights = tuple(weights)
        if len(self.weights) != len(self.coeff_vars):
            raise AlgebraError("one weight per coefficient variable")
        self.name = name
        self._powers = [UniPoly.const(F.ring, 1), F]

    @classmethod
    def universal(cls, r: int) -> "QuantumContext":
        ring = tuple(f"c{m}" for m in range(1, r + 2))
        cs = [Poly.var(ring, f"c{r + 1 - j}") for j in range(r + 1)] + [Poly.one(ring)]
        return cls(r, UniPoly(ring, cs), tuple(range(1, r + 2)), "universal")

    @classmethod
    def nonequivariant(cls, r: int) -> "QuantumContext":
        return cls(r, UniPoly.z_power((), r + 1), (), "nonequivariant")

    @classmethod
    def split(cls) -> "QuantumContext":
        """r = 1 with F = (z+u)(z+v)."""
        ring = ("u", "v")
        u, v = Poly.var(ring, "u"), Poly.var(ring, "v")
        return cls(1, UniPoly(ring, [u * v, u + v, Poly.one(ring)]), (1, 1), "split")

    def __eq__(self, other):
        return isinstance(other, QuantumContext) and self.r == other.r and self.F == other.F

    def __hash__(self):
        return hash((self.r, self.F))

    def __repr__(self):
        return f"QuantumContext(r={self.r}, F={self.F})"

    def F_power(self, k: int) -> UniPoly:
        while len(self._powers) <= k:
            self._powers.append(self._powers[-1] * self.F)
        return self._powers[k]

    def F_coeff(self, m: int) -> Poly:
        """Coefficient f_m of z^{r+1-m} in F (f_0 = 1)."""
        return self.F.coeff(self.r + 1 - m)

    def extend(self, prefix: Sequence[str], weight: int = 1) -> "QuantumContext":
        """Same F over the larger coefficient ring ``prefix + coeff_vars``."""
        ring = tuple(prefix) + self.coeff_vars
        return QuantumContext(self.r, self.F.embed(ring), (weight,) * len(prefix) + self.weights, self.name)

    def F_at(self, var: str, vars: Sequence[str]) -> Poly:
        """F evaluated at the variable ``var`` as a Poly over ``vars``."""
        vars = tuple(vars)
        x = Poly.var(vars, var)
        acc = Poly.zero(vars)
        for c in reversed(self.F.coeffs):
            acc = acc * x + c.embed(vars)
        return acc

    def zero(self) -> UniPoly:
        return UniPoly.zero(self.coeff_vars)

    def one(self) -> UniPoly:
        return UniPoly.const(self.coeff_vars, 1)

    def z(self, k: int = 1) -> UniPoly:
        return UniPoly.z_power(self.coeff_vars, k)


def _check_ring(f: UniPoly, ctx: QuantumContext):
    if f.ring != ctx.coeff_vars:
        raise AlgebraError(f"polynomial over {f.ring}, context over {ctx.coeff_vars}")


def reduce_mod_F(f: UniPoly, ctx: QuantumContext) -> UniPoly:
    """The representative of f modulo F of degree at most r."""
    _check_ring(f, ctx)
    return f.divmod(ctx.F)[1]


def mod_F_power(f: UniPoly, k: int, ctx: QuantumContext) -> UniPoly:
    """Remainder of f modulo F^k (zero when k = 0)."""
    _check_ring(f, ctx)
    if k <= 0:
        return ctx.zero()
    if f.degree() < k * (ctx.r + 1):
        return f
    return f.divmod(ctx.F_power(k))[1]


def f_adic_digits(f: UniPoly, ctx: QuantumContext) -> list:
    """a_0, a_1, ... with deg a_k <= r and f = sum a_k F^k."""
    _check_ring(f, ctx)
    digits = []
    rest = f
    while rest:
        rest, a = rest.divmod(ctx.F)
        digits.append(a)
    return digits


def integrate_point(f: UniPoly, ctx: QuantumContext) -> Poly:
    """Equivariant pushforward to a point: the z^r coefficient of f mod F."""
    return reduce_mod_F(f, ctx).coeff(ctx.r)


class QuantumElement:
    """A finite hbar-series sum a_k hbar^k with every a_k of z-degree <= r."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: QuantumContext, coeffs: Iterable[UniPoly]):
        cs = list(coeffs)
        for a in cs:
            _check_ring(a, ctx)
            if a.degree() > ctx.r:
                raise AlgebraError("hbar coefficients must have z-degree <= r")
        while cs and not cs[-1]:
            cs.pop()
        self.ctx = ctx
        self.coeffs = tuple(cs)

    @classmethod
    def from_unipoly(cls, f: UniPoly, ctx: QuantumContext) -> "QuantumElement":
        return cls(ctx, f_adic_digits(f, ctx))

    def lift(self) -> UniPoly:
        """Substitute hbar -> F(z)."""
        acc = self.ctx.zero()
        for k, a in enumerate(self.coeffs):
            if a:
                acc = acc + a * self.ctx.F_power(k)
        return acc

    def coeff(self, k: int) -> UniPoly:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self.ctx.zero()

    def extract(self, k: int, j: int) -> Poly:
        """[z^j][F^k] of the element."""
        return self.coeff(k).coeff(j)

    def hbar_degree(self) -> int:
        return len(self.coeffs) - 1

    def truncate(self, k: int) -> "QuantumElement":
        """Reduction modulo hbar^k."""
        return QuantumElement(self.ctx, self.coeffs[: max(k, 0)])

    def star(self, other: "QuantumElement") -> "QuantumElement":
        return star(self, other)

    def __add__(self, other):
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return QuantumElement(self.ctx, [self.coeff(k) + other.coeff(k) for k in range(n)])

    def __sub__(self, other):
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return QuantumElement(self.ctx, [self.coeff(k) - other.coeff(k) for k in range(n)])

    def __neg__(self):
        return QuantumElement(self.ctx, [-a for a in self.coeffs])

    def scale(self, c) -> "QuantumElement":
        return QuantumElement(self.ctx, [a * c for a in self.coeffs])

    def _check(self, other):
        if not isinstance(other, QuantumElement) or other.ctx != self.ctx:
            raise AlgebraError("quantum elements from different contexts")

    def __eq__(self, other):
        if isinstance(other, QuantumElement):
            return self.ctx == other.ctx and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def to_poly(self) -> Poly:
        """As a polynomial in z, hbar over the coefficient ring."""
        vars = ("z", "hbar") + self.ctx.coeff_vars
        out = {}
        for k, a in enumerate(self.coeffs):
            for e, c in a.to_poly("z", ("z",) + self.ctx.coeff_vars).terms.items():
                out[(e[0], k) + e[1:]] = c
        return Poly(vars, out)

    def __repr__(self):
        return f"QuantumElement({self.to_poly()})"


def f_adic_expand(f: UniPoly, ctx: QuantumContext) -> QuantumElement:
    """f = sum a_k F^k as the quantum element sum a_k hbar^k."""
    return QuantumElement.from_unipoly(f, ctx)


def star(a: QuantumElement, b: QuantumElement) -> QuantumElement:
    """Quantum product: multiply the lifts and expand F-adically."""
    if a.ctx != b.ctx:
        raise AlgebraError("star of elements from different contexts")
    return QuantumElement.from_unipoly(a.lift() * b.lift(), a.ctx)


def h_vars(n: int, name: str = "H") -> tuple:
    return tuple(f"{name}{i}" for i in range(1, n + 1))


def reduce_vars(p: Poly, ctx: QuantumContext, hvars: Sequence[str]) -> Poly:
    """Reduce each listed variable modulo F of that variable."""
    for h in hvars:
        if p.degree_in(h) > ctx.r:
            p = p.mod_monic(ctx.F_at(h, p.vars), h)
    return p


class ChowClass:
    """A reduced polynomial in H1..Hn over the coefficient ring of ``ctx``."""

    __slots__ = ("ctx", "n", "poly")

    def __init__(self, ctx: QuantumContext, n: int, poly: Poly, *, check: bool = True):
        vars = h_vars(n) + ctx.coeff_vars
        poly = poly.embed(vars)
        if check:
            for h in h_vars(n):
                if poly.degree_in(h) > ctx.r:
                    raise AlgebraError(f"class not reduced in {h}")
        self.ctx = ctx
        self.n = n
        self.poly = poly

    @classmethod
    def zero(cls, ctx, n):
        return cls(ctx, n, Poly.zero(h_vars(n) + ctx.coeff_vars))

    @classmethod
    def from_poly(cls, p: Poly, ctx: QuantumContext, n: int) -> "ChowClass":
        vars = h_vars(n) + ctx.coeff_vars
        return cls(ctx, n, reduce_vars(p.embed(vars), ctx, h_vars(n)))

    @property
    def vars(self):
        return self.poly.vars

    def __add__(self, other):
        self._check(other)
        return ChowClass(self.ctx, self.n, self.poly + other.poly, check=False)

    def __sub__(self, other):
        self._check(other)
        return ChowClass(self.ctx, self.n, self.poly - other.poly, check=False)

    def __neg__(self):
        return ChowClass(self.ctx, self.n, -self.poly, check=False)

    def _check(self, other):
        if not isinstance(other, ChowClass) or other.ctx != self.ctx or other.n != self.n:
            raise AlgebraError("classes from different contexts")

    def __eq__(self, other):
        if isinstance(other, ChowClass):
            return self.ctx == other.ctx and self.n == other.n and self.poly == other.poly
        if isinstance(other, int) and other == 0:
            return self.poly.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.n, self.poly))

    def is_zero(self):
        return self.poly.is_zero()

    def specialize_nonequivariant(self) -> "ChowClass":
        """Set every coefficient variable to zero."""
        ctx0 = QuantumContext.nonequivariant(self.ctx.r)
        p = self.poly.specialize_zero(self.ctx.coeff_vars).embed(h_vars(self.n))
        return ChowClass(ctx0, self.n, p)

    def to_json(self) -> dict:
        d = self.poly.to_json()
        return {"r": self.ctx.r, "n": self.n, "coeff_vars": list(self.ctx.coeff_vars), **d}

    def __str__(self):
        return str(self.poly)

    def __repr__(self):
        return f"ChowClass(r={self.ctx.r}, n={self.n}, {self.poly})"


def reduce_class(p: Poly, ctx: QuantumContext, n: int | None = None) -> ChowClass:
    """Canonical class of a polynomial in H1..Hn over the coefficient ring."""
    if n is None:
        n = max((int(v[1:]) for v in p.vars if v[:1] == "H" and v[1:].isdigit()), default=0)
    return ChowClass.from_poly(p, ctx, n)
