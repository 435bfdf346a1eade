"""Exact arithmetic substrate: multivariate Laurent rational functions.

Everything downstream computes in the field Q(t_1..t_n, u, v, z) with
arbitrary-precision rational coefficients.  The heavy lifting is done by
sympy's sparse polynomial rings (gmpy2-backed when available); this module
pins a canonical representation on top of them:

* one `LaurentContext` per rank n, variables ordered (t_1..t_n, u, v, z)
  under graded-lexicographic term order;
* every value is a reduced numerator/denominator pair, denominator
  sign-normalized, so equality of values is equality of representations;
* Laurent monomials with negative exponents are ordinary field elements
  (t^-2 is 1/t^2).

No floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction

from sympy.polys.domains import QQ
from sympy.polys.fields import field as _sympy_field
from sympy.polys.orderings import grlex

# sympy's integer gcd path raises HeuristicGCDFailed on rare unlucky inputs
# instead of falling back; route those to the deterministic modular gcd.
from sympy.polys import modulargcd as _modgcd
from sympy.polys.polyerrors import HeuristicGCDFailed as _HeuFailed
from sympy.polys.rings import PolyElement as _PolyElement

_plain_gcd_ZZ = _PolyElement._gcd_ZZ


def _gcd_ZZ_with_fallback(f, g):
    try:
        return _plain_gcd_ZZ(f, g)
    except _HeuFailed:
        if f.ring.ngens == 1:
            return _modgcd.modgcd_univariate(f, g)
        return _modgcd.modgcd_multivariate(f, g)


_PolyElement._gcd_ZZ = _gcd_ZZ_with_fallback


class ExactError(Exception):
    """Base error for the arithmetic layer."""


class DivisionByZeroExpr(ExactError):
    """Division by the zero expression."""


class NotExpandable(ExactError):
    """Rational function has no Laurent expansion in the requested direction."""


class EvaluationError(ExactError):
    """Evaluation point misses a variable or vanishes a denominator."""


AT_INFINITY = "at_infinity"
AT_ZERO = "at_zero"


def _to_ground(x):
    if isinstance(x, (int, Fraction)):
        return QQ(int(getattr(x, "numerator", x)), int(getattr(x, "denominator", 1)))
    raise ExactError("coefficients must be int or Fraction, got %r" % (x,))


def _ground_to_fraction(x):
    return Fraction(int(QQ.numer(x)), int(QQ.denom(x)))


class LaurentContext:
    """Field Q(t_1..t_n, u, v, z) for a fixed rank n, plus factories."""

    _cache: dict = {}

    def __new__(cls, n: int):
        if n < 1:
            raise ValueError("need at least one t variable")
        if n in cls._cache:
            return cls._cache[n]
        self = super().__new__(cls)
        names = ["t%d" % i for i in range(1, n + 1)] + ["u", "v", "z"]
        self.n = n
        self.var_names = tuple(names)
        self.field, *gens = _sympy_field(" ".join(names), QQ, grlex)
        self.ring = self.field.ring
        self._gens = tuple(gens)
        self.t = tuple(LaurentExpr(self, g) for g in gens[:n])
        self.u = LaurentExpr(self, gens[n])
        self.v = LaurentExpr(self, gens[n + 1])
        self.z = LaurentExpr(self, gens[n + 2])
        self.zero = LaurentExpr(self, self.field.zero)
        self.one = LaurentExpr(self, self.field.one)
        self._z_index = n + 2
        cls._cache[n] = self
        return self

    def rational(self, q) -> "LaurentExpr":
        return LaurentExpr(self, self.field.ground_new(_to_ground(Fraction(q))))

    def t_res(self, j: int) -> "LaurentExpr":
        """t_{(j mod n)} with residues taken in {1..n}."""
        return self.t[(j - 1) % self.n]

    def monomial(self, texp=(), uexp=0, vexp=0, zexp=0, coeff=1) -> "LaurentExpr":
        m = self.rational(coeff)
        for i, e in enumerate(texp):
            if e:
                m = m * self.t[i] ** e
        if uexp:
            m = m * self.u ** uexp
        if vexp:
            m = m * self.v ** vexp
        if zexp:
            m = m * self.z ** zexp
        return m

    def wrap(self, raw) -> "LaurentExpr":
        return LaurentExpr(self, raw)

    def __repr__(self):
        return "LaurentContext(n=%d)" % self.n


class LaurentExpr:
    """A reduced Laurent rational function over a LaurentContext.

    Immutable; all operators return new values.  Equality and hash are
    canonical (same value <=> same representation).
    """

    __slots__ = ("ctx", "raw")

    def __init__(self, ctx: LaurentContext, raw):
        self.ctx = ctx
        self.raw = raw

    def _coerce(self, other):
        if isinstance(other, LaurentExpr):
            if other.ctx is not self.ctx:
                raise ExactError("mixing expressions from different contexts")
            return other.raw
        if isinstance(other, (int, Fraction)):
            return self.ctx.field.ground_new(_to_ground(Fraction(other)))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return LaurentExpr(self.ctx, self.raw + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return LaurentExpr(self.ctx, self.raw - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return LaurentExpr(self.ctx, o - self.raw)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return LaurentExpr(self.ctx, self.raw * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o:
            raise DivisionByZeroExpr("division by zero expression")
        return LaurentExpr(self.ctx, self.raw / o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.raw:
            raise DivisionByZeroExpr("division by zero expression")
        return LaurentExpr(self.ctx, o / self.raw)

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise ExactError("exponents must be integers")
        if e < 0 and not self.raw:
            raise DivisionByZeroExpr("negative power of zero expression")
        return LaurentExpr(self.ctx, self.raw ** e)

    def __neg__(self):
        return LaurentExpr(self.ctx, -self.raw)

    def __eq__(self, other):
        if isinstance(other, LaurentExpr):
            return self.ctx is other.ctx and self.raw == other.raw
        if isinstance(other, (int, Fraction)):
            return self.raw == self._coerce(other)
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash((id(self.ctx), self.raw))

    def __bool__(self):
        return bool(self.raw)

    @property
    def is_zero(self):
        return not self.raw

    @property
    def is_one(self):
        return self.raw == self.ctx.field.one

    def numerator_terms(self):
        """Terms of the reduced numerator, grlex-descending: (exps, Fraction)."""
        return [(e, _ground_to_fraction(c)) for e, c in self.raw.numer.terms()]

    def denominator_terms(self):
        return [(e, _ground_to_fraction(c)) for e, c in self.raw.denom.terms()]

    def evaluate(self, point) -> Fraction:
        """Exact value at a point assigning nonzero rationals to variables.

        `point` maps variable names ("t1", "u", "v", "z") to rationals.  Every
        variable occurring in the expression must be assigned; unused
        variables may be omitted.
        """
        ctx = self.ctx
        names = ctx.var_names
        used = [False] * len(names)
        for poly in (self.raw.numer, self.raw.denom):
            for exps in poly.monoms():
                for i, e in enumerate(exps):
                    if e:
                        used[i] = True
        vals = []
        for i, name in enumerate(names):
            if name in point:
                q = Fraction(point[name])
                if q == 0:
                    raise EvaluationError("variable %s assigned zero" % name)
                vals.append(_to_ground(q))
            elif used[i]:
                raise EvaluationError("variable %s occurs but is not assigned" % name)
            else:
                vals.append(QQ(1))
        pairs = list(zip(ctx.ring.gens, vals))
        num = self.raw.numer.evaluate(pairs)
        den = self.raw.denom.evaluate(pairs)
        if not den:
            raise EvaluationError("denominator vanishes at the point")
        return _ground_to_fraction(num) / _ground_to_fraction(den)

    def scale_z(self, factor: "LaurentExpr") -> "LaurentExpr":
        """Substitute z -> factor*z for a z-free monomial `factor`."""
        ctx = self.ctx
        fr = factor.raw
        if not (fr.denom.is_term and fr.numer.is_term):
            raise ExactError("scale_z needs a monomial factor")
        zi = ctx._z_index
        f = ctx.field

        def transform(poly):
            out = f.zero
            for exps, c in poly.terms():
                base = f.new(ctx.ring.from_terms([(exps, c)]), ctx.ring.one)
                out += base * (fr ** exps[zi])
            return out

        den = transform(self.raw.denom)
        if not den:
            raise DivisionByZeroExpr("scaling vanished the denominator")
        return LaurentExpr(ctx, transform(self.raw.numer) / den)

    def z_coeffs(self):
        """(num_coeffs, den_coeffs): dicts z-degree -> z-free LaurentExpr."""
        ctx = self.ctx
        zi = ctx._z_index

        def split(poly):
            buckets = {}
            for exps, c in poly.terms():
                zdeg = exps[zi]
                stripped = list(exps)
                stripped[zi] = 0
                term = ctx.ring.from_terms([(tuple(stripped), c)])
                buckets[zdeg] = buckets.get(zdeg, ctx.ring.zero) + term
            return {
                d: LaurentExpr(ctx, ctx.field.new(p, ctx.ring.one))
                for d, p in buckets.items()
            }

        return split(self.raw.numer), split(self.raw.denom)

    def to_string(self) -> str:
        """Canonical text form: sorted monomials, explicit exponents."""
        num = _poly_to_string(self.ctx, self.raw.numer)
        if self.raw.denom == self.ctx.ring.one:
            return num
        return "(%s) / (%s)" % (num, _poly_to_string(self.ctx, self.raw.denom))

    __str__ = to_string

    def __repr__(self):
        return "LaurentExpr(%s)" % self.to_string()


def _poly_to_string(ctx, poly) -> str:
    if not poly:
        return "0"
    parts = []
    for exps, coeff in poly.terms():
        c = _ground_to_fraction(coeff)
        factors = []
        for name, e in zip(ctx.var_names, exps):
            if e:
                factors.append("%s^%d" % (name, e))
        body = "*".join(factors)
        if not body:
            parts.append(str(c))
        elif c == 1:
            parts.append(body)
        elif c == -1:
            parts.append("-" + body)
        else:
            parts.append("%s*%s" % (c, body))
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def _poly_from_string(ctx, text: str):
    text = text.strip()
    if text == "0":
        return ctx.ring.zero
    text = text.replace(" - ", " + -")
    poly = ctx.ring.zero
    for chunk in text.split(" + "):
        chunk = chunk.strip()
        neg = chunk.startswith("-")
        if neg:
            chunk = chunk[1:]
        coeff = Fraction(1)
        exps = [0] * len(ctx.var_names)
        for factor in chunk.split("*"):
            factor = factor.strip()
            if "^" in factor:
                name, _, e = factor.partition("^")
                exps[ctx.var_names.index(name)] += int(e)
            elif factor in ctx.var_names:
                exps[ctx.var_names.index(factor)] += 1
            else:
                coeff *= Fraction(factor)
        if neg:
            coeff = -coeff
        poly += ctx.ring.from_terms([(tuple(exps), _to_ground(coeff))])
    return poly


def expr_from_string(ctx: LaurentContext, text: str) -> LaurentExpr:
    """Inverse of LaurentExpr.to_string (exact round-trip)."""
    text = text.strip()
    if text.startswith("(") and ") / (" in text:
        numtext, _, dentext = text[1:-1].partition(") / (")
        num = _poly_from_string(ctx, numtext)
        den = _poly_from_string(ctx, dentext)
    else:
        num = _poly_from_string(ctx, text)
        den = ctx.ring.one
    if not den:
        raise DivisionByZeroExpr("zero denominator in serialized form")
    return LaurentExpr(ctx, ctx.field.new(num, den))


def arith(a: LaurentExpr, b: LaurentExpr, op: str) -> LaurentExpr:
    """Field operation with canonical reduced result."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ExactError("unknown op %r" % op)


class LaurentSeries:
    """Truncated expansion of a rational function at z=infinity or z=0.

    Coefficient list holds c_0..c_order where the series is
    sum_r c_r z^{-r} (at_infinity) or sum_r c_r z^{r} (at_zero).
    """

    __slots__ = ("ctx", "direction", "order", "coefficients")

    def __init__(self, ctx, direction, order, coefficients):
        if direction not in (AT_INFINITY, AT_ZERO):
            raise ExactError("bad direction %r" % direction)
        if len(coefficients) != order + 1:
            raise ExactError("coefficient count does not match order")
        self.ctx = ctx
        self.direction = direction
        self.order = order
        self.coefficients = list(coefficients)

    def coefficient(self, r: int) -> LaurentExpr:
        """Coefficient of z^{-r} (at_infinity) resp. z^{r} (at_zero)."""
        if r < 0 or r > self.order:
            raise ExactError("coefficient %d beyond truncation order" % r)
        return self.coefficients[r]

    def __eq__(self, other):
        return (
            isinstance(other, LaurentSeries)
            and self.direction == other.direction
            and self.order == other.order
            and self.coefficients == other.coefficients
        )

    def __repr__(self):
        return "LaurentSeries(%s, order=%d, %s)" % (
            self.direction,
            self.order,
            [str(c) for c in self.coefficients],
        )


def expand_series(f: LaurentExpr, direction: str, order: int) -> LaurentSeries:
    """Laurent expansion of f at z=infinity (powers z^{-r}) or z=0 (z^{r}).

    The denominator, read as a polynomial in z resp. z^{-1}, must have an
    invertible constant term; at infinity the numerator's z-degree must not
    exceed the denominator's (otherwise the expansion is not a pure
    z^{-r} series and NotExpandable is raised).
    """
    if order < 0:
        raise ExactError("order must be nonnegative")
    ctx = f.ctx
    numc, denc = f.z_coeffs()
    if not numc:
        return LaurentSeries(ctx, direction, order, [ctx.zero] * (order + 1))
    num_degs = sorted(numc)
    den_degs = sorted(denc)
    if direction == AT_ZERO:
        num_low, den_low = num_degs[0], den_degs[0]
        shift = min(num_low, den_low)
        # cancel z^shift so both sides are honest polynomials in z
        n_of = lambda r: numc.get(r + shift, ctx.zero)
        d_of = lambda r: denc.get(r + shift, ctx.zero)
        if d_of(0).is_zero:
            raise NotExpandable("denominator has no invertible constant term at z=0")
        dmax = den_degs[-1] - shift
    else:
        num_high, den_high = num_degs[-1], den_degs[-1]
        if num_high > den_high:
            raise NotExpandable("numerator z-degree exceeds denominator at z=infinity")
        shift = den_high
        n_of = lambda r: numc.get(shift - r, ctx.zero)
        d_of = lambda r: denc.get(shift - r, ctx.zero)
        dmax = shift - den_degs[0]
    lead = d_of(0)
    coeffs = []
    for r in range(order + 1):
        acc = n_of(r)
        for b in range(1, min(r, dmax) + 1):
            db = d_of(b)
            if not db.is_zero:
                acc = acc - db * coeffs[r - b]
        coeffs.append(acc / lead)
    return LaurentSeries(ctx, direction, order, coeffs)


def recomposition_residual(f: LaurentExpr, series: LaurentSeries) -> bool:
    """True iff (series * denominator - numerator) vanishes through the order.

    Independent check of expand_series: reconstitutes f from the truncated
    series and verifies agreement of the leading `order+1` coefficients.
    """
    ctx = f.ctx
    z = ctx.z
    if series.direction == AT_INFINITY:
        s = sum(
            (series.coefficients[r] * z ** (-r) for r in range(series.order + 1)),
            ctx.zero,
        )
    else:
        s = sum(
            (series.coefficients[r] * z ** r for r in range(series.order + 1)),
            ctx.zero,
        )
    diff = f - s
    if diff.is_zero:
        return True
    numc, denc = diff.z_coeffs()
    # diff must vanish to the stated order: every numerator z-degree must lie
    # strictly beyond it relative to the denominator's reference degree.
    if series.direction == AT_INFINITY:
        dref = max(denc)
        return all(dref - d > series.order for d in numc)
    dref = min(denc)
    return all(d - dref > series.order for d in numc)
