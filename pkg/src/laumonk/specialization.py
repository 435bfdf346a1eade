"""Integrable-module construction: the pattern subset D(mu), the
specialization u = v^{-K-n}, t_j = v^{mu~_j - j + 1}, renormalized matrix
coefficients, and closure verification.

Renormalized coefficients are handled in factored form (monomial prefactor
times (1 - monomial) factors), and the specialization is applied factor by
factor on the unreduced data, so a vanishing numerator factor is detected
before any cancellation could mask it and a vanishing denominator factor is
reported with the offending exponent.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact import LaurentContext, LaurentExpr
from .finite_action import ActionError
from .patterns import AffinePattern, enumerate_affine
from .toroidal_action import ToroidalAction


class WeightError(ValueError):
    pass


class SpecializationError(ValueError):
    pass


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class LevelWeight:
    """Dominant level-K weight given on the index window {1-n, .., 0}."""

    n: int
    K: int
    mu: tuple

    def __post_init__(self):
        if self.n < 2:
            raise WeightError("need n >= 2")
        if self.K < 1:
            raise WeightError("the level must be a positive integer")
        if len(self.mu) != self.n:
            raise WeightError("mu must have n entries (indices 1-n .. 0)")
        seq = list(self.mu)
        for a, b in zip(seq, seq[1:]):
            if a < b:
                raise WeightError("mu must be nonincreasing")
        if seq[-1] + self.K < seq[0]:
            raise WeightError("dominance needs mu_0 + K >= mu_{1-n}")

    def mu_at(self, i: int) -> int:
        """mu_{i} for i in the window {1-n, .., 0}."""
        if not (1 - self.n <= i <= 0):
            raise WeightError("index outside the mu window")
        return self.mu[i - (1 - self.n)]


class ExtendedWeight:
    """Nonincreasing extension mu~_i = mu_{i mod n} + floor(-i/n) K."""

    def __init__(self, w: LevelWeight):
        self.w = w

    def __call__(self, i: int) -> int:
        n = self.w.n
        rep = (i - (1 - n)) % n + (1 - n)
        return self.w.mu_at(rep) + _floor_div(-i, n) * self.w.K


def extend_weight(w: LevelWeight) -> ExtendedWeight:
    return ExtendedWeight(w)


def in_D_mu(p: AffinePattern, w: LevelWeight, brute_bound: int = None) -> bool:
    """Membership in the pattern subset surviving the specialization.

    Checks d_{ij} - mu~_j <= d_{i+l,j+l} - mu~_{j+l} for all j <= i, l >= 0.
    The default mode uses the finite reduction: cells with d_{ij} = 0 hold by
    monotonicity of mu~, and the condition for l >= n follows from l - n by
    periodicity (the step adds +K >= 0), so l in 1..n-1 on charged cells
    suffices.  With brute_bound set, all l up to the bound are checked on a
    window of cells including uncharged ones (cross-validation mode).
    """
    if p.n != w.n:
        raise WeightError("pattern and weight rank differ")
    n = p.n
    mut = extend_weight(w)
    if brute_bound is None:
        for i in range(1, n + 1):
            for m in range(p.max_length()):
                j = i - m
                dij = p.d(i, j)
                if dij == 0:
                    continue
                for l in range(1, n):
                    if dij - mut(j) > p.d(i + l, j + l) - mut(j + l):
                        return False
        return True
    lo_extra = n + 2
    for i in range(1, n + 1):
        lo = i - p.max_length() - lo_extra
        for j in range(lo, i + 1):
            for l in range(0, brute_bound + 1):
                if p.d(i, j) - mut(j) > p.d(i + l, j + l) - mut(j + l):
                    return False
    return True


class SpecializationMap:
    """Exponent map of the one-variable specialization.

    Sends t_j to v^{mu~_j - j + 1} (j = 1..n) and u to v^{u_exponent}
    (default -K-n); everything lands in exact Laurent rationals in v.
    The u-exponent is overridable to drive the negative control.
    """

    def __init__(self, w: LevelWeight, u_exponent: int = None):
        self.w = w
        self.n = w.n
        mut = extend_weight(w)
        self.t_exponents = tuple(mut(j) - j + 1 for j in range(1, w.n + 1))
        self.u_exponent = -w.K - w.n if u_exponent is None else u_exponent
        self.ctx = LaurentContext(w.n)

    def monomial_exponent(self, mono: LaurentExpr) -> int:
        """v-exponent of the specialized monomial."""
        num = mono.numerator_terms()
        den = mono.denominator_terms()
        if len(num) != 1 or len(den) != 1:
            raise SpecializationError("not a monomial")
        (nexp, ncoeff), (dexp, dcoeff) = num[0], den[0]
        if abs(ncoeff) != 1 or abs(dcoeff) != 1:
            raise SpecializationError("not a unit-coefficient monomial")
        out = 0
        for var_index, e in enumerate(tuple(a - b for a, b in zip(nexp, dexp))):
            if e == 0:
                continue
            name = self.ctx.var_names[var_index]
            if name.startswith("t"):
                out += e * self.t_exponents[int(name[1:]) - 1]
            elif name == "u":
                out += e * self.u_exponent
            elif name == "v":
                out += e
            else:
                raise SpecializationError("monomial involves %s" % name)
        return out

    def _specialize_poly_terms(self, terms):
        out = self.ctx.zero
        v = self.ctx.v
        for exps, coeff in terms:
            e = 0
            for var_index, power in enumerate(exps):
                if not power:
                    continue
                name = self.ctx.var_names[var_index]
                if name.startswith("t"):
                    e += power * self.t_exponents[int(name[1:]) - 1]
                elif name == "u":
                    e += power * self.u_exponent
                elif name == "v":
                    e += power
                else:
                    raise SpecializationError("expression involves %s" % name)
            out = out + self.ctx.rational(coeff) * v ** e
        return out


@dataclass
class SpecializedExpr:
    """Univariate Laurent rational value of a specialized expression."""

    expr: LaurentExpr

    def __eq__(self, other):
        if isinstance(other, SpecializedExpr):
            return self.expr == other.expr
        return self.expr == other

    @property
    def is_zero(self):
        return self.expr.is_zero

    def to_string(self):
        return self.expr.to_string()


def specialize(x: LaurentExpr, w: LevelWeight,
               u_exponent: int = None) -> SpecializedExpr:
    """Exact substitution on the (unreduced) numerator/denominator pair."""
    smap = SpecializationMap(w, u_exponent)
    num = smap._specialize_poly_terms(x.numerator_terms())
    den = smap._specialize_poly_terms(x.denominator_terms())
    if den.is_zero:
        raise SpecializationError("denominator specializes to zero")
    return SpecializedExpr(num / den)


@dataclass
class FactoredCoefficient:
    """A renormalized matrix coefficient after specialization.

    sign * v^{v_power} * prod_f (1 - v^e_f) / prod_g (1 - v^e_g); a zero
    exponent upstairs means the coefficient vanishes, downstairs that it is
    ill-defined.
    """

    smap: SpecializationMap
    sign: int
    v_power: int
    num_exponents: tuple
    den_exponents: tuple

    @property
    def numerator_vanishes(self) -> bool:
        return any(e == 0 for e in self.num_exponents)

    @property
    def denominator_vanishes(self) -> bool:
        return any(e == 0 for e in self.den_exponents)

    def value(self) -> SpecializedExpr:
        if self.denominator_vanishes:
            raise SpecializationError(
                "denominator factor specializes to zero: exponents %s"
                % (self.den_exponents,)
            )
        ctx = self.smap.ctx
        v = ctx.v
        out = ctx.rational(self.sign) * v ** self.v_power
        for e in self.num_exponents:
            out = out * (1 - v ** e)
        for e in self.den_exponents:
            out = out / (1 - v ** e)
        return SpecializedExpr(out)


class RenormalizedAction:
    """Matrix coefficients in the renormalized fixed-point basis, factored.

    In this basis the raising/lowering coefficients swap product shapes:
    the e-coefficient of the transition that removes the box at (i, j)
    reads off the smaller pattern with lowering-type products and spectral
    factor (p_{ij} v^i)^r; the f-coefficient of the box-adding transition
    reads off the larger pattern with raising-type products and spectral
    factor (p_{ij} v^{i+2})^r.
    """

    def __init__(self, w: LevelWeight, u_exponent: int = None):
        if w.n < 3:
            raise ActionError("the affine action needs n >= 3")
        self.w = w
        self.smap = SpecializationMap(w, u_exponent)
        self.action = ToroidalAction(w.n)
        self.ctx = self.action.ctx

    def _pw(self, p, i, j):
        from .patterns import p_weight

        return p_weight(self.ctx, p, i, j)

    def coefficient(self, kind: str, src: AffinePattern, i: int, j: int,
                    r: int) -> FactoredCoefficient:
        """Factored specialized coefficient of the transition from src
        moving the box at cell (i, j) (up for f, down for e)."""
        n = self.w.n
        smap = self.smap
        if kind == "f":
            big = src.bump(i, j, 1)
            if big is None:
                raise ActionError("invalid f-move")
            read = big
            pij = self._pw(read, i, j)
            sign = -1
            v_power = (
                read.row_sum(i) - read.row_sum(i - 1) - 2 + i
                + smap.monomial_exponent(pij) + 2
                + r * (smap.monomial_exponent(pij) + i + 2)
                - smap.t_exponents[(i - 1) % n]
            )
            num, den = [], [2]  # the (1 - v^2) factor
            cut = min(read.support_min_col((i, i + 1)) - 1, j - 1)
            for k in range(cut + 1, i + 2):
                num.append(
                    smap.monomial_exponent(self._pw(read, i + 1, k) / pij)
                )
            for k in range(cut + 1, i + 1):
                if k != j:
                    den.append(
                        smap.monomial_exponent(self._pw(read, i, k) / pij)
                    )
        elif kind == "e":
            small = src.bump(i, j, -1)
            if small is None:
                raise ActionError("invalid e-move")
            read = small
            pij = self._pw(read, i, j)
            sign = 1
            v_power = (
                read.row_sum(i + 1) - read.row_sum(i) - i
                + r * (smap.monomial_exponent(pij) + i)
                - smap.t_exponents[i % n]
            )
            num, den = [], [2]
            cut = min(read.support_min_col((i - 1, i)) - 1, i - 1, j - 1)
            for k in range(cut + 1, i):
                num.append(
                    smap.monomial_exponent(pij / self._pw(read, i - 1, k))
                )
            for k in range(cut + 1, i + 1):
                if k != j:
                    den.append(
                        smap.monomial_exponent(pij / self._pw(read, i, k))
                    )
        else:
            raise ActionError("kind must be e or f")
        return FactoredCoefficient(smap, sign, v_power, tuple(num), tuple(den))

    def symbolic_coefficient(self, kind: str, src: AffinePattern, i: int,
                             j: int, r: int) -> LaurentExpr:
        """The same renormalized coefficient before specialization."""
        ctx = self.ctx
        v = ctx.v
        n = self.w.n
        if kind == "f":
            read = src.bump(i, j, 1)
            pij = self._pw(read, i, j)
            out = (
                -(ctx.t_res(i) ** -1)
                * v ** (read.row_sum(i) - read.row_sum(i - 1) - 2 + i)
                * pij * v ** 2
                * (pij * v ** (i + 2)) ** r
                / (1 - v ** 2)
            )
            cut = min(read.support_min_col((i, i + 1)) - 1, j - 1)
            for k in range(cut + 1, i + 2):
                out = out * (1 - self._pw(read, i + 1, k) / pij)
            for k in range(cut + 1, i + 1):
                if k != j:
                    out = out / (1 - self._pw(read, i, k) / pij)
            return out
        read = src.bump(i, j, -1)
        pij = self._pw(read, i, j)
        out = (
            ctx.t_res(i + 1) ** -1
            * v ** (read.row_sum(i + 1) - read.row_sum(i) - i)
            * (pij * v ** i) ** r
            / (1 - v ** 2)
        )
        cut = min(read.support_min_col((i - 1, i)) - 1, i - 1, j - 1)
        for k in range(cut + 1, i):
            out = out * (1 - pij / self._pw(read, i - 1, k))
        for k in range(cut + 1, i + 1):
            if k != j:
                out = out / (1 - pij / self._pw(read, i, k))
        return out


def build_Vmu_block(w: LevelWeight, deg, window: int = 2,
                    u_exponent: int = None) -> dict:
    """Basis and closure data of one graded block of the candidate module.

    Returns the D(mu)-basis of the degree block, the specialized matrices of
    all raising/lowering modes in the window, and the closure report: (a)
    transitions staying inside D(mu) have nonvanishing denominators (well
    defined values), (b) transitions leaving D(mu) have vanishing numerators.
    Violations are collected, not thrown.
    """
    n = w.n
    ren = RenormalizedAction(w, u_exponent)
    patterns = enumerate_affine(n, deg)
    basis = [p for p in patterns if in_D_mu(p, w)]
    matrices = []
    violations_a = []
    violations_b = []
    inside = boundary = 0
    for p in basis:
        for kind, direction in (("f", 1), ("e", -1)):
            for node in range(1, n + 1):
                for m in range(p.max_length() + 1):
                    j = node - m
                    tgt = p.bump(node, j, direction)
                    if tgt is None:
                        continue
                    coeff = ren.coefficient(kind, p, node, j, 0)
                    member = in_D_mu(tgt, w)
                    if member:
                        inside += 1
                        if coeff.denominator_vanishes:
                            violations_a.append(
                                {"kind": kind, "source": p.to_json(),
                                 "target": tgt.to_json(), "node": node,
                                 "column": j})
                        else:
                            for r in range(-window, window + 1):
                                matrices.append({
                                    "kind": kind, "mode": r, "node": node,
                                    "source": p.to_json(),
                                    "target": tgt.to_json(),
                                    "value": ren.coefficient(
                                        kind, p, node, j, r).value().to_string(),
                                })
                    else:
                        boundary += 1
                        if not coeff.numerator_vanishes:
                            violations_b.append(
                                {"kind": kind, "source": p.to_json(),
                                 "target": tgt.to_json(), "node": node,
                                 "column": j})
    return {
        "degree": list(deg),
        "basis_size": len(basis),
        "basis": [p.to_json() for p in basis],
        "inside_transitions": inside,
        "boundary_transitions": boundary,
        "violations_nonvanishing": violations_a,
        "violations_vanishing": violations_b,
        "closure": not violations_a and not violations_b,
        "matrices": matrices,
    }


def closure_report(w: LevelWeight, max_total: int = 2, window: int = 2,
                   u_exponent: int = None) -> dict:
    """Closure status over all degree blocks with total box count <= bound."""
    from .patterns import enumerate_affine_total

    n = w.n
    degrees = sorted(
        {p.degree() for total in range(max_total + 1)
         for p in enumerate_affine_total(n, total)}
    )
    blocks = []
    for deg in degrees:
        block = build_Vmu_block(w, deg, window, u_exponent)
        block.pop("matrices")
        block.pop("basis")
        blocks.append(block)
    return {
        "n": n,
        "level": w.K,
        "mu": list(w.mu),
        "u_exponent": -w.K - w.n if u_exponent is None else u_exponent,
        "max_total_degree": max_total,
        "window": window,
        "blocks": blocks,
        "closure": all(b["closure"] for b in blocks),
    }
