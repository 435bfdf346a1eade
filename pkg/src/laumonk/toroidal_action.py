"""Toroidal operators on the affine module in the fixed-point basis.

Same coefficient shapes as the finite module with p-weights
p_{ij} = t_{(j mod n)}^2 v^{-2 d_{ij}} u^{2 ceil(j/n)}, except that the
products over columns are formally infinite and are DEFINED by their
telescoped finite values: below the support of the involved rows the
weights are row-independent and factor pairs cancel exactly.  Every
product accepts an explicit cutoff so cutoff-independence is testable.

Node conventions: operators live at node representatives 1..n; the node-0
family needed by the boundary relations is expressed through the shifted
node-n series x_n(z v^n u^2) / psi_n(z v^n u^2).  For the periodic-shift
invariant the formulas extend to arbitrary integer node index with
t_{k+n} = t_k v^n u^2 (the unique extension under which shifting the node
by -n multiplies the mode-r coefficient by exactly (v^n u^2)^{-r}).
"""

from __future__ import annotations

from collections import Counter

from .exact import AT_INFINITY, AT_ZERO, LaurentContext, LaurentExpr, expand_series
from .finite_action import ActionError, Transition
from .patterns import AffinePattern, p_weight


def _cancelled_ratio(one, num_factors, den_factors):
    """prod(num)/prod(den) with syntactically equal factors cancelled first.

    The telescoped products pair equal factors below the support; cancelling
    them by hashing keeps deep-cutoff recomputations cheap and exact."""
    num = Counter(num_factors)
    den = Counter(den_factors)
    common = num & den
    num -= common
    den -= common
    top = one
    for f, k in num.items():
        top = top * f ** k
    bot = one
    for f, k in den.items():
        bot = bot * f ** k
    return top / bot


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class ToroidalAction:
    """Operator calculus on affine patterns for a fixed rank n >= 3."""

    def __init__(self, n: int):
        if n < 3:
            raise ActionError("toroidal operators need n >= 3")
        self.n = n
        self.ctx = LaurentContext(n)
        self.hat_scale = self.ctx.v ** n * self.ctx.u ** 2
        self._transitions_cache = {}
        self._psi_cache = {}

    # -- weights and bookkeeping -------------------------------------------

    def p(self, pat: AffinePattern, i: int, j: int) -> LaurentExpr:
        return p_weight(self.ctx, pat, i, j)



    def _default_cutoff(self, pat: AffinePattern, rows, bound: int) -> int:
        """Largest admissible telescoping cutoff: below the involved rows'
        support and below every product bound (so no unpaired tail factor
        is dropped)."""
        return min(pat.support_min_col(rows) - 1, bound)

    # -- matrix coefficients -------------------------------------------------

    def f_base_coeff(self, src: AffinePattern, i: int, j: int, cutoff=None):
        """r=0 f-coefficient at node index i (any integer), column j <= i."""
        if src.bump(i, j, 1) is None:
            raise ActionError("invalid f-move at (%d, %d)" % (i, j))
        ctx = self.ctx
        v = ctx.v
        cut = self._default_cutoff(src, (i - 1, i), min(i - 1, j - 1))
        if cutoff is not None:
            if cutoff > cut:
                raise ActionError("cutoff must sit below the support")
            cut = cutoff
        pij = self.p(src, i, j)
        pref = (
            -(self.ctx.t_res(i) ** -1)
            * v ** (src.row_sum(i) - src.row_sum(i - 1) - 1 + i)
            * pij
        )
        num = [1 - pij / self.p(src, i - 1, k) for k in range(cut + 1, i)]
        den = [1 - v ** 2]
        den += [
            1 - pij / self.p(src, i, k)
            for k in range(cut + 1, i + 1)
            if k != j
        ]
        return pref * _cancelled_ratio(self.ctx.one, num, den)

    def e_base_coeff(self, src: AffinePattern, i: int, j: int, cutoff=None):
        """r=0 e-coefficient at node index i (any integer), column j <= i."""
        if src.bump(i, j, -1) is None:
            raise ActionError("invalid e-move at (%d, %d)" % (i, j))
        ctx = self.ctx
        v = ctx.v
        cut = self._default_cutoff(src, (i, i + 1), j - 1)
        if cutoff is not None:
            if cutoff > cut:
                raise ActionError("cutoff must sit below the support")
            cut = cutoff
        pij = self.p(src, i, j)
        pref = self.ctx.t_res(i + 1) ** -1 * v ** (
            src.row_sum(i + 1) - src.row_sum(i) + 1 - i
        )
        num = [1 - self.p(src, i + 1, k) / pij for k in range(cut + 1, i + 2)]
        den = [1 - v ** 2]
        den += [
            1 - self.p(src, i, k) / pij
            for k in range(cut + 1, i + 1)
            if k != j
        ]
        return pref * _cancelled_ratio(self.ctx.one, num, den)

    def f_beta(self, src: AffinePattern, i: int, j: int) -> LaurentExpr:
        return self.p(src, i, j) * self.ctx.v ** i

    def e_beta(self, src: AffinePattern, i: int, j: int) -> LaurentExpr:
        return self.p(src, i, j) * self.ctx.v ** (i + 2)

    def f_mode_coeff(self, src, i, j, r, cutoff=None):
        return self.f_base_coeff(src, i, j, cutoff) * self.f_beta(src, i, j) ** r

    def e_mode_coeff(self, src, i, j, r, cutoff=None):
        return self.e_base_coeff(src, i, j, cutoff) * self.e_beta(src, i, j) ** r

    def transitions(self, kind: str, node: int, src: AffinePattern):
        """Single-box transitions at a node representative in 1..n."""
        if not (1 <= node <= self.n):
            raise ActionError("node representative out of range")
        key = (kind, node, src)
        hit = self._transitions_cache.get(key)
        if hit is not None:
            return hit
        out = []
        direction = 1 if kind == "f" else -1
        for m in range(src.max_length() + 1):
            j = node - m
            tgt = src.bump(node, j, direction)
            if tgt is None:
                continue
            if kind == "f":
                out.append(
                    Transition(j, tgt, self.f_base_coeff(src, node, j),
                               self.f_beta(src, node, j))
                )
            else:
                out.append(
                    Transition(j, tgt, self.e_base_coeff(src, node, j),
                               self.e_beta(src, node, j))
                )
        self._transitions_cache[key] = out
        return out

    # -- diagonal series -----------------------------------------------------

    def psi_eigenvalue(self, p: AffinePattern, i: int, cutoff=None) -> LaurentExpr:
        """Telescoped psi eigenvalue at node representative i in 1..n."""
        if not (1 <= i <= self.n):
            raise ActionError("node representative out of range")
        key = (p, i)
        if cutoff is None:
            hit = self._psi_cache.get(key)
            if hit is not None:
                return hit
        ctx = self.ctx
        v, z = ctx.v, ctx.z
        cut = self._default_cutoff(p, (i - 1, i, i + 1), i - 1)
        if cutoff is not None:
            if cutoff > cut:
                raise ActionError("cutoff must sit below the support")
            cut = cutoff
        # the u^2 scalar is forced by the commutator relation: an
        # f-coefficient carries the line-bundle weight p_{ij} (u^2 on the
        # principal column window) while e-coefficients carry only ratios
        pref = ctx.u ** 2 * ctx.t_res(i + 1) ** -1 * ctx.t_res(i) * v ** (
            p.row_sum(i + 1) - 2 * p.row_sum(i) + p.row_sum(i - 1) - 1
        )
        num = [
            1 - z ** -1 * v ** (i + 2) * self.p(p, i + 1, j)
            for j in range(cut + 1, i + 2)
        ]
        num += [
            1 - z ** -1 * v ** i * self.p(p, i - 1, j) for j in range(cut + 1, i)
        ]
        den = []
        for j in range(cut + 1, i + 1):
            pij = self.p(p, i, j)
            den.append(1 - z ** -1 * v ** (i + 2) * pij)
            den.append(1 - z ** -1 * v ** i * pij)
        out = pref * _cancelled_ratio(ctx.one, num, den)
        if cutoff is None:
            self._psi_cache[key] = out
        return out

    def psi_hat_eigenvalue(self, p: AffinePattern) -> LaurentExpr:
        """Node-0 series: psi_n evaluated at z v^n u^2."""
        return self.psi_eigenvalue(p, self.n).scale_z(self.hat_scale)

    def psi_mode(self, p: AffinePattern, i: int, m: int, sign: str) -> LaurentExpr:
        if sign not in ("+", "-"):
            raise ActionError("sign must be '+' or '-'")
        if (sign == "+" and m < 0) or (sign == "-" and m > 0):
            return self.ctx.zero
        psi = self.psi_eigenvalue(p, i)
        if sign == "+":
            return expand_series(psi, AT_INFINITY, m).coefficient(m)
        return expand_series(psi, AT_ZERO, -m).coefficient(-m)

    def b_quotient_eigenvalue(
        self, p: AffinePattern, m: int, i: int, scale: LaurentExpr, cutoff=None
    ) -> LaurentExpr:
        """Telescoped eigenvalue of the quotient series for rows m <= i at z*scale."""
        if m > i:
            raise ActionError("need m <= i")
        if m == i:
            return self.ctx.one
        ctx = self.ctx
        zs = ctx.z * scale
        cut = self._default_cutoff(p, (m, i), m)
        if cutoff is not None:
            if cutoff > cut:
                raise ActionError("cutoff must sit below the support")
            cut = cutoff
        num = [1 - zs ** -1 * self.p(p, i, j) for j in range(cut + 1, i + 1)]
        den = [1 - zs ** -1 * self.p(p, m, j) for j in range(cut + 1, m + 1)]
        return _cancelled_ratio(ctx.one, num, den)

    def psi_via_quotients(self, p: AffinePattern, i: int, m: int) -> LaurentExpr:
        """psi eigenvalue assembled from the four m-relative quotient series."""
        if m >= i:
            raise ActionError("need m < i")
        ctx = self.ctx
        v = ctx.v
        pref = ctx.u ** 2 * ctx.t_res(i + 1) ** -1 * ctx.t_res(i) * v ** (
            p.row_sum(i + 1) - 2 * p.row_sum(i) + p.row_sum(i - 1) - 1
        )
        return (
            pref
            / self.b_quotient_eigenvalue(p, m, i, v ** (-i - 2))
            / self.b_quotient_eigenvalue(p, m, i, v ** -i)
            * self.b_quotient_eigenvalue(p, m, i - 1, v ** -i)
            * self.b_quotient_eigenvalue(p, m, i + 1, v ** (-i - 2))
        )

    # -- hat shift and node translation ---------------------------------------

    def hat_mode_factor(self, r: int) -> LaurentExpr:
        """Factor (v^n u^2)^{-r} turning a node-n mode into its shifted version."""
        return self.hat_scale ** (-r)

    def node_shift_coeff(self, kind: str, src: AffinePattern, node: int,
                         j: int, r: int) -> LaurentExpr:
        """Mode-r coefficient with the formulas extended to any integer node.

        The implicit t-prefactor is extended per kind so that shifting the
        node by -n multiplies the coefficient by exactly (v^n u^2)^{-r}:
        t_{m+n} = t_m v^n u^2 for the f-prefactor t_k, t_{m+n} = t_m v^{-n}
        for the e-prefactor t_{k+1}.  (No single extension serves both, and
        the e-extension deliberately anchors to nodes 1..n-1: it is the
        beta-shift and product reindexing that the boundary relations use.)
        """
        if kind == "f":
            ext = self.hat_scale ** -(_ceil_div(node, self.n) - 1)
            return (
                ext
                * self.f_base_coeff(src, node, j)
                * self.f_beta(src, node, j) ** r
            )
        if kind == "e":
            ext = self.ctx.v ** (self.n * (_ceil_div(node + 1, self.n) - 1))
            return (
                ext
                * self.e_base_coeff(src, node, j)
                * self.e_beta(src, node, j) ** r
            )
        raise ActionError("kind must be e or f")

    # -- Chevalley generators ---------------------------------------------------

    def chevalley_k(self, p: AffinePattern, i: int) -> LaurentExpr:
        """Cartan eigenvalue at node i in 0..n-1 (with the u-twist at i=0)."""
        if not (0 <= i <= self.n - 1):
            raise ActionError("Chevalley node out of range 0..n-1")
        ctx = self.ctx
        out = ctx.t_res(i + 1) ** -1 * ctx.t_res(i) * ctx.v ** (
            -2 * p.row_sum(i) + p.row_sum(i - 1) + p.row_sum(i + 1) - 1
        )
        if i == 0:
            out = out * ctx.u ** -1
        return out

    def chevalley_transitions(self, p: AffinePattern, i: int, kind: str):
        """Zero-mode raising/lowering coefficients at node i in 0..n-1.

        Nodes 1..n-1 are the plain r=0 modes; node 0 reuses the node-n
        correspondence: the bare push-pull operator is identical, and the
        node-0 line bundle weight differs from the node-n one by u^{-2}
        (twist by the degree-shift divisor), so the i=0 prefactors apply
        to the same geometric data.
        """
        if not (0 <= i <= self.n - 1):
            raise ActionError("Chevalley node out of range 0..n-1")
        if i != 0:
            return [(tr.target, tr.base) for tr in self.transitions(kind, i, p)]
        ctx = self.ctx
        n = self.n
        v, u = ctx.v, ctx.u
        out = []
        d0 = p.row_sum(n)
        dm1 = p.row_sum(n - 1)
        d1 = p.row_sum(n + 1)
        if kind == "e":
            pref_n = ctx.t_res(n + 1) ** -1 * v ** (d1 - d0 + 1 - n)
            pref_0 = ctx.t_res(1) ** -1 * v ** (d1 - d0 + 1)
            for tr in self.transitions("e", n, p):
                out.append((tr.target, tr.base / pref_n * pref_0))
            return out
        pref_n = -(ctx.t_res(n) ** -1) * v ** (d0 - dm1 - 1 + n)
        pref_0 = -(ctx.t_res(n) ** -1) * u * v ** (d0 - dm1 - 1)
        for tr in self.transitions("f", n, p):
            # bare f-coefficient carries the line-bundle weight; retwist by u^{-2}
            out.append((tr.target, tr.base / pref_n * u ** -2 * pref_0))
        return out

    def chevalley_node0_ratios(self, p: AffinePattern):
        """Empirical ratios (e, f, k) of node-0 Chevalley ops to hat-shifted
        node-n zero modes, reported per transition; constant across moves."""
        ratios = {"e": set(), "f": set(), "k": set()}
        for kind in ("e", "f"):
            plain = {
                tr.target: tr.base for tr in self.transitions(kind, self.n, p)
            }
            for tgt, coeff in self.chevalley_transitions(p, 0, kind):
                ratios[kind].add((coeff / plain[tgt]).to_string())
        psi0 = expand_series(
            self.psi_hat_eigenvalue(p), AT_INFINITY, 0
        ).coefficient(0)
        ratios["k"].add((self.chevalley_k(p, 0) / psi0).to_string())
        return {k: sorted(v) for k, v in ratios.items()}
