import pytest

from laumonk.exact import AT_INFINITY, expand_series
from laumonk.finite_action import ActionError
from laumonk.patterns import AffinePattern, enumerate_affine_total
from laumonk.toroidal_action import ToroidalAction


@pytest.fixture(scope="module")
def T():
    return ToroidalAction(3)


@pytest.fixture(scope="module")
def pats():
    return ([AffinePattern.empty(3)] + enumerate_affine_total(3, 1)
            + enumerate_affine_total(3, 2))


def test_rank_two_rejected():
    with pytest.raises(ActionError):
        ToroidalAction(2)


def test_below_support_cancellation(T, pats):
    # factor pairs below the support contribute exactly 1: pushing the
    # cutoff deeper never changes a coefficient
    for p in pats:
        for i in (1, 2, 3):
            for tr in T.transitions("f", i, p):
                c0 = min(p.support_min_col((i - 1, i)) - 1, i - 1,
                         tr.column - 1)
                for extra in (1, 4, 9):
                    assert T.f_base_coeff(p, i, tr.column, cutoff=c0 - extra) \
                        == tr.base
            for tr in T.transitions("e", i, p):
                c0 = min(p.support_min_col((i, i + 1)) - 1, tr.column - 1)
                for extra in (1, 4, 9):
                    assert T.e_base_coeff(p, i, tr.column, cutoff=c0 - extra) \
                        == tr.base


def test_psi_cutoff_independence(T, pats):
    for p in pats:
        for i in (1, 2, 3):
            base = T.psi_eigenvalue(p, i)
            c0 = min(p.support_min_col((i - 1, i, i + 1)) - 1, i - 1)
            for extra in (1, 3, 8):
                assert T.psi_eigenvalue(p, i, cutoff=c0 - extra) == base


def test_psi_empty_pattern_closed_form(T):
    # telescoped value at the empty pattern, with the u^2 normalization the
    # commutator relation forces
    ctx = T.ctx
    v, u, z = ctx.v, ctx.u, ctx.z
    em = AffinePattern.empty(3)
    for i in (1, 2):
        want = u ** 2 * ctx.t[i] ** -1 * ctx.t[i - 1] * v ** -1 \
            * (1 - z ** -1 * v ** (i + 2) * ctx.t[i] ** 2 * u ** 2) \
            / (1 - z ** -1 * v ** i * ctx.t[i - 1] ** 2 * u ** 2)
        assert T.psi_eigenvalue(em, i) == want


def test_psi_zero_mode_monomial(T, pats):
    ctx = T.ctx
    for p in pats:
        for i in (1, 2, 3):
            zm = expand_series(T.psi_eigenvalue(p, i), AT_INFINITY,
                               0).coefficient(0)
            want = ctx.u ** 2 * ctx.t_res(i + 1) ** -1 * ctx.t_res(i) \
                * ctx.v ** (p.row_sum(i + 1) - 2 * p.row_sum(i)
                            + p.row_sum(i - 1) - 1)
            assert zm == want


def test_quotient_route_and_cutoff_row_independence(T, pats):
    for p in pats[:8]:
        for i in (2, 3):
            base = T.psi_via_quotients(p, i, i - 1)
            for m in (i - 4, i - 3, i - 2):
                assert T.psi_via_quotients(p, i, m) == base
            assert base == T.psi_eigenvalue(p, i)


def test_periodic_shift_invariant(T, pats):
    hat = T.hat_scale
    for p in pats:
        for node in (1, 2, 3):
            for kind in ("e", "f"):
                for tr in T.transitions(kind, node, p):
                    for r in (-2, -1, 0, 1, 2):
                        lhs = T.node_shift_coeff(kind, p, node - 3,
                                                 tr.column - 3, r)
                        rhs = T.node_shift_coeff(kind, p, node, tr.column,
                                                 r) * hat ** (-r)
                        assert lhs == rhs


def test_hat_mode_factor(T):
    assert T.hat_mode_factor(0).is_one
    assert T.hat_mode_factor(1) == T.ctx.v ** -3 * T.ctx.u ** -2
    assert T.hat_mode_factor(-1) == T.ctx.v ** 3 * T.ctx.u ** 2


def test_psi_hat_is_scaled_node_n(T, pats):
    for p in pats[:6]:
        assert T.psi_hat_eigenvalue(p) == \
            T.psi_eigenvalue(p, 3).scale_z(T.hat_scale)


def test_coefficients_are_products_of_nonzero_factors(T, pats):
    # denominators of the telescoped coefficients never vanish identically
    for p in pats:
        for node in (1, 2, 3):
            for kind in ("e", "f"):
                for tr in T.transitions(kind, node, p):
                    assert not tr.base.is_zero


def test_chevalley_cartan(T):
    ctx = T.ctx
    t1, t2, t3 = ctx.t
    v, u = ctx.v, ctx.u
    em = AffinePattern.empty(3)
    assert T.chevalley_k(em, 1) == t2 ** -1 * t1 * v ** -1
    assert T.chevalley_k(em, 2) == t3 ** -1 * t2 * v ** -1
    assert T.chevalley_k(em, 0) == t1 ** -1 * t3 * u ** -1 * v ** -1


def test_chevalley_matches_zero_modes_inside(T, pats):
    for p in pats[:8]:
        for i in (1, 2):
            for kind in ("e", "f"):
                got = T.chevalley_transitions(p, i, kind)
                want = [(tr.target, tr.base)
                        for tr in T.transitions(kind, i, p)]
                assert got == want


def test_chevalley_node0_ratios_constant(T, pats):
    # the scalars relating node-0 Chevalley operators to the shifted node-n
    # zero modes are reported, not asserted; they must not depend on the
    # pattern or the move
    seen = {"e": set(), "f": set(), "k": set()}
    for p in pats:
        ratios = T.chevalley_node0_ratios(p)
        for key in seen:
            seen[key].update(ratios[key])
    assert len(seen["f"]) == 1
    assert len(seen["k"]) == 1
    assert len(seen["e"]) <= 1  # e-moves at node n need deep enough patterns
