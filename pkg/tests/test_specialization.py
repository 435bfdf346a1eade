import random

import pytest

from laumonk.exact import LaurentContext
from laumonk.patterns import AffinePattern, enumerate_affine_total
from laumonk.specialization import (
    LevelWeight,
    RenormalizedAction,
    SpecializationError,
    WeightError,
    build_Vmu_block,
    closure_report,
    extend_weight,
    in_D_mu,
    specialize,
)
from laumonk.tangent import TangentOracle


def test_level_weight_validation():
    LevelWeight(3, 1, (1, 0, 0))
    with pytest.raises(WeightError):
        LevelWeight(3, 0, (0, 0, 0))  # the level must be positive
    with pytest.raises(WeightError):
        LevelWeight(3, 1, (0, 1, 0))  # not nonincreasing
    with pytest.raises(WeightError):
        LevelWeight(3, 1, (2, 0, 0))  # dominance mu_0 + K >= mu_{1-n}


def test_extend_weight_example():
    w = LevelWeight(2, 1, (1, 0))
    mut = extend_weight(w)
    assert mut(1) == 0 and mut(2) == -1
    assert mut(-1) == 1 and mut(0) == 0


def test_extend_weight_properties():
    rng = random.Random(9)
    for _ in range(6):
        n = rng.choice((2, 3, 4))
        K = rng.randint(1, 3)
        mu0 = rng.randint(-2, 2)
        rest = sorted((rng.randint(mu0, mu0 + K) for _ in range(n - 1)),
                      reverse=True)
        w = LevelWeight(n, K, tuple(rest) + (mu0,))
        mut = extend_weight(w)
        for i in range(-40, 40):
            assert mut(i) >= mut(i + 1)
            assert mut(i + n) == mut(i) - K
    w0 = LevelWeight(3, 2, (0, 0, 0))
    mut0 = extend_weight(w0)
    for i in range(-20, 20):
        assert mut0(i) == (-i // 3) * 2


def test_in_D_mu_basics():
    w = LevelWeight(3, 1, (0, 0, 0))
    assert in_D_mu(AffinePattern.empty(3), w)
    assert in_D_mu(AffinePattern.empty(3), w, brute_bound=12)


def test_in_D_mu_dual_mode_agreement():
    weights = [LevelWeight(3, 1, (0, 0, 0)), LevelWeight(3, 2, (1, 0, 0)),
               LevelWeight(3, 1, (1, 1, 0)), LevelWeight(3, 2, (2, 1, 0))]
    for w in weights:
        for total in range(4):
            for p in enumerate_affine_total(3, total):
                assert in_D_mu(p, w) == in_D_mu(p, w, brute_bound=9)


def test_in_D_mu_violator_at_l_equals_one():
    w = LevelWeight(3, 1, (0, 0, 0))
    mut = extend_weight(w)
    found = None
    for p in enumerate_affine_total(3, 3):
        for i in range(1, 4):
            for m in range(p.max_length()):
                j = i - m
                if p.d(i, j) and p.d(i, j) - mut(j) > \
                        p.d(i + 1, j + 1) - mut(j + 1):
                    found = p
                    break
    assert found is not None
    assert not in_D_mu(found, w)
    assert not in_D_mu(found, w, brute_bound=6)


def test_specialize_examples():
    w = LevelWeight(3, 1, (0, 0, 0))
    ctx = LaurentContext(3)
    mut = extend_weight(w)
    assert specialize(ctx.u * ctx.v ** (w.K + w.n), w) == ctx.one
    for j in (1, 2, 3):
        assert specialize(ctx.t[j - 1] ** 2, w) == \
            ctx.v ** (2 * mut(j) - 2 * j + 2)
    with pytest.raises(SpecializationError):
        specialize(1 / (1 - ctx.u * ctx.v ** (w.K + w.n)), w)


def test_renormalized_spectral_factors():
    # in the renormalized basis the e-spectral factor is (p v^i)^r and the
    # f-spectral factor (p v^{i+2})^r
    from laumonk.patterns import p_weight

    w = LevelWeight(3, 1, (0, 0, 0))
    ren = RenormalizedAction(w)
    T = ren.action
    ctx = ren.ctx
    pats = [AffinePattern.empty(3)] + enumerate_affine_total(3, 1)
    for p in pats:
        for node in (1, 2, 3):
            for tr in T.transitions("f", node, p):
                big = tr.target
                ratio = p_weight(ctx, big, node, tr.column) * \
                    ctx.v ** (node + 2)
                assert ren.symbolic_coefficient("f", p, node, tr.column, 1) \
                    == ren.symbolic_coefficient("f", p, node, tr.column, 0) \
                    * ratio
                small_ratio = p_weight(ctx, p, node, tr.column) * \
                    ctx.v ** node
                assert ren.symbolic_coefficient("e", big, node, tr.column, 1) \
                    == ren.symbolic_coefficient("e", big, node, tr.column, 0) \
                    * small_ratio


def test_conjugation_identity_two_routes():
    w = LevelWeight(3, 1, (0, 0, 0))
    ren = RenormalizedAction(w)
    oracle = TangentOracle(3)
    T = ren.action
    pats = ([AffinePattern.empty(3)] + enumerate_affine_total(3, 1)
            + enumerate_affine_total(3, 2))
    for p in pats:
        for node in (1, 2, 3):
            for kind in ("e", "f"):
                for tr in T.transitions(kind, node, p):
                    for r in (-1, 0, 1):
                        assert ren.symbolic_coefficient(
                            kind, p, node, tr.column, r) == \
                            tr.coeff(r) * oracle.c_norm(tr.target) \
                            / oracle.c_norm(p)


def test_factored_specialization_matches_generic():
    w = LevelWeight(3, 2, (1, 0, 0))
    ren = RenormalizedAction(w)
    T = ren.action
    for p in [AffinePattern.empty(3)] + enumerate_affine_total(3, 1):
        for node in (1, 2, 3):
            for kind in ("e", "f"):
                for tr in T.transitions(kind, node, p):
                    fc = ren.coefficient(kind, p, node, tr.column, 1)
                    sym = ren.symbolic_coefficient(kind, p, node, tr.column, 1)
                    if not fc.denominator_vanishes:
                        assert fc.value() == specialize(sym, w)


def test_closure_small_blocks():
    w = LevelWeight(3, 1, (0, 0, 0))
    block = build_Vmu_block(w, (0, 0, 0), window=1)
    assert block["basis_size"] == 1
    assert block["closure"]
    rep = closure_report(w, max_total=2, window=1)
    assert rep["closure"]


def test_closure_negative_control():
    w = LevelWeight(3, 1, (0, 0, 0))
    rep = closure_report(w, max_total=2, window=1,
                         u_exponent=-w.K - w.n + 1)
    assert not rep["closure"]
    assert any(b["violations_vanishing"] for b in rep["blocks"])


def test_dimension_growth_under_level_reported():
    # reported, not asserted as a theorem: larger level admits at least as
    # many patterns on the tested range
    sizes = {}
    for K in (1, 2):
        w = LevelWeight(3, K, (0, 0, 0))
        rep = closure_report(w, max_total=2, window=1)
        sizes[K] = [b["basis_size"] for b in rep["blocks"]]
    assert all(a <= b for a, b in zip(sizes[1], sizes[2]))
