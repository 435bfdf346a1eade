import itertools
import json

import pytest

from laumonk.exact import LaurentContext
from laumonk.patterns import (
    AffinePattern,
    FinitePattern,
    LambdaGrid,
    PatternError,
    enumerate_affine,
    enumerate_affine_total,
    enumerate_finite,
    from_lambda_grid,
    neighbors,
    p_weight,
    s_weight,
    to_lambda_grid,
)


def brute_force_finite(n, deg):
    """Independent enumeration oracle over the bounded grid 0 <= d_ij <= d_i."""
    cells = [(i, j) for i in range(1, n) for j in range(1, i + 1)]
    ranges = [range(deg[i - 1] + 1) for i, _ in cells]
    out = []
    for combo in itertools.product(*ranges):
        d = {cell: val for cell, val in zip(cells, combo)}
        if any(sum(d[(i, j)] for j in range(1, i + 1)) != deg[i - 1]
               for i in range(1, n)):
            continue
        ok = True
        for (i, j) in cells:
            if i > j and d[(i, j)] > d[(i - 1, j)]:
                ok = False
                break
        if not ok:
            continue
        out.append(FinitePattern(n, [[d[(i, j)] for j in range(1, i + 1)]
                                     for i in range(1, n)]))
    out.sort(key=FinitePattern.sort_key)
    return out


def test_enumerate_finite_against_oracle():
    for n, deg in [(3, (0, 0)), (3, (1, 1)), (3, (2, 1)), (2, (3,)),
                   (4, (1, 1, 1)), (3, (0, 2))]:
        assert enumerate_finite(n, deg) == brute_force_finite(n, deg)


def test_enumerate_finite_examples():
    assert [p.rows for p in enumerate_finite(3, (0, 0))] == [((0,), (0, 0))]
    two = enumerate_finite(3, (1, 1))
    assert [p.rows for p in two] == [((1,), (0, 1)), ((1,), (1, 0))]
    assert len(enumerate_finite(2, (3,))) == 1
    # the n=2 block is a singleton for every degree
    for d in range(7):
        assert len(enumerate_finite(2, (d,))) == 1


def test_finite_invariants_enforced():
    with pytest.raises(PatternError):
        FinitePattern(3, [[0], [1, 0]])  # column increases downwards
    with pytest.raises(PatternError):
        FinitePattern(3, [[-1], [0, 0]])


def test_affine_enumeration_and_count_identity():
    assert [p.lambdas for p in enumerate_affine(2, (0, 0))] == [((), ())]
    assert len(enumerate_affine_total(2, 1)) == 2
    # number of n-tuples of partitions of total size m: the coefficient of
    # q^m in prod (1-q^k)^{-n}, computed here by independent convolution
    for n in (2, 3):
        coeffs = [1] + [0] * 6
        for k in range(1, 7):
            for _ in range(n):
                for m in range(k, 7):
                    coeffs[m] += coeffs[m - k]
        for m in range(5):
            assert len(enumerate_affine_total(n, m)) == coeffs[m]


def test_affine_degree_convention():
    p = AffinePattern(2, [(1,), ()])
    assert p.degree() == (0, 1)
    q = AffinePattern(2, [(), (1,)])
    assert q.degree() == (1, 0)
    assert p.d(1, 1) == 1 and p.d(3, 3) == 1 and p.d(2, 1) == 0
    # periodicity of the encoded collection
    big = AffinePattern(3, [(3, 1), (2,), (1, 1, 1)])
    for i in range(-3, 6):
        for j in range(i - 5, i + 1):
            assert big.d(i, j) == big.d(i + 3, j + 3)


def test_lambda_grid_roundtrip():
    assert to_lambda_grid(AffinePattern(2, [(), ()])).grid == (((), ()),
                                                               ((), ()))
    p = AffinePattern(2, [(1,), ()])
    g = to_lambda_grid(p)
    assert g.grid == (((1,), ()), ((), ()))
    assert from_lambda_grid(g) == p
    for pat in enumerate_affine_total(3, 3) + enumerate_affine_total(2, 4):
        assert from_lambda_grid(to_lambda_grid(pat)) == pat


def test_lambda_grid_chain_violation():
    with pytest.raises(PatternError):
        LambdaGrid(2, [[(), ()], [(1,), ()]])


def test_weights():
    ctx3 = LaurentContext(3)
    z3 = FinitePattern.zero(3)
    assert s_weight(ctx3, z3, 1, 1) == ctx3.t[0] ** 2
    assert s_weight(ctx3, z3, 3, 2) == ctx3.t[1] ** 2  # boundary row n
    b = z3.bump(1, 1, 1)
    assert s_weight(ctx3, b, 1, 1) == ctx3.t[0] ** 2 * ctx3.v ** -2

    ctx2 = LaurentContext(2)
    e2 = AffinePattern.empty(2)
    assert p_weight(ctx2, e2, 5, 0) == ctx2.t[1] ** 2
    assert p_weight(ctx2, e2, 5, 1) == ctx2.t[0] ** 2 * ctx2.u ** 2
    assert p_weight(ctx2, e2, 7, -1) == ctx2.t[0] ** 2
    assert p_weight(ctx2, e2, 7, 3) == ctx2.t[0] ** 2 * ctx2.u ** 4


def test_neighbors_finite():
    z3 = FinitePattern.zero(3)
    up = neighbors(z3, 1, 1)
    assert len(up) == 1 and up[0][0] == 1 and up[0][1].rows == ((1,), (0, 0))
    assert neighbors(z3, 1, -1) == []
    # independent oracle: enumerate bumps and filter by the invariants
    for pat in enumerate_finite(3, (1, 1)):
        expected = sorted(j for j in (1, 2)
                          if pat.bump(2, j, 1) is not None)
        assert sorted(j for j, _ in neighbors(pat, 2, 1)) == expected
    two = FinitePattern(3, [[1], [0, 1]])
    assert sorted(j for j, _ in neighbors(two, 2, 1)) == [1, 2]
    one = FinitePattern(3, [[1], [1, 0]])
    assert sorted(j for j, _ in neighbors(one, 2, 1)) == [2]


def test_neighbors_one_unit_difference():
    for pat in enumerate_finite(3, (2, 1)) + enumerate_finite(3, (1, 2)):
        for node in (1, 2):
            for direction in (1, -1):
                for j, q in neighbors(pat, node, direction):
                    diffs = [
                        (i, k, q.rows[i - 1][k - 1] - pat.rows[i - 1][k - 1])
                        for i in range(1, 3)
                        for k in range(1, i + 1)
                        if q.rows[i - 1][k - 1] != pat.rows[i - 1][k - 1]
                    ]
                    assert diffs == [(node, j, direction)]
    for pat in enumerate_affine_total(3, 2):
        for node in (1, 2, 3):
            for direction in (1, -1):
                for j, q in neighbors(pat, node, direction):
                    assert q.total() - pat.total() == direction
                    assert q.d(node, j) - pat.d(node, j) == direction


def test_affine_neighbors_move_whole_class():
    p = AffinePattern(3, [(1,), (), ()])
    for j, q in neighbors(p, 2, 1):
        # the periodic translates move together
        assert q.d(2, j) == p.d(2, j) + 1
        assert q.d(5, j + 3) == p.d(5, j + 3) + 1


def test_json_round_trip():
    f = FinitePattern(3, [[2], [1, 1]])
    assert FinitePattern.from_json(json.loads(json.dumps(f.to_json()))) == f
    a = AffinePattern(3, [(2, 1), (), (1,)])
    assert AffinePattern.from_json(json.loads(json.dumps(a.to_json()))) == a


def test_rank_bounds():
    with pytest.raises(PatternError):
        FinitePattern(1, [])
    with pytest.raises(PatternError):
        AffinePattern(1, [()])
