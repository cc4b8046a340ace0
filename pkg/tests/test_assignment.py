import itertools

import numpy as np
import pytest

from corank import (
    InvalidInputError,
    brute_force_assignment,
    build_grid,
    make_spec,
    solve_assignment,
    squared_cost,
)


def test_squared_cost_single_point():
    cost = squared_cost([[0.0, 0.0]], [[1.0, 0.0]])
    assert cost.shape == (1, 1)
    assert cost[0, 0] == 1.0


def test_squared_cost_identity_case():
    grid = build_grid(make_spec(36, 2, symmetrize=True))
    cost = squared_cost(grid.points, grid)
    assert np.allclose(np.diag(cost), 0.0, atol=1e-14)
    assert cost.min() >= 0.0


def test_squared_cost_hand_example():
    cost = squared_cost([[1.0, 2.0], [3.0, 4.0]], [[0.0, 0.0], [1.0, 1.0]])
    assert np.allclose(cost, [[5.0, 1.0], [25.0, 13.0]], atol=1e-14)


def test_squared_cost_matches_definition():
    rng = np.random.default_rng(0)
    z = rng.standard_normal((8, 3))
    g = rng.standard_normal((8, 3))
    cost = squared_cost(z, g)
    for i in range(8):
        for j in range(8):
            assert cost[i, j] == pytest.approx(((z[i] - g[j]) ** 2).sum(), abs=1e-12)


def test_squared_cost_rejects_mismatch():
    with pytest.raises(InvalidInputError):
        squared_cost(np.zeros((3, 2)), np.zeros((4, 2)))
    with pytest.raises(InvalidInputError):
        squared_cost(np.zeros((3, 2)), np.zeros((3, 3)))
    bad = np.zeros((2, 2))
    bad[0, 0] = np.nan
    with pytest.raises(InvalidInputError):
        squared_cost(bad, np.zeros((2, 2)))


def test_solve_assignment_antidiagonal_zero():
    pairing = solve_assignment(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert list(pairing.assignment) == [0, 1]
    assert pairing.total_cost == 0.0


def test_solve_assignment_prefers_cheap_diagonal():
    # both permutations: diagonal 5+13=18, swap 1+25=26
    pairing = solve_assignment(np.array([[5.0, 1.0], [25.0, 13.0]]))
    assert list(pairing.assignment) == [0, 1]
    assert pairing.total_cost == 18.0


def test_solve_assignment_rejects_nonfinite():
    with pytest.raises(InvalidInputError):
        solve_assignment(np.array([[1.0, np.inf], [0.0, 1.0]]))


def test_brute_force_trivial_sizes():
    one = brute_force_assignment(np.array([[7.0]]))
    assert list(one.assignment) == [0]
    assert one.total_cost == 7.0
    two = brute_force_assignment(np.array([[3.0, 9.0], [2.0, 4.0]]))
    assert two.total_cost == min(3.0 + 4.0, 9.0 + 2.0)


def test_brute_force_refuses_large_n():
    with pytest.raises(InvalidInputError):
        brute_force_assignment(np.zeros((10, 10)))


def test_solver_matches_brute_force_on_random_7x7():
    rng = np.random.default_rng(14)
    for _ in range(50):
        cost = squared_cost(rng.standard_normal((7, 2)), rng.standard_normal((7, 2)))
        assert solve_assignment(cost).total_cost == brute_force_assignment(cost).total_cost


def test_solver_matches_brute_force_on_random_6x6():
    rng = np.random.default_rng(15)
    for _ in range(500):
        cost = rng.random((6, 6))
        assert solve_assignment(cost).total_cost == brute_force_assignment(cost).total_cost


def test_shift_leaves_permutation_ranking_unchanged():
    # total cost of every permutation moves by the same constant when the
    # sample is translated, so the cost ordering of permutations is fixed
    rng = np.random.default_rng(321)
    z = rng.standard_normal((5, 2))
    g = rng.standard_normal((5, 2))
    mu = np.array([3.7, -1.2])
    c1 = squared_cost(z, g)
    c2 = squared_cost(z + mu, g)
    perms = list(itertools.permutations(range(5)))
    t1 = np.array([c1[np.arange(5), p].sum() for p in perms])
    t2 = np.array([c2[np.arange(5), p].sum() for p in perms])
    assert np.array_equal(np.argsort(t1), np.argsort(t2))
    spread = (t2 - t1).max() - (t2 - t1).min()
    assert spread < 1e-10


def test_rotation_equivariance():
    rng = np.random.default_rng(322)
    z = rng.standard_normal((6, 2))
    g = rng.standard_normal((6, 2))
    theta = 0.83
    o = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    ca = squared_cost(z, g)
    cb = squared_cost(z @ o.T, g @ o.T)
    assert np.abs(ca - cb).max() < 1e-12
    assert np.array_equal(solve_assignment(ca).assignment, solve_assignment(cb).assignment)


def test_solver_terminates_on_tied_costs():
    z = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 1.0], [1.0, 1.0]])
    g = np.array([[0.0, 1.0], [0.0, 1.0], [1.0, 0.0], [1.0, 0.0]])
    cost = squared_cost(z, g)
    fast = solve_assignment(cost)
    assert sorted(fast.assignment) == [0, 1, 2, 3]
    assert fast.total_cost == brute_force_assignment(cost).total_cost


def test_pairing_cost_consistent_with_assignment():
    rng = np.random.default_rng(323)
    cost = rng.random((8, 8))
    pairing = solve_assignment(cost)
    recomputed = cost[np.arange(8), pairing.assignment].sum()
    assert pairing.total_cost == pytest.approx(recomputed, abs=1e-12)
