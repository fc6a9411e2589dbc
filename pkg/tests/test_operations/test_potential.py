from fractions import Fraction

import numpy as np
import pytest

import nbg_toolkit.potential as pt
import nbg_toolkit.worked_examples as we
from nbg_toolkit.closed_forms import CYCLE, PATH, makeFamily
from nbg_toolkit.equilibrium import verifyEquilibrium
from nbg_toolkit.errors import UnsupportedGameError
from nbg_toolkit.game_core import Game, InfluenceMatrix, MassDistribution, VertexCostFn, costVector, rawCosts


def randomSymmetricGame(rng):
    n = int(rng.integers(2, 6))
    costs = []
    for _ in range(n):
        degree = int(rng.integers(0, 4))
        costs.append(VertexCostFn.polynomial([float(c) for c in rng.uniform(0.1, 2.0, degree + 1)]))
    pairs = [(i, j, float(rng.uniform(0.0, 2.0))) for i in range(1, n + 1) for j in range(i + 1, n + 1)
             if rng.random() < 0.6]
    return Game.graphical(n, 1.0, costs, InfluenceMatrix.fromTriples(n, pairs, symmetric=True))


# Test that the partial derivatives of Phi are the vertex costs
def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(7)
    h = 1e-6
    for _ in range(50):
        game = randomSymmetricGame(rng)
        for _ in range(10):
            point = rng.dirichlet(np.ones(game.n)) * 0.8 + 0.1 / game.n
            costs = rawCosts(game, point)
            for i in range(game.n):
                up, down = point.copy(), point.copy()
                up[i] += h
                down[i] -= h
                estimate = (pt.evaluatePhi(game, up) - pt.evaluatePhi(game, down)) / (2 * h)
                assert estimate == pytest.approx(costs[i], rel=1e-5, abs=1e-7)


def test_potential_value_and_gradient(braessHalf):
    x = MassDistribution((Fraction(1, 2), Fraction(1, 2)), 1)
    value = pt.potential(braessHalf, x)
    # x1 + (x2^2/2 + x2/2) + x1 x2 / 4
    assert value.value == Fraction(1, 2) + Fraction(1, 8) + Fraction(1, 4) + Fraction(1, 16)
    assert value.gradient == (Fraction(9, 8), Fraction(9, 8))


def test_potential_maximum_game_formula():
    game = we.potentialMaximumGame()
    for k in range(11):
        x1 = Fraction(k, 10)
        assert pt.evaluatePhi(game, (x1, 1 - x1)) == (3 - x1 * x1) / 2


def test_minimum_is_not_the_maximising_equilibrium():
    game = we.potentialMaximumGame()
    minima = pt.minimizePotential(game)
    assert [m.masses for m in minima] == [(1, 0)]
    assert minima[0].exact
    # x1 = 0 is an equilibrium too, but it maximises Phi
    assert verifyEquilibrium(game, MassDistribution((Fraction(0), Fraction(1)), 1)).isEquilibrium


def test_potential_needs_symmetric_game(triangle):
    from nbg_toolkit.kernel_structure import digraphToNbg
    game = digraphToNbg(triangle, 2)
    with pytest.raises(UnsupportedGameError):
        pt.potential(game, MassDistribution.uniform(3, 1))
    with pytest.raises(UnsupportedGameError):
        pt.minimizePotential(game)


def test_potential_needs_graphical_game(dilemma):
    with pytest.raises(UnsupportedGameError):
        pt.minimizePotential(dilemma)


@pytest.mark.parametrize("game, expected", [
    (makeFamily(PATH, Fraction(1, 4), 1, n=6), tuple(Fraction(v, 76) for v in (15, 11, 12, 12, 11, 15))),
    (makeFamily(CYCLE, Fraction(3, 10), 1, n=5), (Fraction(1, 5),) * 5),
], ids=["path6", "cycle5"])
def test_convex_minimum_snaps_to_exact(game, expected):
    minima = pt.minimizePotential(game)
    assert len(minima) == 1
    assert minima[0].masses == expected


def test_minima_are_reproducible():
    game = makeFamily(PATH, 1, 1, n=4)
    first = pt.minimizePotential(game, seed=5)
    second = pt.minimizePotential(game, seed=5)
    assert [m.masses for m in first] == [m.masses for m in second]


def test_non_affine_minimum_is_an_equilibrium():
    costs = [VertexCostFn.polynomial([0, 0, 1]), VertexCostFn.polynomial([1, 0, 1]), VertexCostFn.polynomial([0, 0, 1])]
    game = Game.graphical(3, 1, costs, InfluenceMatrix.uniform(3, [(1, 2), (2, 3)], Fraction(1, 2)))
    minima = pt.minimizePotential(game)
    assert minima
    for x in minima:
        assert not x.exact
        assert verifyEquilibrium(game, x, tauEq=1e-6).isEquilibrium


def test_stability_gap_minimum_is_the_costly_equilibrium():
    lam = Fraction(1, 100)
    game = we.stabilityGapGame(lam)
    minima = pt.minimizePotential(game)
    assert [m.masses for m in minima] == [(0, 1)]
    assert all(c == 2 + 2 * lam for c in costVector(game, minima[0]))


# Test that float minima snapping onto the same exact equilibrium are reported once
def test_snapped_minima_are_distinct(monkeypatch):
    game = Game.graphical(2, 1, [VertexCostFn.constant(Fraction(1)), VertexCostFn.constant(Fraction(1))],
                          InfluenceMatrix(2))
    runs = [(np.array([1.0, 0.0]), 1.0), (np.array([1.0 - 3e-6, 3e-6]), 1.0)]
    monkeypatch.setattr(pt, "multistartMinimize", lambda *args, **kwargs: runs)
    minima = pt.minimizePotential(game)
    assert [m.masses for m in minima] == [(1, 0)]
    assert len({m.masses for m in minima}) == len(minima)
