from fractions import Fraction

import numpy as np
import pytest

import nbg_toolkit.metrics as mt
import nbg_toolkit.worked_examples as we
from nbg_toolkit.closed_forms import CYCLE, PATH, makeFamily
from nbg_toolkit.equilibrium import solveAffineBySupports
from nbg_toolkit.errors import InvalidParameterError, NoEquilibriumError, UnsupportedGameError
from nbg_toolkit.game_core import Game, InfluenceMatrix, MassDistribution, VertexCostFn
from nbg_toolkit.potential import evaluatePhi, minimizePotential


def test_social_costs(anarchy2):
    pair = mt.socialCosts(anarchy2, MassDistribution((Fraction(1, 2), Fraction(1, 2)), 1))
    assert pair.utilitarian == Fraction(3, 2)
    assert pair.egalitarian == Fraction(3, 2)


def test_egalitarian_ignores_uncharged(braessHalf):
    pair = mt.socialCosts(braessHalf, MassDistribution((Fraction(1), Fraction(0)), 1))
    # vertex 2 costs 3/4 but carries no mass
    assert pair.utilitarian == 1
    assert pair.egalitarian == 1


#region optimum search
def test_min_social_cost_exact_for_affine(anarchy2):
    distribution, value, exact = mt.minSocialCost(anarchy2, mt.UTILITARIAN)
    assert exact
    assert value == 1
    assert distribution.masses in [(1, 0), (0, 1)]


def test_min_social_cost_interior():
    # f = 2x on both vertices, no influence: optimum at the middle with cost 1
    game = Game.graphical(2, 1, [VertexCostFn.affine(2), VertexCostFn.affine(2)], InfluenceMatrix(2))
    distribution, value, _ = mt.minSocialCost(game, mt.UTILITARIAN)
    assert value == 1
    assert distribution.masses == (Fraction(1, 2), Fraction(1, 2))


def test_min_social_cost_general_game(dilemma):
    # 4 x1^2 x2 + x1 x2, smallest at a vertex of the segment
    _, value, exact = mt.minSocialCost(dilemma, mt.UTILITARIAN)
    assert not exact
    assert float(value) == pytest.approx(0.0, abs=1e-12)


def test_egalitarian_estimate(braessHalf):
    _, value, exact = mt.minSocialCost(braessHalf, mt.EGALITARIAN)
    assert not exact
    # (1, 0) costs 1 on its only charged vertex; nothing does better
    assert float(value) == pytest.approx(1.0, abs=1e-6)


def test_unknown_social_cost(anarchy2):
    with pytest.raises(InvalidParameterError):
        mt.minSocialCost(anarchy2, "median")


def test_seeded_search_is_reproducible():
    game = Game.graphical(3, 1, [VertexCostFn.polynomial([1, 0, 1])] * 3,
                          InfluenceMatrix.uniform(3, [(1, 2), (2, 3)], Fraction(1, 2)))
    first = mt.minSocialCost(game, mt.UTILITARIAN, seed=4)
    second = mt.minSocialCost(game, mt.UTILITARIAN, seed=4)
    assert first[0].masses == second[0].masses
    assert first[1] == second[1]
#endregion


#region prices
@pytest.mark.parametrize("alpha", [2, 5, 9, 99], ids=["2", "5", "9", "99"])
def test_price_of_anarchy_grows_with_alpha(alpha):
    report = mt.priceReport(we.anarchyGame(alpha))
    assert float(report.poaU) == pytest.approx((1 + alpha) / 2, abs=1e-9)
    assert report.posU == 1
    assert report.exactness["poa_u"]
    assert len(report.equilibriaUsed) == 3


def test_price_of_stability_linear_games():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(2, 6))
        costs = [VertexCostFn.affine(Fraction(int(rng.integers(1, 5)), 2)) for _ in range(n)]
        pairs = [(i, j, Fraction(int(rng.integers(1, 7)), 4)) for i in range(1, n + 1) for j in range(i + 1, n + 1)
                 if rng.random() < 0.5]
        game = Game.graphical(n, 1, costs, InfluenceMatrix.fromTriples(n, pairs, symmetric=True))
        report = mt.priceReport(game)
        assert float(report.posU) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("lam", [Fraction(1, 100), Fraction(1, 10), Fraction(1, 2)], ids=["0.01", "0.1", "0.5"])
def test_price_of_stability_gap(lam):
    report = mt.priceReport(we.stabilityGapGame(lam))
    assert float(report.posU) == pytest.approx(float((2 + 2 * lam) / (1 + 2 * lam)), abs=1e-6)
    assert report.equilibriaUsed == ((0, 1),)


def test_zero_optimum_is_unbounded():
    # (0, 1) costs nothing, (1, 0) is an equilibrium of cost 1
    game = Game.graphical(2, 1, [VertexCostFn.affine(1), VertexCostFn.constant(0)],
                          InfluenceMatrix.uniform(2, [(1, 2)], 1))
    report = mt.priceReport(game)
    assert report.optimumU == 0
    assert report.poaU == mt.UNBOUNDED
    assert report.posU == 1
    assert report.poaE == mt.UNBOUNDED
    assert report.toDict()["poa_u"] == mt.UNBOUNDED


def test_price_report_needs_affine(dilemma):
    with pytest.raises(UnsupportedGameError):
        mt.priceReport(dilemma)


def test_price_report_without_equilibrium(monkeypatch, anarchy2):
    monkeypatch.setattr(mt, "solveAffineBySupports", lambda game, nMax: [])
    with pytest.raises(NoEquilibriumError):
        mt.priceReport(anarchy2)


def test_report_to_dict(anarchy2):
    data = mt.priceReport(anarchy2).toDict()
    assert data["poa_u"] == {"value": 1.5, "exact": "3/2"}
    assert [0.5, 0.5] in data["equilibria_used"]
#endregion


@pytest.mark.parametrize("degree, gamma, bound", [
    (0, Fraction(1), 1),
    (1, Fraction(1, 2), 2),
    (3, Fraction(1, 4), 4),
], ids=["constant", "affine", "cubic"])
def test_gamma_and_bound(degree, gamma, bound):
    assert mt.gammaForClass(degree) == gamma
    assert mt.posBound(degree) == bound


def test_gamma_rejects_negative():
    with pytest.raises(InvalidParameterError):
        mt.gammaForClass(-1)


def test_gamma_bound_holds_for_polynomials():
    rng = np.random.default_rng(9)
    for degree in range(4):
        gamma = float(mt.gammaForClass(degree))
        for _ in range(20):
            fn = VertexCostFn.polynomial([float(c) for c in rng.uniform(0.0, 3.0, degree + 1)])
            for t in np.linspace(0.01, 2.0, 7):
                assert fn.integral(t) >= gamma * t * fn(t) - 1e-12


def test_anarchy_sweep():
    table = mt.anarchySweep([2, 9])
    assert list(table.columns) == ["alpha", "poa_u", "expected", "difference"]
    assert table["difference"].max() <= 1e-9


def test_cycle_price_of_stability_is_one():
    report = mt.priceReport(makeFamily(CYCLE, Fraction(1, 3), 1, n=4))
    assert report.posU == 1
    report = mt.priceReport(makeFamily(PATH, Fraction(1, 4), 1, n=3))
    assert float(report.posE) == pytest.approx(1.0, abs=1e-6)


#region potential and social cost bounds
def randomPolynomialGame(rng, n, maxDegree, intercepts=True):
    costs = []
    for _ in range(n):
        degree = int(rng.integers(1, maxDegree + 1))
        coeffs = [Fraction(int(rng.integers(1 if intercepts else 0, 8)), 4)]
        coeffs += [Fraction(int(c), 4) for c in rng.integers(0, 8, degree - 1)] + [Fraction(int(rng.integers(1, 8)), 4)]
        costs.append(VertexCostFn.polynomial(coeffs))
    pairs = [(i, j, Fraction(int(rng.integers(1, 9)), 4)) for i in range(1, n + 1) for j in range(i + 1, n + 1)
             if rng.random() < 0.6]
    return Game.graphical(n, 1, costs, InfluenceMatrix.fromTriples(n, pairs, symmetric=True))


def randomPoint(rng, n):
    weights = [int(w) for w in rng.integers(0, 5, n)]
    if not sum(weights):
        weights[0] = 1
    return MassDistribution(tuple(Fraction(w, sum(weights)) for w in weights), 1)


# Test that gamma C_u <= Phi <= C_u for nonnegative polynomial costs
@pytest.mark.parametrize("maxDegree", [1, 2, 3])
def test_potential_between_gamma_and_social_cost(maxDegree):
    rng = np.random.default_rng(31 + maxDegree)
    gamma = mt.gammaForClass(maxDegree)
    for _ in range(15):
        game = randomPolynomialGame(rng, int(rng.integers(2, 6)), maxDegree)
        for _ in range(10):
            x = randomPoint(rng, game.n)
            utilitarian = mt.socialCosts(game, x).utilitarian
            phi = evaluatePhi(game, x.masses)
            assert gamma * utilitarian <= phi <= utilitarian


def test_linear_social_cost_is_twice_the_potential():
    rng = np.random.default_rng(37)
    for _ in range(20):
        n = int(rng.integers(2, 6))
        costs = [VertexCostFn.affine(Fraction(int(rng.integers(1, 5)), 2)) for _ in range(n)]
        pairs = [(i, j, Fraction(int(rng.integers(1, 7)), 4)) for i in range(1, n + 1) for j in range(i + 1, n + 1)
                 if rng.random() < 0.5]
        game = Game.graphical(n, 1, costs, InfluenceMatrix.fromTriples(n, pairs, symmetric=True))
        for _ in range(10):
            x = randomPoint(rng, n)
            assert mt.socialCosts(game, x).utilitarian == 2 * evaluatePhi(game, x.masses)


def test_price_of_stability_below_bound_for_affine_games():
    rng = np.random.default_rng(41)
    for _ in range(20):
        game = randomPolynomialGame(rng, int(rng.integers(2, 5)), 1)
        report = mt.priceReport(game)
        assert float(report.posU) <= float(mt.posBound(1)) + 1e-9


@pytest.mark.parametrize("maxDegree", [2, 3])
def test_price_of_stability_below_bound_for_polynomial_games(maxDegree):
    rng = np.random.default_rng(43 + maxDegree)
    for _ in range(5):
        game = randomPolynomialGame(rng, 2, maxDegree)
        minima = minimizePotential(game, seed=1)
        assert minima
        bestEquilibrium = min(float(mt.socialCosts(game, m).utilitarian) for m in minima)
        _, optimum, _ = mt.minSocialCost(game, mt.UTILITARIAN, seed=1)
        assert bestEquilibrium <= float(mt.posBound(maxDegree)) * float(optimum) + 1e-9


def test_utilitarian_never_exceeds_egalitarian():
    rng = np.random.default_rng(47)
    for _ in range(20):
        game = randomPolynomialGame(rng, int(rng.integers(2, 6)), 2)
        for _ in range(10):
            pair = mt.socialCosts(game, randomPoint(rng, game.n))
            assert pair.utilitarian <= pair.egalitarian


def test_social_costs_agree_at_equilibria():
    rng = np.random.default_rng(53)
    for _ in range(15):
        game = randomPolynomialGame(rng, int(rng.integers(2, 5)), 1)
        for result in solveAffineBySupports(game):
            for masses in result.samplePoints():
                pair = mt.socialCosts(game, MassDistribution(tuple(masses), 1))
                assert pair.utilitarian == pair.egalitarian
#endregion
