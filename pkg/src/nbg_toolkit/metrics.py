# Social costs, optimum search, prices of anarchy and stability.
import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import pandas as pd
from scipy.special import logsumexp

from nbg_toolkit.closed_forms import makeFamily
from nbg_toolkit.equilibrium import RESULT_NONE, solveAffineBySupports, supportSolution
from nbg_toolkit.errors import InvalidParameterError, NoEquilibriumError, ProblemTooLargeError
from nbg_toolkit.game_core import (
    MassDistribution,
    affineCoefficients,
    costVector,
    isAffine,
    rawCosts,
    requireAffine,
)
from nbg_toolkit.settings import (
    G_DEFAULT_SEED,
    G_DESCENT_MAX_ITERS,
    G_DEFAULT_STARTS,
    G_EGALITARIAN_MAX_ITERS,
    G_KKT_N_MAX,
    G_LINE_SCAN_POINTS,
    G_SMOOTH_MAX_BETA,
    G_SUPPORT_N_MAX,
    G_TAU_CHARGE,
)
from nbg_toolkit.utils.simplex import multistartMinimize, numericalGradient, simplexVertices

logger = logging.getLogger(__name__)

UTILITARIAN = "utilitarian"
EGALITARIAN = "egalitarian"

# ratio marker when the optimum is zero and the equilibrium cost is not
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class SocialCostPair:
    utilitarian: object
    egalitarian: object


def _socialCostsRaw(game, masses, exact):
    costs = rawCosts(game, masses)
    total = sum(masses) if exact else float(sum(masses))
    utilitarian = sum((m * c for m, c in zip(masses, costs)), total * 0) / total
    if exact:
        charged = [c for m, c in zip(masses, costs) if m > 0]
    else:
        charged = [c for m, c in zip(masses, costs) if m > G_TAU_CHARGE]
    return utilitarian, max(charged)


def socialCosts(game, x):
    """Utilitarian (mass-weighted mean) and egalitarian (max over charged vertices) costs."""
    costVector(game, x)
    utilitarian, egalitarian = _socialCostsRaw(game, x.masses, game.exact and x.exact)
    return SocialCostPair(utilitarian, egalitarian)


#region objectives
def _utilitarianObjective(game):
    total = float(game.r)

    def objective(v):
        costs = rawCosts(game, v)
        return float(sum(m * float(c) for m, c in zip(v, costs))) / total

    if isAffine(game):
        intercepts, weights = affineCoefficients(game)
        b = np.array([float(v) for v in intercepts])
        w = np.array([[float(v) for v in row] for row in weights])
        q = w + w.T

        def gradient(v):
            return (b + q.T @ v) / total
    else:
        def gradient(v):
            return numericalGradient(objective, v)
    return objective, gradient


def _egalitarianObjective(game, beta=G_SMOOTH_MAX_BETA):
    # log-sum-exp weighted by the masses, which tends to the max over charged vertices
    def objective(v):
        costs = np.array([float(c) for c in rawCosts(game, v)])
        weights = np.maximum(np.asarray(v, dtype=float), 0.0)
        return float(logsumexp(beta * costs, b=weights / weights.sum()) / beta)

    def gradient(v):
        return numericalGradient(objective, v)
    return objective, gradient
#endregion


def _kktCandidates(game, which):
    """Exact stationary points of the social cost on every face of the simplex (affine games).

    Utilitarian: gradient b + (W + W^T) x equal on the support and not smaller off it.
    Egalitarian: every charged vertex at the same cost.
    """
    intercepts, weights = affineCoefficients(game)
    if which == UTILITARIAN:
        weights = [[weights[i][j] + weights[j][i] for j in range(game.n)] for i in range(game.n)]
    requireOutside = which == UTILITARIAN
    candidates = []
    for mask in range(1, 1 << game.n):
        support = [i for i in range(game.n) if mask >> i & 1]
        result = supportSolution(game, intercepts, weights, support, requireOutside=requireOutside, method="kkt")
        if result is None:
            continue
        # the utilitarian cost is constant along a family of stationary points
        for t in result.vertices:
            masses, _ = result.at(t)
            candidates.append(tuple(masses))
    return candidates


###################################
## def minSocialCost(...)        ##
###################################
def minSocialCost(game, which=UTILITARIAN, starts=G_DEFAULT_STARTS, seed=G_DEFAULT_SEED, nMax=G_KKT_N_MAX,
                  extraCandidates=()):
    """Smallest social cost over the simplex

    Args:
        game (Game): any game
        which (string): "utilitarian" or "egalitarian"
        starts (int): random interior starts of the projected gradient search
        seed (int): seed of those starts
        nMax (int): largest n for the exact stationary-point enumeration
        extraCandidates (iterable): further mass vectors to evaluate (equilibria, say)

    Returns:
        tuple: (MassDistribution, value, exact) where exact says the search was an
            exhaustive enumeration rather than a local search
    """
    if which not in (UTILITARIAN, EGALITARIAN):
        raise InvalidParameterError(f"unknown social cost {which!r}")
    pick = 0 if which == UTILITARIAN else 1
    total = float(game.r)

    candidates = [tuple(v) for v in extraCandidates]
    exact = False
    if isAffine(game) and game.n <= nMax:
        candidates.extend(_kktCandidates(game, which))
        exact = which == UTILITARIAN

    if pick == 0:
        objective, gradient = _utilitarianObjective(game)
        maxIters = G_DESCENT_MAX_ITERS
    else:
        objective, gradient = _egalitarianObjective(game)
        maxIters = G_EGALITARIAN_MAX_ITERS
    for x, _ in multistartMinimize(objective, gradient, game.n, total, starts, seed, maxIters=maxIters):
        candidates.append(tuple(float(v) for v in x))
    candidates.extend(tuple(float(v) for v in vertex) for vertex in simplexVertices(game.n, total))

    if game.n == 2:
        #region line scan
        for t in np.linspace(0.0, total, G_LINE_SCAN_POINTS):
            candidates.append((float(t), total - float(t)))
        #endregion

    best = None
    for masses in candidates:
        distribution = MassDistribution(masses, game.r if _allExact(masses) else total)
        value = _socialCostsRaw(game, distribution.masses, game.exact and distribution.exact)[pick]
        if best is None or value < best[1] - 1e-12 * max(1.0, abs(float(best[1]))):
            best = (distribution, value)

    distribution, value = best
    logger.info("%s optimum %.12g (%s)", which, float(value), "exact enumeration" if exact else "estimate")
    return distribution, value, exact


def _allExact(masses):
    return all(isinstance(m, (Fraction, int)) and not isinstance(m, bool) for m in masses)


########################
## class PriceReport  ##
########################
@dataclass(frozen=True)
class PriceReport:
    poaU: object
    poaE: object
    posU: object
    posE: object
    optimumU: object
    optimumE: object
    equilibriaUsed: tuple = ()
    exactness: dict = field(default_factory=dict)

    def toDict(self):
        def encode(value):
            if value is None or isinstance(value, str):
                return value
            if isinstance(value, Fraction):
                return {"value": float(value), "exact": f"{value.numerator}/{value.denominator}"}
            return {"value": float(value)}

        return {
            "poa_u": encode(self.poaU),
            "poa_e": encode(self.poaE),
            "pos_u": encode(self.posU),
            "pos_e": encode(self.posE),
            "optimum_u": encode(self.optimumU),
            "optimum_e": encode(self.optimumE),
            "equilibria_used": [[float(m) for m in masses] for masses in self.equilibriaUsed],
            "exactness": dict(self.exactness),
        }


def _ratio(numerator, denominator):
    if denominator == 0:
        return Fraction(1) if numerator == 0 else UNBOUNDED
    return numerator / denominator


def priceReport(game, nMax=G_SUPPORT_N_MAX, starts=G_DEFAULT_STARTS, seed=G_DEFAULT_SEED):
    """Prices of anarchy and stability of an affine game

    Equilibria come from support enumeration; a family contributes the social
    costs at the vertices of its parameter polytope, where its affine cost attains
    its extremes.

    Args:
        game (Game): affine graphical game with n <= nMax
        nMax (int): support enumeration limit
        starts (int): random starts of the optimum search
        seed (int): seed of those starts

    Returns:
        PriceReport: ratios with exactness flags, "unbounded" for a zero optimum
    """
    requireAffine(game, "price report")
    if game.n > nMax:
        raise ProblemTooLargeError(f"price report is limited to n <= {nMax}, game has {game.n}")

    equilibria = []
    for result in solveAffineBySupports(game, nMax=nMax):
        if result.kind == RESULT_NONE:
            continue
        for t in result.vertices:
            masses, _ = result.at(t)
            equilibria.append(tuple(masses))
    if not equilibria:
        raise NoEquilibriumError(f"support enumeration found no equilibrium of {game.name or 'the game'}")

    exactMode = game.exact
    pairs = [_socialCostsRaw(game, masses, exactMode and _allExact(masses)) for masses in equilibria]
    worstU = max(p[0] for p in pairs)
    bestU = min(p[0] for p in pairs)
    worstE = max(p[1] for p in pairs)
    bestE = min(p[1] for p in pairs)

    _, optimumU, exactU = minSocialCost(game, UTILITARIAN, starts, seed, extraCandidates=equilibria)
    _, optimumE, exactE = minSocialCost(game, EGALITARIAN, starts, seed, extraCandidates=equilibria)

    exactness = {
        "poa_u": exactU,
        "pos_u": exactU,
        "poa_e": exactE,
        "pos_e": exactE,
        "equilibria": True,
    }
    report = PriceReport(
        _ratio(worstU, optimumU),
        _ratio(worstE, optimumE),
        _ratio(bestU, optimumU),
        _ratio(bestE, optimumE),
        optimumU,
        optimumE,
        tuple(equilibria),
        exactness,
    )
    logger.info("price report for %s: PoA_u %s, PoS_u %s", game.name or f"n={game.n}", report.poaU, report.posU)
    return report


def gammaForClass(maxDegree):
    """Constant gamma with integral_0^x f >= gamma x f(x) for nonnegative polynomials of degree <= maxDegree."""
    if not isinstance(maxDegree, int) or maxDegree < 0:
        raise InvalidParameterError("polynomial degree must be a nonnegative integer")
    # degree 0 gives 1, not clamped to 1/2
    return Fraction(1, maxDegree + 1)


def posBound(maxDegree):
    return 1 / gammaForClass(maxDegree)


def anarchySweep(alphas, starts=G_DEFAULT_STARTS, seed=G_DEFAULT_SEED):
    """PoA_u of the two-vertex game f = x, influence alpha both ways, for each alpha

    Returns:
        pandas.DataFrame: alpha, poa_u, expected ((1 + alpha) / 2) and their difference
    """
    rows = []
    for alpha in alphas:
        game = makeFamily("path", alpha, 1, n=2)
        report = priceReport(game, starts=starts, seed=seed)
        expected = (1 + game.influence.value(0, 1)) / 2
        rows.append({
            "alpha": float(game.influence.value(0, 1)),
            "poa_u": float(report.poaU),
            "expected": float(expected),
            "difference": abs(float(report.poaU) - float(expected)),
        })
    return pd.DataFrame(rows, columns=["alpha", "poa_u", "expected", "difference"])
