# Potential of symmetric graphical games and its minimisation over the simplex.
#
# Phi(x) = sum_i integral_0^{x_i} f_i + sum_{i<j} alpha_{i,j} x_i x_j, whose gradient
# is the cost vector. Local minima of Phi on the simplex are equilibria.
import logging
from dataclasses import dataclass

import numpy as np

from nbg_toolkit.equilibrium import RESULT_POINT, solveAffineBySupports, verifyEquilibrium
from nbg_toolkit.game_core import (
    MassDistribution,
    costVector,
    isAffine,
    rawCosts,
    requireSymmetric,
)
from nbg_toolkit.settings import (
    G_DEDUP_RADIUS,
    G_DEFAULT_SEED,
    G_DEFAULT_STARTS,
    G_SUPPORT_N_MAX,
    G_TAU_OPT,
)
from nbg_toolkit.utils.simplex import dedupPoints, multistartMinimize

logger = logging.getLogger(__name__)

# minima are accepted as equilibria at this gap
MINIMUM_TAU_EQ = 1e-7
# a float minimum snaps onto an exact support solution this close to it
SNAP_RADIUS = 1e-5


@dataclass(frozen=True)
class PotentialValue:
    value: object
    gradient: tuple


def evaluatePhi(game, masses):
    """Phi at any mass vector (no distribution checks), exact when everything is rational."""
    value = game.r * 0
    for i, fn in enumerate(game.vertexCosts):
        value = value + fn.integral(masses[i])
    for (i, j), alpha in game.influence.entries.items():
        if i < j:
            value = value + alpha * masses[i] * masses[j]
    return value


def potential(game, x):
    """Potential value and its gradient (the cost vector) at x

    Args:
        game (Game): symmetric graphical game
        x (MassDistribution): point of the simplex

    Returns:
        PotentialValue: value and gradient
    """
    requireSymmetric(game, "potential")
    costs = costVector(game, x)
    return PotentialValue(evaluatePhi(game, x.masses), tuple(costs))


#################################
## def minimizePotential(...)  ##
#################################
def minimizePotential(game, starts=G_DEFAULT_STARTS, tauOpt=G_TAU_OPT, seed=G_DEFAULT_SEED,
                      nMax=G_SUPPORT_N_MAX):
    """Distinct local minima of Phi on the simplex, each one an equilibrium

    Projected gradient descent runs from every simplex vertex and from `starts`
    random interior points. Minima are deduplicated, checked with
    verifyEquilibrium and, for affine games small enough for support enumeration,
    replaced by the exact equilibrium they approximate.

    Args:
        game (Game): symmetric graphical game
        starts (int): number of random interior starting points
        tauOpt (float): descent stopping tolerance
        seed (int): seed for the interior starting points
        nMax (int): largest n for the exact cross-check

    Returns:
        list of MassDistribution: sorted lexicographically
    """
    requireSymmetric(game, "potential minimisation")
    total = float(game.r)

    def objective(v):
        return float(evaluatePhi(game, v))

    def gradient(v):
        return np.array([float(c) for c in rawCosts(game, v)])

    runs = multistartMinimize(objective, gradient, game.n, total, starts, seed, tauOpt)
    minima = dedupPoints([x for x, _ in runs], G_DEDUP_RADIUS)
    logger.debug("%s descent runs gave %s distinct points", len(runs), len(minima))

    crossCheck = isAffine(game) and game.n <= nMax
    solved = solveAffineBySupports(game, nMax=nMax) if crossCheck else []

    found = []
    for point in minima:
        distribution = MassDistribution(tuple(float(v) for v in point), total)
        if not verifyEquilibrium(game, distribution, tauEq=MINIMUM_TAU_EQ).isEquilibrium:
            logger.debug("discarding %s, not an equilibrium", np.round(point, 6))
            continue
        if crossCheck:
            distribution = _snapToExact(game, distribution, solved)
        # neighbouring float minima can snap onto the same exact equilibrium
        if any(distribution.masses == other.masses for other in found):
            continue
        found.append(distribution)
    return found


def _snapToExact(game, distribution, solved):
    # isolated solutions replace the float minimum; a family member stays as found
    point = distribution.asArray()
    for result in solved:
        if result.kind == RESULT_POINT:
            if np.max(np.abs(point - np.array([float(m) for m in result.masses]))) <= SNAP_RADIUS:
                return MassDistribution(result.masses, game.r)
        elif result.contains(tuple(point), tol=SNAP_RADIUS):
            return distribution
    logger.warning("potential minimum %s matches no support-enumeration equilibrium", np.round(point, 9))
    return distribution
