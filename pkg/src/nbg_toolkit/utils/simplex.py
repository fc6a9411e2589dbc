import logging

import numpy as np

from nbg_toolkit.settings import (
    G_ARMIJO_BACKTRACK,
    G_ARMIJO_C,
    G_ARMIJO_INITIAL_STEP,
    G_DESCENT_MAX_ITERS,
    G_ESCAPE_PROBE,
    G_TAU_OPT,
)

logger = logging.getLogger(__name__)

# Number of times a run may be pushed off a stationary point that is not a minimum
MAX_ESCAPES = 20


def projectSimplex(v, total=1.0):
    """Euclidean projection of v onto {y >= 0, sum(y) = total}, sort based."""
    v = np.asarray(v, dtype=float).ravel()
    u = np.sort(v)[::-1]
    cssv = np.cumsum(u) - total
    ind = np.arange(1, v.size + 1)
    cond = u - cssv / ind > 0
    rho = np.count_nonzero(cond)
    theta = cssv[rho - 1] / rho
    return np.maximum(v - theta, 0.0)


def simplexVertices(n, total):
    return [total * np.eye(n)[i] for i in range(n)]


def randomInteriorPoints(n, total, count, seed):
    rng = np.random.default_rng(seed)
    return [total * p for p in rng.dirichlet(np.ones(n), size=count)]


###########################################
## def projectedGradientDescent(...)     ##
###########################################
def projectedGradientDescent(objective, gradient, x0, total, tauOpt=G_TAU_OPT,
                             maxIters=G_DESCENT_MAX_ITERS):
    """Projected gradient descent on the scaled simplex with Armijo backtracking

    Args:
        objective (callable): numpy vector -> float
        gradient (callable): numpy vector -> numpy vector
        x0 (array-like): starting point, projected before use
        total (float): simplex scale r
        tauOpt (float): stop once a step moves every coordinate by at most this
        maxIters (int): iteration cap

    Returns:
        tuple: (x, objective value, iterations used, converged flag)
    """
    x = projectSimplex(x0, total)
    fx = objective(x)
    for iteration in range(1, maxIters + 1):
        g = gradient(x)
        step = G_ARMIJO_INITIAL_STEP
        #region line search
        while True:
            candidate = projectSimplex(x - step * g, total)
            fc = objective(candidate)
            if fc <= fx + G_ARMIJO_C * float(g @ (candidate - x)) or step < 1e-16:
                break
            step *= G_ARMIJO_BACKTRACK
        #endregion
        moved = float(np.max(np.abs(candidate - x)))
        x, fx = candidate, fc
        if moved <= tauOpt:
            return x, fx, iteration, True
    return x, fx, maxIters, False


def findDescentMove(objective, x, total, probe=G_ESCAPE_PROBE):
    """Looks for a mass transfer from a charged vertex that lowers the objective.

    Returns the improved point, or None when no pairwise transfer of size up to
    probe*total helps (x is then treated as a local minimum).
    """
    fx = objective(x)
    slack = 1e-14 * max(1.0, abs(fx))
    n = x.size
    for i in range(n):
        if x[i] <= 0.0:
            continue
        amount = min(probe * total, x[i])
        for j in range(n):
            if j == i:
                continue
            candidate = x.copy()
            candidate[i] -= amount
            candidate[j] += amount
            if objective(candidate) < fx - slack:
                return candidate
    return None


def descendToLocalMinimum(objective, gradient, x0, total, tauOpt=G_TAU_OPT,
                          maxIters=G_DESCENT_MAX_ITERS):
    x, fx, iterations, converged = projectedGradientDescent(objective, gradient, x0, total, tauOpt, maxIters)
    for escape in range(MAX_ESCAPES):
        move = findDescentMove(objective, x, total)
        if move is None:
            break
        logger.debug("stationary point %s is not a minimum, continuing descent", np.round(x, 6))
        x, fx, used, converged = projectedGradientDescent(objective, gradient, move, total, tauOpt, maxIters)
        iterations += used
    return x, fx, iterations, converged


def multistartMinimize(objective, gradient, n, total, starts, seed, tauOpt=G_TAU_OPT,
                       maxIters=G_DESCENT_MAX_ITERS):
    # every simplex vertex plus `starts` random interior points, in that order
    initialPoints = simplexVertices(n, total) + randomInteriorPoints(n, total, starts, seed)
    results = []
    for x0 in initialPoints:
        x, fx, iterations, converged = descendToLocalMinimum(objective, gradient, x0, total, tauOpt, maxIters)
        if not converged:
            logger.debug("descent hit the iteration cap (%s) at %s", iterations, np.round(x, 6))
        results.append((x, fx))
    return results


def dedupPoints(points, radius):
    """Keeps one representative per cluster of points closer than radius (infinity norm)."""
    ordered = sorted(points, key=lambda p: tuple(float(v) for v in p))
    kept = []
    for p in ordered:
        if all(np.max(np.abs(np.asarray(p, dtype=float) - np.asarray(k, dtype=float))) > radius for k in kept):
            kept.append(p)
    return kept


def numericalGradient(function, x, h=1e-7):
    # central differences, used for opaque or general costs
    grad = np.zeros_like(x)
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = h
        grad[i] = (function(x + step) - function(x - step)) / (2 * h)
    return grad
