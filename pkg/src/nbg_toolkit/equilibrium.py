# Equilibrium verification, delta-strongness, the fixed-point map of the existence
# argument, best-response dynamics and exact support enumeration for affine games.
import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from nbg_toolkit.errors import InvalidParameterError, ProblemTooLargeError
from nbg_toolkit.game_core import (
    MassDistribution,
    affineCoefficients,
    costVector,
    isAffine,
    rawCosts,
    requireAffine,
)
from nbg_toolkit.settings import (
    G_DYNAMICS_MAX_ITERS,
    G_OSCILLATION_WINDOW,
    G_STRONG_GRID_POINTS,
    G_SUPPORT_N_MAX,
    G_TAU_CHARGE,
    G_TAU_EQ,
)
from nbg_toolkit.utils.linear_systems import (
    NONE,
    canonical,
    centroid,
    dot,
    polytopeVertices,
    signOf,
    solveLinearSystem,
)
from nbg_toolkit.utils.number_helpers import parseNumber

logger = logging.getLogger(__name__)

DELTA_STRONG = "delta-strong"
REFUTED = "refuted"

METHOD_EXACT = "exact"
METHOD_SAMPLED = "sampled"

RESULT_POINT = "point"
RESULT_FAMILY = "family"
RESULT_NONE = "none"


#############################
## class EquilibriumReport ##
#############################
@dataclass(frozen=True)
class EquilibriumReport:
    isEquilibrium: bool
    worstGap: object
    costs: tuple
    commonCost: object = None
    exact: bool = True
    # 1-indexed (charged vertex, cheapest vertex) realising the worst gap
    witness: tuple = None


@dataclass(frozen=True)
class StrongnessCertificate:
    delta: object
    verdict: str
    # 1-indexed (i, j, epsilon) of an improving move when refuted
    witness: tuple = None
    method: str = METHOD_EXACT

    @property
    def isStrong(self):
        return self.verdict == DELTA_STRONG


def _chargedVertices(masses, exact, tauCharge):
    if exact:
        return [i for i, m in enumerate(masses) if m > 0]
    return [i for i, m in enumerate(masses) if m > tauCharge]


def _buildReport(costs, masses, exact, tauEq, tauCharge):
    tol = 0 if exact else tauEq
    charged = _chargedVertices(masses, exact, tauCharge)
    cheapest = min(range(len(costs)), key=lambda k: costs[k])
    worst = Fraction(0) if exact else 0.0
    witness = None
    for i in charged:
        gap = costs[i] - costs[cheapest]
        if gap > worst:
            worst, witness = gap, (i + 1, cheapest + 1)
    if not exact:
        worst = float(worst)

    chargedCosts = [costs[i] for i in charged]
    top = max(chargedCosts)
    commonCost = top if all(top - c <= tol for c in chargedCosts) else None
    return EquilibriumReport(worst <= tol, worst, tuple(costs), commonCost, exact, witness)


##############################
## def verifyEquilibrium()  ##
##############################
def verifyEquilibrium(game, x, tauEq=G_TAU_EQ, tauCharge=G_TAU_CHARGE):
    """Checks that no charged vertex pays more than any other vertex

    Args:
        game (Game): any game
        x (MassDistribution): candidate equilibrium
        tauEq (float): allowed gap in float mode; exact inputs are compared exactly
        tauCharge (float): float-mode threshold above which a vertex is charged

    Returns:
        EquilibriumReport: verdict, worst gap, costs and the common cost when the
            charged vertices share one
    """
    costs = costVector(game, x)
    exact = game.exact and x.exact
    return _buildReport(costs, x.masses, exact, tauEq, tauCharge)


def verifyDeltaStrong(game, x, delta, tauEq=G_TAU_EQ, tauCharge=G_TAU_CHARGE):
    """Checks that no chunk of mass epsilon <= delta improves by moving to another vertex.

    Affine games are exact: the moved cost is affine in epsilon, so only the end
    points need checking. Other games are checked on a grid and labelled sampled.
    """
    delta = parseNumber(delta)
    if delta < 0:
        raise InvalidParameterError("delta must be nonnegative")
    method = METHOD_EXACT if isAffine(game) else METHOD_SAMPLED

    report = verifyEquilibrium(game, x, tauEq, tauCharge)
    if not report.isEquilibrium:
        i, j = report.witness
        return StrongnessCertificate(delta, REFUTED, (i, j, delta * 0), method)

    exact = report.exact
    tol = 0 if exact else tauEq
    if not exact:
        delta = float(delta)
    costs = report.costs
    masses = x.masses
    charged = _chargedVertices(masses, exact, tauCharge)

    if method == METHOD_EXACT:
        _, weights = affineCoefficients(game)
        for i in charged:
            epsilon = min(delta, masses[i])
            if epsilon == 0:
                continue
            for j in range(game.n):
                if j == i:
                    continue
                moved = costs[j] + epsilon * (weights[j][j] - weights[i][j])
                if costs[i] > moved + tol:
                    return StrongnessCertificate(delta, REFUTED, (i + 1, j + 1, epsilon), method)
        return StrongnessCertificate(delta, DELTA_STRONG, None, method)

    #region sampled check
    steps = G_STRONG_GRID_POINTS - 1
    for i in charged:
        epsilonMax = min(delta, masses[i])
        for k in range(1, steps + 1):
            epsilon = epsilonMax * k / steps
            for j in range(game.n):
                if j == i:
                    continue
                shifted = list(masses)
                shifted[i] = shifted[i] - epsilon
                shifted[j] = shifted[j] + epsilon
                moved = rawCosts(game, shifted)[j]
                if costs[i] > moved + tol:
                    return StrongnessCertificate(delta, REFUTED, (i + 1, j + 1, epsilon), method)
    #endregion
    return StrongnessCertificate(delta, DELTA_STRONG, None, method)


def brouwerMap(game, x):
    """F_i(x) = (x_i + r * sum_j g_ij) / (1 + sum_ij g_ij), g_ij = x_j * max(0, C_j - C_i)."""
    costs = costVector(game, x)
    masses = x.masses
    zero = masses[0] * 0
    pulls = []
    for i in range(game.n):
        pull = zero
        for j in range(game.n):
            pull = pull + masses[j] * max(zero, costs[j] - costs[i])
        pulls.append(pull)
    denominator = 1 + sum(pulls, zero)
    image = tuple((masses[i] + x.total * pulls[i]) / denominator for i in range(game.n))
    return MassDistribution(image, x.total)


###############################
## best-response dynamics    ##
###############################
@dataclass(frozen=True)
class DynamicsResult:
    trace: tuple
    report: EquilibriumReport
    converged: bool
    iterations: int
    finalStep: float


def bestResponseDynamics(game, x0, step=None, maxIters=G_DYNAMICS_MAX_ITERS, tauEq=G_TAU_EQ,
                         tauCharge=G_TAU_CHARGE):
    """Moves mass from the most expensive charged vertex to the cheapest one until balanced

    Args:
        game (Game): any game, continuous costs recommended
        x0 (MassDistribution): starting point
        step (number): mass moved per iteration, default r/100; halved whenever
            the gap has not improved for a window of iterations during which
            the mass went back and forth
        maxIters (int): iteration cap
        tauEq (float): stop once the worst gap is at most this

    Returns:
        DynamicsResult: float trace including the start, terminal report, and
            whether the gap fell under tauEq (running out of iterations is a
            legitimate outcome)
    """
    total = float(game.r)
    step = total / 100 if step is None else float(parseNumber(step))
    if not 0 < step <= total:
        raise InvalidParameterError("step must lie in (0, r]")
    x = x0.asArray()
    costVector(game, x0)
    trace = [MassDistribution(tuple(x), total)]

    bestGap = np.inf
    stalled = 0
    reversals = 0
    lastMove = None
    converged = False
    iteration = 0
    for iteration in range(maxIters + 1):
        costs = [float(c) for c in rawCosts(game, tuple(x))]
        charged = [i for i in range(game.n) if x[i] > tauCharge]
        worst = max(charged, key=lambda i: costs[i])
        cheapest = min(range(game.n), key=lambda i: costs[i])
        gap = costs[worst] - costs[cheapest]
        if gap <= tauEq:
            converged = True
            break
        if iteration == maxIters:
            break

        amount = min(step, x[worst])
        x[worst] -= amount
        x[cheapest] += amount
        trace.append(MassDistribution(tuple(x), total))

        #region oscillation control
        if lastMove == (cheapest, worst):
            reversals += 1
        lastMove = (worst, cheapest)
        if gap < bestGap:
            bestGap = gap
            stalled = 0
        else:
            stalled += 1
        if stalled >= G_OSCILLATION_WINDOW and reversals > 0:
            step /= 2
            stalled = 0
            reversals = 0
            logger.debug("iteration %s: oscillation, step halved to %.3g", iteration, step)
        #endregion

    if not converged:
        logger.warning("best-response dynamics did not converge within %s iterations (gap %.3g)", maxIters, gap)
    report = verifyEquilibrium(game, trace[-1], tauEq, tauCharge)
    return DynamicsResult(tuple(trace), report, converged, iteration, step)


#######################
## class SolveResult ##
#######################
@dataclass(frozen=True)
class SolveResult:
    """One equilibrium, an affine family of them, or nothing under a method.

    Coordinates are (x_1, ..., x_n, c). A family is basepoint + sum_k t_k basis[k]
    over the parameters t satisfying offset + row . t >= 0 for every constraint;
    vertices lists the extreme parameter values of that set.
    """
    kind: str
    n: int = 0
    basepoint: tuple = ()
    basis: tuple = ()
    constraints: tuple = ()
    vertices: tuple = ()
    exact: bool = True
    method: str = ""
    condition: str = ""
    exhaustive: bool = True

    @classmethod
    def point(cls, masses, cost, exact=True, method="", condition="", exhaustive=True):
        masses = tuple(masses)
        return cls(RESULT_POINT, len(masses), masses + (cost,), (), (), ((),), exact, method, condition, exhaustive)

    @classmethod
    def none(cls, method="", condition=""):
        return cls(RESULT_NONE, method=method, condition=condition)

    @property
    def dimension(self):
        return len(self.basis)

    @property
    def masses(self):
        return self.basepoint[:self.n]

    @property
    def cost(self):
        return self.basepoint[self.n] if self.kind == RESULT_POINT else None

    def at(self, parameters=()):
        """(masses, cost) at the given family parameters."""
        values = list(self.basepoint)
        for t, direction in zip(parameters, self.basis):
            values = [v + t * d for v, d in zip(values, direction)]
        values = [canonical(v) for v in values]
        if not self.exact:
            # round-off below zero on the family boundary
            values = [max(0.0, float(v)) if k < self.n else float(v) for k, v in enumerate(values)]
        return tuple(values[:self.n]), values[self.n]

    def centroidParameters(self):
        return centroid(list(self.vertices)) if self.dimension else ()

    def sampleParameters(self, count=5):
        if self.kind != RESULT_FAMILY:
            return [()]
        centre = self.centroidParameters()
        params = list(self.vertices) + [centre]
        for v in self.vertices:
            params.append(tuple(canonical((a + b) / 2) for a, b in zip(v, centre)))
        return params[:max(count, len(self.vertices) + 1)]

    def samplePoints(self, count=5):
        if self.kind == RESULT_NONE:
            return []
        return [self.at(t)[0] for t in self.sampleParameters(count)]

    def costRange(self):
        costs = [self.at(t)[1] for t in (self.vertices if self.kind == RESULT_FAMILY else [()])]
        return min(costs), max(costs)

    def support(self):
        masses, _ = self.at(self.centroidParameters())
        if self.exact:
            return frozenset(i + 1 for i, m in enumerate(masses) if signOf(m) > 0)
        return frozenset(i + 1 for i, m in enumerate(masses) if m > G_TAU_CHARGE)

    def distribution(self, total, parameters=()):
        masses, _ = self.at(parameters)
        return MassDistribution(tuple(masses), total)

    def contains(self, masses, tol=1e-9):
        """Whether the given mass vector belongs to this result (its family's closure for families)."""
        if self.kind == RESULT_NONE:
            return False
        masses = tuple(masses)
        exact = self.exact and all(isinstance(m, Fraction) for m in masses)
        if self.kind == RESULT_POINT:
            if exact:
                return all(signOf(a - b) == 0 for a, b in zip(masses, self.masses))
            return all(abs(float(a) - float(b)) <= tol for a, b in zip(masses, self.masses))

        rows = [[direction[i] for direction in self.basis] for i in range(self.n)]
        rhs = [masses[i] - self.basepoint[i] for i in range(self.n)]
        if exact:
            solution = solveLinearSystem(rows, rhs, exact=True)
            if solution.kind == NONE:
                return False
            parameters = solution.basepoint
            return all(signOf(offset + dot(row, parameters)) >= 0 for row, offset in self.constraints)

        # least squares, since a float point only approximately lies on the family
        a = np.array([[float(v) for v in row] for row in rows])
        b = np.array([float(v) for v in rhs])
        parameters, *_ = np.linalg.lstsq(a, b, rcond=None)
        if np.max(np.abs(a @ parameters - b)) > tol:
            return False
        return all(float(offset) + float(np.dot([float(v) for v in row], parameters)) >= -tol
                   for row, offset in self.constraints)


######################################
## def solveAffineBySupports()      ##
######################################
def solveAffineBySupports(game, tau=G_TAU_EQ, nMax=G_SUPPORT_N_MAX):
    """All equilibria of an affine game by enumerating supports

    For every nonempty support S the system {C_i(x) = c for i in S, x_j = 0 off S,
    sum x = r} is solved by rank-revealing elimination. Isolated solutions with
    x_S > 0 and C_j >= c off S are equilibria; singular systems give families whose
    feasible parameter polytope is computed exactly.

    Args:
        game (Game): affine graphical game
        tau (float): float-mode slack on the off-support cost condition
        nMax (int): refuse games with more vertices (2^n supports)

    Returns:
        list of SolveResult: ordered by support bitmask
    """
    requireAffine(game, "support enumeration")
    if game.n > nMax:
        raise ProblemTooLargeError(f"support enumeration is limited to n <= {nMax}, game has {game.n}")
    intercepts, weights = affineCoefficients(game)
    results = []
    for mask in range(1, 1 << game.n):
        support = [i for i in range(game.n) if mask >> i & 1]
        result = supportSolution(game, intercepts, weights, support, tau=tau, requireOutside=True)
        if result is not None:
            results.append(result)
    logger.info("support enumeration on %s: %s equilibria or families", game.name or f"n={game.n}", len(results))
    return results


def supportSolution(game, intercepts, weights, support, tau=G_TAU_EQ, requireOutside=True, method="supports"):
    """Solves one support system; returns a SolveResult or None when nothing valid lives on this support.

    With requireOutside=False only nonnegativity is imposed, which is what the
    KKT search of the social optimum needs.
    """
    n = game.n
    exact = game.exact
    zero = Fraction(0) if exact else 0.0
    size = len(support)

    rows = []
    rhs = []
    for i in support:
        rows.append([weights[j][i] for j in support] + [-1])
        rhs.append(-intercepts[i])
    rows.append([1] * size + [0])
    rhs.append(game.r)
    if not exact:
        rows = [[float(v) for v in row] for row in rows]
        rhs = [float(v) for v in rhs]
    solution = solveLinearSystem(rows, rhs, exact)
    if solution.kind == NONE:
        return None

    def lift(vector):
        full = [zero] * (n + 1)
        for k, s in enumerate(support):
            full[s] = vector[k]
        full[n] = vector[size]
        return tuple(full)

    basepoint = lift(solution.basepoint)
    basis = tuple(lift(v) for v in solution.basis)

    #region constraints on the family parameters
    constraints = []
    for s in support:
        constraints.append((tuple(v[s] for v in basis), basepoint[s]))
    if requireOutside:
        slack = 0 if exact else tau
        for j in range(n):
            if j in support:
                continue
            offset = intercepts[j] + sum((weights[s][j] * basepoint[s] for s in support), zero) - basepoint[n]
            row = tuple(sum((weights[s][j] * v[s] for s in support), zero) - v[n] for v in basis)
            constraints.append((row, offset + slack))
    #endregion

    vertices = polytopeVertices(constraints, len(basis), exact)
    if not vertices:
        return None

    kind = RESULT_FAMILY if basis else RESULT_POINT
    result = SolveResult(kind, n, basepoint, basis, tuple(constraints), tuple(vertices), exact, method)

    # the relative interior must charge the whole support, otherwise a smaller support owns it
    masses, _ = result.at(result.centroidParameters())
    threshold = 0 if exact else G_TAU_CHARGE
    if any(not masses[s] > threshold for s in support):
        return None
    if kind == RESULT_FAMILY:
        logger.debug("support %s: %s-parameter family", [s + 1 for s in support], len(basis))
    return result


def isUniformCost(game, masses, tol=G_TAU_EQ):
    """Every vertex, charged or not, pays the same cost."""
    costs = rawCosts(game, masses)
    exact = game.exact and all(isinstance(m, Fraction) for m in masses)
    slack = 0 if exact else tol
    return all(signOf(c - costs[0], slack) == 0 for c in costs)
