# Alpha-uniform games on named graph families, their uniform-cost linear systems,
# explicit equilibria for paths, cycles, complete bipartite graphs and stars, the
# necessary conditions every equilibrium satisfies, and determinant scans.
import logging
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
import numpy as np
import pandas as pd
import sympy as spy

from nbg_toolkit.equilibrium import (
    RESULT_FAMILY,
    RESULT_NONE,
    RESULT_POINT,
    SolveResult,
    isUniformCost,
    solveAffineBySupports,
)
from nbg_toolkit.errors import InvalidParameterError, UnsupportedGameError
from nbg_toolkit.game_core import (
    CLASS_ALPHA_UNIFORM,
    Game,
    InfluenceMatrix,
    VertexCostFn,
    classConditions,
    requireGraphical,
)
from nbg_toolkit.utils.linear_systems import (
    FAMILY,
    NONE,
    determinant,
    polytopeVertices,
    signOf,
    solveLinearSystem,
)
from nbg_toolkit.utils.number_helpers import formatCompact, parseNumber, toSympy

logger = logging.getLogger(__name__)

PATH = "path"
CYCLE = "cycle"
COMPLETE_BIPARTITE = "complete_bipartite"
STAR = "star"
GENERAL = "general"
FAMILIES = [PATH, CYCLE, COMPLETE_BIPARTITE, STAR]

CLAUSE_BOUND = "bound"
CLAUSE_EQUALITY = "equality"

ALPHA_SYMBOL = spy.Symbol("alpha")


##########################
## graph families       ##
##########################
def familyGraph(family, n=None, p=None, q=None):
    """networkx graph of a named family with vertices 1..n

    Complete bipartite graphs put side p on 1..p and side q on p+1..p+q; the star
    on n vertices is K_{n-1,1}, centre n.
    """
    if family == PATH:
        _requireCount(n, 1, "path")
        graph = nx.path_graph(n)
    elif family == CYCLE:
        _requireCount(n, 3, "cycle")
        graph = nx.cycle_graph(n)
    elif family == COMPLETE_BIPARTITE:
        _requireCount(q, 1, "complete bipartite side q")
        _requireCount(p, q, "complete bipartite side p (p >= q)")
        graph = nx.complete_bipartite_graph(p, q)
    elif family == STAR:
        _requireCount(n, 2, "star")
        graph = nx.complete_bipartite_graph(n - 1, 1)
    else:
        raise InvalidParameterError(f"unknown graph family {family!r}, expected one of {', '.join(FAMILIES)}")
    return nx.relabel_nodes(graph, {v: v + 1 for v in graph.nodes})


def _requireCount(value, minimum, what):
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise InvalidParameterError(f"{what} needs an integer of at least {minimum}, got {value!r}")


def gameFromGraph(graph, alpha, r=1, name=""):
    """Alpha-uniform game f_i(t) = t with influence alpha along every edge, both ways."""
    alpha = parseNumber(alpha)
    if alpha < 0:
        raise InvalidParameterError("alpha must be nonnegative")
    n = graph.number_of_nodes()
    influence = InfluenceMatrix.uniform(n, sorted(graph.edges()), alpha)
    costs = [VertexCostFn.affine(1, 0) for _ in range(n)]
    return Game.graphical(n, r, costs, influence, name=name)


def makeFamily(family, alpha, r=1, n=None, p=None, q=None):
    graph = familyGraph(family, n=n, p=p, q=q)
    size = f"{p},{q}" if family == COMPLETE_BIPARTITE else str(n)
    return gameFromGraph(graph, alpha, r, name=f"{family}({size}, alpha={formatCompact(parseNumber(alpha))})")


def requireAlphaUniform(game, operation):
    requireGraphical(game, operation)
    if not classConditions(game)[CLASS_ALPHA_UNIFORM]:
        raise UnsupportedGameError(f"{operation} needs an alpha-uniform game")


def uniformAlpha(game):
    values = game.influence.distinctValues()
    return values[0] if values else game.r * 0


##############################
## class UniformCostSystem  ##
##############################
@dataclass(frozen=True)
class UniformCostSystem:
    """(I + alpha A | -1 ; 1^T | 0) (x, c) = (0, ..., 0, r) and what it admits.

    Coordinates of basepoint and basis are (x_1, ..., x_n, c). Constraints and
    vertices describe where the x-part of a family is nonnegative.
    """
    matrix: object
    rhs: tuple
    determinant: object
    kind: str
    n: int
    basepoint: tuple = ()
    basis: tuple = ()
    constraints: tuple = ()
    vertices: tuple = ()
    nonnegative: bool = False
    exact: bool = True

    @property
    def x(self):
        return self.basepoint[:self.n] if self.kind == RESULT_POINT else None

    @property
    def cost(self):
        return self.basepoint[self.n] if self.kind == RESULT_POINT else None

    def asSolveResult(self):
        if self.kind == RESULT_NONE or not self.nonnegative:
            return SolveResult.none(method="uniform-cost")
        return SolveResult(self.kind, self.n, self.basepoint, self.basis, self.constraints, self.vertices,
                           self.exact, "uniform-cost", "uniform cost", exhaustive=False)


def _systemRows(adjacency, alpha):
    n = len(adjacency)
    rows = []
    for i in range(n):
        row = [1 if i == j else alpha * adjacency[i][j] for j in range(n)]
        rows.append(row + [-1])
    rows.append([1] * n + [0])
    return rows


def pathMatrix(n, alpha):
    """M_{n,alpha} as a sympy Matrix."""
    graph = familyGraph(PATH, n=n)
    return spy.Matrix(_sympyRows(nx.to_numpy_array(graph, nodelist=range(1, n + 1), dtype=int).tolist(), alpha))


def cycleMatrix(n, alpha):
    """M*_{n,alpha}, the cycle counterpart of the path matrix."""
    graph = familyGraph(CYCLE, n=n)
    return spy.Matrix(_sympyRows(nx.to_numpy_array(graph, nodelist=range(1, n + 1), dtype=int).tolist(), alpha))


def _sympyRows(adjacency, alpha):
    alpha = toSympy(alpha)
    return [[toSympy(v) for v in row] for row in _systemRows(adjacency, alpha)]


##########################################
## def uniformCostSystem(adjacency, a)  ##
##########################################
def uniformCostSystem(adjacency, alpha, r=1):
    """Builds and solves the uniform-cost system of an alpha-uniform graph

    Args:
        adjacency (list of lists): symmetric 0/1 adjacency matrix
        alpha (Fraction | sympy number | float): uniform influence; sympy numbers
            such as (sqrt(5) - 1)/2 are kept symbolic
        r (number): total mass

    Returns:
        UniformCostSystem
    """
    n = len(adjacency)
    # quadratic irrationals such as (sqrt(5) - 1)/2 stay symbolic
    symbolic = isinstance(alpha, spy.Basic) and not alpha.is_Rational
    if not symbolic:
        alpha = parseNumber(alpha)
    r = parseNumber(r)
    exact = isinstance(r, Fraction) and (symbolic or isinstance(alpha, Fraction))

    rows = _systemRows([[int(v) for v in row] for row in adjacency], alpha)
    rhs = [0] * n + [r]
    if not exact:
        rows = [[float(v) for v in row] for row in rows]
        rhs = [float(v) for v in rhs]
    matrix = spy.Matrix([[toSympy(v) for v in row] for row in rows])
    det = determinant(rows) if exact else float(np.linalg.det(np.array(rows)))

    solution = solveLinearSystem(rows, rhs, exact)
    if solution.kind == NONE:
        logger.debug("uniform-cost system on %s vertices has no solution", n)
        return UniformCostSystem(matrix, tuple(rhs), det, RESULT_NONE, n, exact=exact)

    basepoint = solution.basepoint
    basis = solution.basis
    constraints = tuple((tuple(v[i] for v in basis), basepoint[i]) for i in range(n))
    vertices = tuple(polytopeVertices(list(constraints), len(basis), exact))
    kind = RESULT_FAMILY if solution.kind == FAMILY else RESULT_POINT
    return UniformCostSystem(matrix, tuple(rhs), det, kind, n, basepoint, basis, constraints, vertices,
                             bool(vertices), exact)


def uniformCostSolve(game, graphKind=GENERAL):
    """Uniform-cost system of an alpha-uniform game

    Args:
        game (Game): alpha-uniform game
        graphKind (string): "path" or "cycle" to insist that the game's graph is
            that family on 1..n, "general" for any graph

    Returns:
        UniformCostSystem
    """
    requireAlphaUniform(game, "uniform-cost solve")
    if not game.exact:
        logger.warning("uniform-cost system of %s solved in floating point", game.name or "the game")
    n = game.n
    adjacency = [[1 if game.influence.value(i, j) else 0 for j in range(n)] for i in range(n)]
    if graphKind in (PATH, CYCLE):
        expected = nx.to_numpy_array(familyGraph(graphKind, n=n), nodelist=range(1, n + 1), dtype=int).tolist()
        if expected != adjacency:
            raise UnsupportedGameError(f"the game's graph is not the {graphKind} 1-2-...-{n}")
    elif graphKind != GENERAL:
        raise InvalidParameterError(f"unknown graph kind {graphKind!r}")
    return uniformCostSystem(adjacency, uniformAlpha(game), game.r)


def pathDeterminant(n, alpha):
    """det M_{n,alpha} for rational alpha = a/b, by Bareiss elimination on b * (first n rows)."""
    _requireCount(n, 2, "path determinant")
    alpha = parseNumber(alpha)
    if not isinstance(alpha, Fraction):
        raise InvalidParameterError("path determinant needs a rational alpha")
    scale = alpha.denominator
    rows = []
    adjacency = nx.to_numpy_array(familyGraph(PATH, n=n), nodelist=range(1, n + 1), dtype=int).tolist()
    for row in _systemRows(adjacency, alpha):
        rows.append([int(v * scale) for v in row])
    # the bordering row of ones stays unscaled
    rows[-1] = [1] * n + [0]
    value = spy.Matrix(rows).det(method="bareiss")
    return Fraction(int(value)) / Fraction(scale) ** n


def pathDeterminantPolynomial(n):
    """det M_{n,alpha} as a factored polynomial in alpha."""
    _requireCount(n, 2, "path determinant")
    matrix = pathMatrix(n, ALPHA_SYMBOL)
    return spy.factor(matrix.det(method="bareiss"))


##########################
## class RuleViolation  ##
##########################
@dataclass(frozen=True)
class RuleViolation:
    rule: int
    vertices: tuple
    detail: str
    # "bound" (alpha below 1/k) or "equality" (alpha = 1/k with a charged neighbour having charged neighbours)
    clause: str = ""


def checkRules(game, x):
    """Necessary conditions of alpha-uniform equilibria that x breaks

    Rule 1: an uncharged vertex has a charged neighbour.
    Rule 2: an uncharged vertex with one charged neighbour needs alpha >= 1.
    Rule 3: an uncharged vertex with k >= 2 charged neighbours needs alpha >= 1/k;
        at alpha = 1/k none of those neighbours may have a charged neighbour.
    Rule 4: vertices with the same neighbourhood carry the same mass.

    Args:
        game (Game): alpha-uniform game
        x (MassDistribution): candidate distribution

    Returns:
        list of RuleViolation: empty does not prove x is an equilibrium
    """
    requireAlphaUniform(game, "rule check")
    alpha = uniformAlpha(game)
    exact = game.exact and x.exact
    tol = 0 if exact else 1e-12
    charged = [x.isCharged(i) for i in range(game.n)]
    neighbours = [set(game.neighbours(i)) for i in range(game.n)]
    violations = []

    for i in range(game.n):
        if charged[i]:
            continue
        chargedNeighbours = sorted(j for j in neighbours[i] if charged[j])
        k = len(chargedNeighbours)
        involved = tuple([i + 1] + [j + 1 for j in chargedNeighbours])
        if k == 0:
            violations.append(RuleViolation(1, (i + 1,), f"vertex {i + 1} is uncharged with no charged neighbour"))
            continue
        rule = 2 if k == 1 else 3
        threshold = 1 / Fraction(k) if exact else 1.0 / k
        if alpha < threshold - tol:
            violations.append(RuleViolation(
                rule, involved,
                f"vertex {i + 1} is uncharged with {k} charged neighbour(s), needs alpha >= {formatCompact(threshold)}",
                CLAUSE_BOUND))
        elif abs(alpha - threshold) <= tol:
            crowded = [j + 1 for j in chargedNeighbours if any(charged[m] for m in neighbours[j])]
            if crowded:
                violations.append(RuleViolation(
                    rule, involved,
                    f"alpha = 1/{k} at vertex {i + 1} but charged neighbour(s) {crowded} have charged neighbours",
                    CLAUSE_EQUALITY))

    #region rule 4
    for i in range(game.n):
        for j in range(i + 1, game.n):
            if neighbours[i] != neighbours[j] or j in neighbours[i]:
                continue
            if signOf(x[i] - x[j], tol) != 0:
                violations.append(RuleViolation(
                    4, (i + 1, j + 1),
                    f"vertices {i + 1} and {j + 1} share their neighbourhood but carry "
                    f"{formatCompact(x[i])} and {formatCompact(x[j])}"))
    #endregion
    return violations


###########################
## closed-form results   ##
###########################
def _point(masses, cost, condition, exhaustive=True):
    return SolveResult.point(masses, cost, exact=True, method="closed-form", condition=condition,
                             exhaustive=exhaustive)


def _family(basepoint, basis, condition, exhaustive=True):
    n = len(basepoint) - 1
    constraints = []
    for i in range(n):
        row = tuple(direction[i] for direction in basis)
        if any(row) or basepoint[i] != 0:
            constraints.append((row, basepoint[i]))
    vertices = polytopeVertices(constraints, len(basis), exact=True)
    return SolveResult(RESULT_FAMILY, n, tuple(basepoint), tuple(tuple(v) for v in basis), tuple(constraints),
                       tuple(vertices), True, "closed-form", condition, exhaustive)


def _requireAlpha(alpha, allowed):
    alpha = parseNumber(alpha)
    if alpha not in allowed:
        raise InvalidParameterError(f"closed forms exist for alpha in {{{', '.join(formatCompact(a) for a in allowed)}}}")
    return alpha


HALF = Fraction(1, 2)
ONE = Fraction(1)


def pathClosedForm(n, alpha, r=1):
    """Explicit equilibria of the alpha-uniform path P_n for alpha in {1/2, 1}.

    alpha = 1/2 lists every equilibrium. alpha = 1 lists the uniform-cost ones
    only, marked non-exhaustive.
    """
    _requireCount(n, 1, "path")
    alpha = _requireAlpha(alpha, (HALF, ONE))
    r = parseNumber(r)
    zero = Fraction(0)
    if n == 1:
        return [_point((r,), r, "single vertex")]

    if alpha == HALF:
        if n % 2 == 1:
            share = 2 * r / (n + 1)
            masses = tuple(share if i % 2 == 0 else zero for i in range(n))
            return [_point(masses, share, "odd n, alternating")]
        q = n // 2
        denominator = q * (q + 1)
        masses = []
        for k in range(q):
            masses.append(r * Fraction(q - k, denominator))
            masses.append(r * Fraction(k + 1, denominator))
        return [_point(tuple(masses), r * Fraction(2 * q + 1, 2 * denominator), "even n")]

    # alpha = 1: pattern (a, b, 0) repeated with a + b = c
    blocks = n // 3
    if n % 3 == 0:
        share = r / blocks
        masses = tuple(share if i % 3 == 1 else zero for i in range(n))
        return [_point(masses, share, "n = 3k", exhaustive=False)]
    if n % 3 == 1:
        share = r / (blocks + 1)
        masses = tuple(share if i % 3 == 0 else zero for i in range(n))
        return [_point(masses, share, "n = 3k+1", exhaustive=False)]
    share = r / (blocks + 1)
    # parameter t is the mass of the second vertex of each block
    basepoint = [share if i % 3 == 0 else zero for i in range(n)] + [share]
    direction = [Fraction(-1) if i % 3 == 0 else (ONE if i % 3 == 1 else zero) for i in range(n)] + [zero]
    return [_family(basepoint, [direction], "n = 3k+2, one-parameter family", exhaustive=False)]


def cycleClosedForm(n, alpha, r=1):
    """Explicit equilibria of the alpha-uniform cycle C_n for alpha in {1/2, 1}.

    The uniform distribution is always among them. alpha = 1 lists the
    uniform-cost equilibria only.
    """
    _requireCount(n, 3, "cycle")
    alpha = _requireAlpha(alpha, (HALF, ONE))
    r = parseNumber(r)
    zero = Fraction(0)
    share = r / n

    if alpha == HALF:
        if n % 2 == 1:
            return [_point((share,) * n, 2 * share, "odd n, uniform")]
        # x_1 + x_2 = 2r/n, alternating; parameter t is the mass of odd vertices
        basepoint = [zero if i % 2 == 0 else 2 * share for i in range(n)] + [2 * share]
        direction = [ONE if i % 2 == 0 else Fraction(-1) for i in range(n)] + [zero]
        return [_family(basepoint, [direction], "even n, alternating family")]

    if n % 3 != 0:
        return [_point((share,) * n, 3 * share, "uniform", exhaustive=False)]
    # (a, b, d) repeated with a + b + d = 3r/n; parameters a and b
    third = 3 * share
    basepoint = [third if i % 3 == 2 else zero for i in range(n)] + [third]
    first = [ONE if i % 3 == 0 else (Fraction(-1) if i % 3 == 2 else zero) for i in range(n)] + [zero]
    second = [ONE if i % 3 == 1 else (Fraction(-1) if i % 3 == 2 else zero) for i in range(n)] + [zero]
    return [_family(basepoint, [first, second], "n = 3k, two-parameter family", exhaustive=False)]


def bipartiteClosedForm(p, q, alpha, r=1):
    """Every equilibrium of the alpha-uniform K_{p,q} (side p on 1..p, side q on p+1..p+q)

    Vertices on one side share their neighbourhood and so their mass: a on side p,
    b on side q. With D = p + q - 2 alpha p q the candidates are
        interior   a = (1 - alpha q)/D, b = (1 - alpha p)/D, cost (1 - alpha^2 p q)/D
        a = 0      b = 1/q when alpha >= 1/q
        b = 0      a = 1/p when alpha >= 1/p
        p = q, alpha = 1/p   the segment a + b = 1/p, cost 1/p
    all scaled by r.

    Returns:
        list of SolveResult: each tagged with its condition
    """
    _requireCount(q, 1, "complete bipartite side q")
    _requireCount(p, q, "complete bipartite side p (p >= q)")
    alpha = parseNumber(alpha)
    if not isinstance(alpha, Fraction) or alpha < 0:
        raise InvalidParameterError("bipartite closed form needs a nonnegative rational alpha")
    r = parseNumber(r)
    zero = Fraction(0)

    def spread(a, b):
        return tuple([a] * p + [b] * q)

    if p == q and alpha == Fraction(1, p):
        basepoint = list(spread(r / p, zero)) + [r / p]
        direction = list(spread(Fraction(-1), ONE)) + [zero]
        return [_family(basepoint, [direction], "p = q and alpha = 1/p, a + b = 1/p")]

    results = []
    d = p + q - 2 * alpha * p * q
    if d != 0:
        a = r * (1 - alpha * q) / d
        b = r * (1 - alpha * p) / d
        if a > 0 and b > 0:
            results.append(_point(spread(a, b), r * (1 - alpha * alpha * p * q) / d, "interior"))
    if alpha >= Fraction(1, q):
        results.append(_point(spread(zero, r / q), r / q, "a = 0 since alpha >= 1/q"))
    if alpha >= Fraction(1, p):
        results.append(_point(spread(r / p, zero), r / p, "b = 0 since alpha >= 1/p"))
    return results


def starClosedForm(n, alpha, r=1):
    """Equilibria of the alpha-uniform star on n vertices, leaves 1..n-1 and centre n."""
    _requireCount(n, 2, "star")
    return bipartiteClosedForm(n - 1, 1, alpha, r)


##################################
## oracle comparison and scans  ##
##################################
def compareWithSupports(game, closedFormResults, samples=5):
    """Discrepancies between closed-form results and support enumeration on the same game

    Every sampled closed-form point must lie in some solver result. When every
    closed-form result is exhaustive, every sampled solver point must lie in some
    closed-form result; otherwise only the solver's uniform-cost points are
    required to.

    Returns:
        list of strings: empty when the two agree
    """
    solved = solveAffineBySupports(game)
    exhaustive = all(result.exhaustive for result in closedFormResults)
    discrepancies = []

    for result in closedFormResults:
        for masses in result.samplePoints(samples):
            if not any(s.contains(masses) for s in solved):
                discrepancies.append(f"closed-form point ({', '.join(formatCompact(m) for m in masses)}) "
                                     f"[{result.condition}] is not an enumerated equilibrium")

    for result in solved:
        for masses in result.samplePoints(samples):
            if not exhaustive and not isUniformCost(game, masses):
                continue
            if not any(c.contains(masses) for c in closedFormResults):
                discrepancies.append(f"enumerated equilibrium ({', '.join(formatCompact(m) for m in masses)}) "
                                     "is missing from the closed form")
    return discrepancies


def conjectureScan(family, nRange, alphaGrid, r=1):
    """Exact determinant and solution check of the uniform-cost system over a grid

    Args:
        family (string): "path" or "cycle"
        nRange (iterable of int): vertex counts
        alphaGrid (iterable): rational alpha values, normally inside [0, 1/2)
        r (number): total mass

    Returns:
        pandas.DataFrame: n, alpha (p/q), det (p/q), unique, nonneg
    """
    if family not in (PATH, CYCLE):
        raise InvalidParameterError("determinant scans cover paths and cycles")
    rows = []
    for n in nRange:
        adjacency = nx.to_numpy_array(familyGraph(family, n=n), nodelist=range(1, n + 1), dtype=int).tolist()
        for alpha in alphaGrid:
            alpha = parseNumber(alpha)
            system = uniformCostSystem(adjacency, alpha, r)
            unique = system.kind == RESULT_POINT
            rows.append({
                "n": n,
                "alpha": formatCompact(alpha),
                "det": formatCompact(system.determinant),
                "unique": unique,
                "nonneg": unique and system.nonnegative,
            })
    table = pd.DataFrame(rows, columns=["n", "alpha", "det", "unique", "nonneg"])
    logger.info("%s scan: %s cells, %s counterexample candidates", family, len(table), len(scanCounterexamples(table)))
    return table


def scanCounterexamples(table):
    """Rows of a scan with a zero determinant, no unique solution or a negative entry."""
    if table.empty:
        return table
    mask = (table["det"] == "0") | ~table["unique"].astype(bool) | ~table["nonneg"].astype(bool)
    return table[mask]
