# Games, mass distributions, cost evaluation and class recognition.
#
# A game is either General (one opaque cost evaluator per vertex, taking the whole
# distribution) or Graphical, where C_i(x) = f_i(x_i) + sum_j alpha_{j,i} x_j.
# Everything is exact (Fractions) when every input is rational and drops to float
# as soon as one input is a float.
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

import networkx as nx
import numpy as np
from scipy.integrate import quad

from nbg_toolkit.errors import (
    GameFormatError,
    InvalidDistributionError,
    InvalidGameError,
    UnsupportedGameError,
)
from nbg_toolkit.settings import G_OPAQUE_GRID_POINTS, G_TAU_CHARGE, G_TAU_MASS
from nbg_toolkit.utils.number_helpers import formatCompact, parseNumber, unifyNumbers

logger = logging.getLogger(__name__)

KIND_GENERAL = "general"
KIND_GRAPHICAL = "graphical"

CLASS_GENERAL = "general"
CLASS_GRAPHICAL = "graphical"
CLASS_SYMMETRIC_GRAPHICAL = "symmetric-graphical"
CLASS_AFFINE = "affine"
CLASS_LINEAR = "linear"
CLASS_NORMAL = "normal"
CLASS_ALPHA_UNIFORM = "alpha-uniform"

# Each class contains the ones after it
CLASS_LADDER = [
    CLASS_GENERAL,
    CLASS_GRAPHICAL,
    CLASS_AFFINE,
    CLASS_LINEAR,
    CLASS_NORMAL,
    CLASS_ALPHA_UNIFORM,
]

FORM_CONSTANT = "const"
FORM_AFFINE = "affine"
FORM_POLYNOMIAL = "poly"
FORM_OPAQUE = "opaque"


########################
## class VertexCostFn ##
########################
# f_i in the graphical decomposition. Coefficients are stored lowest degree first
# for every closed form; Opaque wraps a callable.
@dataclass(frozen=True)
class VertexCostFn:
    form: str
    coeffs: tuple = ()
    evaluator: Callable = None
    declaredMonotone: bool = True

    def __post_init__(self):
        if self.form == FORM_OPAQUE:
            if not callable(self.evaluator):
                raise InvalidGameError("opaque vertex cost needs a callable evaluator")
            return
        if self.form not in (FORM_CONSTANT, FORM_AFFINE, FORM_POLYNOMIAL):
            raise InvalidGameError(f"unknown vertex cost form {self.form!r}")
        if not self.coeffs:
            raise InvalidGameError("vertex cost needs at least one coefficient")
        coeffs, _ = unifyNumbers(self.coeffs)
        for c in coeffs:
            if c < 0:
                raise InvalidGameError(f"vertex cost coefficients must be nonnegative, got {formatCompact(c)}")
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def constant(cls, b):
        return cls(FORM_CONSTANT, (b,))

    @classmethod
    def affine(cls, a, b=0):
        # f(t) = a t + b
        return cls(FORM_AFFINE, (b, a))

    @classmethod
    def polynomial(cls, coeffs):
        return cls(FORM_POLYNOMIAL, tuple(coeffs))

    @classmethod
    def opaque(cls, evaluator, declaredMonotone=True):
        return cls(FORM_OPAQUE, (), evaluator, declaredMonotone)

    @property
    def exact(self):
        return self.form != FORM_OPAQUE and all(isinstance(c, Fraction) for c in self.coeffs)

    @property
    def degree(self):
        if self.form == FORM_OPAQUE:
            return None
        degree = len(self.coeffs) - 1
        while degree > 0 and self.coeffs[degree] == 0:
            degree -= 1
        return degree

    @property
    def isAffine(self):
        return self.form != FORM_OPAQUE and self.degree <= 1

    @property
    def intercept(self):
        return self.coeffs[0]

    @property
    def slope(self):
        return self.coeffs[1] if len(self.coeffs) > 1 else self.coeffs[0] * 0

    def isIdenticallyZero(self):
        return self.form != FORM_OPAQUE and all(c == 0 for c in self.coeffs)

    def __call__(self, t):
        if self.form == FORM_OPAQUE:
            return self.evaluator(t)
        # Horner
        value = self.coeffs[-1] * 0
        for c in reversed(self.coeffs):
            value = value * t + c
        return value

    def derivative(self, t):
        if self.form == FORM_OPAQUE:
            h = 1e-7
            return (self.evaluator(t + h) - self.evaluator(max(t - h, 0.0))) / (t + h - max(t - h, 0.0))
        value = self.coeffs[-1] * 0
        for k in range(len(self.coeffs) - 1, 0, -1):
            value = value * t + k * self.coeffs[k]
        return value

    def integral(self, t):
        """Integral of f from 0 to t, closed form except for opaque evaluators."""
        if self.form == FORM_OPAQUE:
            value, _ = quad(lambda s: float(self.evaluator(s)), 0.0, float(t), epsabs=1e-12, epsrel=1e-12)
            return value
        value = self.coeffs[-1] * 0
        for k in range(len(self.coeffs) - 1, -1, -1):
            value = value * t + self.coeffs[k] / (k + 1)
        return value * t

    def asFloat(self):
        if self.form == FORM_OPAQUE:
            return self
        return VertexCostFn(self.form, tuple(float(c) for c in self.coeffs))

    def toDict(self):
        if self.form == FORM_OPAQUE:
            raise UnsupportedGameError("opaque vertex costs cannot be written to a game file")
        if self.form == FORM_CONSTANT:
            return {"type": "const", "b": _jsonNumber(self.coeffs[0])}
        if self.form == FORM_AFFINE:
            return {"type": "affine", "a": _jsonNumber(self.slope), "b": _jsonNumber(self.intercept)}
        return {"type": "poly", "coeffs": [_jsonNumber(c) for c in self.coeffs]}


###########################
## class InfluenceMatrix ##
###########################
@dataclass(frozen=True)
class InfluenceMatrix:
    """Sparse off-diagonal influences alpha_{i,j} > 0, keyed by 0-indexed (i, j)."""
    n: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        values, _ = unifyNumbers(list(self.entries.values()))
        cleaned = {}
        for (i, j), value in zip(self.entries.keys(), values):
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise InvalidGameError(f"influence ({i + 1}, {j + 1}) is outside 1..{self.n}")
            if i == j:
                raise InvalidGameError(f"influence of vertex {i + 1} on itself belongs in its vertex cost")
            if value < 0:
                raise InvalidGameError(f"influence ({i + 1}, {j + 1}) is negative")
            if value > 0:
                cleaned[(i, j)] = value
        object.__setattr__(self, "entries", cleaned)

        # in-arcs per vertex, used by every cost evaluation
        inArcs = [[] for _ in range(self.n)]
        for (i, j), value in sorted(cleaned.items()):
            inArcs[j].append((i, value))
        object.__setattr__(self, "_inArcs", tuple(tuple(arcs) for arcs in inArcs))

    @classmethod
    def fromTriples(cls, n, triples, symmetric=False):
        """Builds the matrix from 1-indexed (i, j, alpha_{i,j}) triples

        Args:
            n (int): vertex count
            triples (iterable): (i, j, value) with 1 <= i, j <= n
            symmetric (bool): also store (j, i) for each triple

        Returns:
            InfluenceMatrix
        """
        entries = {}
        for triple in triples:
            if len(triple) != 3:
                raise InvalidGameError(f"influence entry {triple!r} should be [i, j, value]")
            i, j, value = triple
            pairs = [(int(i) - 1, int(j) - 1)]
            if symmetric:
                pairs.append((int(j) - 1, int(i) - 1))
            for pair in pairs:
                if pair in entries and parseNumber(entries[pair]) != parseNumber(value):
                    raise InvalidGameError(f"conflicting influence values for ({pair[0] + 1}, {pair[1] + 1})")
                entries[pair] = value
        return cls(n, entries)

    @classmethod
    def uniform(cls, n, pairs, alpha):
        # same alpha on every 1-indexed pair, both directions
        return cls.fromTriples(n, [(i, j, alpha) for i, j in pairs], symmetric=True)

    @property
    def exact(self):
        return all(isinstance(v, Fraction) for v in self.entries.values())

    @property
    def symmetric(self):
        return all(self.entries.get((j, i)) == value for (i, j), value in self.entries.items())

    def value(self, i, j):
        return self.entries.get((i, j), 0)

    def inArcs(self, i):
        return self._inArcs[i]

    def arcs(self):
        return [(i + 1, j + 1, value) for (i, j), value in sorted(self.entries.items())]

    def distinctValues(self):
        return sorted(set(self.entries.values()))

    def dense(self):
        matrix = np.zeros((self.n, self.n))
        for (i, j), value in self.entries.items():
            matrix[i, j] = float(value)
        return matrix

    def asFloat(self):
        return InfluenceMatrix(self.n, {k: float(v) for k, v in self.entries.items()})


############################
## class MassDistribution ##
############################
@dataclass(frozen=True)
class MassDistribution:
    masses: tuple
    total: object

    def __post_init__(self):
        values, exact = unifyNumbers(list(self.masses) + [self.total])
        masses, total = tuple(values[:-1]), values[-1]
        if not masses:
            raise InvalidDistributionError("a distribution needs at least one vertex")
        if total <= 0:
            raise InvalidDistributionError("total mass must be positive")
        for i, m in enumerate(masses):
            if m < 0:
                raise InvalidDistributionError(f"vertex {i + 1} has negative mass {formatCompact(m)}")
        difference = sum(masses) - total
        if exact and difference != 0:
            raise InvalidDistributionError(
                f"masses add up to {formatCompact(sum(masses))}, expected {formatCompact(total)}")
        if not exact and abs(difference) > G_TAU_MASS * max(1.0, abs(total)):
            raise InvalidDistributionError(f"masses add up to {sum(masses):.12g}, expected {total:.12g}")
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "total", total)

    @classmethod
    def of(cls, values, total=None):
        values = list(values)
        if total is None:
            parsed, _ = unifyNumbers(values)
            total = sum(parsed)
        return cls(tuple(values), total)

    @classmethod
    def uniform(cls, n, total=1):
        total = parseNumber(total)
        return cls(tuple(total / n for _ in range(n)), total)

    @classmethod
    def onVertices(cls, n, vertices, total=1):
        """Spreads total evenly over the given 1-indexed vertices."""
        vertices = set(vertices)
        if not vertices:
            raise InvalidDistributionError("cannot spread mass over an empty vertex set")
        total = parseNumber(total)
        share = total / len(vertices)
        return cls(tuple(share if i + 1 in vertices else share * 0 for i in range(n)), total)

    @property
    def n(self):
        return len(self.masses)

    @property
    def exact(self):
        return isinstance(self.total, Fraction)

    def __len__(self):
        return len(self.masses)

    def __getitem__(self, i):
        return self.masses[i]

    def __iter__(self):
        return iter(self.masses)

    def isCharged(self, i, tauCharge=G_TAU_CHARGE):
        if self.exact:
            return self.masses[i] > 0
        return self.masses[i] > tauCharge

    def support(self, tauCharge=G_TAU_CHARGE):
        return frozenset(i + 1 for i in range(self.n) if self.isCharged(i, tauCharge))

    def asArray(self):
        return np.array([float(m) for m in self.masses])

    def asFloat(self):
        return MassDistribution(tuple(float(m) for m in self.masses), float(self.total))


#################
## class Game  ##
#################
@dataclass(frozen=True)
class Game:
    n: int
    r: object
    kind: str
    vertexCosts: tuple = ()
    influence: InfluenceMatrix = None
    costFunctions: tuple = ()
    exact: bool = True
    name: str = ""

    @classmethod
    def graphical(cls, n, r, vertexCosts, influence, name="", strictPositivity=False):
        """Builds a graphical game C_i(x) = f_i(x_i) + sum_j alpha_{j,i} x_j

        Args:
            n (int): vertex count
            r (number): total mass
            vertexCosts (sequence of VertexCostFn): f_1 .. f_n
            influence (InfluenceMatrix): off-diagonal coefficients
            name (string): label used in reports
            strictPositivity (bool): reject an f that vanishes identically instead
                of only logging a warning

        Returns:
            Game: exact when r, every coefficient and every influence is rational
        """
        vertexCosts = tuple(vertexCosts)
        if n < 1:
            raise InvalidGameError("a game needs at least one vertex")
        if len(vertexCosts) != n:
            raise InvalidGameError(f"expected {n} vertex costs, got {len(vertexCosts)}")
        if influence is None:
            influence = InfluenceMatrix(n)
        if influence.n != n:
            raise InvalidGameError(f"influence matrix is for {influence.n} vertices, game has {n}")
        r = _positiveTotal(r)

        for i, fn in enumerate(vertexCosts):
            if fn.isIdenticallyZero():
                if strictPositivity:
                    raise InvalidGameError(f"vertex cost f_{i + 1} is identically zero")
                logger.warning("vertex cost f_%s is identically zero; accepted as a degenerate form", i + 1)
            if fn.form == FORM_OPAQUE:
                _spotCheckOpaque(fn, i, r)

        exact = isinstance(r, Fraction) and influence.exact and all(fn.exact for fn in vertexCosts)
        if not exact:
            r = float(r)
            vertexCosts = tuple(fn.asFloat() for fn in vertexCosts)
            influence = influence.asFloat()
        return cls(n, r, KIND_GRAPHICAL, vertexCosts, influence, (), exact, name)

    @classmethod
    def general(cls, n, r, costFunctions, name="", exact=None):
        """Builds a general game from one evaluator per vertex; each gets the tuple of masses."""
        costFunctions = tuple(costFunctions)
        if n < 1:
            raise InvalidGameError("a game needs at least one vertex")
        if len(costFunctions) != n or not all(callable(c) for c in costFunctions):
            raise InvalidGameError(f"expected {n} callable cost evaluators")
        r = _positiveTotal(r)
        if exact is None:
            exact = isinstance(r, Fraction)
        if not exact:
            r = float(r)
        return cls(n, r, KIND_GENERAL, (), None, costFunctions, exact, name)

    @property
    def isGraphical(self):
        return self.kind == KIND_GRAPHICAL

    @property
    def symmetric(self):
        return self.isGraphical and self.influence.symmetric

    def neighbours(self, i):
        # 0-indexed in-neighbours of i
        return [j for j, _ in self.influence.inArcs(i)]


def _positiveTotal(r):
    r = parseNumber(r)
    if r <= 0:
        raise InvalidGameError("total mass r must be positive")
    return r


def _spotCheckOpaque(fn, index, r):
    # monotone and positive on a grid; warn only, discontinuous games are legitimate inputs
    grid = np.linspace(0.0, float(r), G_OPAQUE_GRID_POINTS)
    values = np.array([float(fn(t)) for t in grid])
    if fn.declaredMonotone and np.any(np.diff(values) < -1e-12):
        logger.warning("opaque vertex cost f_%s decreases somewhere on [0, r]", index + 1)
    if np.any(values[1:] <= 0):
        logger.warning("opaque vertex cost f_%s is not positive on (0, r]", index + 1)


########################
## cost evaluation    ##
########################
def rawCosts(game, masses):
    """Cost vector at any mass vector, without distribution checks (used by solvers and finite differences)."""
    if game.kind == KIND_GENERAL:
        point = tuple(masses)
        return [c(point) for c in game.costFunctions]
    costs = []
    for i in range(game.n):
        value = game.vertexCosts[i](masses[i])
        for j, alpha in game.influence.inArcs(i):
            value = value + alpha * masses[j]
        costs.append(value)
    return costs


def checkDistribution(game, x):
    if not isinstance(x, MassDistribution):
        raise InvalidDistributionError("expected a MassDistribution")
    if x.n != game.n:
        raise InvalidDistributionError(f"distribution has {x.n} entries, game has {game.n} vertices")
    if game.exact and x.exact:
        if x.total != game.r:
            raise InvalidDistributionError(
                f"distribution total {formatCompact(x.total)} differs from r = {formatCompact(game.r)}")
    elif abs(float(x.total) - float(game.r)) > G_TAU_MASS * max(1.0, float(game.r)):
        raise InvalidDistributionError(f"distribution total {float(x.total):.12g} differs from r = {float(game.r):.12g}")


def costVector(game, x):
    """(C_1(x), ..., C_n(x)) for a valid distribution x."""
    checkDistribution(game, x)
    return rawCosts(game, x.masses)


def denseCostVector(game, x):
    # independent float evaluator: f_i(x_i) + (A^T x)_i
    requireGraphical(game, "dense cost evaluation")
    masses = np.array([float(m) for m in x])
    own = np.array([float(game.vertexCosts[i](float(masses[i]))) for i in range(game.n)])
    return own + game.influence.dense().T @ masses


def requireGraphical(game, operation):
    if not game.isGraphical:
        raise UnsupportedGameError(f"{operation} needs a graphical game, {game.name or 'this game'} is general")


def requireSymmetric(game, operation):
    requireGraphical(game, operation)
    if not game.symmetric:
        raise UnsupportedGameError(f"{operation} needs a symmetric influence matrix; a non-symmetric game has no potential")


def isAffine(game):
    return game.isGraphical and all(fn.isAffine for fn in game.vertexCosts)


def requireAffine(game, operation):
    if not isAffine(game):
        raise UnsupportedGameError(f"{operation} needs an affine game (every f_i of degree at most 1)")


def affineCoefficients(game):
    """Intercepts b and weights W of an affine game, C_i(x) = b_i + sum_j W[j][i] x_j."""
    requireAffine(game, "affine decomposition")
    intercepts = [fn.intercept for fn in game.vertexCosts]
    zero = game.r * 0
    weights = [[zero] * game.n for _ in range(game.n)]
    for i, fn in enumerate(game.vertexCosts):
        weights[i][i] = fn.slope
    for (i, j), value in game.influence.entries.items():
        weights[i][j] = value
    return intercepts, weights


##########################
## class recognition    ##
##########################
@dataclass(frozen=True)
class GameClass:
    label: str
    symmetric: bool = False
    alpha: object = None


def classConditions(game):
    """Truth of every class's defining condition, independent of the others."""
    graphical = game.isGraphical
    affine = graphical and isAffine(game)
    linear = affine and all(fn.intercept == 0 for fn in game.vertexCosts)
    normal = linear and all(fn.slope == 1 for fn in game.vertexCosts)
    uniform = normal and len(game.influence.distinctValues()) <= 1
    return {
        CLASS_GENERAL: True,
        CLASS_GRAPHICAL: graphical,
        CLASS_SYMMETRIC_GRAPHICAL: graphical and game.symmetric,
        CLASS_AFFINE: affine,
        CLASS_LINEAR: linear,
        CLASS_NORMAL: normal,
        CLASS_ALPHA_UNIFORM: uniform,
    }


def classify(game):
    """Most specific class label; symmetric graphical games that are not affine report symmetric-graphical."""
    conditions = classConditions(game)
    label = CLASS_GENERAL
    for candidate in CLASS_LADDER:
        if conditions[candidate]:
            label = candidate
    if label == CLASS_GRAPHICAL and conditions[CLASS_SYMMETRIC_GRAPHICAL]:
        label = CLASS_SYMMETRIC_GRAPHICAL

    alpha = None
    if label == CLASS_ALPHA_UNIFORM:
        values = game.influence.distinctValues()
        alpha = values[0] if values else None
    return GameClass(label, game.symmetric, alpha)


def underlyingGraph(game):
    """networkx graph on vertices 1..n: Graph when symmetric, DiGraph otherwise."""
    requireGraphical(game, "underlying graph")
    graph = nx.Graph() if game.symmetric else nx.DiGraph()
    graph.add_nodes_from(range(1, game.n + 1))
    for i, j, value in game.influence.arcs():
        graph.add_edge(i, j, alpha=value)
    return graph


########################
## game files         ##
########################
def _jsonNumber(value):
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else formatCompact(value)
    return float(value)


def gameToDict(game):
    requireGraphical(game, "saving a game")
    symmetric = game.symmetric
    alpha = []
    for i, j, value in game.influence.arcs():
        if symmetric and i > j:
            continue
        alpha.append([i, j, _jsonNumber(value)])
    data = {
        "n": game.n,
        "r": _jsonNumber(game.r),
        "costs": [fn.toDict() for fn in game.vertexCosts],
        "alpha": alpha,
        "symmetric": symmetric,
    }
    if game.name:
        data["name"] = game.name
    return data


def _costFromDict(entry, index):
    if not isinstance(entry, dict) or "type" not in entry:
        raise GameFormatError(f"cost {index + 1} must be an object with a 'type'")
    kind = entry["type"]
    try:
        if kind == "const":
            return VertexCostFn.constant(parseNumber(entry["b"]))
        if kind == "affine":
            return VertexCostFn.affine(parseNumber(entry["a"]), parseNumber(entry.get("b", 0)))
        if kind == "poly":
            return VertexCostFn.polynomial([parseNumber(c) for c in entry["coeffs"]])
    except KeyError as missing:
        raise GameFormatError(f"cost {index + 1} of type {kind!r} is missing {missing}") from None
    except ValueError as err:
        raise GameFormatError(f"cost {index + 1}: {err}") from None
    raise GameFormatError(f"cost {index + 1} has unknown type {kind!r}")


def gameFromDict(data):
    if not isinstance(data, dict):
        raise GameFormatError("a game file holds a JSON object")
    for key in ("n", "r", "costs"):
        if key not in data:
            raise GameFormatError(f"game file is missing {key!r}")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise GameFormatError("'n' must be a positive integer")
    costs = data["costs"]
    if not isinstance(costs, list) or len(costs) != n:
        raise GameFormatError(f"'costs' must list exactly {n} vertex costs")
    try:
        r = parseNumber(data["r"])
        triples = [(i, j, parseNumber(v)) for i, j, v in data.get("alpha", [])]
    except (TypeError, ValueError) as err:
        raise GameFormatError(f"bad number in game file: {err}") from None
    vertexCosts = [_costFromDict(entry, index) for index, entry in enumerate(costs)]
    influence = InfluenceMatrix.fromTriples(n, triples, symmetric=bool(data.get("symmetric", False)))
    return Game.graphical(n, r, vertexCosts, influence, name=data.get("name", ""))


def loadGame(path):
    path = Path(path)
    data = json.loads(path.read_text())
    game = gameFromDict(data)
    if not game.name:
        game = Game(game.n, game.r, game.kind, game.vertexCosts, game.influence, (), game.exact, path.stem)
    return game


def saveGame(game, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(gameToDict(game), indent=2) + "\n")
    return path
