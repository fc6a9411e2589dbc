# Example games used throughout the toolkit and the registry of worked-example checks
# run by `nbg reproduce`.
import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import pandas as pd
import sympy as spy

from nbg_toolkit.closed_forms import (
    CYCLE,
    PATH,
    STAR,
    bipartiteClosedForm,
    compareWithSupports,
    cycleClosedForm,
    familyGraph,
    makeFamily,
    pathClosedForm,
    pathDeterminant,
    starClosedForm,
    uniformCostSolve,
    uniformCostSystem,
)
from nbg_toolkit.equilibrium import (
    bestResponseDynamics,
    brouwerMap,
    solveAffineBySupports,
    verifyDeltaStrong,
    verifyEquilibrium,
)
from nbg_toolkit.errors import InvalidParameterError
from nbg_toolkit.game_core import (
    Game,
    InfluenceMatrix,
    MassDistribution,
    VertexCostFn,
    rawCosts,
)
from nbg_toolkit.kernel_structure import (
    Digraph,
    digraphToNbg,
    enumerateKernels,
    kernelToStrongEquilibrium,
    strongSupportsMatchKernels,
)
from nbg_toolkit.metrics import gammaForClass, posBound, priceReport, socialCosts
from nbg_toolkit.potential import evaluatePhi, minimizePotential
from nbg_toolkit.utils.linear_systems import canonical, signOf
from nbg_toolkit.utils.number_helpers import formatCompact, formatVector, parseNumber

logger = logging.getLogger(__name__)

PASS = "PASS"
FAIL = "FAIL"


###########################
## example games         ##
###########################
def dilemmaGame():
    """Two vertices, C_1 = 4 x_1 x_2 and C_2 = x_1 (not graphical)."""
    return Game.general(2, 1, [lambda x: 4 * x[0] * x[1], lambda x: x[0]], name="dilemma")


def discontinuousGame():
    """C_1 = 1 and C_2 jumping from 2 to 0 at x_1 = 1/2; it has no equilibrium."""
    def jump(x):
        return Fraction(2) if x[0] < Fraction(1, 2) else Fraction(0)
    return Game.general(2, 1, [lambda x: Fraction(1), jump], name="discontinuous")


def _twoVertexGame(f1, f2, alpha, name):
    influence = InfluenceMatrix.uniform(2, [(1, 2)], alpha)
    return Game.graphical(2, 1, [f1, f2], influence, name=name)


def braessGame(b2=Fraction(1, 2)):
    # f_1 = 1, f_2 = x + b2, alpha = 1/4
    b2 = parseNumber(b2)
    return _twoVertexGame(VertexCostFn.constant(1), VertexCostFn.affine(1, b2), Fraction(1, 4),
                          f"braess(b2={formatCompact(b2)})")


def anarchyGame(alpha=2):
    return makeFamily(PATH, alpha, 1, n=2)


def potentialMaximumGame():
    """f_1 = 1, f_2 = 1 + x, alpha = 1: Phi = (3 - x_1^2)/2 and the equilibrium x_1 = 0 maximises it."""
    return _twoVertexGame(VertexCostFn.constant(1), VertexCostFn.affine(1, 1), 1, "potential-maximum")


def stabilityGapGame(lam=Fraction(1, 100)):
    lam = parseNumber(lam)
    return _twoVertexGame(VertexCostFn.constant(1 + 2 * lam), VertexCostFn.affine(2 + lam, lam), 1,
                          f"stability-gap(lambda={formatCompact(lam)})")


def directedTriangle():
    return Digraph(3, frozenset({(1, 2), (2, 3), (3, 1)}))


def directedTriangleGame(alpha=2):
    return digraphToNbg(directedTriangle(), alpha, 1)


# name -> (constructor, takes a parameter)
BUILTIN_GAMES = {
    "dilemma": (dilemmaGame, False),
    "discontinuous": (discontinuousGame, False),
    "braess": (braessGame, True),
    "anarchy": (anarchyGame, True),
    "potential-maximum": (potentialMaximumGame, False),
    "stability-gap": (stabilityGapGame, True),
    "directed-triangle": (directedTriangleGame, True),
}


def builtinGame(reference):
    """Game for "name" or "name:param", e.g. "braess:1/4" or "anarchy:9"."""
    name, _, param = reference.partition(":")
    if name not in BUILTIN_GAMES:
        raise InvalidParameterError(f"unknown builtin game {name!r}, expected one of {', '.join(BUILTIN_GAMES)}")
    constructor, parametrised = BUILTIN_GAMES[name]
    if param and not parametrised:
        raise InvalidParameterError(f"builtin game {name!r} takes no parameter")
    if param:
        try:
            return constructor(parseNumber(param))
        except ValueError as err:
            raise InvalidParameterError(str(err)) from None
    return constructor()


def costCurves(game, points=101):
    """x1, C1, C2 (and Phi for symmetric graphical games) along the segment of a two-vertex game."""
    if game.n != 2:
        raise InvalidParameterError("cost curves are drawn for two-vertex games")
    total = float(game.r)
    rows = []
    for x1 in np.linspace(0.0, total, points):
        masses = (float(x1), total - float(x1))
        c1, c2 = rawCosts(game, masses)
        row = {"x1": masses[0], "C1": float(c1), "C2": float(c2)}
        if game.symmetric:
            row["Phi"] = float(evaluatePhi(game, masses))
        rows.append(row)
    return pd.DataFrame(rows)


##############################
## class Check              ##
##############################
@dataclass(frozen=True)
class Check:
    section: str
    check: str
    expected: str
    computed: str
    passed: bool

    @property
    def status(self):
        return PASS if self.passed else FAIL


def _exactCheck(section, label, expected, computed):
    same = signOf(canonical(computed) - canonical(expected)) == 0
    return Check(section, label, formatCompact(expected), formatCompact(computed), same)


def _vectorCheck(section, label, expected, computed):
    same = len(expected) == len(computed) and all(
        signOf(canonical(c) - canonical(e)) == 0 for e, c in zip(expected, computed))
    return Check(section, label, formatVector(expected), formatVector(computed), same)


def _flagCheck(section, label, expected, computed):
    return Check(section, label, str(expected), str(computed), expected == computed)


def _closeCheck(section, label, expected, computed, tol):
    return Check(section, label, f"{float(expected):.12g}", f"{float(computed):.12g}",
                 abs(float(expected) - float(computed)) <= tol)


def _scaled(values, denominator):
    return tuple(Fraction(v, denominator) for v in values)


#region dilemma
def dilemmaChecks():
    section = "dilemma"
    game = dilemmaGame()
    checks = []
    for masses, expected in [((Fraction(3, 4), Fraction(1, 4)), True), ((Fraction(1, 2), Fraction(1, 2)), False),
                             ((Fraction(0), Fraction(1)), True), ((Fraction(1), Fraction(0)), True)]:
        x = MassDistribution(masses, 1)
        checks.append(_flagCheck(section, f"equilibrium at {formatVector(masses)}", expected,
                                 verifyEquilibrium(game, x).isEquilibrium))
        if expected:
            image = brouwerMap(game, x)
            gap = max(abs(float(a) - float(b)) for a, b in zip(image, x))
            checks.append(_closeCheck(section, f"fixed point of the existence map at {formatVector(masses)}",
                                      0, gap, 1e-12))
    moved = brouwerMap(game, MassDistribution((Fraction(1, 2), Fraction(1, 2)), 1))
    checks.append(_flagCheck(section, "existence map moves (1/2, 1/2)", True, moved.masses != (Fraction(1, 2),) * 2))

    for start, target in [(0.8, 1.0), (0.5, 0.0)]:
        run = bestResponseDynamics(game, MassDistribution((start, 1 - start), 1.0))
        checks.append(_closeCheck(section, f"dynamics from x1 = {start}", target, run.trace[-1][0], 1e-6))

    broken = discontinuousGame()
    for masses in [(Fraction(1, 4), Fraction(3, 4)), (Fraction(3, 4), Fraction(1, 4))]:
        checks.append(_flagCheck(section, f"discontinuous game at {formatVector(masses)}", False,
                                 verifyEquilibrium(broken, MassDistribution(masses, 1)).isEquilibrium))
    return checks
#endregion


#region kernels
def kernelChecks():
    section = "kernels"
    checks = []
    triangle = directedTriangle()
    game = directedTriangleGame(2)
    checks.append(_flagCheck(section, "directed triangle kernels", 0, len(enumerateKernels(triangle))))
    uniform = MassDistribution.uniform(3, 1)
    checks.append(_flagCheck(section, "triangle uniform distribution is an equilibrium", True,
                             verifyEquilibrium(game, uniform).isEquilibrium))
    checks.append(_flagCheck(section, "triangle uniform distribution is 1/100-strong", False,
                             verifyDeltaStrong(game, uniform, Fraction(1, 100)).isStrong))
    match, _ = strongSupportsMatchKernels(triangle, 2, 1)
    checks.append(_flagCheck(section, "triangle strong supports match kernels", True, match))

    arc = Digraph(2, frozenset({(1, 2)}))
    kernels = enumerateKernels(arc)
    checks.append(_flagCheck(section, "single arc kernels", [[1]], [sorted(k.vertices) for k in kernels]))
    x = kernelToStrongEquilibrium(kernels[0], 1)
    checks.append(_flagCheck(section, "single arc kernel equilibrium is 1-strong", True,
                             verifyDeltaStrong(digraphToNbg(arc, 3, 1), x, 1).isStrong))

    star = Digraph(4, frozenset({(1, 2), (1, 3), (1, 4)}))
    checks.append(_flagCheck(section, "out-star kernels", [[1]], [sorted(k.vertices) for k in enumerateKernels(star)]))
    edgeless = Digraph(3)
    match, _ = strongSupportsMatchKernels(edgeless, Fraction(3, 2), 1)
    checks.append(_flagCheck(section, "edgeless digraph strong supports match kernels", True, match))
    return checks
#endregion


#region braess
def braessChecks():
    section = "braess"
    checks = []
    previous = None
    for b2, expected in [(Fraction(1, 4), Fraction(5, 4)), (Fraction(1, 2), Fraction(9, 8)),
                         (Fraction(3, 4), Fraction(1))]:
        game = braessGame(b2)
        results = solveAffineBySupports(game)
        checks.append(_flagCheck(section, f"b2 = {formatCompact(b2)} equilibria", 1, len(results)))
        x = results[0].distribution(game.r)
        checks.append(_exactCheck(section, f"b2 = {formatCompact(b2)} equilibrium x1", 2 * b2 - Fraction(1, 2), x[0]))
        cost = socialCosts(game, x).utilitarian
        checks.append(_exactCheck(section, f"b2 = {formatCompact(b2)} social cost", expected, cost))
        if previous is not None:
            checks.append(_flagCheck(section, f"cost decreases up to b2 = {formatCompact(b2)}", True, cost < previous))
        previous = cost
    return checks
#endregion


#region anarchy
def anarchyChecks():
    section = "anarchy"
    checks = []
    equilibria = solveAffineBySupports(anarchyGame(2))
    checks.append(_vectorCheck(section, "equilibria x1 for alpha = 2", (Fraction(0), Fraction(1, 2), Fraction(1)),
                               tuple(sorted(r.masses[0] for r in equilibria))))
    for alpha in (2, 5, 9, 99):
        report = priceReport(anarchyGame(alpha))
        checks.append(_closeCheck(section, f"PoA_u for alpha = {alpha}", Fraction(1 + alpha, 2), report.poaU, 1e-9))
    return checks
#endregion


#region stability
def stabilityChecks():
    section = "stability"
    checks = []
    for degree, bound in [(0, 1), (1, 2), (3, 4)]:
        checks.append(_exactCheck(section, f"PoS bound for degree {degree}", Fraction(bound), posBound(degree)))
    checks.append(_exactCheck(section, "gamma for degree 1", Fraction(1, 2), gammaForClass(1)))

    linear = makeFamily(PATH, Fraction(1, 4), 1, n=3)
    report = priceReport(linear)
    checks.append(_closeCheck(section, "PoS_u of the linear path P3", 1, report.posU, 1e-9))
    checks.append(_closeCheck(section, "PoS_e of the linear path P3", 1, report.posE, 1e-6))

    for lam in (Fraction(1, 100), Fraction(1, 10), Fraction(1, 2)):
        report = priceReport(stabilityGapGame(lam))
        checks.append(_closeCheck(section, f"PoS_u for lambda = {formatCompact(lam)}",
                                  (2 + 2 * lam) / (1 + 2 * lam), report.posU, 1e-6))

    game = potentialMaximumGame()
    worst = max((abs(evaluatePhi(game, (x1, 1 - x1)) - (3 - x1 * x1) / 2)
                 for x1 in (Fraction(k, 10) for k in range(11))), default=0)
    checks.append(_exactCheck(section, "Phi = (3 - x1^2)/2 on 11 points", Fraction(0), worst))
    minima = minimizePotential(game)
    checks.append(_vectorCheck(section, "potential minima x1", (Fraction(1),), tuple(m[0] for m in minima)))
    return checks
#endregion


#region paths
PATH_DETERMINANTS = {
    2: lambda a: -2 * a + 2,
    3: lambda a: -4 * a + 3,
    4: lambda a: 2 * (a * a + a - 1) * (a - 2),
    5: lambda a: (a + 1) * (a - 1) * (a * a + 8 * a - 5),
}

PATH_EQUILIBRIA = [
    (6, Fraction(1, 4), _scaled((15, 11, 12, 12, 11, 15), 76), Fraction(71, 304)),
    (7, Fraction(1, 3), _scaled((13, 8, 10, 9, 10, 8, 13), 71), Fraction(47, 213)),
    (10, Fraction(1, 2), _scaled((5, 1, 4, 2, 3, 3, 2, 4, 1, 5), 30), Fraction(11, 60)),
    (6, Fraction(1, 3), _scaled((8, 5, 6, 6, 5, 8), 38), Fraction(29, 114)),
    (7, Fraction(1, 4), _scaled((41, 30, 33, 32, 33, 30, 41), 240), Fraction(97, 480)),
]


def pathChecks():
    section = "paths"
    checks = []
    for n, polynomial in PATH_DETERMINANTS.items():
        for alpha in (Fraction(1, 3), Fraction(1, 2), Fraction(2), Fraction(3, 7)):
            checks.append(_exactCheck(section, f"det M_{n} at alpha = {formatCompact(alpha)}",
                                      polynomial(alpha), pathDeterminant(n, alpha)))

    for n, alpha, masses, cost in PATH_EQUILIBRIA:
        system = uniformCostSolve(makeFamily(PATH, alpha, 1, n=n), PATH)
        checks.append(_vectorCheck(section, f"P{n} alpha = {formatCompact(alpha)} equilibrium", masses, system.x or ()))
        checks.append(_exactCheck(section, f"P{n} alpha = {formatCompact(alpha)} cost", cost, system.cost))

    alpha = Fraction(1, 4)
    system = uniformCostSolve(makeFamily(PATH, alpha, 1, n=3), PATH)
    formula = tuple(v / (4 * alpha - 3) for v in (alpha - 1, 2 * alpha - 1, alpha - 1))
    checks.append(_vectorCheck(section, "P3 formula at alpha = 1/4", formula, system.x or ()))
    system = uniformCostSolve(makeFamily(PATH, alpha, 1, n=4), PATH)
    formula = (1 / (4 - 2 * alpha), (1 - alpha) / (4 - 2 * alpha), (1 - alpha) / (4 - 2 * alpha), 1 / (4 - 2 * alpha))
    checks.append(_vectorCheck(section, "P4 formula at alpha = 1/4", formula, system.x or ()))

    game = makeFamily(PATH, Fraction(3, 4), 1, n=3)
    checks.append(_flagCheck(section, "P3 alpha = 3/4 uniform-cost solution", "none", uniformCostSolve(game, PATH).kind))
    results = solveAffineBySupports(game)
    checks.append(_vectorCheck(section, "P3 alpha = 3/4 equilibria", (Fraction(1, 2), Fraction(0), Fraction(1, 2)),
                               results[0].masses if len(results) == 1 else ()))

    #region golden-ratio family of P4
    phi = (spy.sqrt(5) - 1) / 2
    adjacency = [[1 if abs(i - j) == 1 else 0 for j in range(4)] for i in range(4)]
    family = uniformCostSystem(adjacency, phi)
    checks.append(_flagCheck(section, "P4 alpha = phi solution set", "family", family.kind))
    ends = [family.basepoint[i] + sum((t * v[i] for t, v in zip(vertex, family.basis)), 0)
            for vertex in family.vertices for i in (0, 3, 4)]
    sums = {canonical(ends[k] + ends[k + 1]) for k in range(0, len(ends), 3)}
    costs = {canonical(ends[k + 2]) for k in range(0, len(ends), 3)}
    checks.append(Check(section, "P4 alpha = phi x1 + x4", str(canonical(1 / (2 - phi))), ", ".join(map(str, sums)),
                        all(signOf(s - 1 / (2 - phi)) == 0 for s in sums)))
    checks.append(Check(section, "P4 alpha = phi cost", str(canonical((1 - phi ** 2) / (2 - phi))),
                        ", ".join(map(str, costs)), all(signOf(c - (1 - phi ** 2) / (2 - phi)) == 0 for c in costs)))
    x4 = sorted((ends[k + 1] for k in range(0, len(ends), 3)), key=float)
    low, high = phi / ((phi + 1) * (2 - phi)), 1 / ((phi + 1) * (2 - phi))
    checks.append(Check(section, "P4 alpha = phi range of x4", f"[{canonical(low)}, {canonical(high)}]",
                        f"[{canonical(x4[0])}, {canonical(x4[-1])}]",
                        signOf(x4[0] - low) == 0 and signOf(x4[-1] - high) == 0))
    #endregion

    # x3 = 0, x1 + x2 = x4 + x5 = 1/2 and x2 + x4 >= 1/2
    game = makeFamily(PATH, Fraction(1), 1, n=5)
    family = [r for r in solveAffineBySupports(game) if r.support() == frozenset({1, 2, 4, 5})]
    checks.append(_flagCheck(section, "P5 alpha = 1 family dimension", [2], [r.dimension for r in family]))
    half = Fraction(1, 2)
    corners = sorted({tuple(canonical(m) for m in r.at(v)[0]) for r in family for v in r.vertices})
    expected = sorted({(0, half, 0, 0, half), (half, 0, 0, half, 0), (0, half, 0, half, 0)})
    checks.append(Check(section, "P5 alpha = 1 family corners", "; ".join(map(formatVector, expected)),
                        "; ".join(map(formatVector, corners)), corners == expected))
    checks.append(_flagCheck(section, "P5 alpha = 1 family cost", {half},
                             {r.at(v)[1] for r in family for v in r.vertices}))

    for n, alpha in [(5, Fraction(1, 2)), (7, Fraction(1, 2)), (8, Fraction(1, 2)), (5, Fraction(1)),
                     (6, Fraction(1)), (7, Fraction(1))]:
        game = makeFamily(PATH, alpha, 1, n=n)
        discrepancies = compareWithSupports(game, pathClosedForm(n, alpha))
        checks.append(_flagCheck(section, f"P{n} alpha = {formatCompact(alpha)} closed form vs enumeration",
                                 0, len(discrepancies)))
    return checks
#endregion


#region cycles
def cycleChecks():
    section = "cycles"
    checks = []
    result = cycleClosedForm(5, Fraction(1, 2))[0]
    checks.append(_vectorCheck(section, "C5 alpha = 1/2 equilibrium", (Fraction(1, 5),) * 5, result.masses))
    result = cycleClosedForm(6, Fraction(1, 2))[0]
    checks.append(_flagCheck(section, "C6 alpha = 1/2 family dimension", 1, result.dimension))
    checks.append(_exactCheck(section, "C6 alpha = 1/2 cost", Fraction(1, 3), result.costRange()[1]))
    result = cycleClosedForm(9, Fraction(1))[0]
    checks.append(_flagCheck(section, "C9 alpha = 1 family dimension", 2, result.dimension))
    sums = {sum(result.at(t)[0][:3]) for t in result.vertices}
    checks.append(_flagCheck(section, "C9 alpha = 1 x1 + x2 + x3", {Fraction(1, 3)}, sums))

    minima = minimizePotential(makeFamily(CYCLE, Fraction(3, 10), 1, n=5))
    checks.append(_vectorCheck(section, "C5 alpha = 3/10 potential minimum", (Fraction(1, 5),) * 5,
                               minima[0].masses if len(minima) == 1 else ()))

    for n, alpha in [(5, Fraction(1, 2)), (6, Fraction(1, 2)), (4, Fraction(1)), (6, Fraction(1))]:
        game = makeFamily(CYCLE, alpha, 1, n=n)
        discrepancies = compareWithSupports(game, cycleClosedForm(n, alpha))
        checks.append(_flagCheck(section, f"C{n} alpha = {formatCompact(alpha)} closed form vs enumeration",
                                 0, len(discrepancies)))
    return checks
#endregion


#region bipartite
def bipartiteChecks():
    section = "bipartite"
    checks = []
    result = bipartiteClosedForm(3, 2, Fraction(1, 10))[0]
    checks.append(_vectorCheck(section, "K_3,2 alpha = 1/10 interior (a, b)", (Fraction(4, 19), Fraction(7, 38)),
                               (result.masses[0], result.masses[3])))
    checks.append(_exactCheck(section, "K_3,2 alpha = 1/10 cost", Fraction(47, 190), result.cost))

    result = bipartiteClosedForm(2, 2, Fraction(2, 5))[0]
    checks.append(_vectorCheck(section, "K_2,2 alpha = 2/5", (Fraction(1, 4),) * 4, result.masses))
    result = bipartiteClosedForm(2, 2, Fraction(1, 2))[0]
    checks.append(_flagCheck(section, "K_2,2 alpha = 1/2 family dimension", 1, result.dimension))

    result = starClosedForm(5, Fraction(1, 10))[0]
    checks.append(_vectorCheck(section, "star n = 5 alpha = 1/10 (leaf, centre)", (Fraction(3, 14), Fraction(1, 7)),
                               (result.masses[0], result.masses[4])))
    results = starClosedForm(5, Fraction(2))
    checks.append(_flagCheck(section, "star n = 5 alpha = 2 equilibria", 3, len(results)))
    leaves = [r for r in results if r.masses[0] == 0]
    checks.append(_vectorCheck(section, "star n = 5 alpha = 2 leaves uncharged", (0, 0, 0, 0, 1),
                               leaves[0].masses if leaves else ()))

    for p, q, alpha in [(3, 2, Fraction(1, 10)), (2, 2, Fraction(1, 2)), (3, 1, Fraction(1, 2)),
                        (4, 1, Fraction(2)), (3, 3, Fraction(1, 5))]:
        game = makeFamily("complete_bipartite", alpha, 1, p=p, q=q)
        discrepancies = compareWithSupports(game, bipartiteClosedForm(p, q, alpha))
        checks.append(_flagCheck(section, f"K_{p},{q} alpha = {formatCompact(alpha)} closed form vs enumeration",
                                 0, len(discrepancies)))
    game = makeFamily(STAR, Fraction(1), 1, n=5)
    checks.append(_flagCheck(section, "star n = 5 alpha = 1 closed form vs enumeration", 0,
                             len(compareWithSupports(game, starClosedForm(5, 1)))))
    return checks
#endregion


SECTIONS = {
    "dilemma": dilemmaChecks,
    "kernels": kernelChecks,
    "braess": braessChecks,
    "anarchy": anarchyChecks,
    "stability": stabilityChecks,
    "paths": pathChecks,
    "cycles": cycleChecks,
    "bipartite": bipartiteChecks,
}

# numbered ids accepted by `nbg reproduce --section`, each naming one topic
SECTION_IDS = {
    "2.1": "dilemma",
    "3.4": "kernels",
    "3.8": "braess",
    "3.9": "anarchy",
    "3.10": "stability",
    "4.1": "paths",
    "4.2": "cycles",
    "4.3": "bipartite",
}


def resolveSection(name):
    """Topic for a numbered id or a topic name; raises InvalidParameterError otherwise."""
    topic = SECTION_IDS.get(name, name)
    if topic not in SECTIONS:
        raise InvalidParameterError(f"unknown section {name!r}, expected one of "
                                    f"{', '.join(list(SECTION_IDS) + list(SECTIONS))}")
    return topic


def runChecks(sections=None):
    """Runs the worked-example checks of the given sections (all by default)

    Args:
        sections (iterable of str): numbered ids ("4.1") or topic names ("paths")

    Returns:
        pandas.DataFrame: section, check, expected, computed, status
    """
    sections = list(SECTIONS) if not sections else list(dict.fromkeys(resolveSection(s) for s in sections))
    rows = []
    for name in sections:
        for check in SECTIONS[name]():
            rows.append({"section": check.section, "check": check.check, "expected": check.expected,
                         "computed": check.computed, "status": check.status})
            if not check.passed:
                logger.warning("%s: %s expected %s, computed %s", name, check.check, check.expected, check.computed)
    return pd.DataFrame(rows, columns=["section", "check", "expected", "computed", "status"])
