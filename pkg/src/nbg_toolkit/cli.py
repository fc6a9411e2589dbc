"""Command-line front end: `nbg verify`, `nbg solve`, `nbg metrics`, `nbg reproduce` and friends."""
import json
import logging
import sys
from contextlib import contextmanager
from fractions import Fraction
from numbers import Integral
from pathlib import Path

import click
import pandas as pd
import sympy as spy

from nbg_toolkit.closed_forms import (
    CYCLE,
    FAMILIES,
    GENERAL,
    PATH,
    conjectureScan,
    makeFamily,
    scanCounterexamples,
    uniformCostSolve,
)
from nbg_toolkit.equilibrium import (
    RESULT_NONE,
    SolveResult,
    bestResponseDynamics,
    solveAffineBySupports,
    verifyDeltaStrong,
    verifyEquilibrium,
)
from nbg_toolkit.errors import NbgError
from nbg_toolkit.game_core import MassDistribution, classify, loadGame, saveGame
from nbg_toolkit.kernel_structure import enumerateKernels, loadDigraph, strongSupportsMatchKernels
from nbg_toolkit.metrics import priceReport
from nbg_toolkit.potential import minimizePotential
from nbg_toolkit.settings import (
    G_DEFAULT_SEED,
    G_DEFAULT_STARTS,
    G_DYNAMICS_MAX_ITERS,
    G_SEED_ENV_VAR,
    G_SUPPORT_N_MAX,
    G_TAU_EQ,
)
from nbg_toolkit.storage import G_GAMES_DIR, initialiseDataDir, resolveInstance
from nbg_toolkit.utils.number_helpers import formatCompact, formatNumber, formatVector, parseNumber, parseNumberList
from nbg_toolkit.worked_examples import SECTION_IDS, SECTIONS, builtinGame, costCurves, runChecks

logger = logging.getLogger(__name__)

BUILTIN_PREFIX = "builtin:"
FORMATS = ["table", "json", "csv"]
METHODS = ["supports", "potential", "dynamics", "uniform-cost"]
SCAN_ALPHAS = "1/20,1/10,3/20,1/5,1/4,3/10,7/20,2/5,9/20"


class InputError(click.ClickException):
    """Unreadable or inapplicable input; exits with status 2."""
    exit_code = 2


@contextmanager
def inputErrors():
    try:
        yield
    except json.JSONDecodeError as err:
        raise InputError(f"malformed JSON at line {err.lineno}, column {err.colno}: {err.msg}") from None
    except NbgError as err:
        raise InputError(str(err)) from None
    except OSError as err:
        raise InputError(f"{err.filename or 'file'}: {err.strerror or err}") from None


#region input helpers
def loadGameReference(reference):
    """Game from a JSON path, a bundled game name, or builtin:<name>[:param]."""
    if reference.startswith(BUILTIN_PREFIX):
        return builtinGame(reference[len(BUILTIN_PREFIX):])
    path = resolveInstance(reference)
    if path.suffix == ".txt":
        raise InputError(f"{path.name} is a digraph file, use `nbg kernels`")
    return loadGame(path)


def readDistribution(game, inline, path):
    if inline is None and path is None:
        raise InputError("give a distribution with --dist or as a JSON file")
    if inline is not None:
        try:
            values = parseNumberList(inline)
        except ValueError as err:
            raise InputError(str(err)) from None
    else:
        values = json.loads(Path(path).read_text())
        if not isinstance(values, list):
            raise InputError("a distribution file holds a JSON list of masses")
        try:
            values = [parseNumber(v) for v in values]
        except ValueError as err:
            raise InputError(str(err)) from None
    if len(values) != game.n:
        raise InputError(f"distribution has {len(values)} masses, the game has {game.n} vertices")
    return MassDistribution(tuple(values), game.r)
#endregion


#region output helpers
def jsonValue(value):
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, Integral):
        return int(value)
    if isinstance(value, (Fraction, spy.Basic)):
        return formatCompact(value)
    if isinstance(value, (tuple, list)):
        return [jsonValue(v) for v in value]
    if isinstance(value, dict):
        return {k: jsonValue(v) for k, v in value.items()}
    return float(value)


def emit(table, payload, outputFormat):
    if outputFormat == "json":
        click.echo(json.dumps(jsonValue(payload), indent=2))
    elif outputFormat == "csv":
        click.echo(table.to_csv(index=False), nl=False)
    elif table.empty:
        click.echo("(nothing found)")
    else:
        click.echo(table.to_string(index=False))


def resultToDict(result):
    data = {"kind": result.kind, "method": result.method, "condition": result.condition}
    if result.kind == RESULT_NONE:
        return data
    data["masses"] = result.masses
    data["cost"] = result.cost
    if result.dimension:
        data["basis"] = [direction[:result.n] for direction in result.basis]
        data["cost_basis"] = [direction[result.n] for direction in result.basis]
        data["vertices"] = [result.at(t)[0] for t in result.vertices]
        low, high = result.costRange()
        data["cost_range"] = [low, high]
    data["exact"] = result.exact
    return data


def resultTable(results, verified):
    rows = []
    for index, (result, ok) in enumerate(zip(results, verified), 1):
        if result.dimension:
            low, high = result.costRange()
            cost = formatNumber(low) if low == high else f"[{formatCompact(low)}, {formatCompact(high)}]"
            masses = f"{formatVector(result.masses)} + span of {result.dimension}"
        else:
            cost = formatNumber(result.cost)
            masses = formatVector(result.masses)
        rows.append({"#": index, "kind": result.kind, "masses": masses, "cost": cost,
                     "condition": result.condition, "verified": ok})
    return pd.DataFrame(rows, columns=["#", "kind", "masses", "cost", "condition", "verified"])
#endregion


@click.group()
@click.option("-v", "--verbose", count=True, help="-v for progress, -vv for per-step detail (on stderr)")
def main(verbose):
    """Toolkit for nonatomic neighbourhood balancing games."""
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def formatOption(function):
    return click.option("--format", "outputFormat", type=click.Choice(FORMATS), default="table",
                        show_default=True, help="Output format")(function)


def seedOptions(function):
    function = click.option("--seed", type=int, default=G_DEFAULT_SEED, envvar=G_SEED_ENV_VAR, show_default=True,
                            help=f"Seed of the random starts (also read from {G_SEED_ENV_VAR})")(function)
    return click.option("--starts", type=click.IntRange(min=0), default=G_DEFAULT_STARTS, show_default=True,
                        help="Random interior starting points")(function)


############################
## nbg verify             ##
############################
@main.command("verify")
@click.argument("game")
@click.argument("path", metavar="[DIST_FILE]", required=False, type=click.Path(dir_okay=False))
@click.option("--dist", "inline", help='Masses inline, e.g. "3/4,1/4"')
@click.option("--delta", help="Also check delta-strongness for this delta")
@click.option("--tolerance", type=float, default=G_TAU_EQ, show_default=True,
              help="Equilibrium gap tolerance for float input")
@formatOption
def verifyCommand(game, path, inline, delta, tolerance, outputFormat):
    """Check whether a distribution is an equilibrium; exit 1 when it is not."""
    with inputErrors():
        game = loadGameReference(game)
        x = readDistribution(game, inline, path)
        report = verifyEquilibrium(game, x, tauEq=tolerance)
        certificate = None
        if delta is not None:
            try:
                delta = parseNumber(delta)
            except ValueError as err:
                raise InputError(str(err)) from None
            certificate = verifyDeltaStrong(game, x, delta, tauEq=tolerance)

    table = pd.DataFrame({
        "vertex": range(1, game.n + 1),
        "mass": [formatCompact(m) for m in x.masses],
        "cost": [formatNumber(c) for c in report.costs],
    })
    payload = {
        "game": game.name,
        "class": classify(game).label,
        "equilibrium": report.isEquilibrium,
        "worst_gap": report.worstGap,
        "common_cost": report.commonCost,
        "witness": report.witness,
        "costs": report.costs,
    }
    if certificate is not None:
        payload["strongness"] = {"delta": certificate.delta, "verdict": certificate.verdict,
                                 "witness": certificate.witness, "method": certificate.method}
    emit(table, payload, outputFormat)
    if outputFormat == "table":
        verdict = "equilibrium" if report.isEquilibrium else f"not an equilibrium, worst gap {formatNumber(report.worstGap)}"
        if report.witness and not report.isEquilibrium:
            verdict += f" (vertex {report.witness[0]} pays more than vertex {report.witness[1]})"
        click.echo(verdict)
        if certificate is not None:
            line = f"delta = {formatCompact(certificate.delta)}: {certificate.verdict} ({certificate.method})"
            if certificate.witness:
                i, j, epsilon = certificate.witness
                line += f", moving {formatCompact(epsilon)} from {i} to {j} improves"
            click.echo(line)

    passed = report.isEquilibrium and (certificate is None or certificate.isStrong)
    if not passed:
        click.get_current_context().exit(1)


############################
## nbg solve              ##
############################
def _pointResult(game, distribution, method):
    report = verifyEquilibrium(game, distribution)
    return SolveResult.point(distribution.masses, report.commonCost, distribution.exact, method)


def _verifiedSamples(game, result):
    for masses in result.samplePoints():
        if not verifyEquilibrium(game, MassDistribution(tuple(masses), game.r)).isEquilibrium:
            logger.warning("%s result at %s failed re-verification", result.method, formatVector(masses))
            return False
    return True


@main.command("solve")
@click.argument("game")
@click.option("--method", type=click.Choice(METHODS), default="supports", show_default=True)
@click.option("--n-max", "nMax", type=click.IntRange(min=1), default=G_SUPPORT_N_MAX, show_default=True,
              help="Largest n for support enumeration")
@click.option("--tolerance", type=float, default=G_TAU_EQ, show_default=True)
@seedOptions
@formatOption
def solveCommand(game, method, nMax, tolerance, starts, seed, outputFormat):
    """List the equilibria found by one method, each re-verified."""
    with inputErrors():
        game = loadGameReference(game)
        if method == "supports":
            results = solveAffineBySupports(game, tau=tolerance, nMax=nMax)
        elif method == "potential":
            minima = minimizePotential(game, starts=starts, seed=seed, nMax=nMax)
            results = [_pointResult(game, x, "potential") for x in minima]
        elif method == "dynamics":
            run = bestResponseDynamics(game, MassDistribution.uniform(game.n, float(game.r)), tauEq=tolerance)
            results = [_pointResult(game, run.trace[-1], "dynamics")] if run.converged else []
        else:
            results = [uniformCostSolve(game, GENERAL).asSolveResult()]
        results = [r for r in results if r.kind != RESULT_NONE]
        verified = [_verifiedSamples(game, r) for r in results]

    emit(resultTable(results, verified), {
        "game": game.name,
        "method": method,
        "equilibria": [dict(resultToDict(r), verified=ok) for r, ok in zip(results, verified)],
    }, outputFormat)


############################
## nbg metrics            ##
############################
@main.command("metrics")
@click.argument("game")
@click.option("--n-max", "nMax", type=click.IntRange(min=1), default=G_SUPPORT_N_MAX, show_default=True)
@seedOptions
@formatOption
def metricsCommand(game, nMax, starts, seed, outputFormat):
    """Prices of anarchy and stability of an affine game."""
    with inputErrors():
        game = loadGameReference(game)
        report = priceReport(game, nMax=nMax, starts=starts, seed=seed)

    exactness = report.exactness
    rows = [
        ("PoA utilitarian", report.poaU, exactness["poa_u"]),
        ("PoA egalitarian", report.poaE, exactness["poa_e"]),
        ("PoS utilitarian", report.posU, exactness["pos_u"]),
        ("PoS egalitarian", report.posE, exactness["pos_e"]),
        ("optimum utilitarian", report.optimumU, exactness["poa_u"]),
        ("optimum egalitarian", report.optimumE, exactness["poa_e"]),
    ]
    table = pd.DataFrame([{"metric": name, "value": value if isinstance(value, str) else formatNumber(value),
                           "exact": exact} for name, value, exact in rows])
    payload = dict(report.toDict(), game=game.name)
    if outputFormat == "json":
        click.echo(json.dumps(payload, indent=2))
    else:
        emit(table, payload, outputFormat)


############################
## nbg family             ##
############################
@main.command("family")
@click.argument("family", type=click.Choice(FAMILIES))
@click.option("--alpha", required=True, help="Influence on every edge, e.g. 1/4")
@click.option("-n", "n", type=click.IntRange(min=1), help="Vertex count (path, cycle, star)")
@click.option("-p", "p", type=click.IntRange(min=1), help="First side of a complete bipartite graph")
@click.option("-q", "q", type=click.IntRange(min=1), help="Second side of a complete bipartite graph")
@click.option("--r", "r", default="1", show_default=True, help="Total mass")
@click.option("--name", help="Saved name, defaults to the family and its parameters")
@click.option("--output", type=click.Path(dir_okay=False), help="Write here instead of the data directory")
def familyCommand(family, alpha, n, p, q, r, name, output):
    """Generate an alpha-uniform game on a named graph family and save it."""
    with inputErrors():
        try:
            alpha, r = parseNumber(alpha), parseNumber(r)
        except ValueError as err:
            raise InputError(str(err)) from None
        game = makeFamily(family, alpha, r, n=n, p=p, q=q)
        if output is None:
            initialiseDataDir()
            size = f"{p}x{q}" if family == "complete_bipartite" else str(n)
            stem = name or f"{family}{size}_alpha{formatCompact(alpha).replace('/', '_')}"
            output = G_GAMES_DIR / f"{stem}.json"
        path = saveGame(game, output)
    click.echo(str(path))


############################
## nbg scan-det           ##
############################
@main.command("scan-det")
@click.argument("family", type=click.Choice([PATH, CYCLE]))
@click.option("--n-from", "nFrom", type=click.IntRange(min=2), help="Smallest n (2 for paths, 3 for cycles)")
@click.option("--n-to", "nTo", type=click.IntRange(min=2), default=12, show_default=True)
@click.option("--alphas", default=SCAN_ALPHAS, show_default=True, help="Comma-separated rational alphas")
@formatOption
def scanCommand(family, nFrom, nTo, alphas, outputFormat):
    """Scan determinants and uniform-cost solutions; exit 1 on any counterexample."""
    if nFrom is None:
        nFrom = 2 if family == PATH else 3
    with inputErrors():
        try:
            alphaGrid = parseNumberList(alphas)
        except ValueError as err:
            raise InputError(str(err)) from None
        table = conjectureScan(family, range(nFrom, nTo + 1), alphaGrid)
    counterexamples = scanCounterexamples(table)
    emit(table, {"family": family, "rows": table.to_dict(orient="records"),
                 "counterexamples": counterexamples.to_dict(orient="records")}, outputFormat)
    if not counterexamples.empty:
        click.echo("counterexample candidates:", err=True)
        click.echo(counterexamples.to_string(index=False), err=True)
        click.get_current_context().exit(1)


############################
## nbg dynamics           ##
############################
@main.command("dynamics")
@click.argument("game")
@click.option("--start", help="Starting masses inline, uniform by default")
@click.option("--step", help="Mass moved per iteration, r/100 by default")
@click.option("--max-iters", "maxIters", type=click.IntRange(min=1), default=G_DYNAMICS_MAX_ITERS, show_default=True)
@click.option("--tolerance", type=float, default=G_TAU_EQ, show_default=True)
@click.option("--trace", is_flag=True, help="Print every visited distribution")
@formatOption
def dynamicsCommand(game, start, step, maxIters, tolerance, trace, outputFormat):
    """Run best-response dynamics from a starting distribution."""
    with inputErrors():
        game = loadGameReference(game)
        x0 = readDistribution(game, start, None) if start else MassDistribution.uniform(game.n, game.r)
        try:
            step = None if step is None else parseNumber(step)
        except ValueError as err:
            raise InputError(str(err)) from None
        run = bestResponseDynamics(game, x0, step=step, maxIters=maxIters, tauEq=tolerance)

    final = run.trace[-1]
    visited = run.trace if trace else (run.trace[0], final)
    table = pd.DataFrame([[float(m) for m in x.masses] for x in visited],
                         columns=[f"x{i}" for i in range(1, game.n + 1)])
    payload = {
        "game": game.name,
        "converged": run.converged,
        "iterations": run.iterations,
        "final_step": run.finalStep,
        "final": final.masses,
        "worst_gap": run.report.worstGap,
    }
    if trace:
        payload["trace"] = [x.masses for x in run.trace]
    emit(table, payload, outputFormat)
    if outputFormat == "table":
        state = "converged" if run.converged else "stopped"
        click.echo(f"{state} after {run.iterations} iterations, worst gap {float(run.report.worstGap):.3g}")


############################
## nbg reproduce          ##
############################
@main.command("reproduce")
@click.option("--section", "sections", multiple=True, type=click.Choice(list(SECTION_IDS) + list(SECTIONS)),
              help="Numbered section or topic to check, repeatable")
@click.option("--all", "runAll", is_flag=True, help="Check every topic")
@formatOption
def reproduceCommand(sections, runAll, outputFormat):
    """Recompute the worked examples and compare them with their known values; exit 1 on any FAIL."""
    if not sections and not runAll:
        raise click.UsageError("choose --section ID or --all")
    with inputErrors():
        table = runChecks(None if runAll else sections)
    emit(table, {"checks": table.to_dict(orient="records")}, outputFormat)
    failed = int((table["status"] == "FAIL").sum())
    if outputFormat == "table":
        click.echo(f"{len(table) - failed} passed, {failed} failed")
    if failed:
        click.get_current_context().exit(1)


############################
## nbg curves             ##
############################
@main.command("curves")
@click.argument("game")
@click.option("--points", type=click.IntRange(min=2), default=101, show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), help="CSV file to write instead of standard output")
def curvesCommand(game, points, output):
    """Cost curves x1, C1, C2 (and Phi) of a two-vertex game as CSV."""
    with inputErrors():
        table = costCurves(loadGameReference(game), points)
        if output:
            table.to_csv(output, index=False)
            return
    click.echo(table.to_csv(index=False), nl=False)


############################
## nbg kernels            ##
############################
@main.command("kernels")
@click.argument("digraph")
@click.option("--alpha", default="2", show_default=True, help="Arc influence of the reduced game, > 1")
@click.option("--r", "r", default="1", show_default=True, help="Total mass")
@formatOption
def kernelsCommand(digraph, alpha, r, outputFormat):
    """Kernels of a digraph file and whether they match the strong-equilibrium supports."""
    with inputErrors():
        d = loadDigraph(resolveInstance(digraph))
        try:
            alpha, r = parseNumber(alpha), parseNumber(r)
        except ValueError as err:
            raise InputError(str(err)) from None
        kernels = enumerateKernels(d)
        matched, discrepancies = strongSupportsMatchKernels(d, alpha, r)

    table = pd.DataFrame({"kernel": [formatVector(sorted(k.vertices)) for k in kernels]}, columns=["kernel"])
    emit(table, {"n": d.n, "kernels": [sorted(k.vertices) for k in kernels], "match": matched,
                 "discrepancies": discrepancies}, outputFormat)
    if outputFormat == "table":
        click.echo("strong-equilibrium supports match the kernels" if matched else "\n".join(discrepancies))
    if not matched:
        click.get_current_context().exit(1)
