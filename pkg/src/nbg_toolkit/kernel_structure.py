# Digraph kernels and their correspondence with strong equilibria of normal linear games.
#
# A kernel is a directed stable, directed dominating vertex set. Giving every arc an
# influence alpha > 1 turns a digraph into a normal linear game whose strong
# equilibria live exactly on the kernels.
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path

import networkx as nx

from nbg_toolkit.equilibrium import solveAffineBySupports, verifyDeltaStrong, verifyEquilibrium
from nbg_toolkit.errors import InvalidDigraphError, InvalidParameterError, ProblemTooLargeError
from nbg_toolkit.game_core import (
    CLASS_NORMAL,
    Game,
    InfluenceMatrix,
    MassDistribution,
    VertexCostFn,
    classConditions,
)
from nbg_toolkit.settings import G_KERNEL_N_MAX, G_MATCH_N_MAX
from nbg_toolkit.utils.number_helpers import formatCompact, parseNumber

logger = logging.getLogger(__name__)

# strongness is also probed at this fraction of r, below any kernel share
SMALL_DELTA_SHARE = Fraction(1, 10**6)


#####################
## class Digraph   ##
#####################
@dataclass(frozen=True)
class Digraph:
    """Vertices 1..n and a set of ordered arcs (i, j), i != j."""
    n: int
    arcs: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidDigraphError("a digraph needs at least one vertex")
        arcs = frozenset((int(i), int(j)) for i, j in self.arcs)
        for i, j in arcs:
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise InvalidDigraphError(f"arc ({i}, {j}) is outside 1..{self.n}")
            if i == j:
                raise InvalidDigraphError(f"self-loop on vertex {i}")
        object.__setattr__(self, "arcs", arcs)

    @classmethod
    def fromText(cls, text):
        """Reads the plain-text format: first line n, then one "i j" arc per line

        Blank lines and lines starting with # are skipped.

        Args:
            text (string): file content

        Returns:
            Digraph
        """
        n = None
        arcs = []
        for lineNum, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                numbers = [int(p) for p in parts]
            except ValueError:
                raise InvalidDigraphError(f"line {lineNum}: expected integers, got {line!r}") from None
            if n is None:
                if len(numbers) != 1:
                    raise InvalidDigraphError(f"line {lineNum}: first line must hold the vertex count only")
                n = numbers[0]
                continue
            if len(numbers) != 2:
                raise InvalidDigraphError(f"line {lineNum}: an arc is two vertex numbers")
            arcs.append(tuple(numbers))
        if n is None:
            raise InvalidDigraphError("empty digraph file")
        return cls(n, frozenset(arcs))

    @classmethod
    def fromNetworkx(cls, graph):
        # nodes must already be 1..n
        return cls(graph.number_of_nodes(), frozenset(graph.edges()))

    def toText(self):
        lines = [str(self.n)] + [f"{i} {j}" for i, j in sorted(self.arcs)]
        return "\n".join(lines) + "\n"

    def toNetworkx(self):
        graph = nx.DiGraph()
        graph.add_nodes_from(range(1, self.n + 1))
        graph.add_edges_from(sorted(self.arcs))
        return graph

    def outMasks(self):
        # bit j-1 of masks[i-1] is set when arc (i, j) exists
        masks = [0] * self.n
        for i, j in self.arcs:
            masks[i - 1] |= 1 << (j - 1)
        return masks


def loadDigraph(path):
    return Digraph.fromText(Path(path).read_text())


@dataclass(frozen=True)
class Kernel:
    vertices: frozenset
    n: int

    def __len__(self):
        return len(self.vertices)


def isKernel(d, vertices):
    """Checks both defining conditions directly on the networkx digraph."""
    graph = d.toNetworkx()
    vertices = set(vertices)
    stable = graph.subgraph(vertices).number_of_edges() == 0
    # successors of the set together with the set must cover every vertex
    dominating = bool(vertices) and nx.is_dominating_set(graph, vertices)
    return stable and dominating


###############################
## def enumerateKernels(d)   ##
###############################
def enumerateKernels(d, nMax=G_KERNEL_N_MAX):
    """All kernels of d, smallest first, then in lexicographic order

    Args:
        d (Digraph): the digraph
        nMax (int): refuse larger digraphs (2^n subsets)

    Returns:
        list of Kernel
    """
    if d.n > nMax:
        raise ProblemTooLargeError(f"kernel enumeration is limited to n <= {nMax}, digraph has {d.n}")
    outMasks = d.outMasks()
    full = (1 << d.n) - 1
    kernels = []
    for size in range(1, d.n + 1):
        for chosen in combinations(range(d.n), size):
            mask = 0
            for v in chosen:
                mask |= 1 << v
            covered = mask
            stable = True
            for v in chosen:
                if outMasks[v] & mask:
                    stable = False
                    break
                covered |= outMasks[v]
            if stable and covered == full:
                kernels.append(Kernel(frozenset(v + 1 for v in chosen), d.n))

    for kernel in kernels:
        if not isKernel(d, kernel.vertices):
            raise AssertionError(f"bitmask search produced a non-kernel {sorted(kernel.vertices)}")
    logger.debug("digraph on %s vertices has %s kernels", d.n, len(kernels))
    return kernels


def digraphToNbg(d, alpha, r=1):
    """Normal linear game with C_i(x) = x_i + alpha * sum over arcs (j, i) of x_j; alpha > 1."""
    alpha = parseNumber(alpha)
    if alpha <= 1:
        raise InvalidParameterError(f"the reduction needs alpha > 1, got {formatCompact(alpha)}")
    influence = InfluenceMatrix.fromTriples(d.n, [(i, j, alpha) for i, j in sorted(d.arcs)])
    costs = [VertexCostFn.affine(1, 0) for _ in range(d.n)]
    return Game.graphical(d.n, r, costs, influence, name=f"digraph(n={d.n}, alpha={formatCompact(alpha)})")


def kernelToStrongEquilibrium(kernel, r=1):
    if not kernel.vertices:
        raise InvalidParameterError("an empty vertex set is not a kernel")
    return MassDistribution.onVertices(kernel.n, kernel.vertices, r)


def satisfiesKernelHypothesis(game):
    """Normal linear game with alpha_{i,j} > 1 and alpha_{i,j} + alpha_{j,i} > 2 on every arc."""
    if not classConditions(game)[CLASS_NORMAL]:
        return False
    influence = game.influence
    for (i, j), value in influence.entries.items():
        if value <= 1 or value + influence.value(j, i) <= 2:
            return False
    return True


######################################
## def strongSupportsMatchKernels() ##
######################################
def strongSupportsMatchKernels(d, alpha, r=1, deltaGrid=None, nMax=G_MATCH_N_MAX):
    """Compares the supports of strong equilibria of the reduced game with the kernels of d

    Every equilibrium from support enumeration is sampled (families at their
    vertices, centroid and midpoints) and tested for delta-strongness at
    delta = r/|support| and at a tiny delta. The two sets of supports must agree.

    Args:
        d (Digraph): digraph with at most nMax vertices
        alpha (number): influence on every arc, > 1
        r (number): total mass
        deltaGrid (iterable): explicit delta values replacing the default pair
        nMax (int): size limit

    Returns:
        tuple: (True when the sets agree, list of discrepancy strings)
    """
    if d.n > nMax:
        raise ProblemTooLargeError(f"kernel matching is limited to n <= {nMax}, digraph has {d.n}")
    game = digraphToNbg(d, alpha, r)
    kernels = {kernel.vertices for kernel in enumerateKernels(d)}
    discrepancies = []

    strongSupports = set()
    for result in solveAffineBySupports(game):
        for masses in result.samplePoints():
            x = MassDistribution(tuple(masses), game.r)
            support = x.support()
            if deltaGrid is None:
                deltas = [game.r / len(support), game.r * SMALL_DELTA_SHARE]
            else:
                deltas = [parseNumber(delta) for delta in deltaGrid]
            verdicts = [verifyDeltaStrong(game, x, delta).isStrong for delta in deltas]
            if any(verdicts):
                strongSupports.add(support)

    for support in sorted(strongSupports - kernels, key=sorted):
        discrepancies.append(f"strong equilibrium on {sorted(support)} which is not a kernel")

    for kernel in sorted(kernels, key=sorted):
        x = kernelToStrongEquilibrium(Kernel(kernel, d.n), game.r)
        if not verifyEquilibrium(game, x).isEquilibrium:
            discrepancies.append(f"kernel {sorted(kernel)} does not carry an equilibrium")
        elif not verifyDeltaStrong(game, x, game.r / len(kernel)).isStrong:
            discrepancies.append(f"kernel {sorted(kernel)} equilibrium is not r/k-strong")
        if kernel not in strongSupports:
            discrepancies.append(f"kernel {sorted(kernel)} missing from the strong supports found")

    for message in discrepancies:
        logger.warning("kernel correspondence: %s", message)
    return not discrepancies, discrepancies
