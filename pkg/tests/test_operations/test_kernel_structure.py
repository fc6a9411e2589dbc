from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

import nbg_toolkit.kernel_structure as ks
from nbg_toolkit.equilibrium import solveAffineBySupports, verifyDeltaStrong, verifyEquilibrium
from nbg_toolkit.errors import InvalidDigraphError, InvalidParameterError, ProblemTooLargeError
from nbg_toolkit.game_core import Game, InfluenceMatrix, MassDistribution, VertexCostFn
from nbg_toolkit.storage import bundledPath


def randomDigraph(rng, n):
    arcs = {(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j and rng.random() < 0.3}
    return ks.Digraph(n, frozenset(arcs))


#region digraphs
def test_from_text_skips_comments():
    d = ks.Digraph.fromText("# triangle\n3\n\n1 2\n2 3\n3 1\n")
    assert d.n == 3
    assert d.arcs == frozenset({(1, 2), (2, 3), (3, 1)})
    assert ks.Digraph.fromText(d.toText()) == d


@pytest.mark.parametrize("text, line", [
    ("3\n1 x\n", "line 2"),
    ("3\n1 2 3\n", "line 2"),
    ("3 4\n", "line 1"),
], ids=["not_integer", "three_numbers", "bad_header"])
def test_from_text_errors_name_the_line(text, line):
    with pytest.raises(InvalidDigraphError, match=line):
        ks.Digraph.fromText(text)


@pytest.mark.parametrize("n, arcs", [
    (2, {(1, 1)}),
    (2, {(1, 3)}),
    (0, set()),
], ids=["self_loop", "outside", "empty"])
def test_digraph_validation(n, arcs):
    with pytest.raises(InvalidDigraphError):
        ks.Digraph(n, frozenset(arcs))


def test_bundled_digraph_loads():
    d = ks.loadDigraph(bundledPath("directed_triangle"))
    assert d.toNetworkx().number_of_edges() == 3
#endregion


#region kernels
@pytest.mark.parametrize("d, expected", [
    (ks.Digraph(3, frozenset({(1, 2), (2, 3), (3, 1)})), []),
    (ks.Digraph(2, frozenset({(1, 2)})), [[1]]),
    (ks.Digraph(2, frozenset({(1, 2), (2, 1)})), [[1], [2]]),
    (ks.Digraph(4, frozenset({(1, 2), (1, 3), (1, 4)})), [[1]]),
    (ks.Digraph(3), [[1, 2, 3]]),
    (ks.Digraph(4, frozenset({(1, 2), (2, 3), (3, 4)})), [[1, 3]]),
], ids=["triangle", "arc", "two_cycle", "out_star", "edgeless", "directed_path"])
def test_enumerate_kernels(d, expected):
    assert [sorted(k.vertices) for k in ks.enumerateKernels(d)] == expected


def test_enumeration_agrees_with_direct_check():
    rng = np.random.default_rng(2)
    for _ in range(20):
        d = randomDigraph(rng, int(rng.integers(1, 8)))
        found = {k.vertices for k in ks.enumerateKernels(d)}
        graph = d.toNetworkx()
        direct = {frozenset(s) for s in _subsets(d.n) if ks.isKernel(d, s)}
        assert found == direct
        assert all(nx.is_dominating_set(graph, k) for k in found)


def _subsets(n):
    for mask in range(1, 1 << n):
        yield [i + 1 for i in range(n) if mask >> i & 1]


def test_kernel_enumeration_size_limit():
    with pytest.raises(ProblemTooLargeError):
        ks.enumerateKernels(ks.Digraph(5), nMax=4)
#endregion


#region reduction
def test_reduction_game(triangle):
    game = ks.digraphToNbg(triangle, 2)
    assert game.exact
    assert not game.symmetric
    # one-way arcs need alpha > 2 for alpha_ij + alpha_ji > 2
    assert not ks.satisfiesKernelHypothesis(game)
    assert ks.satisfiesKernelHypothesis(ks.digraphToNbg(triangle, 3))
    x = MassDistribution.uniform(3, 1)
    report = verifyEquilibrium(game, x)
    assert report.isEquilibrium
    assert report.commonCost == 1


@pytest.mark.parametrize("alpha", [1, Fraction(1, 2)], ids=["one", "half"])
def test_reduction_needs_alpha_above_one(triangle, alpha):
    with pytest.raises(InvalidParameterError):
        ks.digraphToNbg(triangle, alpha)


def test_kernel_hypothesis_rejects_other_games():
    costs = [VertexCostFn.affine(1, 1), VertexCostFn.affine(1)]
    affine = Game.graphical(2, 1, costs, InfluenceMatrix.fromTriples(2, [(1, 2, 2)]))
    assert not ks.satisfiesKernelHypothesis(affine)
    costs = [VertexCostFn.affine(1), VertexCostFn.affine(1)]
    weak = Game.graphical(2, 1, costs, InfluenceMatrix.fromTriples(2, [(1, 2, Fraction(1, 2))]))
    assert not ks.satisfiesKernelHypothesis(weak)


@pytest.mark.parametrize("d, expected", [
    (ks.Digraph(2, frozenset({(1, 2)})), False),
    (ks.Digraph(3, frozenset({(1, 2), (2, 3), (3, 1)})), False),
    (ks.Digraph(4, frozenset({(1, 2), (1, 3), (1, 4)})), False),
    (ks.Digraph(3, frozenset({(1, 2), (2, 1), (2, 3)})), False),
    (ks.Digraph(2, frozenset({(1, 2), (2, 1)})), True),
], ids=["arc", "triangle", "out_star", "two_cycle_and_arc", "two_cycle"])
def test_kernel_hypothesis_at_three_halves(d, expected):
    assert ks.satisfiesKernelHypothesis(ks.digraphToNbg(d, Fraction(3, 2))) is expected


def test_kernel_equilibrium(singleArc):
    kernel = ks.enumerateKernels(singleArc)[0]
    x = ks.kernelToStrongEquilibrium(kernel, 2)
    assert x.masses == (2, 0)
    assert x.total == 2
#endregion


#region correspondence
def test_triangle_has_no_strong_equilibrium(triangle):
    matched, discrepancies = ks.strongSupportsMatchKernels(triangle, 2)
    assert matched
    assert discrepancies == []
    # the uniform distribution is the only equilibrium and it is not strong
    results = solveAffineBySupports(ks.digraphToNbg(triangle, 2))
    assert [r.masses for r in results] == [(Fraction(1, 3),) * 3]


@pytest.mark.parametrize("d", [
    ks.Digraph(2, frozenset({(1, 2)})),
    ks.Digraph(2, frozenset({(1, 2), (2, 1)})),
    ks.Digraph(4, frozenset({(1, 2), (2, 3), (3, 4)})),
    ks.Digraph(3),
], ids=["arc", "two_cycle", "directed_path", "edgeless"])
@pytest.mark.parametrize("alpha", [Fraction(5, 2), 3], ids=["five_halves", "three"])
def test_small_digraphs_match(d, alpha):
    matched, discrepancies = ks.strongSupportsMatchKernels(d, alpha)
    assert matched, discrepancies


def test_random_digraphs_match():
    rng = np.random.default_rng(17)
    for _ in range(30):
        d = randomDigraph(rng, int(rng.integers(1, 8)))
        matched, discrepancies = ks.strongSupportsMatchKernels(d, 3)
        assert matched, (sorted(d.arcs), discrepancies)


# Kernels carry r/k-strong equilibria as soon as every arc weighs at least 1
@pytest.mark.parametrize("alpha", [Fraction(3, 2), 2, 5], ids=["three_halves", "two", "five"])
def test_kernels_give_strong_equilibria(alpha):
    rng = np.random.default_rng(23)
    for _ in range(15):
        d = randomDigraph(rng, int(rng.integers(1, 8)))
        game = ks.digraphToNbg(d, alpha)
        for kernel in ks.enumerateKernels(d):
            x = ks.kernelToStrongEquilibrium(kernel, 1)
            assert verifyDeltaStrong(game, x, Fraction(1, len(kernel))).isStrong


def test_match_size_limit():
    with pytest.raises(ProblemTooLargeError):
        ks.strongSupportsMatchKernels(ks.Digraph(4), 2, nMax=3)
#endregion
