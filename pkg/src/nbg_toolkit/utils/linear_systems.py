# Rank-revealing linear algebra shared by the support-enumeration solver, the
# KKT search of the social optimum and the uniform-cost systems.
#
# Exact mode runs sympy's DomainMatrix over QQ (or over QQ<sqrt 5> when an entry
# is a quadratic irrational), float mode runs an SVD with a relative rank cutoff.
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from numbers import Integral

import numpy as np
import sympy as spy
from sympy.polys.matrices import DomainMatrix

from nbg_toolkit.utils.number_helpers import fromSympy, toSympy

logger = logging.getLogger(__name__)

FLOAT_RANK_TOL = 1e-9
FLOAT_RESIDUAL_TOL = 1e-9
FLOAT_FEASIBILITY_TOL = 1e-9

UNIQUE = "unique"
FAMILY = "family"
NONE = "none"


@dataclass(frozen=True)
class LinearSolution:
    kind: str
    basepoint: tuple = ()
    basis: tuple = ()
    exact: bool = True

    @property
    def dimension(self):
        return len(self.basis)


def canonical(value):
    """Normal form of a number so that exact comparisons are decidable.

    Fractions and floats are returned untouched; sympy expressions in a quadratic
    field are expanded with rationalised denominators (a + b*sqrt(5)).
    """
    if isinstance(value, spy.Basic):
        return spy.expand(spy.radsimp(spy.expand(value)))
    return value


def signOf(value, tol=0.0):
    value = canonical(value)
    if isinstance(value, spy.Basic):
        if value == 0:
            return 0
        return 1 if bool(value > 0) else -1
    if isinstance(value, float):
        if abs(value) <= tol:
            return 0
        return 1 if value > 0 else -1
    return (value > 0) - (value < 0)


def dot(row, vector):
    total = 0
    for a, b in zip(row, vector):
        total = total + a * b
    return canonical(total)


def _isRational(value):
    return isinstance(value, (Fraction, Integral)) and not isinstance(value, bool)


#####################################
## def solveLinearSystem(rows, rhs) ##
#####################################
def solveLinearSystem(rows, rhs, exact=True):
    """Solves rows . x = rhs and describes the whole solution set

    Args:
        rows (list of lists): coefficient matrix, one list per equation
        rhs (list): right-hand side, one value per equation
        exact (bool): Fractions/sympy numbers in, exact answer out; otherwise
            float arithmetic with a relative rank cutoff

    Returns:
        LinearSolution: "none" when inconsistent, "unique" with the solution as
            basepoint, or "family" with a basepoint and a basis of the kernel
    """
    if not rows:
        raise ValueError("empty linear system")
    if exact:
        return _solveExact(rows, rhs)
    return _solveFloat(rows, rhs)


def _domainMatrix(augmented):
    nRows = len(augmented)
    nCols = len(augmented[0])
    if all(_isRational(v) for row in augmented for v in row):
        elements = []
        for row in augmented:
            elements.append([spy.QQ(Fraction(v).numerator, Fraction(v).denominator) for v in row])
        return DomainMatrix(elements, (nRows, nCols), spy.QQ), True
    symbolic = [[toSympy(v) for v in row] for row in augmented]
    matrix = DomainMatrix.from_list_sympy(nRows, nCols, symbolic, extension=True).to_field()
    return matrix, matrix.domain.is_QQ


def _solveExact(rows, rhs):
    nUnknowns = len(rows[0])
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    matrix, rational = _domainMatrix(augmented)
    reduced, pivots = matrix.rref()
    entries = reduced.to_Matrix()

    # Rational systems hand back Fractions, algebraic ones stay symbolic
    if rational:
        convert = fromSympy
        zero, one = Fraction(0), Fraction(1)
    else:
        convert = canonical
        zero, one = spy.Integer(0), spy.Integer(1)

    if nUnknowns in pivots:
        return LinearSolution(NONE, exact=True)

    basepoint = [zero] * nUnknowns
    for k, p in enumerate(pivots):
        basepoint[p] = convert(entries[k, nUnknowns])

    basis = []
    for f in range(nUnknowns):
        if f in pivots:
            continue
        vector = [zero] * nUnknowns
        vector[f] = one
        for k, p in enumerate(pivots):
            vector[p] = convert(-entries[k, f])
        basis.append(tuple(vector))

    kind = FAMILY if basis else UNIQUE
    return LinearSolution(kind, tuple(basepoint), tuple(basis), exact=True)


def _solveFloat(rows, rhs):
    a = np.array(rows, dtype=float)
    b = np.array(rhs, dtype=float)
    u, s, vt = np.linalg.svd(a, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(s > FLOAT_RANK_TOL * s[0]))

    # pseudo-inverse restricted to the numerically nonzero singular values
    coefficients = (u[:, :rank].T @ b) / s[:rank]
    x = vt[:rank].T @ coefficients
    residual = np.max(np.abs(a @ x - b)) if b.size else 0.0
    if residual > FLOAT_RESIDUAL_TOL * (1.0 + np.max(np.abs(b))):
        return LinearSolution(NONE, exact=False)

    basis = tuple(tuple(float(v) for v in row) for row in vt[rank:])
    kind = FAMILY if basis else UNIQUE
    return LinearSolution(kind, tuple(float(v) for v in x), basis, exact=False)


def determinant(rows):
    """Exact determinant of a square matrix of Fractions or sympy numbers."""
    matrix, rational = _domainMatrix([list(row) for row in rows])
    value = matrix.domain.to_sympy(matrix.det())
    return fromSympy(value) if rational else canonical(value)


######################################
## def polytopeVertices(constraints) ##
######################################
def polytopeVertices(constraints, dimension, exact=True):
    """Lists the extreme points of {t : offset + row . t >= 0 for every constraint}

    The sets handled here are bounded (they come from distributions on a simplex),
    so every vertex is the unique solution of `dimension` active constraints.
    """
    if dimension == 0:
        if all(signOf(offset, FLOAT_FEASIBILITY_TOL) >= 0 for _, offset in constraints):
            return [()]
        return []

    vertices = []
    for chosen in combinations(range(len(constraints)), dimension):
        rows = [list(constraints[c][0]) for c in chosen]
        rhs = [-constraints[c][1] for c in chosen]
        solution = solveLinearSystem(rows, rhs, exact)
        if solution.kind != UNIQUE:
            continue
        point = solution.basepoint
        feasible = all(
            signOf(offset + dot(row, point), FLOAT_FEASIBILITY_TOL) >= 0
            for row, offset in constraints
        )
        if feasible and not any(_samePoint(point, v, exact) for v in vertices):
            vertices.append(point)

    logger.debug("polytope of dimension %s has %s vertices", dimension, len(vertices))
    return vertices


def _samePoint(a, b, exact):
    if exact:
        return all(signOf(x - y) == 0 for x, y in zip(a, b))
    return max(abs(float(x) - float(y)) for x, y in zip(a, b)) <= 1e-9


def centroid(points):
    count = len(points)
    return tuple(canonical(sum(coords, 0) / count) if not isinstance(coords[0], float)
                 else sum(coords) / count for coords in zip(*points))
