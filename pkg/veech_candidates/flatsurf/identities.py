"""
Linear relations between the horizontal and vertical cylinders of a surface with both directions
periodic, and their inversion.

With E the intersection matrix, m_j the vertical moduli and D = diag(m):

    b^h = E h^v = E D b^v,    b^v = E^t h^h,    hence    b^h = E D E^t h^h.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Tuple

from sympy import Matrix, Rational

from ..exact import CycNum, real_sign, to_fraction
from .decomposition import (
    DEFAULT_STEP_BUDGET,
    Direction,
    IntersectionMatrix,
    cylinder_decomposition,
    intersection_matrix,
)
from .params import reduce_modulo

logger = logging.getLogger(__name__)


class SingularSystemError(ValueError):
    ...


class NonPositiveSolutionError(ValueError):
    ...


def _entries(E):
    return E.entries if isinstance(E, IntersectionMatrix) else tuple(tuple(int(e) for e in row) for row in E)


def _as_value(v):
    return v if isinstance(v, CycNum) else CycNum.from_rational(to_fraction(v))


def _rational(v):
    return v.rational_value() if isinstance(v, CycNum) else to_fraction(v)


def _to_rational(value):
    value = to_fraction(value)
    return Rational(value.numerator, value.denominator)


def _dot(row, values):
    return sum((e * v for e, v in zip(row, values) if e), CycNum.from_rational(0))


def _check_shapes(entries, rows, columns):
    if len(entries) != rows or any(len(row) != columns for row in entries):
        raise ValueError(f"Intersection matrix of shape {rows}x{columns} expected, got {entries}")


def verify_period_identities(E, h_h, b_h, h_v, b_v, m_v):
    """
    True iff b^h_i = Σ_j e_ij h^v_j = Σ_j e_ij m_j b^v_j for every i and b^v_j = Σ_i e_ij h^h_i
    for every j, exactly.
    """
    entries = _entries(E)
    g, n = len(b_h), len(b_v)
    _check_shapes(entries, g, n)
    if len(h_h) != g or len(h_v) != n or len(m_v) != n:
        raise ValueError("Inconsistent numbers of cylinders")
    h_h, b_h, h_v, b_v, m_v = ([_as_value(v) for v in values] for values in (h_h, b_h, h_v, b_v, m_v))
    weighted = [m * b for m, b in zip(m_v, b_v)]
    columns = list(zip(*entries))
    return (
        all(_dot(row, h_v) == b for row, b in zip(entries, b_h))
        and all(_dot(row, weighted) == b for row, b in zip(entries, b_h))
        and all(_dot(col, h_h) == b for col, b in zip(columns, b_v))
    )


def _gram(entries, m_v):
    g = len(entries)
    return [
        [_dot([a * b for a, b in zip(entries[i], entries[k])], m_v) for k in range(g)] for i in range(g)
    ]


def _determinant(matrix):
    if len(matrix) == 1:
        return matrix[0][0]
    total = CycNum.from_rational(0)
    for j, value in enumerate(matrix[0]):
        if value.is_zero():
            continue
        minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
        term = value * _determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def regularity_check(E, m_v):
    """True iff det(E diag(m) E^t) is nonzero."""
    entries = _entries(E)
    if not entries or len(entries[0]) != len(m_v):
        raise ValueError("Inconsistent numbers of cylinders")
    return not _determinant(_gram(entries, [_as_value(m) for m in m_v])).is_zero()


@dataclass(frozen=True)
class SolvedGeometry:
    heights: Tuple[CycNum, ...]
    vertical_circumferences: Tuple[CycNum, ...]
    vertical_heights: Tuple[CycNum, ...]


def solve_geometry(b_h, m_v, E):
    """
    Solve b^h = E diag(m) E^t h^h for the horizontal heights, then b^v = E^t h^h and
    h^v = diag(m) b^v.

    The moduli are rational. Scaling them by a common factor scales h^h and b^v by its inverse
    and leaves h^v unchanged.

    Returns
    -------
    SolvedGeometry

    Raises
    ------
    SingularSystemError
        The matrix E diag(m) E^t is singular.
    NonPositiveSolutionError
        Some solved height or width is not positive.
    """
    entries = _entries(E)
    g, n = len(b_h), len(m_v)
    _check_shapes(entries, g, n)
    moduli = [_rational(m) for m in m_v]
    gram = Matrix(
        g, g, lambda i, k: _to_rational(sum(entries[i][j] * entries[k][j] * moduli[j] for j in range(n)))
    )
    if gram.det() == 0:
        raise SingularSystemError(f"E diag(m) E^t is singular for E={entries}, m={[str(m) for m in moduli]}")
    inverse = gram.inv()
    b_h = [_as_value(b) for b in b_h]
    heights = [
        sum((to_fraction(inverse[i, k]) * b_h[k] for k in range(g)), CycNum.from_rational(0)) for i in range(g)
    ]
    circumferences = [_dot(col, heights) for col in zip(*entries)]
    vertical_heights = [m * b for m, b in zip(moduli, circumferences)]
    for name, values in (("heights", heights), ("circumferences", circumferences), ("widths", vertical_heights)):
        if any(real_sign(v) <= 0 for v in values):
            raise NonPositiveSolutionError(f"Solved {name} are not all positive")
    return SolvedGeometry(tuple(heights), tuple(circumferences), tuple(vertical_heights))


def enumerate_twists(widths, h_v, E):
    """
    Twist vectors compatible with the vertical cylinders: t_i ≡ -Σ_j n_j h^v_j (mod b_i) with
    0 <= n_j <= e_ij, reduced to [0, b_i).

    Returns
    -------
    list(tuple(CycNum))
        Sorted lexicographically.
    """
    entries = _entries(E)
    _check_shapes(entries, len(widths), len(h_v))
    h_v = [_as_value(v) for v in h_v]
    per_cylinder = []
    for row, b in zip(entries, widths):
        values = set()
        for n in itertools.product(*(range(e + 1) for e in row)):
            values.add(reduce_modulo(-_dot(n, h_v), _as_value(b)))
        per_cylinder.append(sorted(values))
    twists = list(itertools.product(*per_cylinder))
    logger.debug("%d twist vectors", len(twists))
    return twists


@dataclass(frozen=True)
class MeasuredGeometry:
    """Horizontal and vertical cylinder data measured on a surface."""

    matrix: IntersectionMatrix
    heights: Tuple[CycNum, ...]
    widths: Tuple[CycNum, ...]
    vertical_heights: Tuple[CycNum, ...]
    vertical_circumferences: Tuple[CycNum, ...]
    vertical_moduli: Tuple[CycNum, ...]

    def identities_hold(self):
        return verify_period_identities(
            self.matrix,
            self.heights,
            self.widths,
            self.vertical_heights,
            self.vertical_circumferences,
            self.vertical_moduli,
        )


def measure_geometry(s, step_budget=DEFAULT_STEP_BUDGET):
    """Decompose ``s`` in both directions and collect the cylinder data."""
    horizontal = cylinder_decomposition(s, Direction.HORIZONTAL)
    vertical = cylinder_decomposition(s, Direction.VERTICAL, step_budget=step_budget)
    return MeasuredGeometry(
        matrix=intersection_matrix(s, horizontal, vertical),
        heights=tuple(c.height for c in horizontal.cylinders),
        widths=tuple(c.circumference for c in horizontal.cylinders),
        vertical_heights=tuple(c.height for c in vertical.cylinders),
        vertical_circumferences=tuple(c.circumference for c in vertical.cylinders),
        vertical_moduli=tuple(c.modulus for c in vertical.cylinders),
    )