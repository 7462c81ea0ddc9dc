"""
Rational linear algebra on finite lists of cyclotomic numbers.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from sympy import Matrix, Rational

from .cyclotomic import CycNum, euler_phi, to_fraction

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpanReport:
    """
    Description of the Q-vector space spanned by a list of cyclotomic numbers.

    ``discriminant`` is the determinant of the trace form on ``basis`` and is only computed when the
    span is a field.
    """

    degree: int
    is_field: bool
    totally_real: bool
    conductor: int
    basis: Tuple[CycNum, ...]
    discriminant: Optional[Fraction] = None


def _common_conductor(values):
    n = 1
    for value in values:
        n = n * value.conductor // math.gcd(n, value.conductor)
    return n


def _coefficient_matrix(values, n):
    # One column per value
    rows = zip(*(v.embed(n).coeffs for v in values))
    return Matrix([[Rational(c.numerator, c.denominator) for c in row] for row in rows])


def _as_cycnums(values):
    return [v if isinstance(v, CycNum) else CycNum.from_rational(v) for v in values]


def independent_subset(values):
    """
    Greedy maximal Q-linearly independent sublist of ``values``, in input order.
    """
    values = _as_cycnums(values)
    n = _common_conductor(values)
    basis = []
    for value in values:
        if value.is_zero():
            continue
        if _coefficient_matrix(basis + [value], n).rank() > len(basis):
            basis.append(value)
    return basis


def q_span_degree(v):
    """
    Dimension over Q of the span of ``v``.

    Parameters
    ----------
    v: list
        Nonempty list of ``CycNum`` (rational numbers are accepted).

    Returns
    -------
    int
    """
    if not v:
        raise ValueError("The list of values is empty")
    values = _as_cycnums(v)
    return _coefficient_matrix(values, _common_conductor(values)).rank()


def coordinates(value, basis):
    """
    Rational coordinates of ``value`` in a Q-linearly independent ``basis``.

    Raises
    ------
    ValueError
        ``value`` is not in the span of ``basis``.
    """
    values = _as_cycnums(list(basis) + [value])
    n = _common_conductor(values)
    matrix = _coefficient_matrix(values[:-1], n)
    target = _coefficient_matrix(values[-1:], n)
    try:
        solution, params = matrix.gauss_jordan_solve(target)
    except ValueError as ex:
        raise ValueError(f"{value} is not in the span of the basis") from ex
    if params.shape[0]:
        raise ValueError("The basis is not linearly independent")
    return [to_fraction(c) for c in solution]


def field_trace(a, degree):
    """
    Trace of ``a`` from the subfield of degree ``degree`` containing it down to Q.
    """
    a = _as_cycnums([a])[0].minimal()
    n = a.conductor
    total = CycNum.from_rational(0)
    for t in range(1, max(n, 2)):
        if math.gcd(t, n) == 1:
            total = total + a.galois(t)
    return total.rational_value() * Fraction(degree, euler_phi(n))


def span_report(v):
    """
    Degree, field and reality properties of the span of ``v``.

    The span is a field iff it contains 1 and is closed under multiplication. Subfields of
    cyclotomic fields are abelian, so a real span is totally real.
    """
    values = _as_cycnums(v)
    basis = independent_subset(values)
    degree = len(basis)
    conductor = 1
    for value in basis:
        c = value.minimal().conductor
        conductor = conductor * c // math.gcd(conductor, c)

    totally_real = all(value.is_real() for value in basis)

    n = _common_conductor(basis + [CycNum.from_rational(1)])
    is_field = degree > 0 and _coefficient_matrix(basis + [CycNum.from_rational(1)], n).rank() == degree
    if is_field:
        products = [a * b for i, a in enumerate(basis) for b in basis[i:]]
        n = _common_conductor(basis + products)
        is_field = _coefficient_matrix(basis + products, n).rank() == degree

    discriminant = None
    if is_field:
        gram = Matrix(
            degree,
            degree,
            lambda i, j: Rational(*_fraction_pair(field_trace(basis[i] * basis[j], degree))),
        )
        discriminant = to_fraction(gram.det())

    logger.debug("Span of %d values: degree %d, field: %s, conductor %d", len(values), degree, is_field, conductor)
    return SpanReport(
        degree=degree,
        is_field=is_field,
        totally_real=totally_real,
        conductor=conductor,
        basis=tuple(basis),
        discriminant=discriminant,
    )


def _fraction_pair(value):
    return value.numerator, value.denominator
