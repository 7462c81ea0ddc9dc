"""
Conductor bounds for irreducible relations between roots of unity and an exhaustive check of the
bounds on small relations.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

import numpy as np
from sympy import Matrix, isprime, primerange

from ..exact import CycNum, RootOfUnity, to_fraction
from .vanishing import VanishingRelation, is_irreducible, normalize_rotation

logger = logging.getLogger(__name__)


def mann_exponent_bound(p, g):
    """
    Smallest ν with p^ν >= 1 + g/(p-1), evaluated as p^ν (p-1) >= p - 1 + g in integers.
    """
    if not isprime(p):
        raise ValueError(f"{p} is not a prime")
    if g < 1:
        raise ValueError(f"The degree must be positive: {g}")
    nu = 0
    while p**nu * (p - 1) < p - 1 + g:
        nu += 1
    return nu


def mann_conductor_bound(k, g):
    """
    The conductor N = Π_{p <= 2kg} p^ν(p) containing a rotated copy of every irreducible relation
    of length ``k`` with coefficients in a field of degree ``g``.

    Parameters
    ----------
    k: int
        Length of the relation, ``k >= 1``.
    g: int
        Degree of the coefficient field, ``g >= 1``.

    Returns
    -------
    int
    """
    if k < 1 or g < 1:
        raise ValueError(f"Invalid parameters: k={k}, g={g}")
    return math.prod(p ** mann_exponent_bound(p, g) for p in primerange(2, 2 * k * g + 1))


@dataclass
class MannScanReport:
    max_terms: int
    coeff_bound: int
    order_cap: int
    supports_checked: int = 0
    relations_checked: int = 0
    counterexamples: List[VanishingRelation] = field(default_factory=list)

    @property
    def passed(self):
        return not self.counterexamples


def _numeric_kernel(exponents, order):
    """
    Orthonormal basis (columns) of the complex kernel of the embedding matrix, or None if the
    columns are independent.
    """
    rows = [t for t in range(1, max(order, 2)) if math.gcd(t, order) == 1]
    matrix = np.exp(2j * np.pi * np.outer(rows, exponents) / order)
    _, singular, vh = np.linalg.svd(matrix)
    rank = int(np.sum(singular > 1e-9))
    if rank == len(exponents):
        return None
    return vh[rank:].conj().T


def _integer_kernel_vectors(exponents, order, coeff_bound):
    """
    Integer vectors with entries in [-coeff_bound, coeff_bound] \\ {0} annihilated by the exact
    coefficient matrix of the roots ζ_order^e.

    A kernel vector is determined by its entries at the free columns of the reduced row echelon
    form, so only those entries are enumerated.
    """
    columns = [CycNum.zeta(order, e).coeffs for e in exponents]
    matrix = Matrix([list(row) for row in zip(*columns)])
    basis = [[to_fraction(c) for c in vector] for vector in matrix.nullspace()]
    if not basis:
        return []
    _, pivots = matrix.rref()
    free = [i for i in range(len(exponents)) if i not in pivots]
    choices = [c for c in range(-coeff_bound, coeff_bound + 1) if c]
    vectors = []
    for values in itertools.product(choices, repeat=len(free)):
        vector = [sum((v * b[i] for v, b in zip(values, basis)), Fraction(0)) for i in range(len(exponents))]
        if all(c.denominator == 1 and c != 0 and abs(c) <= coeff_bound for c in vector):
            vectors.append([int(c) for c in vector])
    return vectors


def _supports(max_terms, order):
    # Exponent sets containing 0 whose roots generate exactly the order-th roots of unity
    for size in range(2, max_terms + 1):
        for rest in itertools.combinations(range(1, order), size - 1):
            if math.gcd(order, *rest) == 1:
                yield (0,) + rest


def irreducible_relations(max_terms, coeff_bound, order_cap, report=None):
    """
    Enumerate irreducible vanishing relations Σ a_i ζ_i with integer coefficients
    |a_i| <= coeff_bound and at most ``max_terms`` terms.

    Only normalized supports are enumerated: for every L <= order_cap, the exponent sets
    {0, e_2, ...} of roots ζ_L^e that contain 0 (the first root is 1) and generate exactly μ_L
    (gcd(L, e_2, ...) = 1). A relation whose roots have orders <= order_cap but which does not
    contain 1 appears only through its rotation by the inverse of its first root, and only if that
    rotation generates some μ_L with L <= order_cap.

    A floating point kernel computation discards supports that cannot carry a relation using every
    root; the remaining supports are decided exactly.
    """
    for order in range(2, order_cap + 1):
        for exponents in _supports(max_terms, order):
            if report is not None:
                report.supports_checked += 1
            kernel = _numeric_kernel(exponents, order)
            if kernel is None or np.any(np.all(np.abs(kernel) < 1e-9, axis=1)):
                continue
            roots = [RootOfUnity(order, e) for e in exponents]
            for vector in _integer_kernel_vectors(exponents, order, coeff_bound):
                relation = VanishingRelation.from_roots(roots, vector)
                if is_irreducible(relation):
                    yield relation


def mann_soundness_scan(max_terms=5, coeff_bound=3, order_cap=30):
    """
    Check that every irreducible relation in the scan range, rotated so that its first root is 1,
    lives in Q(ζ_N) with N dividing ``mann_conductor_bound(k, 1)``.

    Returns
    -------
    MannScanReport
    """
    report = MannScanReport(max_terms=max_terms, coeff_bound=coeff_bound, order_cap=order_cap)
    bounds = {k: mann_conductor_bound(k, 1) for k in range(1, max_terms + 1)}
    for relation in irreducible_relations(max_terms, coeff_bound, order_cap, report=report):
        report.relations_checked += 1
        rotated = normalize_rotation(relation)
        conductor = math.lcm(*(root.order for root in rotated.roots))
        if bounds[len(rotated)] % conductor:
            logger.error("Relation %s exceeds the conductor bound %d", rotated, bounds[len(rotated)])
            report.counterexamples.append(rotated)
    logger.info(
        "Scanned %d supports, %d irreducible relations, %d counterexamples",
        report.supports_checked,
        report.relations_checked,
        len(report.counterexamples),
    )
    return report
