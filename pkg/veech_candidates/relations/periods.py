"""
Horizontal periods of prototype surfaces from tuples of roots of unity.

The widths b_i of the horizontal cylinders are the residues at z = x_i of

    C·z^(g-1) / Π_i (z - x_i)(z - x_i^(-1))

normalized by b_1 = 1. With c_i = x_i + x_i^(-1) the residue at x_i equals
C / ((x_i - x_i^(-1)) Π_{j != i} (c_i - c_j)) and the residue at x_i^(-1) is its negative.
"""
import enum
import itertools
import logging
import math
import multiprocessing
from dataclasses import dataclass
from typing import Tuple

from ..exact import CycNum, RootOfUnity, coordinates, real_sign, span_report

logger = logging.getLogger(__name__)


class CoincidentRootsError(ValueError):
    ...


class RejectionReason(enum.Enum):
    NON_REAL_RESIDUE = "non-real residue"
    WRONG_SPAN_DEGREE = "wrong span degree"
    SPAN_NOT_A_FIELD = "span is not a field"
    NON_TOTALLY_REAL_SPAN = "non-totally-real span"
    NON_POSITIVE_WIDTH = "non-positive width"


class TupleRejected(Exception):
    def __init__(self, reason, roots):
        self.reason = reason
        self.roots = tuple(roots)
        super().__init__(f"Roots ({', '.join(str(x) for x in roots)}) rejected: {reason.value}")


@dataclass(frozen=True)
class PeriodTuple:
    """
    Accepted root tuple with the widths of the horizontal cylinders (b_1 = 1) and the constant
    ``scale`` of the residue form.
    """

    genus: int
    roots: Tuple[RootOfUnity, ...]
    widths: Tuple[CycNum, ...]
    scale: CycNum

    @property
    def order_lcm(self):
        return math.lcm(*(x.order for x in self.roots))

    def key(self):
        """Sort key: lcm of the orders, then the roots."""
        return (self.order_lcm, tuple((x.order, x.exponent) for x in self.roots))

    def to_json(self):
        return {
            "genus": self.genus,
            "roots": [x.to_json() for x in self.roots],
            "widths": [b.to_json() for b in self.widths],
            "scale": self.scale.to_json(),
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            genus=data["genus"],
            roots=tuple(RootOfUnity.from_json(x) for x in data["roots"]),
            widths=tuple(CycNum.from_json(b) for b in data["widths"]),
            scale=CycNum.from_json(data["scale"]),
        )


def check_roots(x):
    """
    Raise ``CoincidentRootsError`` unless the roots are pairwise distinct, pairwise non-inverse and
    different from 1 and -1.
    """
    for i, xi in enumerate(x):
        if xi.order <= 2:
            raise CoincidentRootsError(f"Root {xi} is real")
        for xj in x[i + 1 :]:
            if xj == xi or xj == xi.inverse():
                raise CoincidentRootsError(f"Roots {xi} and {xj} coincide up to inversion")


def _check_sizes(x, b):
    if len(x) != len(b) or len(x) < 2:
        raise ValueError(f"Expected g >= 2 roots and as many widths, got {len(x)} and {len(b)}")
    check_roots(x)


def _differences(x):
    values = [xi.value() for xi in x]
    inverses = [xi.inverse().value() for xi in x]
    return [v - w for v, w in zip(values, inverses)], [v + w for v, w in zip(values, inverses)]


def _all_zero(values):
    return all(CycNum._coerce(v).is_zero() for v in values)


def period_system_check(x, b):
    """
    True iff Σ_i b_i (x_i^e - x_i^(-e)) = 0 for e = 1, ..., g - 1.
    """
    _check_sizes(x, b)
    g = len(x)
    sums = [
        sum(((bi * ((xi**e).value() - (xi ** (-e)).value())) for xi, bi in zip(x, b)), CycNum.from_rational(0))
        for e in range(1, g)
    ]
    return _all_zero(sums)


def _elementary_symmetric(values, k):
    total = CycNum.from_rational(0)
    for subset in itertools.combinations(values, k):
        product = CycNum.from_rational(1)
        for v in subset:
            product = product * v
        total = total + product
    return total


def equation_system_equivalence_check(g, x, b):
    """
    Evaluate the three equivalent forms of the period equations and report whether they agree.

    The forms are, for e = 1, ..., g - 1 and d_i = x_i - x_i^(-1), c_i = x_i + x_i^(-1):

    * Σ_i b_i d_i σ_{e-1}(c_j : j != i) = 0 (coefficients of the partial fraction numerator),
    * Σ_i b_i d_i c_i^(e-1) = 0,
    * Σ_i b_i (x_i^e - x_i^(-e)) = 0.

    Returns
    -------
    bool
        True iff the three systems are all satisfied or all violated.
    """
    if len(x) != g:
        raise ValueError(f"Expected {g} roots, got {len(x)}")
    _check_sizes(x, b)
    d, c = _differences(x)
    zero = CycNum.from_rational(0)

    symmetric = [
        sum(
            (bi * di * _elementary_symmetric(c[:i] + c[i + 1 :], e - 1) for i, (bi, di) in enumerate(zip(b, d))),
            zero,
        )
        for e in range(1, g)
    ]
    powers = [sum((bi * di * ci ** (e - 1) for bi, di, ci in zip(b, d, c)), zero) for e in range(1, g)]
    verdicts = {_all_zero(symmetric), _all_zero(powers), period_system_check(x, b)}
    return len(verdicts) == 1


def _poly_mul(p, q):
    result = [CycNum.from_rational(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            result[i + j] = result[i + j] + a * b
    return result


def partial_fraction_numerator(x, b):
    """
    Coefficients (lowest degree first) of the numerator of Σ_i b_i/(z - x_i) - b_i/(z - x_i^(-1))
    over the common denominator Π_i (z - x_i)(z - x_i^(-1)).
    """
    _check_sizes(x, b)
    d, c = _differences(x)
    numerator = [CycNum.from_rational(0)] * (2 * len(x) - 1)
    for i, (bi, di) in enumerate(zip(b, d)):
        term = [bi * di]
        for j, cj in enumerate(c):
            if j != i:
                term = _poly_mul(term, [CycNum.from_rational(1), -cj, CycNum.from_rational(1)])
        numerator = [u + v for u, v in zip(numerator, term)]
    return numerator


def compute_residues(x):
    """
    Residues at x_i normalized by b_1 = 1, and the constant C of the residue form, without any
    acceptance test.
    """
    check_roots(x)
    d, c = _differences(x)
    raw = []
    for i, di in enumerate(d):
        denominator = di
        for j, cj in enumerate(c):
            if j != i:
                denominator = denominator * (c[i] - cj)
        raw.append(denominator.inverse())
    scale = raw[0].inverse()
    return [r * scale for r in raw], scale


def residues_from_roots(x):
    """
    Widths of the horizontal cylinders determined by the roots ``x``.

    Parameters
    ----------
    x: list(RootOfUnity)

    Returns
    -------
    PeriodTuple

    Raises
    ------
    CoincidentRootsError
        Roots coincide up to inversion or are real.
    TupleRejected
        The residues are not positive reals spanning a totally real field of degree g.
    """
    x = tuple(x)
    widths, scale = compute_residues(x)
    g = len(x)
    if not all(b.is_real() for b in widths):
        raise TupleRejected(RejectionReason.NON_REAL_RESIDUE, x)
    report = span_report(widths)
    if report.degree != g:
        raise TupleRejected(RejectionReason.WRONG_SPAN_DEGREE, x)
    if not report.is_field:
        raise TupleRejected(RejectionReason.SPAN_NOT_A_FIELD, x)
    if not report.totally_real:
        raise TupleRejected(RejectionReason.NON_TOTALLY_REAL_SPAN, x)
    if any(real_sign(b) <= 0 for b in widths):
        raise TupleRejected(RejectionReason.NON_POSITIVE_WIDTH, x)
    if not period_system_check(x, widths):
        raise RuntimeError(f"Residues of {x} violate the period equations")
    return PeriodTuple(genus=g, roots=x, widths=tuple(widths), scale=scale)


def orient_roots(x):
    """
    Replace roots by their inverses where needed: the first root in the upper half plane, the
    others such that their widths are positive.
    """
    x = list(x)
    if not x[0].upper_half():
        x[0] = x[0].inverse()
    widths, _ = compute_residues(x)
    for i in range(1, len(x)):
        if widths[i].is_real() and real_sign(widths[i]) < 0:
            x[i] = x[i].inverse()
    return tuple(x)


def _representative(root):
    # Representative of {x, 1/x} with exponent below order/2
    return min((root.order, root.exponent), (root.order, (-root.exponent) % root.order))


def canonical_tuple_key(x):
    """
    Key of the class of a root tuple under permutations, inversions x_i ↔ 1/x_i and the
    simultaneous Galois action.
    """
    order = math.lcm(*(xi.order for xi in x))
    return min(
        tuple(sorted(_representative(xi.galois(t)) for xi in x))
        for t in range(1, max(order, 2))
        if math.gcd(t, order) == 1
    )


def _root_classes(order_cap):
    return [
        (n, e) for n in range(3, order_cap + 1) for e in range(1, (n + 1) // 2) if math.gcd(e, n) == 1
    ]


def _tuples_with_lcm(args):
    g, order = args
    classes = [(n, e) for n, e in _root_classes(order) if order % n == 0]
    accepted = []
    for combination in itertools.combinations(classes, g):
        if math.lcm(*(n for n, _ in combination)) != order:
            continue
        roots = tuple(RootOfUnity(n, e) for n, e in combination)
        if canonical_tuple_key(roots) != combination:
            continue
        try:
            accepted.append(residues_from_roots(orient_roots(roots)))
        except TupleRejected as ex:
            logger.debug("%s", ex)
    return accepted


def enumerate_period_tuples(g, order_cap, workers=1):
    """
    Accepted period tuples of genus ``g`` whose roots have lcm of orders at most ``order_cap``,
    one per class under permutation, inversion and the Galois action.

    The work is split by the lcm of the orders; results are merged in canonical order, so the
    output does not depend on ``workers``.

    Returns
    -------
    list(PeriodTuple)
    """
    if g < 2:
        raise ValueError(f"Genus must be at least 2: {g}")
    tasks = [(g, order) for order in range(3, order_cap + 1)]
    if workers > 1 and len(tasks) > 1:
        with multiprocessing.Pool(workers) as pool:
            results = pool.map(_tuples_with_lcm, tasks)
    else:
        results = [_tuples_with_lcm(task) for task in tasks]
    tuples = sorted((t for chunk in results for t in chunk), key=PeriodTuple.key)
    logger.info("Genus %d, order cap %d: %d period tuples", g, order_cap, len(tuples))
    return tuples


def relative_period_candidates(t, winding_cap):
    """
    Candidate values Σ_i b_i (q_i + n_i) of the relative period w_1, where x_i = exp(iπq_i) with
    q_i in [0, 2) and |n_i| <= winding_cap. Only positive values are returned, in increasing order.

    Returns
    -------
    list(CycNum)
    """
    angles = [x.angle() for x in t.roots]
    candidates = []
    for shifts in itertools.product(range(-winding_cap, winding_cap + 1), repeat=t.genus):
        value = sum((b * (q + n) for b, q, n in zip(t.widths, angles, shifts)), CycNum.from_rational(0))
        if real_sign(value) > 0:
            candidates.append(value)
    return sorted(candidates)


def winding_shifts(t, value):
    """The integers n_i with value = Σ_i b_i (q_i + n_i), or None."""
    try:
        coords = coordinates(value, t.widths)
    except ValueError:
        return None
    shifts = [c - x.angle() for c, x in zip(coords, t.roots)]
    if any(s.denominator != 1 for s in shifts):
        return None
    return [int(s) for s in shifts]
