"""
Candidate records emitted by the search and their independent verification.
"""
import itertools
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

import jsonschema

from ..exact import CycNum, RootOfUnity, span_report
from ..flatsurf import (
    DEFAULT_STEP_BUDGET,
    Direction,
    IntersectionMatrix,
    PrototypeParams,
    build_prototype,
    cylinder_decomposition,
    intersection_matrix,
    moduli_commensurability,
    regularity_check,
    validate_surface,
    verify_period_identities,
)
from ..neron import divides_torsion, torsion_order_formula
from ..relations import canonical_tuple_key, period_system_check, residues_from_roots
from .schemas import CANDIDATE_RECORD_SCHEMA

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TraceField:
    """Degree, conductor and trace form discriminant of the field spanned by the widths."""

    degree: int
    conductor: int
    discriminant: Optional[Fraction] = None

    @classmethod
    def from_widths(cls, widths):
        report = span_report(widths)
        return cls(degree=report.degree, conductor=report.conductor, discriminant=report.discriminant)

    def to_json(self):
        discriminant = None if self.discriminant is None else str(self.discriminant)
        return {"degree": self.degree, "conductor": self.conductor, "discriminant": discriminant}

    @classmethod
    def from_json(cls, data):
        discriminant = data["discriminant"]
        return cls(
            degree=data["degree"],
            conductor=data["conductor"],
            discriminant=None if discriminant is None else Fraction(discriminant),
        )


@dataclass(frozen=True)
class CandidateRecord:
    """
    A normalized prototype that passed every check of the search.

    ``relative_period`` is w_1 measured in units of the first width of the period tuple,
    ``winding`` the integers n_i with w_1 = Σ_i b_i (q_i + n_i). The columns of ``matrix`` and the
    entries of ``moduli``, ``vertical_circumferences`` and ``vertical_heights`` refer to the same
    vertical cylinders. ``flags`` records the checks that were run and their results.
    """

    genus: int
    roots: Tuple[RootOfUnity, ...]
    relative_period: CycNum
    winding: Tuple[int, ...]
    torsion_order: int
    moduli: Tuple[int, ...]
    matrix: IntersectionMatrix
    params: PrototypeParams
    vertical_circumferences: Tuple[CycNum, ...]
    vertical_heights: Tuple[CycNum, ...]
    trace: TraceField
    flags: Dict[str, bool] = field(default_factory=dict, compare=False)

    @property
    def widths(self):
        return self.params.widths

    @property
    def heights(self):
        return self.params.heights

    @property
    def twists(self):
        return self.params.twists

    def surface_key(self):
        """Records with equal keys describe the same normalized prototype."""
        return (canonical_tuple_key(self.roots), json.dumps(self.params.to_json(), sort_keys=True))

    def sort_key(self):
        return (
            self.trace.conductor,
            tuple((x.order, x.exponent) for x in self.roots),
            self.moduli,
            json.dumps(self.params.to_json(), sort_keys=True),
        )

    def to_json(self):
        return {
            "genus": self.genus,
            "roots": [x.to_json() for x in self.roots],
            "relative_period": self.relative_period.to_json(),
            "winding": list(self.winding),
            "torsion_order": self.torsion_order,
            "moduli": list(self.moduli),
            "matrix": self.matrix.to_json(),
            "params": self.params.to_json(),
            "vertical_circumferences": [v.to_json() for v in self.vertical_circumferences],
            "vertical_heights": [v.to_json() for v in self.vertical_heights],
            "trace": self.trace.to_json(),
            "flags": dict(sorted(self.flags.items())),
        }

    @classmethod
    def from_json(cls, data):
        jsonschema.validate(instance=data, schema=CANDIDATE_RECORD_SCHEMA)
        return cls(
            genus=data["genus"],
            roots=tuple(RootOfUnity.from_json(x) for x in data["roots"]),
            relative_period=CycNum.from_json(data["relative_period"]),
            winding=tuple(data["winding"]),
            torsion_order=data["torsion_order"],
            moduli=tuple(data["moduli"]),
            matrix=IntersectionMatrix(data["matrix"]),
            params=PrototypeParams.from_json(data["params"]),
            vertical_circumferences=tuple(CycNum.from_json(v) for v in data["vertical_circumferences"]),
            vertical_heights=tuple(CycNum.from_json(v) for v in data["vertical_heights"]),
            trace=TraceField.from_json(data["trace"]),
            flags=dict(data["flags"]),
        )


@dataclass
class VerificationReport:
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self):
        return all(self.checks.values())

    @property
    def failed(self):
        return [name for name, result in self.checks.items() if not result]


def vertical_column_order(s, moduli, E, step_budget=DEFAULT_STEP_BUDGET):
    """
    Match the exact vertical decomposition of ``s`` against the moduli and intersection matrix.

    The separatrices of a surface with these vertical cylinders reach a cone point after at most
    as many crossings as the largest column sum of ``E``, so the tracing budget is capped by that.

    Returns
    -------
    tuple(int) or None
        Column permutation taking the measured intersection matrix to ``E``, or None.
    """
    E = E if isinstance(E, IntersectionMatrix) else IntersectionMatrix(E)
    g, n = E.shape
    budget = min(step_budget, 2 * g * (max(sum(col) for col in E.columns()) + 1))
    try:
        v = cylinder_decomposition(s, Direction.VERTICAL, step_budget=budget)
    except Exception as ex:
        logger.debug("Vertical decomposition failed: %s", ex)
        return None
    if len(v) != n:
        return None
    commensurable, measured_moduli = moduli_commensurability(v)
    if not commensurable:
        return None
    measured = intersection_matrix(s, cylinder_decomposition(s, Direction.HORIZONTAL), v)
    for order in itertools.permutations(range(n)):
        if tuple(measured_moduli[j] for j in order) == tuple(moduli) and measured.permute_columns(order) == E:
            return order
    return None


def horizontal_moduli_commensurable(s):
    """True if the horizontal cylinders of ``s`` have commensurable moduli."""
    return moduli_commensurability(cylinder_decomposition(s, Direction.HORIZONTAL))[0]


def _check(report, name, func):
    try:
        result = bool(func())
    except Exception as ex:
        logger.debug("Check '%s' raised: %s", name, ex)
        result = False
    report.checks[name] = result


def verify_candidate(c, strict=None, step_budget=DEFAULT_STEP_BUDGET):
    """
    Re-run every check of the search on a record, from scratch.

    Parameters
    ----------
    c: CandidateRecord
    strict: bool or None
        Also match the exact vertical decomposition of the surface. Defaults to the ``strict`` flag
        of the record.
    step_budget: int

    Returns
    -------
    VerificationReport
    """
    strict = c.flags.get("strict", False) if strict is None else strict
    report = VerificationReport()
    p = c.params
    N = c.torsion_order

    def residues():
        return residues_from_roots(c.roots).widths

    _check(report, "period_system", lambda: c.genus == p.genus and period_system_check(c.roots, p.widths))
    _check(
        report,
        "normalization",
        lambda: p.is_normalized()
        and all(b == p.widths[0] * r for b, r in zip(p.widths, residues()))
        and p.slit_widths[0] == p.widths[0] * c.relative_period,
    )

    def span():
        s = span_report(p.widths)
        return (
            s.degree == c.genus
            and s.is_field
            and s.totally_real
            and (2 * N) % s.conductor == 0
            and s.conductor == c.trace.conductor
        )

    _check(report, "span", span)
    _check(report, "torsion_order", lambda: all((2 * N) % x.order == 0 for x in c.roots))
    _check(report, "divides_torsion", lambda: divides_torsion(torsion_order_formula(c.moduli, 0, 0), N))
    _check(report, "regularity", lambda: regularity_check(c.matrix, c.moduli))

    def identities():
        actual = [h / b for h, b in zip(c.vertical_heights, c.vertical_circumferences)]
        return moduli_commensurability(actual) == (True, tuple(c.moduli)) and verify_period_identities(
            c.matrix, p.heights, p.widths, c.vertical_heights, c.vertical_circumferences, actual
        )

    _check(report, "period_identities", identities)
    _check(report, "surface", lambda: validate_surface(build_prototype(p)).passed)
    if strict:
        _check(report, "horizontal_decomposition", lambda: horizontal_moduli_commensurable(build_prototype(p)))
        _check(
            report,
            "vertical_decomposition",
            lambda: vertical_column_order(build_prototype(p), c.moduli, c.matrix, step_budget) is not None,
        )
    for name in report.failed:
        logger.debug("Check '%s' failed for roots %s", name, [str(x) for x in c.roots])
    return report
