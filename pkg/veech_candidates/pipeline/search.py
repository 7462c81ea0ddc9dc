"""
Staged enumeration of candidate prototypes.

For every accepted period tuple the search fixes the relative period w_1, the torsion order N
and the vertical moduli, enumerates intersection matrices, solves for the remaining lengths and
finally lists the twists. Intersection matrices are screened in floating point first; every
candidate that survives is decided with exact arithmetic.
"""
import dataclasses
import itertools
import logging
import math
import multiprocessing
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from ..exact import CycNum, real_sign
from ..flatsurf import (
    DegenerateParameterError,
    Direction,
    IntersectionMatrix,
    NonPositiveSolutionError,
    PrototypeParams,
    SingularSystemError,
    build_prototype,
    cylinder_decomposition,
    enumerate_twists,
    reduce_modulo,
    regularity_check,
    solve_geometry,
    validate_surface,
    verify_period_identities,
)
from ..neron import divides_torsion, enumerate_moduli, torsion_order_formula
from ..relations import (
    enumerate_period_tuples,
    mann_conductor_bound,
    period_system_check,
    relative_period_candidates,
    winding_shifts,
)
from .config import SearchConfig
from .record import CandidateRecord, TraceField, horizontal_moduli_commensurable, vertical_column_order
from .torsion import derive_torsion_order

logger = logging.getLogger(__name__)

_FLOAT_TOLERANCE = 1e-7

# Relative slack of the floating point bounds in the matrix enumeration
_SLACK = 1e-9

_PROPAGATION_ROUNDS = 20


class SearchBudgetExceeded(Exception):
    def __init__(self, stage, limit):
        self.stage = stage
        self.limit = limit
        super().__init__(f"Budget of the search stage '{stage}' exceeded ({limit})")


@dataclass
class SearchStats:
    """Number of items reaching each stage, and rejections by reason."""

    period_tuples: int = 0
    relative_periods: int = 0
    moduli: int = 0
    matrices: int = 0
    prefiltered: int = 0
    geometries: int = 0
    twist_vectors: int = 0
    surfaces: int = 0
    duplicates: int = 0
    candidates: int = 0
    rejections: Dict[str, int] = field(default_factory=dict)

    def reject(self, reason):
        self.rejections[reason] = self.rejections.get(reason, 0) + 1

    def merge(self, other):
        for f in dataclasses.fields(self):
            if f.name == "rejections":
                for reason, count in other.rejections.items():
                    self.rejections[reason] = self.rejections.get(reason, 0) + count
            else:
                setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))

    def to_json(self):
        data = dataclasses.asdict(self)
        data["rejections"] = dict(sorted(self.rejections.items()))
        return data


@dataclass
class SearchResult:
    records: List[CandidateRecord]
    stats: SearchStats


def _check_budget(stage, count, limit):
    if count > limit:
        raise SearchBudgetExceeded(stage, limit)


def top_piece_lengths(p):
    """Lengths of the top pieces of every staircase cylinder, in the order of the gluings."""
    b, w = p.widths, p.slit_widths
    pieces = [(w[0], b[0] - w[0])]
    pieces.extend((w[i], w[i - 1]) for i in range(1, p.genus - 1))
    pieces.append((b[-1] - w[-1], w[-1]))
    return pieces


def _gram_bounds(entries, moduli):
    g = len(entries)
    return [
        [sum(m * entries[i][j] * entries[k][j] for j, m in enumerate(moduli)) for k in range(g)] for i in range(g)
    ]


def _tighten(widths, moduli, lower, upper):
    """
    Propagate bounds on the entries of E and on the heights h of the horizontal cylinders, using
    b_i = Σ_k (E D E^t)_ik h_k with nonnegative terms and h^v_j = m_j Σ_k e_kj h_k >= m_j e_ij h_i.

    Returns
    -------
    tuple or None
        The tightened ``(lower, upper)`` entry bounds, or None if no matrix within the bounds
        admits positive heights.
    """
    g, n = len(widths), len(moduli)
    upper = [row[:] for row in upper]
    high, low = [math.inf] * g, [0.0] * g
    for _ in range(_PROPAGATION_ROUNDS):
        if not all(any(row) for row in upper) or not all(any(col) for col in zip(*upper)):
            return None

        smallest, largest = _gram_bounds(lower, moduli), _gram_bounds(upper, moduli)
        for i in range(g):
            diagonal = max(smallest[i][i], min(m for m, e in zip(moduli, upper[i]) if e))
            high[i] = min(high[i], widths[i] / diagonal)
            for k in range(g):
                if k != i and smallest[i][k]:
                    high[k] = min(high[k], widths[i] / smallest[i][k])
        for i in range(g):
            rest = sum(largest[i][k] * high[k] for k in range(g) if k != i)
            low[i] = max(low[i], (widths[i] - rest) / largest[i][i])
            if low[i] > high[i] * (1 + _SLACK):
                return None

        changed = False
        for i, j in itertools.product(range(g), range(n)):
            if low[i] <= 0:
                continue
            # b_k >= e_kj h^v_j >= e_kj m_j e_ij h_i
            cap = math.sqrt(widths[i] / (moduli[j] * low[i]))
            for k in range(g):
                if k != i and lower[k][j]:
                    cap = min(cap, widths[k] / (lower[k][j] * moduli[j] * low[i]))
            cap = math.floor(cap * (1 + _SLACK))
            if cap < upper[i][j]:
                if cap < lower[i][j]:
                    return None
                upper[i][j] = cap
                changed = True
        if not changed:
            break
    return lower, upper


def admissible_matrices(widths, moduli, cap, limit):
    """
    Intersection matrices for the horizontal widths ``widths`` and vertical ``moduli``.

    Entries are fixed one at a time (row by row) with backtracking. After every choice the
    per-entry caps are tightened by constraint propagation from the widths, starting from
    ``cap``; branches whose bounds admit no positive heights are pruned. Rows and columns are
    nonzero and columns of cylinders with equal moduli come in increasing lexicographic order.

    Parameters
    ----------
    widths: list
        Circumferences of the horizontal cylinders (floats or exact values).
    moduli: tuple(int)
    cap: int
        Upper bound for every entry.
    limit: int
        Maximal number of matrices.

    Returns
    -------
    numpy.ndarray
        Integer array of shape (count, len(widths), len(moduli)).

    Raises
    ------
    SearchBudgetExceeded
        More than ``limit`` matrices are admissible.
    """
    g, n = len(widths), len(moduli)
    widths = [float(b) for b in widths]
    values = [float(m) for m in moduli]
    equal = [(j, k) for j, k in itertools.combinations(range(n), 2) if moduli[j] == moduli[k]]
    found = []

    def ordered(lower, i, k, value):
        # Column k may not become smaller than an earlier column of equal modulus
        for j, other in equal:
            if other == k and all(lower[r][j] == lower[r][k] for r in range(i)) and value < lower[i][j]:
                return False
        return True

    def descend(position, lower, upper):
        bounds = _tighten(widths, values, lower, upper)
        if bounds is None:
            return
        lower, upper = bounds
        if position == g * n:
            found.append(lower)
            _check_budget("matrices", len(found), limit)
            return
        i, k = divmod(position, n)
        for value in range(lower[i][k], upper[i][k] + 1):
            if not ordered(lower, i, k, value):
                continue
            fixed_lower = [row[:] for row in lower]
            fixed_upper = [row[:] for row in upper]
            fixed_lower[i][k] = fixed_upper[i][k] = value
            descend(position + 1, fixed_lower, fixed_upper)

    descend(0, [[0] * n for _ in range(g)], [[cap] * n for _ in range(g)])
    logger.debug("Moduli %s: %d admissible intersection matrices", tuple(moduli), len(found))
    return np.array(found, dtype=int).reshape(-1, g, n)


def _float_geometry(matrices, widths, moduli):
    # Screening only: near-zero values are kept
    n = len(moduli)
    m = np.asarray(moduli, dtype=float)
    gram = np.einsum("kij,klj,j->kil", matrices, matrices, m)
    regular = np.abs(np.linalg.det(gram)) > 0.5
    matrices, gram = matrices[regular], gram[regular]
    if not len(matrices):
        return matrices, np.zeros((0, n))
    b = np.broadcast_to(np.asarray(widths, dtype=float), (len(gram), len(widths)))
    heights = np.linalg.solve(gram, b[..., None])[..., 0]
    circumferences = np.einsum("kij,ki->kj", matrices, heights)
    positive = (heights > -_FLOAT_TOLERANCE).all(axis=1) & (circumferences > -_FLOAT_TOLERANCE).all(axis=1)
    return matrices[positive], (circumferences * m)[positive]


def _pieces_fit_float(matrix, vertical_heights, pieces):
    for row, lengths in zip(matrix, pieces):
        sums = np.zeros(1)
        for e, h in zip(row, vertical_heights):
            sums = (sums[:, None] + np.arange(e + 1) * h).ravel()
        if any(np.min(np.abs(sums - length)) > _FLOAT_TOLERANCE for length in lengths):
            return False
    return True


def _pieces_fit(matrix, vertical_heights, pieces):
    """
    Every top piece of a horizontal cylinder is a sum of full crossings of vertical cylinders, at
    most e_ij of cylinder j.
    """
    for row, lengths in zip(matrix.entries, pieces):
        sums = {CycNum.from_rational(0)}
        for e, h in zip(row, vertical_heights):
            sums = {s + f * h for s in sums for f in range(e + 1)}
        if any(length not in sums for length in lengths):
            return False
    return True


def _base_params(t, w):
    """Normalized widths (b_1 - w_1 = 1) with unit heights and zero twists, or None."""
    scale = (1 - w).inverse()
    try:
        return PrototypeParams.from_widths(
            heights=[1] * t.genus,
            widths=[scale * b for b in t.widths],
            w1=scale * w,
            twists=[0] * t.genus,
        )
    except DegenerateParameterError as ex:
        logger.debug("Relative period %s: %s", w, ex)
        return None


def _float_vertical_matches(s, moduli, budget):
    """
    False if the floating point surface ``s`` clearly has other vertical cylinders, None if
    undecided.
    """
    try:
        v = cylinder_decomposition(s, Direction.VERTICAL, step_budget=budget)
    except Exception as ex:
        logger.debug("Floating point decomposition failed, deciding exactly: %s", ex)
        return None
    if len(v) != len(moduli):
        return False
    measured = np.sort(np.asarray(v.moduli(), dtype=float))
    expected = np.sort(np.asarray(moduli, dtype=float))
    return bool(np.allclose(measured / measured.sum(), expected / expected.sum(), atol=1e-6))


def twist_classes(s, twists):
    """
    One twist vector per class of isometric surfaces.

    Staircase cylinders stacked into one horizontal cylinder can trade twist: only the sum of
    their twists modulo the circumference matters. The first vector of every class is kept.

    Parameters
    ----------
    s: Surface
        Any surface with the gluings of the prototype.
    twists: list(tuple)

    Returns
    -------
    list(tuple)
    """
    horizontal = cylinder_decomposition(s, Direction.HORIZONTAL)
    seen = set()
    representatives = []
    for twist in twists:
        key = tuple(
            reduce_modulo(sum((twist[m] for m in c.members[1:]), twist[c.members[0]]), c.circumference)
            for c in horizontal.cylinders
        )
        if key not in seen:
            seen.add(key)
            representatives.append(twist)
    return representatives


def _candidates_for_matrix(config, t, w, N, base, moduli, E, trace, stats, period_system):
    try:
        solved = solve_geometry(base.widths, moduli, E)
    except (SingularSystemError, NonPositiveSolutionError) as ex:
        stats.reject(type(ex).__name__)
        return []
    if not _pieces_fit(E, solved.vertical_heights, top_piece_lengths(base)):
        stats.reject("pieces")
        return []
    stats.geometries += 1

    # Vertical rescaling to h_1 = 1 divides the vertical circumferences by h_1
    scale = solved.heights[0].inverse()
    circumferences = tuple(b * scale for b in solved.vertical_circumferences)
    identities = verify_period_identities(
        E,
        [h * scale for h in solved.heights],
        base.widths,
        solved.vertical_heights,
        circumferences,
        [h / b for h, b in zip(solved.vertical_heights, circumferences)],
    )
    flags = {
        "period_system": period_system,
        "divides_torsion": divides_torsion(torsion_order_formula(moduli, 0, 0), N),
        "regularity": regularity_check(E, moduli),
        "period_identities": identities,
        "strict": config.strict,
    }
    if not all(v for k, v in flags.items() if k != "strict"):
        stats.reject("necessary conditions")
        return []

    # Twists change neither the gluings nor the widths: the surface is built once per matrix
    template = PrototypeParams.from_widths(solved.heights, base.widths, base.slit_widths[0], [0] * t.genus)
    template = template.normalized()
    surface = build_prototype(template)
    twists = enumerate_twists(base.widths, solved.vertical_heights, E)
    stats.twist_vectors += len(twists)
    twists = twist_classes(surface, twists)
    budget = min(config.step_budget, 2 * t.genus * (max(sum(col) for col in E.columns()) + 1))
    if config.strict and twists and not horizontal_moduli_commensurable(surface):
        stats.reject("horizontal moduli")
        return []
    float_surface = surface.to_float() if config.strict else None

    records = []
    for twist in twists:
        stats.surfaces += 1
        _check_budget("surfaces", stats.surfaces, config.max_surfaces)
        params = template.with_twists(twist)
        if config.strict:
            approximate = float_surface.with_twists([float(x) for x in params.twists])
            if _float_vertical_matches(approximate, moduli, budget) is False:
                stats.reject("floating point vertical decomposition")
                continue
        s = surface.with_twists(params.twists)
        valid = validate_surface(s).passed
        if not valid:
            stats.reject("surface")
            continue
        if config.strict and vertical_column_order(s, moduli, E, budget) is None:
            stats.reject("vertical decomposition")
            continue
        records.append(
            CandidateRecord(
                genus=t.genus,
                roots=t.roots,
                relative_period=w,
                winding=tuple(winding_shifts(t, w)),
                torsion_order=N,
                moduli=tuple(moduli),
                matrix=E,
                params=params,
                vertical_circumferences=circumferences,
                vertical_heights=tuple(solved.vertical_heights),
                trace=trace,
                flags=dict(flags, surface=valid),
            )
        )
    return records


def _search_tuple(args):
    config, t = args
    stats = SearchStats(period_tuples=1)
    records = []
    g = t.genus
    N = derive_torsion_order(t)
    moduli_list = enumerate_moduli(g, N, config.moduli_cap)
    trace = TraceField.from_widths(t.widths)
    logger.debug("Roots %s: N = %d, %d moduli tuples", [str(x) for x in t.roots], N, len(moduli_list))

    for w in relative_period_candidates(t, config.winding_cap):
        # The self-glued piece of the first cylinder has length b_1 - w_1 > 0
        if real_sign(w - 1) >= 0:
            continue
        stats.relative_periods += 1
        base = _base_params(t, w)
        if base is None:
            stats.reject("degenerate slits")
            continue
        if not validate_surface(build_prototype(base)).passed:
            stats.reject("surface")
            continue
        period_system = period_system_check(t.roots, base.widths)
        widths = [float(b) for b in base.widths]
        pieces = [[float(x) for x in row] for row in top_piece_lengths(base)]

        for moduli in moduli_list:
            stats.moduli += 1
            matrices = admissible_matrices(widths, moduli, config.resolved_entry_cap, config.max_matrices)
            stats.matrices += len(matrices)
            _check_budget("matrices", stats.matrices, config.max_matrices)
            survivors, vertical_heights = _float_geometry(matrices, widths, moduli)
            for matrix, heights in zip(survivors, vertical_heights):
                if not _pieces_fit_float(matrix, heights, pieces):
                    continue
                stats.prefiltered += 1
                E = IntersectionMatrix(matrix.tolist())
                records.extend(
                    _candidates_for_matrix(config, t, w, N, base, moduli, E, trace, stats, period_system)
                )
    return records, stats


def run_search(config, workers=1):
    """
    Run all stages of the search.

    Period tuples are processed independently, in worker processes if ``workers > 1``. Records
    describing the same normalized prototype are merged, keeping the smallest moduli vector, and
    the result is sorted, so the output does not depend on ``workers``.

    Parameters
    ----------
    config: SearchConfig
    workers: int

    Returns
    -------
    SearchResult

    Raises
    ------
    SearchBudgetExceeded
        Some stage produced more items than its budget allows.
    """
    g = config.genus
    if config.entry_cap is not None and config.entry_cap != config.default_entry_cap:
        logger.warning(
            "Intersection entry cap %d overrides the default %d", config.entry_cap, config.default_entry_cap
        )
    logger.info(
        "Genus %d, order cap %d (conductor ceiling from the Mann bound: %d)",
        g,
        config.order_cap,
        mann_conductor_bound(2 * g, g),
    )

    tuples = enumerate_period_tuples(g, config.order_cap, workers=workers)
    _check_budget("period_tuples", len(tuples), config.max_period_tuples)
    tasks = [(config, t) for t in tuples]
    if workers > 1 and len(tasks) > 1:
        with multiprocessing.Pool(workers) as pool:
            results = pool.map(_search_tuple, tasks)
    else:
        results = [_search_tuple(task) for task in tasks]

    stats = SearchStats()
    merged = {}
    for records, chunk_stats in results:
        stats.merge(chunk_stats)
        for record in records:
            key = record.surface_key()
            if key in merged:
                stats.duplicates += 1
                if record.moduli < merged[key].moduli:
                    merged[key] = record
            else:
                merged[key] = record
    _check_budget("matrices", stats.matrices, config.max_matrices)
    _check_budget("surfaces", stats.surfaces, config.max_surfaces)

    candidates = sorted(merged.values(), key=CandidateRecord.sort_key)
    stats.candidates = len(candidates)
    for stage, count in stats.to_json().items():
        if stage != "rejections":
            logger.info("Stage %s: %d", stage, count)
    for reason, count in sorted(stats.rejections.items()):
        logger.debug("Rejected (%s): %d", reason, count)
    return SearchResult(records=candidates, stats=stats)


def search(genus, order_cap, winding_cap=2, workers=1, **options):
    """
    Candidate records of the given genus; see ``run_search``.

    Parameters
    ----------
    genus: int
    order_cap: int
        Bound on the lcm of the orders of the roots.
    winding_cap: int
        Bound on the winding shifts of the relative period.
    workers: int
    options: dict
        Other fields of ``SearchConfig``.

    Returns
    -------
    SearchResult
    """
    config = SearchConfig(genus=genus, order_cap=order_cap, winding_cap=winding_cap, **options)
    return run_search(config, workers=workers)
