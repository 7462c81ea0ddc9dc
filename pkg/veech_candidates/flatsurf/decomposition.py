"""
Cylinder decompositions of staircase surfaces in the horizontal and vertical directions.
"""
import enum
import logging
from dataclasses import dataclass
from typing import Tuple

from ..exact import CycNum
from ..neron import normalize_moduli
from .surface import sign

logger = logging.getLogger(__name__)

DEFAULT_STEP_BUDGET = 10**6


class NonPeriodicDirectionError(Exception):
    def __init__(self, direction, steps):
        self.direction = direction
        self.steps = steps
        super().__init__(f"A {direction} separatrix did not close within {steps} steps")


class Direction(enum.Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"


@dataclass(frozen=True)
class CylinderInfo:
    """
    A maximal cylinder.

    ``circumference`` is the length of the core curve, ``height`` the transverse extent.
    ``crossings[i]`` counts how often the core curve crosses the bottom circle of the staircase
    cylinder ``i`` (vertical cylinders only). ``members`` lists the staircase cylinders forming a
    horizontal cylinder, lowest first.
    """

    circumference: object
    height: object
    crossings: Tuple[int, ...] = ()
    members: Tuple[int, ...] = ()

    @property
    def modulus(self):
        return self.height / self.circumference

    def area(self):
        return self.circumference * self.height


@dataclass(frozen=True)
class CylinderDecomposition:
    direction: Direction
    cylinders: Tuple[CylinderInfo, ...]

    def __len__(self):
        return len(self.cylinders)

    def area(self):
        return sum((c.area() for c in self.cylinders[1:]), self.cylinders[0].area())

    def moduli(self):
        return [c.modulus for c in self.cylinders]


@dataclass(frozen=True)
class IntersectionMatrix:
    """
    Intersection numbers ``entries[i][j]`` of horizontal core curve i and vertical core curve j.
    """

    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(tuple(int(e) for e in row) for row in self.entries))
        if len({len(row) for row in self.entries}) > 1:
            raise ValueError(f"Rows of the intersection matrix differ in length: {self.entries}")

    @property
    def shape(self):
        return (len(self.entries), len(self.entries[0]) if self.entries else 0)

    def columns(self):
        return list(zip(*self.entries))

    def has_zero_line(self):
        """True if some row or column vanishes."""
        return any(not any(row) for row in self.entries) or any(not any(col) for col in self.columns())

    def permute_columns(self, order):
        return IntersectionMatrix(tuple(tuple(row[j] for j in order) for row in self.entries))

    def to_json(self):
        return [list(row) for row in self.entries]


def _horizontal(s):
    # Staircase cylinders whose common circle carries no cone point belong to one cylinder.
    classes = s.vertex_classes()
    regular = {node for nodes in classes if len(nodes) == 2 for node in nodes}
    above = {}
    for index in range(len(s.cylinders)):
        targets = {gluing.bottom for _, gluing in s.top_pieces(index)}
        nodes = {("top", index, start) for start, _ in s.top_pieces(index)}
        if len(targets) == 1 and nodes <= regular and index not in targets:
            above[index] = targets.pop()

    below = set(above.values())
    # Chains first, then closed stacks
    starts = [i for i in range(len(s.cylinders)) if i not in below] + list(range(len(s.cylinders)))
    visited = set()
    cylinders = []
    for index in starts:
        if index in visited:
            continue
        members = [index]
        visited.add(index)
        while members[-1] in above and above[members[-1]] not in visited:
            members.append(above[members[-1]])
            visited.add(members[-1])
        height = sum((s.cylinders[m].height for m in members[1:]), s.cylinders[index].height)
        cylinders.append(CylinderInfo(s.cylinders[index].width, height, members=tuple(members)))
    return CylinderDecomposition(Direction.HORIZONTAL, tuple(cylinders))


def _insert(points, value):
    for p in points:
        if sign(p - value) == 0:
            return False
    points.append(value)
    return True


def _vertical(s, step_budget):
    g = len(s.cylinders)
    breakpoints = [[start for start, _ in s.bottom_pieces(i)] for i in range(g)]
    starts = [(i, start) for i in range(g) for start in list(breakpoints[i])]
    steps = 0
    for index, position in starts:
        while True:
            image = s.flow_to_bottom(index, position)
            if image is None:
                break
            index, position = image
            _insert(breakpoints[index], position)
            steps += 1
            if steps > step_budget:
                raise NonPeriodicDirectionError(Direction.VERTICAL.value, step_budget)

    intervals = []
    for i in range(g):
        points = sorted(breakpoints[i], key=float) if not s.is_exact else sorted(breakpoints[i])
        ends = points[1:] + [s.cylinders[i].width]
        intervals.extend((i, a, b) for a, b in zip(points, ends))

    def locate(index, position):
        for k, (i, a, b) in enumerate(intervals):
            if i == index and sign(position - a) >= 0 and sign(b - position) > 0:
                return k
        raise RuntimeError(f"Position {position} on cylinder {index + 1} is outside all intervals")

    successor = []
    for i, a, b in intervals:
        image = s.flow_to_bottom(i, (a + b) / 2)
        if image is None:
            raise RuntimeError(
                f"The vertical through the middle of [{a}, {b}) on cylinder {i + 1} hits a cone point"
            )
        successor.append(locate(*image))

    seen = set()
    cylinders = []
    for k in range(len(intervals)):
        if k in seen:
            continue
        cycle = [k]
        seen.add(k)
        while successor[cycle[-1]] != k:
            cycle.append(successor[cycle[-1]])
            seen.add(cycle[-1])
        crossings = [0] * g
        for m in cycle:
            crossings[intervals[m][0]] += 1
        i, a, b = intervals[k]
        circumference = sum((s.cylinders[intervals[m][0]].height for m in cycle[1:]), s.cylinders[i].height)
        cylinders.append(CylinderInfo(circumference, b - a, crossings=tuple(crossings)))
    logger.debug("Vertical direction: %d cylinders after %d separatrix steps", len(cylinders), steps)
    return CylinderDecomposition(Direction.VERTICAL, tuple(cylinders))


def cylinder_decomposition(s, direction, step_budget=DEFAULT_STEP_BUDGET):
    """
    Maximal cylinders of the surface in the horizontal or vertical direction.

    The vertical decomposition follows every upward separatrix until it hits a cone point. The
    points where separatrices cross the bottom circles cut them into intervals that are permuted
    by the first return map; each cycle of intervals is one cylinder.

    Parameters
    ----------
    s: Surface
    direction: Direction or str
    step_budget: int
        Total number of circle crossings allowed while tracing separatrices.

    Returns
    -------
    CylinderDecomposition

    Raises
    ------
    NonPeriodicDirectionError
        Some separatrix does not reach a cone point within the budget.
    """
    direction = Direction(direction)
    if direction == Direction.HORIZONTAL:
        return _horizontal(s)
    return _vertical(s, step_budget)


def intersection_matrix(s, h, v):
    """
    Intersection numbers of the horizontal and vertical core curves. A vertical core curve meets
    a horizontal cylinder once per crossing of its bottom circle.
    """
    if h.direction != Direction.HORIZONTAL or v.direction != Direction.VERTICAL:
        raise ValueError("Expected a horizontal and a vertical decomposition")
    rows = (tuple(c.crossings[cyl.members[0]] for c in v.cylinders) for cyl in h.cylinders)
    return IntersectionMatrix(tuple(rows))


def moduli_commensurability(c):
    """
    Check that all moduli are rational multiples of each other.

    Parameters
    ----------
    c: CylinderDecomposition or list
        A decomposition or the list of its moduli.

    Returns
    -------
    tuple
        ``(True, moduli)`` with the proportional integer vector with gcd 1, or ``(False, None)``.
        The last entry is 1 whenever every ratio m_j / m_last is an integer; otherwise no integer
        vector ends in 1 and the last entry is the smallest possible.
    """
    moduli = c.moduli() if isinstance(c, CylinderDecomposition) else list(c)
    moduli = [m if isinstance(m, CycNum) else CycNum.from_rational(m) for m in moduli]
    if not moduli:
        return False, None
    reference = moduli[-1]
    ratios = [m / reference for m in moduli]
    if not all(r.is_rational() for r in ratios):
        return False, None
    return True, normalize_moduli([r.rational_value() for r in ratios])
