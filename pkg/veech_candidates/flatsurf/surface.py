"""
Translation surfaces glued from horizontal cylinders.

Each cylinder has a bottom and a top circle of length b. A point at height y above the bottom
position u has top position u + twist (mod b) when y reaches the height. Pieces of top circles
are glued by translations to pieces of bottom circles; top position p + s of a piece starting at
p is identified with bottom position q + s of the piece starting at q.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional

from ..exact import CycNum, real_sign
from .params import PrototypeParams, reduce_modulo

logger = logging.getLogger(__name__)

_FLOAT_TOLERANCE = 1e-9


class InvalidGluingError(ValueError):
    ...


def sign(value):
    """
    Sign of an exact value, or of a float up to a small tolerance. Float surfaces are only used to
    discard candidates early, never to accept them.
    """
    if isinstance(value, float):
        return 0 if abs(value) < _FLOAT_TOLERANCE else (1 if value > 0 else -1)
    return real_sign(value)


def _mod(value, modulus):
    if isinstance(value, float):
        value = value % modulus
        return 0.0 if abs(value - modulus) < _FLOAT_TOLERANCE else value
    return reduce_modulo(value, modulus)


@dataclass(frozen=True)
class Cylinder:
    width: object
    height: object
    twist: object

    def polygon(self):
        """Corners of the parallelogram obtained by cutting the cylinder along a vertical segment."""
        zero = self.width * 0
        w, h, t = self.width, self.height, self.twist
        return [(zero, zero), (w, zero), (w + t, h), (t, h)]


@dataclass(frozen=True)
class Gluing:
    """Top circle of cylinder ``top`` on [top_start, top_start + length) to bottom of ``bottom``."""

    top: int
    top_start: object
    bottom: int
    bottom_start: object
    length: object


class Surface:
    """
    A closed translation surface built from horizontal cylinders and gluings of their boundaries.

    Parameters
    ----------
    cylinders: list(Cylinder)
    gluings: list(Gluing)
        The top pieces of every cylinder tile [0, b) starting at 0, and so do the bottom pieces.

    Raises
    ------
    InvalidGluingError
        The pieces do not tile the circles.
    """

    def __init__(self, cylinders, gluings):
        self._cylinders = tuple(cylinders)
        self._gluings = tuple(gluings)
        self._top_pieces = self._tiling("top")
        self._bottom_pieces = self._tiling("bottom")

    def _tiling(self, side):
        pieces = [[] for _ in self._cylinders]
        for gluing in self._gluings:
            index = getattr(gluing, side)
            if not 0 <= index < len(self._cylinders):
                raise InvalidGluingError(f"Gluing {gluing} refers to a missing cylinder")
            if sign(gluing.length) <= 0:
                raise InvalidGluingError(f"Gluing {gluing} has non-positive length")
            pieces[index].append((getattr(gluing, f"{side}_start"), gluing))
        tilings = []
        for index, circle in enumerate(pieces):
            circle.sort(key=lambda piece: float(piece[0]))
            position = self._cylinders[index].width * 0
            for start, gluing in circle:
                if sign(start - position) != 0:
                    raise InvalidGluingError(
                        f"The {side} circle of cylinder {index + 1} is not tiled at {position}"
                    )
                position = start + gluing.length
            if not circle or sign(position - self._cylinders[index].width) != 0:
                raise InvalidGluingError(f"The {side} pieces of cylinder {index + 1} do not cover the circle")
            tilings.append(tuple(circle))
        return tuple(tilings)

    @property
    def cylinders(self):
        return self._cylinders

    @property
    def gluings(self):
        return self._gluings

    @property
    def is_exact(self):
        return all(isinstance(c.width, CycNum) for c in self._cylinders)

    def top_pieces(self, index):
        return self._top_pieces[index]

    def bottom_pieces(self, index):
        return self._bottom_pieces[index]

    def area(self):
        return sum((c.width * c.height for c in self._cylinders), self._cylinders[0].width * 0)

    def to_float(self):
        """The same combinatorics with floating point lengths."""
        return Surface(
            [Cylinder(float(c.width), float(c.height), float(c.twist)) for c in self._cylinders],
            [
                Gluing(g.top, float(g.top_start), g.bottom, float(g.bottom_start), float(g.length))
                for g in self._gluings
            ],
        )

    def with_twists(self, twists):
        """The same gluings with other cylinder twists; the tilings are reused."""
        if len(twists) != len(self._cylinders):
            raise ValueError(f"Expected {len(self._cylinders)} twists, got {len(twists)}")
        surface = Surface.__new__(Surface)
        surface._cylinders = tuple(Cylinder(c.width, c.height, t) for c, t in zip(self._cylinders, twists))
        surface._gluings = self._gluings
        surface._top_pieces = self._top_pieces
        surface._bottom_pieces = self._bottom_pieces
        return surface

    def flow_to_bottom(self, index, position):
        """
        Follow the vertical flow from the bottom ``position`` of cylinder ``index`` to the next
        bottom circle.

        Returns
        -------
        tuple or None
            ``(cylinder, position)`` on the next bottom circle, or None if the trajectory hits a
            point where top pieces meet.
        """
        cylinder = self._cylinders[index]
        top = _mod(position + cylinder.twist, cylinder.width)
        for start, gluing in self._top_pieces[index]:
            offset = top - start
            s = sign(offset)
            if s == 0:
                return None
            if s > 0 and sign(gluing.length - offset) > 0:
                return gluing.bottom, gluing.bottom_start + offset
        raise RuntimeError(f"Top position {top} of cylinder {index + 1} is outside all pieces")

    # ----------------------------------------------------------------------------------
    #  Combinatorial topology (exact surfaces)

    def _nodes(self):
        nodes = []
        for index in range(len(self._cylinders)):
            nodes.extend(("top", index, start) for start, _ in self._top_pieces[index])
            nodes.extend(("bottom", index, start) for start, _ in self._bottom_pieces[index])
        return nodes

    def vertex_classes(self):
        """
        Points where pieces meet, grouped into points of the surface. Every element of a class
        is a triple ``(side, cylinder, position)`` and contributes the angle π.
        """
        if not self.is_exact:
            raise ValueError("Vertex classes are computed for exact surfaces only")
        parent = {node: node for node in self._nodes()}

        def find(node):
            while parent[node] != node:
                parent[node] = parent[parent[node]]
                node = parent[node]
            return node

        def union(a, b):
            parent[find(a)] = find(b)

        for g in self._gluings:
            top_width = self._cylinders[g.top].width
            bottom_width = self._cylinders[g.bottom].width
            union(("top", g.top, g.top_start), ("bottom", g.bottom, g.bottom_start))
            union(
                ("top", g.top, _mod(g.top_start + g.length, top_width)),
                ("bottom", g.bottom, _mod(g.bottom_start + g.length, bottom_width)),
            )

        classes = {}
        for node in parent:
            classes.setdefault(find(node), []).append(node)
        return sorted(classes.values(), key=lambda nodes: min(_node_key(n) for n in nodes))

    def cone_angles(self):
        """Cone angles in multiples of 2π, one per vertex class."""
        return [len(nodes) / 2 for nodes in self.vertex_classes()]

    def zero_orders(self):
        return sorted(int(angle) - 1 for angle in self.cone_angles() if angle > 1)

    def euler_characteristic(self):
        return len(self.vertex_classes()) - len(self._gluings)

    def genus(self):
        return (2 - self.euler_characteristic()) // 2

    def is_connected(self):
        parent = list(range(len(self._cylinders)))

        def find(i):
            while parent[i] != i:
                i = parent[i]
            return i

        for g in self._gluings:
            parent[find(g.top)] = find(g.bottom)
        return len({find(i) for i in range(len(parent))}) == 1


def _node_key(node):
    side, index, position = node
    return (index, side, float(position))


def build_prototype(p):
    """
    The staircase surface of the parameters ``p``.

    Gluings (cylinders counted from 1, w_i the slit widths):

    * top [0, w_i) of cylinder i to bottom [0, w_i) of cylinder i + 1,
    * top [w_1, b_1) of cylinder 1 to its own bottom [0, b_1 - w_1),
    * the rest of the top of cylinder i > 1 (length w_{i-1}) to the rest of the bottom of
      cylinder i - 1,
    * top [0, b_g - w_{g-1}) of cylinder g to its own bottom [w_{g-1}, b_g).

    Parameters
    ----------
    p: PrototypeParams

    Returns
    -------
    Surface
    """
    if not isinstance(p, PrototypeParams):
        raise TypeError(f"Expected PrototypeParams, got {type(p)}")
    g, b, w = p.genus, p.widths, p.slit_widths
    zero = CycNum.from_rational(0)
    cylinders = [Cylinder(b[i], p.heights[i], p.twists[i]) for i in range(g)]

    def lower_rest_start(i):
        # Start of the bottom piece of cylinder i glued to cylinder i + 1
        return b[0] - w[0] if i == 0 else w[i - 1]

    gluings = [Gluing(i, zero, i + 1, zero, w[i]) for i in range(g - 1)]
    gluings.append(Gluing(0, w[0], 0, zero, b[0] - w[0]))
    for i in range(1, g):
        top_start = w[i] if i < g - 1 else b[i] - w[i - 1]
        gluings.append(Gluing(i, top_start, i - 1, lower_rest_start(i - 1), w[i - 1]))
    gluings.append(Gluing(g - 1, zero, g - 1, w[g - 2], b[g - 1] - w[g - 2]))
    return Surface(cylinders, gluings)


@dataclass
class SurfaceReport:
    """
    Result of ``validate_surface``. Failed checks are listed in ``errors``.
    """

    genus: int
    connected: bool
    zero_orders: List[int]
    involution: bool
    fixed_points: Optional[int]
    zeros_swapped: bool
    cylinders_invariant: bool
    errors: List[str] = field(default_factory=list)

    @property
    def passed(self):
        return not self.errors


def _partner(surface, g):
    top_width = surface.cylinders[g.bottom].width
    bottom_width = surface.cylinders[g.top].width
    return (
        g.bottom,
        _mod(-g.bottom_start - g.length, top_width),
        g.top,
        _mod(-g.top_start - g.length, bottom_width),
    )


def _rotate_node(surface, node):
    side, index, position = node
    width = surface.cylinders[index].width
    return ("bottom" if side == "top" else "top", index, _mod(-position, width))


def involution_data(surface):
    """
    Check the rotation by π of every horizontal cylinder (top position v to bottom position -v)
    against the gluings.

    Returns
    -------
    tuple
        ``(compatible, fixed_points, class_images)``. ``fixed_points`` and ``class_images`` are None
        if the rotations do not glue to an involution of the surface.
    """
    keyed = {(g.top, g.top_start, g.bottom, g.bottom_start): g for g in surface.gluings}
    self_partners = 0
    for g in surface.gluings:
        partner = _partner(surface, g)
        match = keyed.get(partner)
        if match is None or match.length != g.length:
            return False, None, None
        if match is g:
            self_partners += 1

    classes = surface.vertex_classes()
    class_of = {node: k for k, nodes in enumerate(classes) for node in nodes}
    images = []
    for nodes in classes:
        targets = {class_of.get(_rotate_node(surface, node)) for node in nodes}
        if len(targets) != 1 or None in targets:
            return False, None, None
        images.append(targets.pop())
    fixed_classes = sum(1 for k, image in enumerate(images) if image == k)
    fixed_points = 2 * len(surface.cylinders) + self_partners + fixed_classes
    return True, fixed_points, images


def validate_surface(s, expected_genus=None):
    """
    Genus, zeros and hyperelliptic involution of a surface.

    A prototype of genus g passes if it is connected, has genus g, two zeros of order g - 1,
    and the rotations of the horizontal cylinders form an involution with 2g + 2 fixed points
    exchanging the zeros.

    Parameters
    ----------
    s: Surface
    expected_genus: int or None
        Defaults to the number of cylinders.

    Returns
    -------
    SurfaceReport
    """
    g = len(s.cylinders) if expected_genus is None else expected_genus
    connected = s.is_connected()
    genus = s.genus()
    zero_orders = s.zero_orders()
    compatible, fixed_points, images = involution_data(s)

    classes = s.vertex_classes()
    zeros = [k for k, nodes in enumerate(classes) if len(nodes) > 2]
    zeros_swapped = bool(compatible) and len(zeros) == 2 and images[zeros[0]] == zeros[1]

    errors = []
    if not connected:
        errors.append("surface is not connected")
    if genus != g:
        errors.append(f"genus {genus} differs from {g}")
    if zero_orders != [g - 1, g - 1]:
        errors.append(f"zero orders {zero_orders} differ from {[g - 1, g - 1]}")
    if not compatible:
        errors.append("cylinder rotations are not compatible with the gluings")
    elif fixed_points != 2 * g + 2:
        errors.append(f"involution has {fixed_points} fixed points instead of {2 * g + 2}")
    if compatible and not zeros_swapped:
        errors.append("involution does not exchange the zeros")

    report = SurfaceReport(
        genus=genus,
        connected=connected,
        zero_orders=zero_orders,
        involution=compatible,
        fixed_points=fixed_points,
        zeros_swapped=zeros_swapped,
        cylinders_invariant=compatible,
        errors=errors,
    )
    for error in errors:
        logger.debug("Surface check failed: %s", error)
    return report
