"""
Two-vertex dual graphs of stable fibres over a cusp and the moduli of their edges.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Tuple

from ..exact import CycNum, to_fraction

logger = logging.getLogger(__name__)


class DualGraphError(ValueError):
    ...


@dataclass(frozen=True)
class DualGraph:
    """
    Graph with two vertices v1 and v2, ``loops_v1`` loops at v1, ``loops_v2`` loops at v2 and
    ``connecting`` edges joining v1 and v2. The edge ``i`` has thickness ``moduli[i] * k``.

    Moduli are ordered as loops at v1, loops at v2, connecting edges. The section s1 sits on v1,
    the section s2 on v2.

    Parameters
    ----------
    loops_v1: int
    loops_v2: int
    connecting: int
        At least 2.
    moduli: tuple(int)
        ``loops_v1 + loops_v2 + connecting`` positive integers with gcd 1.
    k: int
        Ramification multiplier of the covering, positive.

    Raises
    ------
    DualGraphError
        The parameters violate any of the conditions above.
    """

    loops_v1: int
    loops_v2: int
    connecting: int
    moduli: Tuple[int, ...]
    k: int = 1

    def __post_init__(self):
        object.__setattr__(self, "moduli", tuple(int(m) for m in self.moduli))
        if self.loops_v1 < 0 or self.loops_v2 < 0:
            raise DualGraphError(f"Negative number of loops: ({self.loops_v1}, {self.loops_v2})")
        if self.loops_v1 > self.loops_v2:
            raise DualGraphError(f"Loops must satisfy a <= b: a={self.loops_v1}, b={self.loops_v2}")
        if self.connecting < 2:
            raise DualGraphError(f"The components must meet in at least two points: c={self.connecting}")
        if len(self.moduli) != self.edge_count:
            raise DualGraphError(f"Expected {self.edge_count} moduli, got {len(self.moduli)}")
        if any(m < 1 for m in self.moduli):
            raise DualGraphError(f"Moduli must be positive integers: {self.moduli}")
        if math.gcd(*self.moduli) != 1:
            raise DualGraphError(f"Moduli must have gcd 1: {self.moduli}")
        if self.k < 1:
            raise DualGraphError(f"The multiplier k must be positive: {self.k}")

    @classmethod
    def from_moduli(cls, moduli, a=0, b=0, k=1):
        """Graph with ``a`` and ``b`` loops; the remaining moduli belong to connecting edges."""
        moduli = tuple(moduli)
        return cls(loops_v1=a, loops_v2=b, connecting=len(moduli) - a - b, moduli=moduli, k=k)

    @property
    def edge_count(self):
        return self.loops_v1 + self.loops_v2 + self.connecting

    @property
    def genus(self):
        """Genus of the fibre: the number of independent cycles of the graph."""
        return self.edge_count - 1

    def chain_lengths(self):
        return [m * self.k for m in self.moduli]

    def is_loop(self, edge):
        return edge < self.loops_v1 + self.loops_v2

    def to_json(self):
        return {"a": self.loops_v1, "b": self.loops_v2, "moduli": list(self.moduli), "k": self.k}


def normalize_moduli(values):
    """
    Scale positive rational values to the proportional integer vector with gcd 1.

    Parameters
    ----------
    values: list
        Integers, ``Fraction``, strings ``"p/q"`` or rational ``CycNum``.

    Returns
    -------
    tuple(int)
    """
    fractions = []
    for v in values:
        if isinstance(v, CycNum):
            v = v.rational_value()
        fractions.append(to_fraction(v))
    if not fractions:
        raise DualGraphError("The list of moduli is empty")
    if any(f <= 0 for f in fractions):
        raise DualGraphError(f"Moduli must be positive: {[str(f) for f in fractions]}")
    denominator = math.lcm(*(f.denominator for f in fractions))
    integers = [int(f * denominator) for f in fractions]
    common = math.gcd(*integers)
    return tuple(n // common for n in integers)


def torsion_order_formula(moduli, a, b):
    """
    Closed form Σ_{i > a+b} m/m_i of the order of the section class, where m is the lcm of the
    moduli of the connecting edges.
    """
    connecting = [int(m) for m in list(moduli)[a + b :]]
    if not connecting:
        raise DualGraphError(f"No connecting edges: moduli {tuple(moduli)}, a={a}, b={b}")
    if any(m < 1 for m in connecting):
        raise DualGraphError(f"Moduli must be positive integers: {tuple(moduli)}")
    lcm = math.lcm(*connecting)
    return sum(lcm // m for m in connecting)


def divides_torsion(order, N):
    """True iff ``order`` divides the torsion order ``N``."""
    if order < 1 or N < 1:
        raise ValueError(f"Orders must be positive: order={order}, N={N}")
    return N % order == 0


def enumerate_moduli(g, N, cap=None):
    """
    Moduli of the g + 1 connecting edges of a two-vertex graph without loops whose section class
    order divides ``N``: entries in [1, cap], the last entry equal to 1.

    Parameters
    ----------
    g: int
        Genus, at least 1.
    N: int
        Torsion order.
    cap: int or None
        Per-entry cap, ``N`` if None.

    Returns
    -------
    list(tuple(int))
        Sorted lexicographically.
    """
    if g < 1 or N < 1:
        raise ValueError(f"Invalid parameters: g={g}, N={N}")
    cap = N if cap is None else cap
    result = []
    for head in itertools.product(range(1, cap + 1), repeat=g):
        moduli = head + (1,)
        if divides_torsion(torsion_order_formula(moduli, 0, 0), N):
            result.append(moduli)
    logger.debug("Genus %d, N=%d: %d moduli tuples with entries <= %d", g, N, len(result), cap)
    return result
