import functools
import math
from fractions import Fraction

from .cyclotomic import CycNum


@functools.total_ordering
class RootOfUnity:
    """
    The root of unity exp(2πi·exponent/order), stored in lowest terms.

    Roots are ordered by ``(order, exponent)``.
    """

    __slots__ = ("_order", "_exponent")

    def __init__(self, order, exponent=1):
        order, exponent = int(order), int(exponent)
        if order < 1:
            raise ValueError(f"The order of a root of unity must be positive: {order}")
        exponent %= order
        common = math.gcd(exponent, order)
        self._order = order // common
        self._exponent = exponent // common

    @property
    def order(self):
        return self._order

    @property
    def exponent(self):
        return self._exponent

    def value(self):
        """The root as a ``CycNum``."""
        return CycNum.zeta(self._order, self._exponent)

    def angle(self):
        """
        The rational ``q`` in [0, 2) with root = exp(iπq).
        """
        return Fraction(2 * self._exponent, self._order)

    def inverse(self):
        return RootOfUnity(self._order, -self._exponent)

    def galois(self, t):
        """Image under σ_t; ``t`` must be coprime to the order."""
        if math.gcd(t, self._order) != 1:
            raise ValueError(f"σ_{t} does not act on roots of order {self._order}")
        return RootOfUnity(self._order, t * self._exponent)

    def is_real(self):
        return self._order <= 2

    def upper_half(self):
        """True if the root lies strictly in the upper half plane."""
        return 0 < 2 * self._exponent < self._order

    def __mul__(self, other):
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        order = self._order * other._order // math.gcd(self._order, other._order)
        return RootOfUnity(
            order, self._exponent * (order // self._order) + other._exponent * (order // other._order)
        )

    def __pow__(self, power):
        if not isinstance(power, int):
            return NotImplemented
        return RootOfUnity(self._order, self._exponent * power)

    def _key(self):
        return (self._order, self._exponent)

    def __eq__(self, other):
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        return self._key() == other._key()

    def __lt__(self, other):
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        return self._key() < other._key()

    def __hash__(self):
        return hash(self._key())

    def to_json(self):
        return {"order": self._order, "exponent": self._exponent}

    @classmethod
    def from_json(cls, data):
        return cls(data["order"], data["exponent"])

    def __repr__(self):
        return f"RootOfUnity({self._order}, {self._exponent})"

    def __str__(self):
        if self._order == 1:
            return "1"
        if self._order == 2:
            return "-1"
        return f"ζ{self._order}" + (f"^{self._exponent}" if self._exponent != 1 else "")
