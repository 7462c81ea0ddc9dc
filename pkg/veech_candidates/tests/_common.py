"""
Shared values for the test suites: the golden field and the decagon example.
"""
import math
import random
from fractions import Fraction

from veech_candidates.exact import CycNum, RootOfUnity

# ψ = (√5 - 1)/2 and φ = (√5 + 1)/2
PSI = CycNum.zeta(5) + CycNum.zeta(5, 4)
PHI = PSI + 1
SQRT5 = 2 * PSI + 1

DECAGON_ROOTS = (RootOfUnity(10, 1), RootOfUnity(10, 7))
DECAGON_WIDTHS = (CycNum.from_rational(1), PSI)


def random_roots(rng, g, orders=(3, 4, 6, 8, 12, 24)):
    """
    ``g`` random roots of unity with orders in ``orders``, pairwise distinct up to inversion and
    different from 1 and -1.
    """
    roots = []
    while len(roots) < g:
        n = rng.choice(orders)
        x = RootOfUnity(n, rng.randrange(1, n))
        if x.order <= 2 or any(x == y or x == y.inverse() for y in roots):
            continue
        roots.append(x)
    return roots


def random_real_cycnum(rng, conductor=24):
    """Random real element of Q(ζ_conductor) with small rational coefficients."""
    value = CycNum(conductor, [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(conductor)])
    return value + value.conjugate()


def lcm_of_orders(roots):
    return math.lcm(*(x.order for x in roots))


def seeded(seed):
    return random.Random(seed)


def random_rational_params(rng, g):
    """
    A random staircase of genus ``g`` with lengths in (1/2)Z.

    The twists carry every cone point on a bottom circle vertically onto a cone point of the top
    circle. The vertical direction then has g + 1 cylinders: one inside each of the two end
    cylinders and one crossing every pair of neighbouring cylinders.
    """
    from veech_candidates.flatsurf import PrototypeParams

    def length():
        return Fraction(rng.randint(1, 4), rng.randint(1, 2))

    slits = [length() for _ in range(g - 1)]
    widths = [slits[0] + length()] + [slits[i - 1] + slits[i] for i in range(1, g - 1)] + [slits[-1] + length()]
    return PrototypeParams(
        genus=g,
        heights=[length() for _ in range(g)],
        widths=widths,
        slit_widths=slits,
        twists=slits + [widths[-1] - slits[-1]],
    )
