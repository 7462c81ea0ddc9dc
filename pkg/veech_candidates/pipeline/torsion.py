import math

from ..relations import PeriodTuple


def derive_torsion_order(t):
    """
    The smallest N such that every root of the tuple is a 2N-th root of unity.

    Parameters
    ----------
    t: PeriodTuple or iterable(RootOfUnity)

    Returns
    -------
    int
    """
    roots = t.roots if isinstance(t, PeriodTuple) else tuple(t)
    if not roots:
        raise ValueError("No roots given")
    order = math.lcm(*(x.order for x in roots))
    return order // 2 if order % 2 == 0 else order
