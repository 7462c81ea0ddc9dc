"""
Formal sums of roots of unity with real cyclotomic coefficients.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Tuple

from ..exact import CycNum, NotRealError, RootOfUnity

logger = logging.getLogger(__name__)


class NonVanishingRelationError(ValueError):
    ...


@dataclass(frozen=True)
class VanishingRelation:
    """
    The formal sum Σ a_i ζ_i. The sum is stored whether or not it vanishes.

    Coefficients are nonzero and real. A root may occur in several terms: decomposing a relation
    into irreducible parts keeps the terms apart.
    """

    terms: Tuple[Tuple[CycNum, RootOfUnity], ...]

    def __post_init__(self):
        terms = []
        for coefficient, root in self.terms:
            if not isinstance(coefficient, CycNum):
                coefficient = CycNum.from_rational(coefficient)
            if not isinstance(root, RootOfUnity):
                raise TypeError(f"Root {root!r} is not a RootOfUnity")
            if coefficient.is_zero():
                raise ValueError(f"Term with zero coefficient at the root {root}")
            if not coefficient.is_real():
                raise NotRealError(f"Coefficient {coefficient} is not real")
            terms.append((coefficient, root))
        object.__setattr__(self, "terms", tuple(terms))

    @classmethod
    def from_roots(cls, roots, coefficients=None):
        """Relation with the given roots and coefficients (all 1 by default)."""
        roots = list(roots)
        coefficients = [1] * len(roots) if coefficients is None else list(coefficients)
        if len(coefficients) != len(roots):
            raise ValueError("The numbers of roots and coefficients differ")
        return cls(tuple(zip(coefficients, roots)))

    @property
    def roots(self):
        return [root for _, root in self.terms]

    @property
    def coefficients(self):
        return [coefficient for coefficient, _ in self.terms]

    def __len__(self):
        return len(self.terms)

    def evaluate(self):
        """The exact value of the sum."""
        total = CycNum.from_rational(0)
        for coefficient, root in self.terms:
            total = total + coefficient * root.value()
        return total

    def subrelation(self, indices):
        return VanishingRelation(tuple(self.terms[i] for i in indices))

    def to_json(self):
        return [[coefficient.to_json(), root.to_json()] for coefficient, root in self.terms]

    @classmethod
    def from_json(cls, data):
        return cls(tuple((CycNum.from_json(c), RootOfUnity.from_json(r)) for c, r in data))

    def __str__(self):
        return " + ".join(f"({c})·{r}" for c, r in self.terms) or "0"


def is_vanishing(r):
    """True iff the exact sum of the relation is zero."""
    return r.evaluate().is_zero()


def _sum_vanishes(terms, indices):
    total = CycNum.from_rational(0)
    for i in indices:
        coefficient, root = terms[i]
        total = total + coefficient * root.value()
    return total.is_zero()


def is_irreducible(r):
    """
    True iff the relation vanishes and no proper nonempty sub-sum (with the same coefficients)
    vanishes.
    """
    if not is_vanishing(r):
        return False
    k = len(r)
    return not any(
        _sum_vanishes(r.terms, indices)
        for size in range(1, k)
        for indices in itertools.combinations(range(k), size)
    )


def decompose_irreducible(r):
    """
    Partition a vanishing relation into irreducible vanishing parts.

    Parts are found by exhaustive subset search: the smallest vanishing subset of the remaining
    terms is split off first, ties are broken by the lexicographic order of term positions.

    Parameters
    ----------
    r: VanishingRelation

    Returns
    -------
    list(VanishingRelation)

    Raises
    ------
    NonVanishingRelationError
        The relation does not vanish.
    """
    if not is_vanishing(r):
        raise NonVanishingRelationError(f"Relation {r} does not vanish")
    remaining = list(range(len(r)))
    parts = []
    while remaining:
        part = next(
            indices
            for size in range(1, len(remaining) + 1)
            for indices in itertools.combinations(remaining, size)
            if _sum_vanishes(r.terms, indices)
        )
        parts.append(r.subrelation(part))
        remaining = [i for i in remaining if i not in part]
    logger.debug("Relation of length %d decomposed into %d parts", len(r), len(parts))
    return parts


def normalize_rotation(r):
    """
    Multiply every root by the inverse of the first root, so that the first root becomes 1.
    """
    if not len(r):
        raise ValueError("Cannot rotate an empty relation")
    shift = r.terms[0][1].inverse()
    return VanishingRelation(tuple((coefficient, root * shift) for coefficient, root in r.terms))
