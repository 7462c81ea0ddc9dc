import pytest

from veech_candidates.exact import RootOfUnity
from veech_candidates.pipeline import derive_torsion_order
from veech_candidates.relations import residues_from_roots
from veech_candidates.tests._common import DECAGON_ROOTS


# fmt: off
@pytest.mark.parametrize("roots, expected", [
    (DECAGON_ROOTS, 5),
    ([(6, 1), (3, 1)], 3),
    ([(4, 1), (4, 3)], 2),
    ([(4, 1), (8, 1)], 4),
    ([(5, 1), (5, 2)], 5),
    ([(12, 1), (8, 3)], 12),
])
# fmt: on
def test_derive_torsion_order_1(roots, expected):
    roots = [x if isinstance(x, RootOfUnity) else RootOfUnity(*x) for x in roots]
    assert derive_torsion_order(roots) == expected
    assert all((2 * expected) % x.order == 0 for x in roots)


def test_derive_torsion_order_2():
    assert derive_torsion_order(residues_from_roots(DECAGON_ROOTS)) == 5


def test_derive_torsion_order_3_fail():
    with pytest.raises(ValueError, match="No roots"):
        derive_torsion_order([])
