from fractions import Fraction

import pytest

from veech_candidates.exact import CycNum
from veech_candidates.flatsurf import (
    Cylinder,
    CylinderDecomposition,
    Direction,
    Gluing,
    IntersectionMatrix,
    NonPeriodicDirectionError,
    Surface,
    build_prototype,
    cylinder_decomposition,
    decagon_params,
    intersection_matrix,
    moduli_commensurability,
)
from veech_candidates.tests._common import PHI, PSI, random_rational_params, seeded


def _sorted(values):
    return sorted(values, key=float)


def test_cylinder_decomposition_1():
    """
    The decagon has two horizontal and three vertical cylinders with moduli proportional to
    (1, 1, 2).
    """
    p = decagon_params()
    s = build_prototype(p)
    h = cylinder_decomposition(s, Direction.HORIZONTAL)
    assert h.direction == Direction.HORIZONTAL
    assert len(h) == 2
    assert [c.circumference for c in h.cylinders] == list(p.widths)
    assert [c.height for c in h.cylinders] == list(p.heights)

    v = cylinder_decomposition(s, "vertical")
    assert len(v) == 3
    assert v.area() == s.area()
    heights = [(1 - PSI) / 4, CycNum.from_rational(Fraction(1, 4)), PSI / 2]
    circumferences = [CycNum.from_rational(2), 2 * PHI, 2 * PHI * PHI]
    assert _sorted(c.height for c in v.cylinders) == heights
    assert _sorted(c.circumference for c in v.cylinders) == circumferences

    commensurable, moduli = moduli_commensurability(v)
    assert commensurable
    assert sorted(moduli) == [1, 1, 2]


def test_cylinder_decomposition_2():
    """
    Random rational staircases: g horizontal and g + 1 vertical cylinders, which fill the surface.
    """
    rng = seeded(5)
    for _ in range(100):
        g = rng.randint(2, 4)
        s = build_prototype(random_rational_params(rng, g))
        h = cylinder_decomposition(s, Direction.HORIZONTAL)
        v = cylinder_decomposition(s, Direction.VERTICAL)
        assert len(h) == g
        assert len(v) == g + 1
        assert v.area() == s.area()
        assert moduli_commensurability(v)[0]
        E = intersection_matrix(s, h, v)
        assert E.shape == (g, len(v))
        assert not E.has_zero_line()
        assert sorted(sum(col) for col in E.columns()) == [1, 1] + [2] * (g - 1)


def test_cylinder_decomposition_3():
    """
    Two cylinders stacked into a torus form one horizontal cylinder.
    """
    one, zero = CycNum.from_rational(1), CycNum.from_rational(0)
    s = Surface(
        [Cylinder(one, one, zero), Cylinder(one, one, zero)],
        [Gluing(0, zero, 1, zero, one), Gluing(1, zero, 0, zero, one)],
    )
    assert s.genus() == 1
    h = cylinder_decomposition(s, Direction.HORIZONTAL)
    assert len(h) == 1
    assert h.cylinders[0].height == 2
    assert sorted(h.cylinders[0].members) == [0, 1]

    v = cylinder_decomposition(s, Direction.VERTICAL)
    assert len(v) == 1
    assert v.cylinders[0].circumference == 2
    assert intersection_matrix(s, h, v).entries == ((1,),)


def test_cylinder_decomposition_4_fail():
    s = build_prototype(decagon_params())
    with pytest.raises(NonPeriodicDirectionError, match="did not close within 0 steps") as ex:
        cylinder_decomposition(s, Direction.VERTICAL, step_budget=0)
    assert ex.value.direction == "vertical"

    with pytest.raises(ValueError):
        cylinder_decomposition(s, "diagonal")


def test_intersection_matrix_1():
    s = build_prototype(decagon_params())
    h = cylinder_decomposition(s, Direction.HORIZONTAL)
    v = cylinder_decomposition(s, Direction.VERTICAL)
    E = intersection_matrix(s, h, v)
    assert E.shape == (2, 3)
    assert sorted(E.columns()) == [(2, 0), (2, 2), (4, 2)]

    with pytest.raises(ValueError, match="horizontal and a vertical"):
        intersection_matrix(s, v, h)


def test_IntersectionMatrix_1():
    E = IntersectionMatrix([[4, 2, 2], [2, 2, 0]])
    assert E.entries == ((4, 2, 2), (2, 2, 0))
    assert not E.has_zero_line()
    assert E.permute_columns([2, 0, 1]).entries == ((2, 4, 2), (0, 2, 2))
    assert E.to_json() == [[4, 2, 2], [2, 2, 0]]
    assert IntersectionMatrix([[1, 0], [1, 0]]).has_zero_line()
    assert IntersectionMatrix([[0, 0], [1, 1]]).has_zero_line()
    with pytest.raises(ValueError, match="differ in length"):
        IntersectionMatrix([[1, 2], [1]])


# fmt: off
@pytest.mark.parametrize("moduli, expected", [
    ([Fraction(1, 2), 1, Fraction(1, 2)], (True, (1, 2, 1))),
    ([CycNum.from_rational(3)], (True, (1,))),
    ([PSI, PSI * PSI, PSI], (False, None)),
    ([PSI, 2 * PSI, 3 * PSI], (True, (1, 2, 3))),
    ([6, 3, Fraction(3, 2)], (True, (4, 2, 1))),
    ([4 * PSI, 2 * PSI, PSI, PSI], (True, (4, 2, 1, 1))),
    ([Fraction(1, 3), Fraction(2, 3), 1], (True, (1, 2, 3))),
])
# fmt: on
def test_moduli_commensurability_1(moduli, expected):
    assert moduli_commensurability(moduli) == expected


def test_CylinderDecomposition_1():
    d = CylinderDecomposition(Direction.VERTICAL, ())
    assert len(d) == 0
    assert d.moduli() == []
    assert moduli_commensurability(d) == (False, None)
