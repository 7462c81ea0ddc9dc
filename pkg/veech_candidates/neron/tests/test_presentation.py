import itertools
import math
from fractions import Fraction

import pytest

from veech_candidates.exact import CycNum
from veech_candidates.neron import (
    AbelianGroupPresentation,
    DualGraph,
    DualGraphError,
    InfiniteGroupError,
    build_presentation,
    class_order,
    component_group,
    component_group_order,
    divides_torsion,
    enumerate_moduli,
    normalize_moduli,
    section_class_order,
    simplify_presentation,
    torsion_order_formula,
)


# fmt: off
@pytest.mark.parametrize("params, msg", [
    ({"loops_v1": 0, "loops_v2": 0, "connecting": 1, "moduli": (1,)}, "at least two points"),
    ({"loops_v1": 1, "loops_v2": 0, "connecting": 2, "moduli": (1, 1, 1)}, "a <= b"),
    ({"loops_v1": 0, "loops_v2": 0, "connecting": 3, "moduli": (1, 1)}, "Expected 3 moduli"),
    ({"loops_v1": 0, "loops_v2": 0, "connecting": 2, "moduli": (2, 4)}, "gcd 1"),
    ({"loops_v1": 0, "loops_v2": 0, "connecting": 2, "moduli": (0, 1)}, "positive integers"),
    ({"loops_v1": 0, "loops_v2": 0, "connecting": 2, "moduli": (1, 1), "k": 0}, "multiplier k"),
])
# fmt: on
def test_DualGraph_1_fail(params, msg):
    with pytest.raises(DualGraphError, match=msg):
        DualGraph(**params)


def test_DualGraph_2():
    g = DualGraph.from_moduli((3, 5, 1, 1), a=1, b=1, k=2)
    assert g.connecting == 2
    assert g.genus == 3
    assert g.chain_lengths() == [6, 10, 2, 2]
    assert g.is_loop(1) and not g.is_loop(2)


def test_build_presentation_1():
    """
    Moduli (1, 2, 1): generators η11, η21, η22, η31 with one chain relation, two component
    relations and two cycle relations.
    """
    p = build_presentation(DualGraph.from_moduli((1, 2, 1)))
    assert p.generator_count == 4
    assert p.relation_matrix == (
        (0, -1, 1, 0),
        (-1, -1, 0, -1),
        (1, 0, 1, 1),
        (-1, 1, 1, 0),
        (-1, 0, 0, 1),
    )
    assert p.distinguished_class == (0, 0, 0, 1)


# fmt: off
@pytest.mark.parametrize("moduli, k, n_generators", [
    ((1, 1), 1, 2),
    ((1, 2, 1), 3, 12),
    ((2, 3, 6), 2, 22),
])
# fmt: on
def test_build_presentation_2(moduli, k, n_generators):
    p = build_presentation(DualGraph.from_moduli(moduli, k=k))
    assert p.generator_count == n_generators
    assert all(len(row) == n_generators for row in p.relation_matrix)


def test_component_group_1():
    """
    Two components meeting in two points: the group is Z/2.
    """
    p = build_presentation(DualGraph.from_moduli((1, 1)))
    assert component_group(p) == [2]
    assert component_group_order(p) == 2
    assert section_class_order(DualGraph.from_moduli((1, 1))) == 2


def test_component_group_2():
    """
    Moduli (1, 2, 1): Z/5, generated by the section class.
    """
    p = build_presentation(DualGraph.from_moduli((1, 2, 1)))
    assert component_group(p) == [5]
    assert class_order(p) == 5


def test_component_group_3_fail():
    p = AbelianGroupPresentation(generator_count=2, relation_matrix=((1, 1),), distinguished_class=(0, 1))
    with pytest.raises(InfiniteGroupError, match="infinite"):
        component_group(p)


def test_simplify_presentation_1():
    """
    Chain generators are eliminated; the simplified presentation describes the same group and class.
    """
    p = build_presentation(DualGraph.from_moduli((2, 3, 1), k=2))
    q = simplify_presentation(p)
    assert q.generator_count < p.generator_count
    assert component_group(q) == component_group(p)
    assert class_order(q) == class_order(p)


# fmt: off
@pytest.mark.parametrize("moduli, a, b, expected", [
    ((1, 2, 1), 0, 0, 5),
    ((1, 1, 1), 0, 0, 3),
    ((2, 3, 6), 0, 0, 6),
    ((1, 1, 1, 1), 0, 0, 4),
    ((3, 5, 1, 1), 1, 1, 2),
    ((7, 2, 3), 1, 0, None),
])
# fmt: on
def test_section_class_order_1(moduli, a, b, expected):
    if a > b:
        with pytest.raises(DualGraphError, match="a <= b"):
            DualGraph.from_moduli(moduli, a=a, b=b)
        return
    g = DualGraph.from_moduli(moduli, a=a, b=b)
    assert section_class_order(g) == expected
    assert torsion_order_formula(moduli, a, b) == expected


def test_section_class_order_2():
    """
    The Smith normal form route agrees with the closed form for all moduli with entries at most 4,
    3 to 5 edges, no loops and k = 1, 2, 3. The class order does not depend on k and divides the
    group order.
    """
    for length in (3, 4, 5):
        for moduli in itertools.product(range(1, 5), repeat=length):
            if math.gcd(*moduli) != 1:
                continue
            expected = torsion_order_formula(moduli, 0, 0)
            for k in (1, 2, 3):
                p = build_presentation(DualGraph.from_moduli(moduli, k=k))
                order = class_order(p)
                assert order == expected, (moduli, k)
                assert component_group_order(p) % order == 0


def test_section_class_order_3():
    """
    Scaling all moduli and normalizing again gives the same graph and the same order.
    """
    for moduli in [(1, 2, 1), (2, 3, 6), (4, 1, 3, 1)]:
        scaled = [Fraction(3 * m, 7) for m in moduli]
        assert normalize_moduli(scaled) == moduli
        g = DualGraph.from_moduli(normalize_moduli(scaled))
        assert section_class_order(g) == section_class_order(DualGraph.from_moduli(moduli))


# fmt: off
@pytest.mark.parametrize("moduli, a, b, expected", [
    ((1, 2, 1), 0, 0, 5),
    ((1, 1, 1, 1), 0, 0, 4),
    ((4, 4), 0, 0, 2),
    ((9, 9, 2, 3), 2, 0, 5),
])
# fmt: on
def test_torsion_order_formula_1(moduli, a, b, expected):
    assert torsion_order_formula(moduli, a, b) == expected


def test_torsion_order_formula_2_fail():
    with pytest.raises(DualGraphError, match="No connecting edges"):
        torsion_order_formula((1, 2), 1, 1)


# fmt: off
@pytest.mark.parametrize("order, N, expected", [
    (5, 5, True),
    (3, 5, False),
    (1, 7, True),
    (5, 10, True),
    (5, 4, False),
])
# fmt: on
def test_divides_torsion_1(order, N, expected):
    assert divides_torsion(order, N) == expected


def test_divides_torsion_2_fail():
    with pytest.raises(ValueError, match="must be positive"):
        divides_torsion(0, 5)


# fmt: off
@pytest.mark.parametrize("values, expected", [
    ([Fraction(1, 2), 1, Fraction(1, 2)], (1, 2, 1)),
    (["2/3", "4/3"], (1, 2)),
    ([6, 4, 2], (3, 2, 1)),
    ([CycNum.from_rational(Fraction(5, 2))], (1,)),
])
# fmt: on
def test_normalize_moduli_1(values, expected):
    assert normalize_moduli(values) == expected


# fmt: off
@pytest.mark.parametrize("values, msg", [
    ([], "empty"),
    ([1, 0], "must be positive"),
    ([1, -2], "must be positive"),
])
# fmt: on
def test_normalize_moduli_2_fail(values, msg):
    with pytest.raises(DualGraphError, match=msg):
        normalize_moduli(values)


# fmt: off
@pytest.mark.parametrize("g, N, expected", [
    (2, 5, [(1, 2, 1), (2, 1, 1), (3, 3, 1)]),
    (2, 4, [(2, 2, 1)]),
    (2, 2, []),
])
# fmt: on
def test_enumerate_moduli_1(g, N, expected):
    assert enumerate_moduli(g, N) == expected


def test_enumerate_moduli_2():
    """
    Every enumerated tuple satisfies the divisibility, and a larger cap only adds tuples.
    """
    small = enumerate_moduli(3, 6)
    large = enumerate_moduli(3, 6, cap=8)
    assert set(small) <= set(large)
    for moduli in large:
        assert moduli[-1] == 1
        assert 6 % torsion_order_formula(moduli, 0, 0) == 0
