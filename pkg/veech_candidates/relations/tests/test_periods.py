import itertools
import math
from fractions import Fraction

import pytest

from veech_candidates.exact import CycNum, RootOfUnity, real_sign, span_report
from veech_candidates.relations import (
    CoincidentRootsError,
    PeriodTuple,
    RejectionReason,
    TupleRejected,
    canonical_tuple_key,
    check_roots,
    compute_residues,
    enumerate_period_tuples,
    equation_system_equivalence_check,
    orient_roots,
    partial_fraction_numerator,
    period_system_check,
    relative_period_candidates,
    residues_from_roots,
    winding_shifts,
)
from veech_candidates.tests._common import (
    DECAGON_ROOTS,
    DECAGON_WIDTHS,
    PSI,
    SQRT5,
    random_real_cycnum,
    random_roots,
    seeded,
)

_TUPLE_CLASSES_10 = {
    ((4, 1), (8, 1)),
    ((5, 1), (5, 2)),
    ((5, 1), (10, 1)),
    ((10, 1), (10, 3)),
}


# fmt: off
@pytest.mark.parametrize("roots, msg", [
    ([(2, 1), (5, 1)], "is real"),
    ([(5, 1), (1, 0)], "is real"),
    ([(5, 1), (5, 1)], "coincide"),
    ([(5, 1), (5, 4)], "coincide"),
    ([(8, 1), (4, 1), (8, 7)], "coincide"),
])
# fmt: on
def test_check_roots_1_fail(roots, msg):
    with pytest.raises(CoincidentRootsError, match=msg):
        check_roots([RootOfUnity(n, e) for n, e in roots])


def test_period_system_check_1():
    assert period_system_check(DECAGON_ROOTS, DECAGON_WIDTHS)
    assert not period_system_check(DECAGON_ROOTS, (1, 1))
    assert not period_system_check(DECAGON_ROOTS, (1, PSI + 1))

    with pytest.raises(ValueError, match="Expected g >= 2"):
        period_system_check(DECAGON_ROOTS[:1], DECAGON_WIDTHS[:1])


@pytest.mark.parametrize("g", [2, 3, 4])
def test_equation_system_equivalence_check_1(g):
    """
    The three forms of the period equations agree on random inputs and on solutions.
    """
    rng = seeded(1000 + g)
    for _ in range(25):
        roots = random_roots(rng, g)
        widths = [random_real_cycnum(rng) for _ in range(g)]
        assert equation_system_equivalence_check(g, roots, widths)

        residues, _ = compute_residues(roots)
        assert period_system_check(roots, residues)
        assert equation_system_equivalence_check(g, roots, residues)

    with pytest.raises(ValueError, match="Expected 3 roots"):
        equation_system_equivalence_check(3, DECAGON_ROOTS, DECAGON_WIDTHS)



@pytest.mark.slow
@pytest.mark.parametrize("g", [2, 3, 4])
def test_equation_system_equivalence_check_2(g):
    """
    1000 random inputs per genus; every tenth input is replaced by a solution of the system.
    """
    rng = seeded(2000 + g)
    for k in range(1000):
        roots = random_roots(rng, g)
        if k % 10:
            widths = [random_real_cycnum(rng) for _ in range(g)]
        else:
            widths, _ = compute_residues(roots)
        assert equation_system_equivalence_check(g, roots, widths)


def test_residues_from_roots_1():
    """
    The decagon roots give the widths (1, ψ).
    """
    t = residues_from_roots(DECAGON_ROOTS)
    assert t.genus == 2
    assert t.widths == DECAGON_WIDTHS
    assert t.order_lcm == 10
    assert canonical_tuple_key(t.roots) == ((10, 1), (10, 3))

    report = span_report(t.widths)
    assert report.degree == 2 and report.is_field and report.totally_real
    assert report.conductor == 5
    assert report.discriminant == 5

    assert PeriodTuple.from_json(t.to_json()) == t


# fmt: off
@pytest.mark.parametrize("roots, reason", [
    ([(8, 1), (8, 3)], RejectionReason.WRONG_SPAN_DEGREE),
    ([(6, 1), (3, 1)], RejectionReason.WRONG_SPAN_DEGREE),
    ([(10, 1), (10, 3)], RejectionReason.NON_POSITIVE_WIDTH),
])
# fmt: on
def test_residues_from_roots_2_fail(roots, reason):
    with pytest.raises(TupleRejected) as ex:
        residues_from_roots([RootOfUnity(n, e) for n, e in roots])
    assert ex.value.reason == reason


def test_orient_roots_1():
    """
    Orientation fixes the first root in the upper half plane and makes the widths positive.
    """
    oriented = orient_roots([RootOfUnity(10, 9), RootOfUnity(10, 3)])
    assert oriented == DECAGON_ROOTS
    widths, _ = compute_residues(oriented)
    assert all(real_sign(b) > 0 for b in widths)


def test_partial_fraction_numerator_1():
    """
    The residues reproduce the numerator C·z^(g-1).
    """
    for t in enumerate_period_tuples(2, 10):
        numerator = partial_fraction_numerator(t.roots, t.widths)
        assert len(numerator) == 2 * t.genus - 1
        for j, coefficient in enumerate(numerator):
            assert coefficient == (t.scale if j == t.genus - 1 else 0)


def test_enumerate_period_tuples_1():
    """
    Up to the Galois action the genus 2 tuples with order lcm at most 10 form four classes.
    """
    tuples = enumerate_period_tuples(2, 10)
    keys = [canonical_tuple_key(t.roots) for t in tuples]
    assert set(keys) == _TUPLE_CLASSES_10
    assert len(keys) == len(set(keys))
    assert tuples == sorted(tuples, key=PeriodTuple.key)
    for t in tuples:
        assert t.widths[0] == 1
        assert all(real_sign(b) > 0 for b in t.widths)


def test_enumerate_period_tuples_2():
    """
    No tuple survives for order lcm at most 4. Raising the cap only adds classes.
    """
    assert enumerate_period_tuples(2, 4) == []
    keys_8 = {canonical_tuple_key(t.roots) for t in enumerate_period_tuples(2, 8)}
    assert keys_8 == {((4, 1), (8, 1)), ((5, 1), (5, 2))}
    assert keys_8 <= _TUPLE_CLASSES_10

    with pytest.raises(ValueError, match="at least 2"):
        enumerate_period_tuples(1, 10)


def test_enumerate_period_tuples_3():
    """
    Exhaustive search over all ordered root pairs finds the same classes.
    """
    cap = 8
    roots = [RootOfUnity(n, e) for n in range(3, cap + 1) for e in range(1, n) if math.gcd(e, n) == 1]
    found = set()
    for x1, x2 in itertools.permutations(roots, 2):
        if math.lcm(x1.order, x2.order) > cap:
            continue
        try:
            t = residues_from_roots([x1, x2])
        except (CoincidentRootsError, TupleRejected):
            continue
        found.add(canonical_tuple_key(t.roots))
    assert found == {canonical_tuple_key(t.roots) for t in enumerate_period_tuples(2, cap)}


def test_enumerate_period_tuples_4():
    """
    The result does not depend on the number of workers.
    """
    assert enumerate_period_tuples(2, 10, workers=2) == enumerate_period_tuples(2, 10)


def test_compute_residues_1():
    """
    Residues are Galois equivariant: σ_t applied to the roots applies σ_t to the widths.
    """
    for t in enumerate_period_tuples(2, 10):
        order = t.order_lcm
        for s in range(1, order):
            if math.gcd(s, order) != 1:
                continue
            widths, _ = compute_residues([x.galois(s) for x in t.roots])
            assert widths == [b.embed(order).galois(s) for b in t.widths]


def test_relative_period_candidates_1():
    """
    The decagon relative period 1/√5 = 1/5 + 2ψ/5 is a candidate with shifts (0, -1).
    """
    t = residues_from_roots(DECAGON_ROOTS)
    candidates = relative_period_candidates(t, winding_cap=2)
    target = Fraction(1, 5) + Fraction(2, 5) * PSI
    assert target * SQRT5 == 1
    assert target in candidates
    assert winding_shifts(t, target) == [0, -1]
    assert winding_shifts(t, CycNum.from_rational(Fraction(1, 7))) is None

    assert all(real_sign(w) > 0 for w in candidates)
    assert candidates == sorted(candidates)
    assert len(candidates) <= 5**2
    assert set(relative_period_candidates(t, winding_cap=1)) <= set(candidates)
