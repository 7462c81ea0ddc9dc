import pytest

from veech_candidates.exact import RootOfUnity
from veech_candidates.relations import (
    MannScanReport,
    irreducible_relations,
    mann_conductor_bound,
    mann_exponent_bound,
    mann_soundness_scan,
)


# fmt: off
@pytest.mark.parametrize("p, g, expected", [
    (2, 1, 1),
    (3, 1, 1),
    (5, 1, 1),
    (2, 2, 2),
    (3, 2, 1),
    (2, 5, 3),
    (3, 5, 2),
    (7, 36, 1),
    (7, 37, 2),
])
# fmt: on
def test_mann_exponent_bound_1(p, g, expected):
    assert mann_exponent_bound(p, g) == expected


# fmt: off
@pytest.mark.parametrize("p, g, msg", [
    (4, 1, "not a prime"),
    (2, 0, "must be positive"),
])
# fmt: on
def test_mann_exponent_bound_2_fail(p, g, msg):
    with pytest.raises(ValueError, match=msg):
        mann_exponent_bound(p, g)


# fmt: off
@pytest.mark.parametrize("k, g, expected", [
    (1, 1, 2),
    (2, 1, 6),
    (3, 1, 30),
    (1, 2, 12),
    (4, 2, 60060),
])
# fmt: on
def test_mann_conductor_bound_1(k, g, expected):
    assert mann_conductor_bound(k, g) == expected


def test_mann_conductor_bound_2():
    """
    The bound grows with the length and with the degree.
    """
    for g in range(1, 4):
        for k in range(1, 5):
            assert mann_conductor_bound(k + 1, g) % mann_conductor_bound(k, g) == 0
            assert mann_conductor_bound(k, g + 1) % mann_conductor_bound(k, g) == 0

    with pytest.raises(ValueError, match="Invalid parameters"):
        mann_conductor_bound(0, 1)


def test_irreducible_relations_1():
    """
    Small scan contains the classical relations 1 + (-1) and 1 + ζ3 + ζ3², and only irreducible ones.
    """
    relations = list(irreducible_relations(max_terms=3, coeff_bound=1, order_cap=6))
    roots = [r.roots for r in relations]
    assert [RootOfUnity(1, 0), RootOfUnity(2, 1)] in roots
    assert [RootOfUnity(1, 0), RootOfUnity(3, 1), RootOfUnity(3, 2)] in roots
    for r in relations:
        assert r.evaluate() == 0
        assert r.roots[0] == RootOfUnity(1, 0)
        assert all(abs(c.rational_value()) == 1 for c in r.coefficients)


def test_mann_soundness_scan_1():
    """
    No irreducible relation of length at most 4 with coefficients in [-2, 2] and order at most 12
    exceeds the conductor bound.
    """
    report = mann_soundness_scan(max_terms=4, coeff_bound=2, order_cap=12)
    assert isinstance(report, MannScanReport)
    assert report.passed
    assert report.counterexamples == []
    assert report.relations_checked > 0


@pytest.mark.slow
def test_mann_soundness_scan_2():
    """
    Full scan: up to 5 terms, coefficients in [-3, 3], orders up to 30.
    """
    report = mann_soundness_scan(max_terms=5, coeff_bound=3, order_cap=30)
    assert report.counterexamples == []
    assert report.supports_checked == 168814
    assert report.relations_checked == 560
