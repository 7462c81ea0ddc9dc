import json
from fractions import Fraction

import jsonschema
import pytest

from veech_candidates.exact import CycNum
from veech_candidates.flatsurf import (
    DegenerateParameterError,
    PrototypeParams,
    decagon_params,
    load_params,
    reduce_modulo,
    save_params,
)
from veech_candidates.tests._common import PHI, PSI

_ONE = CycNum.from_rational(1)


def _params(**kwargs):
    params = {
        "genus": 2,
        "heights": (1, 1),
        "widths": (2, 1),
        "slit_widths": (Fraction(1, 2),),
        "twists": (0, 0),
    }
    params.update(kwargs)
    return PrototypeParams(**params)


def test_PrototypeParams_1():
    p = _params(twists=(Fraction(5, 2), Fraction(-1, 3)))
    assert p.heights == (_ONE, _ONE)
    assert p.twists == (CycNum.from_rational(Fraction(1, 2)), CycNum.from_rational(Fraction(2, 3)))
    assert p.area() == 3
    assert p.moduli() == [CycNum.from_rational(Fraction(1, 2)), _ONE]


# fmt: off
@pytest.mark.parametrize("kwargs, msg", [
    ({"genus": 1, "heights": (1,), "widths": (1,), "slit_widths": (), "twists": (0,)}, "at least 2"),
    ({"heights": (1,)}, "Expected 2 heights"),
    ({"slit_widths": ()}, "Expected 1 slit_widths"),
    ({"heights": (1, 0)}, "heights must be positive"),
    ({"widths": (2, -1)}, "widths must be positive"),
    ({"slit_widths": (2,)}, "first cylinder"),
    ({"slit_widths": (1,)}, "last cylinder"),
    ({"heights": (1, CycNum.zeta(4))}, "not real"),
])
# fmt: on
def test_PrototypeParams_2_fail(kwargs, msg):
    with pytest.raises(DegenerateParameterError, match=msg):
        _params(**kwargs)


def test_PrototypeParams_3_fail():
    with pytest.raises(DegenerateParameterError, match="middle cylinder 2"):
        PrototypeParams(
            genus=3,
            heights=(1, 1, 1),
            widths=(2, 2, 2),
            slit_widths=(Fraction(1, 2), Fraction(1, 2)),
            twists=(0, 0, 0),
        )


def test_PrototypeParams_4():
    """
    ``from_widths`` fills in the slits of the middle cylinders.
    """
    p = PrototypeParams.from_widths(heights=(1, 2, 1, 3), widths=(3, 3, 4, 3), w1=1, twists=(0, 1, 2, 4))
    assert p.slit_widths == (_ONE, CycNum.from_rational(2), CycNum.from_rational(2))
    assert p.twists[3] == 1

    with pytest.raises(DegenerateParameterError):
        PrototypeParams.from_widths(heights=(1, 1, 1), widths=(3, 1, 4), w1=1, twists=(0, 0, 0))


def test_PrototypeParams_5():
    """
    Normalization rescales the two directions separately.
    """
    p = _params(heights=(2, 4), widths=(3, 1), slit_widths=(Fraction(1, 2),), twists=(1, 0))
    assert not p.is_normalized()
    q = p.normalized()
    assert q.is_normalized()
    assert q.heights == (_ONE, CycNum.from_rational(2))
    assert q.widths == (CycNum.from_rational(Fraction(6, 5)), CycNum.from_rational(Fraction(2, 5)))
    assert q.slit_widths == (CycNum.from_rational(Fraction(1, 5)),)
    assert q.twists == (CycNum.from_rational(Fraction(2, 5)), CycNum.from_rational(0))
    assert q.moduli()[1] / q.moduli()[0] == p.moduli()[1] / p.moduli()[0]


def test_decagon_params_1():
    p = decagon_params()
    assert p.is_normalized()
    assert p.heights == (_ONE, PSI)
    assert p.widths[0] == 1 + PHI / 2
    assert p.widths[1] - p.slit_widths[0] == PSI / 2
    assert p.moduli()[0] == p.moduli()[1]


# fmt: off
@pytest.mark.parametrize("value, modulus, expected", [
    (Fraction(7, 2), 2, Fraction(3, 2)),
    (Fraction(-1, 4), 1, Fraction(3, 4)),
    (2, 2, 0),
    (0, 3, 0),
])
# fmt: on
def test_reduce_modulo_1(value, modulus, expected):
    result = reduce_modulo(CycNum.from_rational(value), CycNum.from_rational(modulus))
    assert result == expected


def test_reduce_modulo_2():
    assert reduce_modulo(-PSI / 4, PHI) == PHI - PSI / 4
    assert reduce_modulo(PHI * 1000 + Fraction(1, 3), PHI) == Fraction(1, 3)
    assert reduce_modulo(-PHI * 999 - PSI / 4, PHI) == PHI - PSI / 4
    assert reduce_modulo(PHI * 7, PHI).is_zero()


def test_params_json_1(tmp_path):
    p = decagon_params()
    assert PrototypeParams.from_json(json.loads(json.dumps(p.to_json()))) == p

    path = str(tmp_path / "decagon.json")
    save_params(p, path)
    assert load_params(path) == p


def test_params_json_2_fail(tmp_path):
    data = decagon_params().to_json()
    del data["twists"]
    with pytest.raises(jsonschema.ValidationError):
        PrototypeParams.from_json(data)

    with pytest.raises(IOError, match="does not exist"):
        load_params(str(tmp_path / "missing.json"))

    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(IOError, match="Error while loading prototype parameters"):
        load_params(str(path))

    data = decagon_params().to_json()
    data["heights"][1] = {"conductor": 1, "coeffs": ["-1"]}
    path = tmp_path / "degenerate.json"
    path.write_text(json.dumps(data))
    with pytest.raises(IOError, match="heights must be positive"):
        load_params(str(path))


def test_with_twists_1():
    """
    Replacing the twists agrees with building the parameters from scratch.
    """
    p = decagon_params()
    zero = p.with_twists([0, 0])
    assert zero.twists == (0, 0)
    assert zero.widths == p.widths and zero.heights == p.heights
    assert zero.with_twists(p.twists) == p

    shifted = p.with_twists([p.twists[0] + p.widths[0] * 3, p.twists[1] - p.widths[1]])
    assert shifted == p

    with pytest.raises(DegenerateParameterError, match="Expected 2 twists"):
        p.with_twists([0])
    with pytest.raises(DegenerateParameterError, match="not real"):
        p.with_twists([CycNum.zeta(5), 0])
