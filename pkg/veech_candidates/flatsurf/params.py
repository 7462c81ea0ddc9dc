"""
Parameters of the staircase prototype surface.
"""
import json
import logging
import math
import os
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Tuple

import jsonschema

from ..exact import CycNum, real_sign

logger = logging.getLogger(__name__)


class DegenerateParameterError(ValueError):
    ...


CYCNUM_SCHEMA = {
    "type": "object",
    "required": ["conductor", "coeffs"],
    "additionalProperties": False,
    "properties": {
        "conductor": {"type": "integer", "minimum": 1},
        "coeffs": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]+)?$"},
        },
    },
}

PARAMS_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["genus", "heights", "widths", "slit_widths", "twists"],
    "additionalProperties": False,
    "properties": {
        "genus": {"type": "integer", "minimum": 2},
        "heights": {"type": "array", "items": CYCNUM_SCHEMA},
        "widths": {"type": "array", "items": CYCNUM_SCHEMA},
        "slit_widths": {"type": "array", "items": CYCNUM_SCHEMA},
        "twists": {"type": "array", "items": CYCNUM_SCHEMA},
    },
}


def _as_cycnum(value):
    if isinstance(value, CycNum):
        return value
    if isinstance(value, (int, Fraction, str)):
        return CycNum.from_rational(Fraction(value))
    raise TypeError(f"Value {value!r} is not a CycNum or a rational number")


def reduce_modulo(value, modulus):
    """The representative of ``value`` in [0, modulus)."""
    size = float(modulus)
    if size > 0:
        shift = math.floor(float(value) / size)
        if shift:
            value = value - modulus * shift
    # Exact fix-up after the floating point guess
    while real_sign(value) < 0:
        value = value + modulus
    while real_sign(value - modulus) >= 0:
        value = value - modulus
    return value


@dataclass(frozen=True)
class PrototypeParams:
    """
    Staircase of ``genus`` horizontal cylinders.

    Cylinder i has circumference ``widths[i]`` and height ``heights[i]``. The free top saddle
    connection of cylinder i (length ``slit_widths[i]``) is glued to the bottom of cylinder i + 1,
    so middle cylinders satisfy b_i = w_{i-1} + w_i. The vertical flow maps the bottom position u
    of cylinder i to the top position u + ``twists[i]``.

    Twists are reduced to [0, b_i) on construction.

    Raises
    ------
    DegenerateParameterError
        Non-positive or non-real lengths, inconsistent widths, slits not shorter than the cylinders.
    """

    genus: int
    heights: Tuple[CycNum, ...]
    widths: Tuple[CycNum, ...]
    slit_widths: Tuple[CycNum, ...]
    twists: Tuple[CycNum, ...]

    def __post_init__(self):
        g = self.genus
        if g < 2:
            raise DegenerateParameterError(f"Genus must be at least 2: {g}")
        for name, expected in (("heights", g), ("widths", g), ("slit_widths", g - 1), ("twists", g)):
            values = tuple(_as_cycnum(v) for v in getattr(self, name))
            if len(values) != expected:
                raise DegenerateParameterError(f"Expected {expected} {name}, got {len(values)}")
            if not all(v.is_real() for v in values):
                raise DegenerateParameterError(f"Some {name} are not real")
            object.__setattr__(self, name, values)

        for name in ("heights", "widths", "slit_widths"):
            if any(real_sign(v) <= 0 for v in getattr(self, name)):
                raise DegenerateParameterError(f"All {name} must be positive")

        b, w = self.widths, self.slit_widths
        if real_sign(b[0] - w[0]) <= 0:
            raise DegenerateParameterError("The slit of the first cylinder is not shorter than its width")
        if real_sign(b[-1] - w[-1]) <= 0:
            raise DegenerateParameterError("The slit below the last cylinder is not shorter than its width")
        for i in range(1, g - 1):
            if b[i] != w[i - 1] + w[i]:
                raise DegenerateParameterError(
                    f"Width of the middle cylinder {i + 1} differs from the sum of its slits"
                )

        object.__setattr__(self, "twists", tuple(reduce_modulo(t, bi) for t, bi in zip(self.twists, b)))

    @classmethod
    def from_widths(cls, heights, widths, w1, twists):
        """
        Parameters with the slit widths determined by ``w1`` and the widths of the middle cylinders.
        """
        widths = [_as_cycnum(b) for b in widths]
        slits = [_as_cycnum(w1)]
        for b in widths[1:-1]:
            slits.append(b - slits[-1])
        return cls(genus=len(widths), heights=heights, widths=widths, slit_widths=slits, twists=twists)

    def with_twists(self, twists):
        """
        The same cylinders with other twists. Only the twists are checked and reduced; the other
        lengths were validated on construction.
        """
        twists = tuple(_as_cycnum(t) for t in twists)
        if len(twists) != self.genus:
            raise DegenerateParameterError(f"Expected {self.genus} twists, got {len(twists)}")
        if not all(t.is_real() for t in twists):
            raise DegenerateParameterError("Some twists are not real")
        params = PrototypeParams.__new__(PrototypeParams)
        for name in ("genus", "heights", "widths", "slit_widths"):
            object.__setattr__(params, name, getattr(self, name))
        object.__setattr__(params, "twists", tuple(reduce_modulo(t, b) for t, b in zip(twists, self.widths)))
        return params

    def area(self):
        return sum((b * h for b, h in zip(self.widths, self.heights)), CycNum.from_rational(0))

    def moduli(self):
        """Moduli h_i / b_i of the horizontal cylinders."""
        return [h / b for h, b in zip(self.heights, self.widths)]

    def is_normalized(self):
        return self.heights[0] == 1 and self.widths[0] == 1 + self.slit_widths[0]

    def normalized(self):
        """
        Rescale horizontally and vertically (independently) so that h_1 = 1 and b_1 = 1 + w_1.
        """
        horizontal = (self.widths[0] - self.slit_widths[0]).inverse()
        vertical = self.heights[0].inverse()
        return replace(
            self,
            heights=tuple(h * vertical for h in self.heights),
            widths=tuple(b * horizontal for b in self.widths),
            slit_widths=tuple(w * horizontal for w in self.slit_widths),
            twists=tuple(t * horizontal for t in self.twists),
        )

    def to_json(self):
        return {
            "genus": self.genus,
            "heights": [v.to_json() for v in self.heights],
            "widths": [v.to_json() for v in self.widths],
            "slit_widths": [v.to_json() for v in self.slit_widths],
            "twists": [v.to_json() for v in self.twists],
        }

    @classmethod
    def from_json(cls, data):
        jsonschema.validate(instance=data, schema=PARAMS_SCHEMA)
        return cls(
            genus=data["genus"],
            **{
                name: tuple(CycNum.from_json(v) for v in data[name])
                for name in ("heights", "widths", "slit_widths", "twists")
            },
        )


def decagon_params():
    """
    Parameters of the genus 2 surface glued from the regular decagon, normalized.

    With φ the golden ratio: b = (1 + φ/2, φ - 1/2), h = (1, φ - 1), w_1 = φ/2.
    """
    phi = 1 + CycNum.zeta(5) + CycNum.zeta(5, 4)
    half = Fraction(1, 2)
    return PrototypeParams(
        genus=2,
        heights=(CycNum.from_rational(1), phi - 1),
        widths=(1 + phi * half, phi - half),
        slit_widths=(phi * half,),
        twists=((phi - 2) * Fraction(1, 4), CycNum.from_rational(Fraction(-1, 4))),
    )


def load_params(path_to_file):
    """
    Load prototype parameters from a JSON file.

    Raises
    ------
    IOError
        The file does not exist, is not valid JSON, does not match the schema or describes
        degenerate parameters.
    """
    try:
        if not os.path.isfile(path_to_file):
            raise IOError(f"File '{path_to_file}' does not exist.")
        with open(path_to_file, "r") as stream:
            data = json.load(stream)
        params = PrototypeParams.from_json(data)
    except Exception as ex:
        raise IOError(f"Error while loading prototype parameters from file '{path_to_file}': {ex}") from ex
    logger.debug("Loaded genus %d parameters from '%s'", params.genus, path_to_file)
    return params


def save_params(params, path_to_file):
    with open(path_to_file, "w") as stream:
        json.dump(params.to_json(), stream, indent=2)
