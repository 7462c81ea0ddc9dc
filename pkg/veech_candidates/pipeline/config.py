"""
Search parameters from the command line, YAML files and the environment.
"""
import dataclasses
import logging
import os
from dataclasses import dataclass
from typing import Optional

import jsonschema
import yaml

from ..flatsurf import DEFAULT_STEP_BUDGET

logger = logging.getLogger(__name__)

WORKERS_ENV_VARIABLE = "VEECH_CANDIDATES_WORKERS"


class ConfigError(IOError):
    ...


_positive_integer = {"type": "integer", "minimum": 1}

_search_config_schema = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "genus": {"type": "integer", "minimum": 2},
        "order_cap": _positive_integer,
        "winding_cap": {"type": "integer", "minimum": 0},
        "moduli_cap": {"type": ["integer", "null"], "minimum": 1},
        "entry_cap": {"type": ["integer", "null"], "minimum": 1},
        "step_budget": _positive_integer,
        "strict": {"type": "boolean"},
        "max_period_tuples": _positive_integer,
        "max_matrices": _positive_integer,
        "max_surfaces": _positive_integer,
    },
}


@dataclass(frozen=True)
class SearchConfig:
    """
    Parameters of a search.

    ``moduli_cap`` defaults to the torsion order N of each period tuple, ``entry_cap`` to 2g.
    The ``max_*`` values are the stage budgets.
    """

    genus: int
    order_cap: int
    winding_cap: int = 2
    moduli_cap: Optional[int] = None
    entry_cap: Optional[int] = None
    step_budget: int = DEFAULT_STEP_BUDGET
    strict: bool = False
    max_period_tuples: int = 10**4
    max_matrices: int = 10**7
    max_surfaces: int = 10**6

    def __post_init__(self):
        try:
            jsonschema.validate(instance=dataclasses.asdict(self), schema=_search_config_schema)
        except jsonschema.ValidationError as ex:
            raise ConfigError(f"Invalid search parameters: {ex.message}") from ex

    @property
    def default_entry_cap(self):
        return 2 * self.genus

    @property
    def resolved_entry_cap(self):
        return self.entry_cap if self.entry_cap is not None else self.default_entry_cap

    @classmethod
    def from_dict(cls, data, **overrides):
        """
        Parameters from a dictionary (e.g. a loaded YAML file). Overrides set to None are ignored.
        """
        params = dict(data)
        params.update({k: v for k, v in overrides.items() if v is not None})
        missing = [k for k in ("genus", "order_cap") if k not in params]
        if missing:
            raise ConfigError(f"Missing search parameters: {missing}")
        unknown = set(params) - set(_search_config_schema["properties"])
        if unknown:
            raise ConfigError(f"Unknown search parameters: {sorted(unknown)}")
        return cls(**params)

    def to_dict(self):
        return dataclasses.asdict(self)


def load_search_config(path_to_file):
    """
    Load search parameters from a YAML file.

    Parameters
    ----------
    path_to_file: str
        Path to the YAML file.

    Returns
    -------
    dict
        Validated parameters. Returns ``{}`` if the path is empty or None.

    Raises
    ------
    ConfigError
        The file is missing, is not valid YAML or contains invalid parameters.
    """
    if not path_to_file:
        return {}

    try:
        if not os.path.isfile(path_to_file):
            raise IOError(f"File '{path_to_file}' does not exist.")

        with open(path_to_file, "r") as stream:
            config = yaml.safe_load(stream)

        if config is None:
            config = {}
        jsonschema.validate(instance=config, schema=_search_config_schema)

    except Exception as ex:
        raise ConfigError(f"Error while loading search parameters from file '{path_to_file}': {ex}") from ex

    return config


def workers_from_env(environ=None):
    """Number of worker processes from the environment, 1 if the variable is unset or empty."""
    environ = os.environ if environ is None else environ
    value = environ.get(WORKERS_ENV_VARIABLE, "")
    if not value.strip():
        return 1
    try:
        workers = int(value)
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV_VARIABLE} must be an integer, got '{value}'")
    if workers < 1:
        raise ConfigError(f"{WORKERS_ENV_VARIABLE} must be positive, got {workers}")
    return workers
