"""Python front end for the esmm solver core."""

import json as _json

from ._esmm import (
    AdmissibilityError,
    ConfigError,
    Error,
    __version__,
    alpha_coeffs,
    case_names,
    cons_to_prim,
    ec_flux,
    entropy_density,
    entropy_variables,
    interface_jump,
    log_mean,
    nvars,
    physical_flux,
    prim_to_cons,
    reconstruct_left,
    reconstruct_right,
    scaled_eigenvectors,
)
from ._esmm import Solver as _Solver
from ._esmm import resolve_config as _resolve


def resolve_config(config):
    """Fill a partial config dict with the case defaults; unknown keys raise ConfigError."""
    return _json.loads(_resolve(_json.dumps(config)))


class Solver(_Solver):
    """Solver built from a config dict such as {"case": "vortex2d", "cells": [20, 20]}."""

    def __init__(self, config):
        super().__init__(_json.dumps(config))

    def manifest(self):
        return _json.loads(super().manifest())


__all__ = [
    "AdmissibilityError",
    "ConfigError",
    "Error",
    "Solver",
    "__version__",
    "alpha_coeffs",
    "case_names",
    "cons_to_prim",
    "ec_flux",
    "entropy_density",
    "entropy_variables",
    "interface_jump",
    "log_mean",
    "nvars",
    "physical_flux",
    "prim_to_cons",
    "reconstruct_left",
    "reconstruct_right",
    "resolve_config",
    "scaled_eigenvectors",
]
