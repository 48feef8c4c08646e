"""Guaranteed two-sided eigenvalue bounds for preconditioned FE pencils."""

import os as _os

_data = _os.path.join(_os.path.dirname(__file__), "data")
if _os.path.isdir(_data):
    _os.environ.setdefault("EIGENBOUND_DATA_DIR", _data)

from ._eigenbound import (  # noqa: E402
    ContractError,
    DefinitenessError,
    Error,
    LookupError,
    ParameterError,
    ParseError,
    cases,
    gen_eig_small,
    mesh_info,
    property_suite,
    run_case,
    small_agreement,
    verify_bracketing,
    voigt_isotropic,
)

__all__ = [
    "ContractError",
    "DefinitenessError",
    "Error",
    "LookupError",
    "ParameterError",
    "ParseError",
    "cases",
    "gen_eig_small",
    "mesh_info",
    "property_suite",
    "run_case",
    "small_agreement",
    "verify_bracketing",
    "voigt_isotropic",
]
