"""Projections onto convex cones, lattice-like operations and invariance checks.

Vectors are 1-D arrays. Generator and normal matrices hold one vector per
column. Sets are given as dicts (or JSON strings) in the CLI input format,
for example {"type": "halfspace", "normal": [1, 1], "offset": 0}.
"""

import json as _json

from . import _core
from ._core import (
    Cone,
    DimensionError,
    Error,
    InvalidArgument,
    LatticeLikeOps,
    NumericError,
    ParseError,
    Unsupported,
    classify_normal,
    dual_cone,
    enumerate_invariant_normals,
    hyperplane_invariant_simplicial,
    moreau_decompose,
    project_cone,
    project_cone_oracle,
    run_cli,
)

__version__ = _core.__version__


def _set_json(s):
    return s if isinstance(s, str) else _json.dumps(s)


def set_invariant(s, cone, **options):
    return _core.set_invariant(_set_json(s), cone, **options)


def isotone_test(s, cone, **options):
    return _core.isotone_test(_set_json(s), cone, **options)


def sublattice_test(s, cone, **options):
    return _core.sublattice_test(_set_json(s), cone, **options)


def lorentz_product_check(s, **options):
    return _core.lorentz_product_check(_set_json(s), **options)


__all__ = [
    "Cone",
    "DimensionError",
    "Error",
    "InvalidArgument",
    "LatticeLikeOps",
    "NumericError",
    "ParseError",
    "Unsupported",
    "classify_normal",
    "dual_cone",
    "enumerate_invariant_normals",
    "hyperplane_invariant_simplicial",
    "isotone_test",
    "lorentz_product_check",
    "moreau_decompose",
    "project_cone",
    "project_cone_oracle",
    "run_cli",
    "set_invariant",
    "sublattice_test",
]
