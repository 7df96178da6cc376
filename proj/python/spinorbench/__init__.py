"""Killing spinor and cone verification: Python front end over the native core."""

import json

from . import _core
from ._core import SCHEMA, InputError, NumericalError, dirac_current, gamma_matrices

__all__ = [
    "SCHEMA",
    "InputError",
    "NumericalError",
    "catalog",
    "classify",
    "dirac_current",
    "gamma_matrices",
    "lift_cone",
    "verify_killing",
]


def _operator_text(op):
    if isinstance(op, str):
        return op
    return json.dumps({"gram": [list(map(float, r)) for r in op["gram"]], "b": [list(map(float, r)) for r in op["b"]]})


def catalog():
    """Catalog manifest as a dict."""
    return json.loads(_core.catalog())


def classify(op, seed=1):
    """Normal form report for an operator given as JSON text or a {"gram", "b"} mapping."""
    text, ok = _core.classify(_operator_text(op), seed)
    return json.loads(text), ok


def verify_killing(chart, spinor, lambda_=None, seed=1, samples=50, tol=None):
    text, ok = _core.verify_killing(chart, spinor, lambda_, seed, samples, tol or {})
    return json.loads(text), ok


def lift_cone(chart, spinor, lambda_=None, seed=1, samples=50, tol=None):
    text, ok = _core.lift_cone(chart, spinor, lambda_, seed, samples, tol or {})
    return json.loads(text), ok
