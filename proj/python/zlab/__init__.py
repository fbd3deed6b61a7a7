"""Certified zeta-series identity checks, summation methods and integer-relation probes."""

import json

from ._zlab import (
    Ball,
    DomainError,
    Error,
    InvalidQuery,
    PrecisionExhausted,
    PrecisionTooLow,
    QuadratureNoConvergence,
    UnknownIdentity,
    __version__,
    catalog,
    hurwitz_zeta,
    run_cli,
    strip_timing,
    tail_sum,
    zeta,
    zeta_minus_one,
)
from . import _zlab


def check(identity, params=None, method="AUTO", digits=50):
    """Checks one catalog entry; returns the result record as a dict."""
    return json.loads(_zlab.check_json(identity, params or {}, method, digits))["results"][0]


def verify_all(method="AUTO", digits=50):
    """Runs every entry on its default grid; returns the full report as a dict."""
    return json.loads(_zlab.verify_all_json(method, digits))


def find_relation(values, coeff_bound, digits=50):
    """Integer-relation search over value tokens such as "1", "0.5", "pi2", "zeta3", "zeta2sq"."""
    return json.loads(_zlab.find_relation_json(list(values), coeff_bound, digits))["results"][0]


def probe_zeta_family(js, coeff_bound, digits=100):
    return json.loads(_zlab.probe_zeta_family_json(list(js), coeff_bound, digits))["results"]


__all__ = [
    "Ball",
    "DomainError",
    "Error",
    "InvalidQuery",
    "PrecisionExhausted",
    "PrecisionTooLow",
    "QuadratureNoConvergence",
    "UnknownIdentity",
    "__version__",
    "catalog",
    "check",
    "find_relation",
    "hurwitz_zeta",
    "probe_zeta_family",
    "run_cli",
    "strip_timing",
    "tail_sum",
    "verify_all",
    "zeta",
    "zeta_minus_one",
]
