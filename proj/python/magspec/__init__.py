"""Magnetic Robin spectral computations: kernel, boundary operators, Toeplitz and cluster spectra."""

import json as _json

from ._magspec import (
    ConfigError,
    ConvergenceError,
    DomainError,
    HypothesisError,
    NumericError,
    PrecisionError,
    disk_spectrum,
    extrapolate,
    g0,
    landau_level,
    rho_sequence,
    schema,
)
from . import _magspec

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "HypothesisError",
    "NumericError",
    "PrecisionError",
    "disk_spectrum",
    "extrapolate",
    "g0",
    "landau_level",
    "render",
    "rho_sequence",
    "run",
    "schema",
    "verify",
]


def run(subcommand, config=None):
    """Run a CLI subcommand in process and return its result record as a dict."""
    return _json.loads(_magspec.run_json(subcommand, _json.dumps(config or {})))


def render(subcommand, config=None):
    """Same as the CLI output for the config, CSV or JSON text."""
    return _magspec.render(subcommand, _json.dumps(config or {}))


def verify(suite):
    """Run an acceptance suite and return the report as a dict."""
    return _json.loads(_magspec.verify_json(suite))
