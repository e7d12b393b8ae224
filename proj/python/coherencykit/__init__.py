"""Coherency scores for PC-style causal discovery."""

import json

from . import _core
from ._core import (
    CoherencyError,
    DegenerateDataError,
    InsufficientSamplesError,
    InvalidGraphError,
    ParseError,
    TrivialWeightError,
    UnresolvedGraphError,
    cpdag,
    d_separated,
    fisher_z,
    models,
    partial_correlation,
    sample,
)

__version__ = _core.__version__

__all__ = [
    "CoherencyError",
    "DegenerateDataError",
    "InsufficientSamplesError",
    "InvalidGraphError",
    "ParseError",
    "TrivialWeightError",
    "UnresolvedGraphError",
    "cpdag",
    "d_separated",
    "discover",
    "discover_oracle",
    "fisher_z",
    "models",
    "partial_correlation",
    "replicate",
    "sample",
]


def discover(values, columns, alpha=0.05, variant="classic", policy="mark", order=(), resolutions=("none",)):
    """Run PC with Fisher-Z tests on an (n, d) array and score the output.

    Returns a dict with the discovery bundle and one report per resolution.
    """
    text = _core.discover_data(values, list(columns), alpha, variant, policy, list(order), list(resolutions))
    return json.loads(text)


def discover_oracle(edges, observed=(), variant="classic", policy="mark", resolutions=("none",)):
    """Run PC against d-separation in a DAG given in edge-list text."""
    return json.loads(_core.discover_oracle(edges, list(observed), variant, policy, list(resolutions)))


def replicate(model, n, reps=100, c=None, seed=0, resolution="drop-conflicts", variant="classic", policy="mark",
              threads=0):
    """Monte-Carlo summary of `reps` seeded runs on a catalog model."""
    return json.loads(_core.replicate(model, n, reps, c, seed, resolution, variant, policy, threads))
