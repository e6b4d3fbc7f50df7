"""Spectral smoothness measures on graphs and GCN over-smoothing experiments."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import GsmoothError, __version__
from . import _core


def _overlay(overrides):
    return _json.dumps(overrides) if overrides else ""


def config(experiment, desk=False, **overrides):
    """Resolved experiment configuration as a dict."""
    return _json.loads(_core.resolve_config(experiment, _overlay(overrides), desk))


def verify(desk=False, **overrides):
    """Run the bound suite; returns a list of report dicts."""
    return [_json.loads(r) for r in _core.run_verify(_overlay(overrides), desk)]


def decay(desk=True, **overrides):
    return _core.run_curves("decay", _overlay(overrides), desk)


def surgery(desk=True, **overrides):
    return _core.run_curves("surgery", _overlay(overrides), desk)


def skip(desk=True, **overrides):
    return _core.run_skip(_overlay(overrides), desk)


def report(text):
    """Parse a report returned by one of the check_* functions."""
    return _json.loads(text)


__all__ = ["GsmoothError", "__version__", "config", "verify", "decay", "surgery", "skip", "report"]
