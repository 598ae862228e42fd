"""Execute, model-check and verify heap-manipulating programs.

The compiled core exposes the toolkit's operations; this wrapper turns the
machine-readable reports into plain dictionaries.
"""

import json as _json

from seplog._core import (  # noqa: F401
    EvaluationError,
    FragmentError,
    LimitError,
    SourceError,
    render_assertion,
    render_program,
    sat,
    wp,
)
from seplog import _core

__all__ = [
    "check",
    "run",
    "sat",
    "entail",
    "fuzz",
    "wp",
    "render_program",
    "render_assertion",
    "SourceError",
    "FragmentError",
    "LimitError",
    "EvaluationError",
]


def check(source, depth=64, name="<string>"):
    """Check a fully annotated program; returns the report as a dict."""
    return _json.loads(_core.check_json(source, depth, name))


def run(source, store=None, heap=None, fuel=10000, alloc_base=1):
    """Execute a program; returns outcome, trace and final state as a dict."""
    return _json.loads(_core.run_json(source, store or {}, heap or {}, fuel, alloc_base))


def entail(query, depth=64):
    """Prove an entailment written as 'P |- Q'; returns status and trace."""
    return _json.loads(_core.entail_json(query, depth))


def fuzz(source, samples=100, seed=0, fuel=10000, alloc_base=1, name="<string>"):
    """Differential-test a program against its pre/postcondition."""
    return _json.loads(_core.fuzz_json(source, samples, seed, fuel, alloc_base, name))
