"""Python surface for the Lucretia checker and interpreter.

The heavy lifting happens in the `_core` extension; every function here
returns plain dicts/lists decoded from the core's stable JSON schema:
{status, judgment?, value?, diagnostics[], trace?, fuzz_report?}.
"""

import json as _json

from lucretia._core import (  # noqa: F401
    check_json,
    fuzz_json,
    pretty,
    run_json,
    trace_json,
)

__all__ = ["check", "run", "trace", "fuzz", "pretty"]


def check(source):
    """Type-check a program; returns the decoded result document."""
    return _json.loads(check_json(source))


def run(source, fuel=100000, unchecked=False):
    """Check (unless ``unchecked``) and execute a program."""
    return _json.loads(run_json(source, fuel, unchecked))


def trace(source, fuel=100000, unchecked=False):
    """Execute a program and return its small-step trace."""
    return _json.loads(trace_json(source, fuel, unchecked))


def fuzz(seed=42, count=100, depth=4, fuel=10000):
    """Generate typed programs and report safety violations."""
    return _json.loads(fuzz_json(seed, count, depth, fuel))
