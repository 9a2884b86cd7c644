"""Moments of simple log-concave functions."""

import json
import math

from . import _core
from ._core import DomainError, Diverges, Error, InfeasibleError, NonConvergence, NotEmbeddable

__all__ = [
    "DomainError", "Diverges", "Error", "InfeasibleError", "NonConvergence", "NotEmbeddable",
    "constants", "envelope", "gamma_p", "invert", "moments", "run",
]


def _num(x):
    if x == "inf":
        return math.inf
    if isinstance(x, list):
        return [_num(v) for v in x]
    if isinstance(x, dict):
        return {k: _num(v) for k, v in x.items()}
    return x


def _fn_text(fn):
    if isinstance(fn, str):
        return fn
    enc = lambda v: "inf" if isinstance(v, float) and math.isinf(v) else v
    return json.dumps({k: [enc(v) for v in val] if isinstance(val, list) else val for k, val in fn.items()})


def moments(fn, exponents):
    """Moments of a function descriptor (dict or JSON text) at each exponent."""
    return _num(json.loads(_core.moments(_fn_text(fn), list(exponents))))


def invert(sign, exponents, targets):
    """The member of L_n^sign with the given moments, as a solve report dict."""
    return _num(json.loads(_core.invert(sign, list(exponents), list(targets))))


def envelope(exponents, constraints):
    return _num(json.loads(_core.envelope(list(exponents), list(constraints))))


def constants(p, q, n=None):
    """Khintchine constants A, B for fixed n, or the limiting ones when n is None."""
    return _num(json.loads(_core.constants(p, math.inf if q is None else q, 0 if n is None else n)))


gamma_p = _core.gamma_p


def run(*args):
    """Run the command-line tool in-process; returns (exit code, stdout, stderr)."""
    return _core.run([str(a) for a in args])
