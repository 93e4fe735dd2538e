"""Stepper backend selection.

The compiled extension is used when it imports; otherwise the numpy fallback.
Set ``HOLLINGTANNER_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

OK, NEGATIVE, NONFINITE, BLOWUP = _kernels_py.OK, _kernels_py.NEGATIVE, _kernels_py.NONFINITE, _kernels_py.BLOWUP
STATUS_NAMES = {NEGATIVE: "negative density", NONFINITE: "non-finite value", BLOWUP: "blow-up (|field| > 10)"}

_compiled = None
if not os.environ.get("HOLLINGTANNER_PURE_PYTHON"):
    try:
        from ._ext import stepper as _compiled
    except ImportError:
        _compiled = None

if _compiled is not None:
    euler1d = _compiled.euler1d
    euler2d = _compiled.euler2d
    BACKEND = "compiled"
else:
    euler1d = _kernels_py.euler1d
    euler2d = _kernels_py.euler2d
    BACKEND = "python"


def backends():
    """Available implementations as a name -> (euler1d, euler2d) mapping."""
    out = {"python": (_kernels_py.euler1d, _kernels_py.euler2d)}
    if _compiled is not None:
        out["compiled"] = (_compiled.euler1d, _compiled.euler2d)
    return out
