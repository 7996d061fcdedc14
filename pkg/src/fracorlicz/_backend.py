"""Backend selection for the pair-loop kernels.

The compiled extension is preferred when it imported cleanly; the NumPy
module is always available and is the only implementation of the generic
(non-power) kernels.  Set FRACORLICZ_BACKEND=numpy to force the fallback or
=compiled to fail loudly when the extension is missing.
"""

import os

from . import _kernels_np

_choice = os.environ.get("FRACORLICZ_BACKEND", "auto")
if _choice not in ("auto", "numpy", "compiled"):
    raise ImportError("FRACORLICZ_BACKEND must be auto, numpy or compiled, got %r" % _choice)

compiled = None
if _choice in ("auto", "compiled"):
    try:
        from . import _kernels as compiled  # type: ignore[attr-defined]
    except ImportError:
        compiled = None
        if _choice == "compiled":
            raise

active = compiled if compiled is not None else _kernels_np


def backend_name():
    return active.name


def available_backends():
    out = {"numpy": _kernels_np}
    if compiled is not None:
        out["compiled"] = compiled
    return out
