"""Backend selection for the enumeration kernels.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
pure-Python ``_pykernels`` module is used. Setting ``EXTREMAL_PURE_PYTHON=1``
forces the fallback.
"""

import os

from . import _pykernels

python_backend = _pykernels
compiled_backend = None

if os.environ.get("EXTREMAL_PURE_PYTHON") != "1":
    try:
        from . import _ckernels as compiled_backend
    except ImportError:
        compiled_backend = None

active = compiled_backend if compiled_backend is not None else python_backend
BACKEND = active.BACKEND

enumerate_cycles = active.enumerate_cycles
count_closed_walks = active.count_closed_walks
find_conflict_free_walk = active.find_conflict_free_walk


def backends():
    """All importable backends, compiled first."""
    out = []
    if compiled_backend is not None:
        out.append(compiled_backend)
    out.append(python_backend)
    return out
