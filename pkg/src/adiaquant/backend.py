"""Kernel backend selection.

The compiled extension is preferred when importable; set
``ADIAQUANT_PURE_PYTHON=1`` to force the numpy fallback (used by the
benchmark and the backend-equivalence tests).
"""

import os

from . import _kernels_py

_force_python = os.environ.get("ADIAQUANT_PURE_PYTHON", "") not in ("", "0")

if _force_python:
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py
        BACKEND = "python"

pair_matvec = _impl.pair_matvec
negation_matvec = _impl.negation_matvec
rk4_propagate = _impl.rk4_propagate
bit_rotation = _impl.bit_rotation
phase_flags = _impl.phase_flags
execute_gates = _impl.execute_gates


def implementations():
    """Available (name, module) kernel implementations, compiled first."""
    out = []
    if not _force_python:
        try:
            from . import _kernels  # type: ignore[attr-defined]

            out.append(("cython", _kernels))
        except ImportError:
            pass
    out.append(("python", _kernels_py))
    return out
