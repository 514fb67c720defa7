"""Truth evaluation over finite models.

Formulas are compiled to a flat program (``compile.py``) and run by one of
two interchangeable backends: the Cython extension ``_ckernel`` when it is
built, else the pure-Python ``_pykernel``.  Set ``DDLKANT_PURE_PYTHON=1`` to
force the Python backend.
"""

from __future__ import annotations

import os

from . import _pykernel
from .compile import Program, compile_formula
from .frames import ALL_CONDITIONS, FrameConditions, Violation, check_frame, enumerate_frames
from .model import Model, Shape, default_subjects, default_worlds, mask_of, names_of

_run_py = _pykernel.run
_run_c = None
if not os.environ.get("DDLKANT_PURE_PYTHON"):
    try:
        from ._ckernel import run as _run_c
    except ImportError:
        _run_c = None

BACKEND = "cython" if _run_c is not None else "python"

# packed maxim values must fit a signed 64-bit word in the compiled kernel
_C_MAX_BITS = 62


def run_program(prog: Program, ob: bytes, atoms, acts, interp) -> int:
    if _run_c is not None and prog.n_w * (2 + prog.n_s) <= _C_MAX_BITS:
        return _run_c(prog, ob, atoms, acts, interp)
    return _run_py(prog, ob, atoms, acts, interp)


def extension_mask(f, m: Model) -> int:
    """Bitmask of the worlds of ``m`` at which ``f`` is true."""
    prog = compile_formula(f, m.shape)
    return run_program(prog, *m.arrays)


def extension(f, m: Model) -> list[str]:
    return names_of(extension_mask(f, m), m.worlds)


def evaluate(f, m: Model, w: str) -> bool:
    return bool(extension_mask(f, m) >> m.worlds.index(w) & 1)


def holds(f, m: Model) -> bool:
    """True at every world of ``m``."""
    return extension_mask(f, m) == m.full


__all__ = [
    "ALL_CONDITIONS", "BACKEND", "FrameConditions", "Model", "Program", "Shape", "Violation",
    "check_frame", "compile_formula", "default_subjects", "default_worlds", "enumerate_frames",
    "evaluate", "extension", "extension_mask", "holds", "mask_of", "names_of", "run_program",
]
