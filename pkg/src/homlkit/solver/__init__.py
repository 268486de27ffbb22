"""SAT solving backend selection.

The compiled Cython core is used when available; the pure-Python twin is the
fallback. Both implement the same deterministic DPLL, so results (including
first models found during enumeration) are identical. Set HOMLKIT_PURE=1 to
force the pure backend.
"""

import os

from .pure import SAT, UNKNOWN, UNSAT
from .pure import solve_cnf as _solve_pure

if os.environ.get("HOMLKIT_PURE"):
    solve_cnf = _solve_pure
    BACKEND = "pure"
else:
    try:
        from ._core import solve_cnf  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        solve_cnf = _solve_pure
        BACKEND = "pure"

__all__ = ["solve_cnf", "SAT", "UNSAT", "UNKNOWN", "BACKEND"]
