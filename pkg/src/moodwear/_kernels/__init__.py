"""Hot-loop kernels with a compiled fast path.

The Cython extension (``_fastpath``) and the numpy reference (``_pyref``)
implement identical arithmetic, so results are bit-for-bit equal whichever
backend loads. Set ``MOODWEAR_PURE_PYTHON=1`` to force the fallback;
``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import os

from . import _pyref

if os.environ.get("MOODWEAR_PURE_PYTHON", "").lower() in ("1", "true", "yes"):
    _impl = _pyref
    BACKEND = "python"
else:
    try:
        from . import _fastpath as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pyref
        BACKEND = "python"

smo_solve = _impl.smo_solve
temp_hold_scan = _impl.temp_hold_scan

__all__ = ["BACKEND", "smo_solve", "temp_hold_scan"]
