"""Hot numeric kernels: batched outcome probabilities and best-response scans.

Two interchangeable backends:

* ``qbos.kernels._compiled`` -- Cython extension, used when built;
* ``qbos.kernels.reference`` -- NumPy/pure-Python fallback.

Selection happens once at import.  Set ``QBOS_KERNELS=reference`` or
``QBOS_KERNELS=compiled`` to force a backend (the latter raises if the
extension is missing).  ``benchmarks/bench_kernels.py`` compares the two.
"""
import os

_choice = os.environ.get("QBOS_KERNELS", "auto").strip().lower() or "auto"

if _choice in ("auto", "compiled", "fast"):
    try:
        from . import _compiled as _backend
        BACKEND = "compiled"
    except ImportError:
        if _choice != "auto":
            raise ImportError(
                "QBOS_KERNELS requested the compiled backend but the extension is not built"
            )
        from . import reference as _backend
        BACKEND = "reference"
elif _choice in ("reference", "ref", "python"):
    from . import reference as _backend
    BACKEND = "reference"
else:
    raise ValueError(f"unknown QBOS_KERNELS value {_choice!r}")

probs_batch = _backend.probs_batch
probs_one = _backend.probs_one
payoff_one = _backend.payoff_one
br_table = _backend.br_table
best_response = _backend.best_response
