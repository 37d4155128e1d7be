"""Hot loops for sparse exact elimination.

The compiled extension is optional; the pure-Python twin implements the
identical contract.  `IMPL` reports which one is active.
"""

try:
    from torsal._kernel._speedups import IMPL, fm_combine, row_axpy, row_dot
except ImportError:  # pragma: no cover - depends on build environment
    from torsal._kernel.kernel_py import IMPL, fm_combine, row_axpy, row_dot

__all__ = ["row_axpy", "row_dot", "fm_combine", "IMPL"]
