# cython: language_level=3
"""Compiled twin of kernel_py.

Values are arbitrary-precision Python ints (or Fractions), so the payload
arithmetic stays in the object domain; the win comes from typed dict
iteration and the removal of interpreter dispatch in the inner loops.
"""

from math import gcd

IMPL = "c"


def row_axpy(dict dst, dict src, c):
    """In place dst += c * src for sparse rows, dropping cancelled entries."""
    if not c:
        return
    cdef object j, v, w
    for j, v in src.items():
        w = dst.get(j)
        if w is None:
            dst[j] = c * v
        else:
            w = w + c * v
            if w:
                dst[j] = w
            else:
                del dst[j]


def row_dot(dict a, dict b):
    """Dot product of two sparse rows; iterates over the shorter one."""
    if len(b) < len(a):
        a, b = b, a
    cdef object j, v, w, total
    total = 0
    for j, v in a.items():
        w = b.get(j)
        if w is not None:
            total = total + v * w
    return total


def fm_combine(tuple cl, rl, tuple cu, ru):
    """Eliminate the shared last variable of a lower/upper constraint pair.

    ``cl`` has negative last coefficient, ``cu`` positive; both are integer
    tuples of equal length with integer right-hand sides.  Returns the
    combined coefficients (one entry shorter) and right-hand side, divided
    by their common gcd.
    """
    cdef Py_ssize_t n = len(cl)
    cdef Py_ssize_t i
    cdef object a = -cl[n - 1]
    cdef object b = cu[n - 1]
    cdef list out = [None] * n
    cdef object g = 0
    for i in range(n - 1):
        out[i] = b * cl[i] + a * cu[i]
        g = gcd(g, out[i])
    out[n - 1] = b * rl + a * ru
    g = gcd(g, out[n - 1])
    if g > 1:
        for i in range(n):
            out[i] = out[i] // g
    return tuple(out[: n - 1]), out[n - 1]
