"""Pure-Python sparse row and constraint kernel.

A sparse row is a dict mapping column index to a nonzero value (int or
Fraction).  Zeros are never stored; the row functions below preserve that
invariant.  Constraint rows for the elimination kernel are integer tuples.
"""

from math import gcd

IMPL = "python"


def row_axpy(dst, src, c):
    """In place dst += c * src for sparse rows, dropping cancelled entries."""
    if not c:
        return
    get = dst.get
    for j, v in src.items():
        w = get(j)
        if w is None:
            dst[j] = c * v
        else:
            w = w + c * v
            if w:
                dst[j] = w
            else:
                del dst[j]


def row_dot(a, b):
    """Dot product of two sparse rows; iterates over the shorter one."""
    if len(b) < len(a):
        a, b = b, a
    get = b.get
    total = 0
    for j, v in a.items():
        w = get(j)
        if w is not None:
            total = total + v * w
    return total


def fm_combine(cl, rl, cu, ru):
    """Eliminate the shared last variable of a lower/upper constraint pair.

    ``cl`` has negative last coefficient, ``cu`` positive; both are integer
    tuples of equal length with integer right-hand sides.  Returns the
    combined coefficients (one entry shorter) and right-hand side, divided
    by their common gcd.
    """
    a = -cl[-1]
    b = cu[-1]
    out = [b * x + a * y for x, y in zip(cl, cu)]
    out[-1] = b * rl + a * ru
    g = 0
    for v in out:
        g = gcd(g, v)
    if g > 1:
        return tuple(v // g for v in out[:-1]), out[-1] // g
    return tuple(out[:-1]), out[-1]
