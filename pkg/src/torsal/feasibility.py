"""Exact feasibility of rational linear constraint systems.

Fourier-Motzkin elimination; suited to the low dimensions and small
systems produced by sign-vector geometry.  A constraint is
``(coeffs, rhs, strict)`` encoding ``coeffs . x < rhs`` when ``strict``
else ``coeffs . x <= rhs``.  Constraints are normalized to coprime integer
coefficients, so the elimination runs on machine integers; only the
witness construction returns to rational arithmetic.
"""

from fractions import Fraction
from math import gcd, lcm

from torsal._kernel import fm_combine

__all__ = ["feasible_point", "sign_constraints"]


def _to_integer(coeffs, rhs):
    fr = [Fraction(c) for c in coeffs]
    fr.append(Fraction(rhs))
    den = 1
    for f in fr:
        den = lcm(den, f.denominator)
    ints = [int(f * den) for f in fr]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints[:-1]), ints[-1]


def _insert(table, coeffs, rhs, strict):
    """Keep only the dominating constraint per coefficient vector.

    Returns False when the constraint is an unsatisfiable constant.
    """
    if not any(coeffs):
        return rhs > 0 or (rhs == 0 and not strict)
    cand = (rhs, not strict)
    cur = table.get(coeffs)
    if cur is None or cand < cur:
        table[coeffs] = cand
    return True


def feasible_point(constraints, dim):
    """A rational point satisfying every constraint, or ``None``.

    >>> feasible_point([((1,), Fraction(0), True)], 1)
    [Fraction(-1, 1)]
    """
    table = {}
    for coeffs, rhs, strict in constraints:
        if len(coeffs) != dim:
            raise ValueError("constraint arity mismatch")
        c, r = _to_integer(coeffs, rhs)
        if not _insert(table, c, r, bool(strict)):
            return None
    levels = [[(c, r, not ns) for c, (r, ns) in table.items()]]

    for _ in range(dim):
        lowers = []
        uppers = []
        table = {}
        for c, r, s in levels[-1]:
            last = c[-1]
            if last == 0:
                if not _insert(table, c[:-1], r, s):
                    return None
            elif last < 0:
                lowers.append((c, r, s))
            else:
                uppers.append((c, r, s))
        for cl, rl, sl in lowers:
            for cu, ru, su in uppers:
                cc, rr = fm_combine(cl, rl, cu, ru)
                if not _insert(table, cc, rr, sl or su):
                    return None
        levels.append([(c, r, not ns) for c, (r, ns) in table.items()])

    # Back-substitute, choosing midpoints so strict bounds stay strict.
    point = []
    for k in range(1, dim + 1):
        current = levels[dim - k]
        lo = hi = None
        lo_strict = hi_strict = False
        for coeffs, rhs, strict in current:
            c = coeffs[-1]
            if c == 0:
                continue
            rest = Fraction(rhs) - sum(a * x for a, x in zip(coeffs, point))
            bound = rest / c
            if c > 0:
                if hi is None or bound < hi or (bound == hi and strict):
                    hi, hi_strict = bound, strict
            else:
                if lo is None or bound > lo or (bound == lo and strict):
                    lo, lo_strict = bound, strict
        if lo is None and hi is None:
            value = Fraction(0)
        elif lo is None:
            value = hi - 1 if hi_strict else hi
        elif hi is None:
            value = lo + 1 if lo_strict else lo
        elif lo == hi:
            value = lo
        else:
            value = (lo + hi) / 2
        point.append(value)
    return point


def sign_constraints(hyperplanes, signs):
    """Constraints pinning the sign of ``a . x - c`` per hyperplane.

    ``hyperplanes`` is a list of ``(normal, offset)``; a zero sign becomes
    two weak inequalities, a nonzero sign one strict inequality.
    """
    out = []
    for (normal, offset), s in zip(hyperplanes, signs):
        if s == 0:
            out.append((tuple(normal), Fraction(offset), False))
            out.append((tuple(-a for a in normal), -Fraction(offset), False))
        elif s > 0:
            out.append((tuple(-a for a in normal), -Fraction(offset), True))
        else:
            out.append((tuple(normal), Fraction(offset), True))
    return out
