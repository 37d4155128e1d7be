"""Sparse chains and cochains on nerves, homology, and cup products.

Homology in one degree is read off the Smith normal forms of the two
boundary matrices around it: the free rank from the two ranks, the
torsion from the invariant factors of the incoming boundary.  Explicit
bases and coordinates need tracked transforms and a rational solve, so
they are built lazily on first use.

Cup products use the front face times back face rule on composable
chains, which is associative and unital on the nose at cochain level.
Maps between nerves are recorded as cellular functors; chains push
forward and cochains pull back along them.
"""

from fractions import Fraction

from . import intlinalg


def _clean(value):
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value


class _SparseVec:
    """A sparse vector in a fixed degree; zero coefficients are dropped."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree, coeffs=None):
        self.degree = degree
        self.coeffs = {}
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, dict) else coeffs
            for k, v in items:
                if v:
                    self.coeffs[k] = _clean(v)

    def get(self, key):
        return self.coeffs.get(key, 0)

    def items(self):
        return self.coeffs.items()

    def support(self):
        return frozenset(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and other.degree == self.degree
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((type(self), self.degree, frozenset(self.coeffs.items())))

    def _like(self, coeffs):
        return type(self)(self.degree, coeffs)

    def _check(self, other):
        if type(other) is not type(self) or other.degree != self.degree:
            raise ValueError("mismatched degrees or kinds")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            w = out.get(k, 0) + v
            if w:
                out[k] = w
            elif k in out:
                del out[k]
        return self._like(out)

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return self._like({k: -v for k, v in self.coeffs.items()})

    def __rmul__(self, scalar):
        if not scalar:
            return self._like({})
        return self._like({k: scalar * v for k, v in self.coeffs.items()})

    def __repr__(self):
        short = dict(sorted(self.coeffs.items())[:6])
        tail = "..." if len(self.coeffs) > 6 else ""
        return "%s(%d, %r%s)" % (type(self).__name__, self.degree, short, tail)


class ChainVec(_SparseVec):
    """An integer or rational chain, indexed by simplices of its degree."""


class CochainVec(_SparseVec):
    """A cochain, a functional on simplices of its degree."""


def boundary(complex_, chain):
    """The boundary of a chain, one degree down."""
    cols = complex_.boundary_columns(chain.degree)
    out = {}
    for j, c in chain.coeffs.items():
        for i, v in cols[j].items():
            w = out.get(i, 0) + c * v
            if w:
                out[i] = w
            elif i in out:
                del out[i]
    return ChainVec(chain.degree - 1, out)


def coboundary(complex_, cochain):
    """The coboundary of a cochain, one degree up."""
    k = cochain.degree + 1
    out = {}
    if k <= complex_.dimension:
        for j, col in enumerate(complex_.boundary_columns(k)):
            s = 0
            for i, v in col.items():
                c = cochain.coeffs.get(i)
                if c:
                    s += c * v
            if s:
                out[j] = s
    return CochainVec(k, out)


def pair(chain, cochain):
    """The natural pairing of a chain against a cochain of equal degree."""
    if chain.degree != cochain.degree:
        raise ValueError("mismatched degrees")
    return _clean(
        sum(v * cochain.coeffs.get(k, 0) for k, v in chain.coeffs.items())
    )


def is_cycle(complex_, chain):
    return not boundary(complex_, chain)


def is_cocycle(complex_, cochain):
    return not coboundary(complex_, cochain)


def unit_cochain(complex_):
    """The degree zero cochain equal to one on every object."""
    return CochainVec(0, {i: 1 for i in range(complex_.rank(0))})


def cup_product(complex_, left, right):
    """The cup product of two cochains by the front and back face rule."""
    p, q = left.degree, right.degree
    r = p + q
    if r > complex_.dimension:
        return CochainVec(r)
    if r == 0:
        out = {}
        for i, a in left.coeffs.items():
            b = right.coeffs.get(i)
            if b:
                out[i] = a * b
        return CochainVec(0, out)
    arrows = complex_.category.arrows
    out = {}
    for j, t in enumerate(complex_.simplices[r]):
        if p == 0:
            a = left.coeffs.get(arrows[t[0]][0], 0)
        else:
            a = left.coeffs.get(complex_.index_of(p, t[:p]), 0)
        if not a:
            continue
        if q == 0:
            b = right.coeffs.get(arrows[t[-1]][1], 0)
        else:
            b = right.coeffs.get(complex_.index_of(q, t[p:]), 0)
        if b:
            out[j] = a * b
    return CochainVec(r, out)


class HomologyGroup:
    """One homology or cohomology group with lazily built representatives.

    ``rank`` and ``torsion`` are exact and always present.  ``basis``
    and ``torsion_basis`` are integer representatives; ``coordinates``
    expresses a (co)cycle's class rationally in the free basis.
    """

    def __init__(self, complex_, degree, rank, torsion, builder, kind):
        self.complex = complex_
        self.degree = degree
        self.rank = rank
        self.torsion = torsion
        self.kind = kind
        self._builder = builder
        self._data = None

    def _ensure(self):
        if self._data is None:
            self._data = self._builder()
            basis, torsion_basis, _ = self._data
            if len(basis) != self.rank or len(torsion_basis) != len(self.torsion):
                raise RuntimeError("rank bookkeeping disagrees with the solve")
        return self._data

    @property
    def basis(self):
        return self._ensure()[0]

    @property
    def torsion_basis(self):
        return self._ensure()[1]

    def coordinates(self, vec):
        """Rational coordinates of a (co)cycle's class in the free basis."""
        return self._ensure()[2](vec)

    def __repr__(self):
        tors = "" if not self.torsion else " + " + " + ".join(
            "Z/%d" % d for d in self.torsion
        )
        return "HomologyGroup(degree=%d, Z^%d%s)" % (self.degree, self.rank, tors)


def _plain_snf(complex_, k):
    """Cached rank and invariant factors of the degree k boundary matrix."""
    key = ("snf", k)
    hit = complex_._solvers.get(key)
    if hit is None:
        if complex_.rank(k) == 0 or complex_.rank(k - 1) == 0:
            hit = (0, ())
        else:
            snf = intlinalg.SparseSNF(
                complex_.boundary_rows(k), complex_.rank(k)
            )
            hit = (snf.rank, tuple(snf.invariant_factors))
        complex_._solvers[key] = hit
    return hit


def _group_builder(complex_, k, dual, kind):
    def build():
        n = complex_.rank(k)
        if dual:
            ker_rows = [dict(c) for c in complex_.boundary_columns(k + 1)]
            img_vecs = complex_.boundary_rows(k) if k > 0 else []
        else:
            ker_rows = complex_.boundary_rows(k) if k > 0 else []
            img_vecs = complex_.boundary_columns(k + 1)
        snf = intlinalg.SparseSNF(ker_rows, n, track_v=True)
        kernel_cols = list(range(snf.rank, n))
        z = len(kernel_cols)
        zvecs = [snf.v_times({c: 1}) for c in kernel_cols]
        zrows = [dict() for _ in range(n)]
        for jj, vec in enumerate(zvecs):
            for i, v in vec.items():
                zrows[i][jj] = v
        ref = intlinalg.RowEchelonQ(zrows, z)
        bee = [dict() for _ in range(z)]
        for j, vec in enumerate(img_vecs):
            if not vec:
                continue
            y = ref.solve(vec)
            if y is None:
                raise RuntimeError("image vector escapes the kernel")
            for i, v in y.items():
                if v.denominator != 1:
                    raise RuntimeError("kernel basis is not saturated")
                if v:
                    bee[i][j] = int(v)
        snf2 = intlinalg.SparseSNF(bee, max(len(img_vecs), 1), track_row_ops=True)
        diag = snf2.diagonal()
        basis = []
        torsion_basis = []
        for i in range(z):
            if i < snf2.rank and not (i < len(diag) and diag[i] > 1):
                continue
            e = [0] * z
            e[i] = 1
            w = snf2.apply_row_ops_inverse(e)
            coeffs = {}
            for jj, c in enumerate(w):
                if c:
                    intlinalg.row_axpy(coeffs, zvecs[jj], c)
            vec = kind(k, coeffs)
            if i >= snf2.rank:
                basis.append(vec)
            else:
                torsion_basis.append(vec)
        solver = _CoordinateSolver(ref, snf2, z, k, kind)
        return basis, torsion_basis, solver
    return build


class _CoordinateSolver:
    """Rational class coordinates in the free basis, factored once."""

    def __init__(self, ref, snf2, z, degree, kind):
        self._ref = ref
        self._snf2 = snf2
        self._z = z
        self._degree = degree
        self._kind = kind

    def __call__(self, vec):
        if type(vec) is not self._kind or vec.degree != self._degree:
            raise ValueError("expected a %s of degree %d" % (
                self._kind.__name__, self._degree))
        y = self._ref.solve(dict(vec.coeffs))
        if y is None:
            raise ValueError("not a cycle: vector escapes the kernel")
        dense = [Fraction(0)] * self._z
        for i, v in y.items():
            dense[i] = v
        u = self._snf2.apply_row_ops(dense)
        return [_clean(u[i]) for i in range(self._snf2.rank, self._z)]


def homology(complex_, degree, coefficients="Z"):
    """The homology of the nerve in one degree, over Z or over Q."""
    return _group(complex_, degree, dual=False, coefficients=coefficients)


def cohomology(complex_, degree, coefficients="Z"):
    """The cohomology of the nerve in one degree, over Z or over Q."""
    return _group(complex_, degree, dual=True, coefficients=coefficients)


def _group(complex_, degree, dual, coefficients):
    if coefficients not in ("Z", "Q"):
        raise ValueError("coefficients must be 'Z' or 'Q'")
    n = complex_.rank(degree)
    kind = CochainVec if dual else ChainVec
    if n == 0:
        return HomologyGroup(
            complex_, degree, 0, (), lambda: ([], [], lambda v: []), kind
        )
    rk_in, factors_in = _plain_snf(complex_, degree)
    rk_out, factors_out = _plain_snf(complex_, degree + 1)
    rank = n - rk_in - rk_out
    if coefficients == "Q":
        torsion = ()
    else:
        source = factors_in if dual else factors_out
        torsion = tuple(d for d in source if d > 1)
    builder = _group_builder(complex_, degree, dual, kind)
    return HomologyGroup(complex_, degree, rank, torsion, builder, kind)


def betti_numbers(complex_, up_to=None):
    """Free ranks of homology in all degrees up to a bound."""
    top = complex_.dimension if up_to is None else up_to
    return tuple(homology(complex_, k).rank for k in range(top + 1))


def boundary_witness(complex_, chain):
    """A chain one degree up bounding the given chain, or None."""
    k = chain.degree + 1
    if complex_.rank(k) == 0:
        return None if chain else ChainVec(k)
    key = ("witness", k)
    snf = complex_._solvers.get(key)
    if snf is None:
        snf = intlinalg.SparseSNF(
            complex_.boundary_rows(k),
            complex_.rank(k),
            track_row_ops=True,
            track_v=True,
        )
        complex_._solvers[key] = snf
    dense = [0] * complex_.rank(chain.degree)
    for i, v in chain.coeffs.items():
        dense[i] = v
    u = snf.apply_row_ops(dense)
    diag = snf.diagonal()
    y = {}
    for i, val in enumerate(u):
        if i < len(diag) and diag[i]:
            q, r = divmod(val, diag[i])
            if r:
                return None
            if q:
                y[i] = q
        elif val:
            return None
    return ChainVec(k, snf.v_times(y))


def dual_basis_cochains(complex_, cycles):
    """Cocycles pairing as the identity matrix against the given cycles.

    Raises ValueError when no such cocycles exist, which happens exactly
    when the cycle classes are rationally dependent.
    """
    if not cycles:
        return []
    k = cycles[0].degree
    if any(c.degree != k for c in cycles):
        raise ValueError("cycles must share a degree")
    n = complex_.rank(k)
    rows = [dict(col) for col in complex_.boundary_columns(k + 1)]
    base = len(rows)
    rows.extend(dict(c.coeffs) for c in cycles)
    ref = intlinalg.RowEchelonQ(rows, n)
    out = []
    for j in range(len(cycles)):
        x = ref.solve({base + j: 1})
        if x is None:
            raise ValueError("cycle classes are dependent, no dual basis")
        out.append(CochainVec(k, x))
    return out


class CellularFunctor:
    """A functor between acyclic categories, recorded on objects and arrows.

    ``object_map`` lists the image object of every source object, and
    ``arrow_map`` the image arrow of every source arrow, with None when
    the arrow collapses onto an identity.  Endpoint compatibility is
    always checked; composition is checked unless ``check`` is False.
    """

    def __init__(self, source, target, object_map, arrow_map, check=True):
        self.source = source
        self.target = target
        self.object_map = list(object_map)
        self.arrow_map = list(arrow_map)
        self._images = {}
        src_cat, dst_cat = source.category, target.category
        if len(self.object_map) != len(src_cat.labels):
            raise ValueError("object map has the wrong length")
        if len(self.arrow_map) != len(src_cat.arrows):
            raise ValueError("arrow map has the wrong length")
        for i, (s, d, _) in enumerate(src_cat.arrows):
            img = self.arrow_map[i]
            if img is None:
                if self.object_map[s] != self.object_map[d]:
                    raise ValueError(
                        "collapsed arrow with distinct endpoint images"
                    )
            else:
                ts, td, _ = dst_cat.arrows[img]
                if ts != self.object_map[s] or td != self.object_map[d]:
                    raise ValueError("arrow image has wrong endpoints")
        if check:
            self._check_composition(src_cat, dst_cat)

    def _check_composition(self, src_cat, dst_cat):
        for a, (_, mid, _) in enumerate(src_cat.arrows):
            fa = self.arrow_map[a]
            for b in src_cat.out_arrows(mid):
                fc = self.arrow_map[src_cat.compose(a, b)]
                fb = self.arrow_map[b]
                if fa is None:
                    expect = fb
                elif fb is None:
                    expect = fa
                else:
                    expect = dst_cat.compose(fa, fb)
                if fc != expect:
                    raise ValueError("functor does not respect composition")

    def simplex_images(self, k):
        """Image simplex index, or None, for every source k-simplex."""
        hit = self._images.get(k)
        if hit is not None:
            return hit
        if k == 0:
            hit = list(self.object_map)
        else:
            hit = []
            for t in self.source.simplices[k]:
                imgs = [self.arrow_map[a] for a in t]
                if None in imgs:
                    hit.append(None)
                else:
                    hit.append(self.target.index_of(k, tuple(imgs)))
        self._images[k] = hit
        return hit


def identity_functor(complex_):
    cat = complex_.category
    return CellularFunctor(
        complex_, complex_,
        list(range(len(cat.labels))),
        list(range(len(cat.arrows))),
        check=False,
    )


def inclusion_functor(source, target, object_ids):
    """The inclusion of an induced subcategory's nerve into the ambient one.

    ``object_ids`` lists, for each source object, its index in the target
    category; arrows are matched by their keys.
    """
    ids = list(object_ids)
    amap = [
        target.category.arrow_index((ids[s], ids[d], key))
        for s, d, key in source.category.arrows
    ]
    return CellularFunctor(source, target, ids, amap, check=False)


def pushforward(functor, chain):
    """The image of a chain under a cellular functor."""
    images = functor.simplex_images(chain.degree)
    out = {}
    for j, c in chain.coeffs.items():
        i = images[j]
        if i is None:
            continue
        w = out.get(i, 0) + c
        if w:
            out[i] = w
        elif i in out:
            del out[i]
    return ChainVec(chain.degree, out)


def pullback(functor, cochain):
    """The preimage functional of a cochain under a cellular functor."""
    images = functor.simplex_images(cochain.degree)
    out = {}
    for j, i in enumerate(images):
        if i is None:
            continue
        v = cochain.coeffs.get(i)
        if v:
            out[j] = v
    return CochainVec(cochain.degree, out)
