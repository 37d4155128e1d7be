"""Toric arrangements and their posets of layers.

A hypertorus in the compact torus (R/Z)^d is the level set
``{x : a . x = theta (mod 1)}`` of a primitive integer character ``a``.  A
layer is a connected component of an intersection of hypertori; layers are
ordered by reverse inclusion, so the whole torus is the minimum.

All layer identity questions reduce to lattice arithmetic: a layer is a
coset of a subtorus and is stored as a canonical tangent-lattice basis plus
the image of its base point in the torus quotient by that subtorus.
"""

import math
from fractions import Fraction

from torsal import intlinalg as la
from torsal.linearfaces import LinearArrangement, nbc_sets

__all__ = [
    "Hypertorus",
    "ToricArrangement",
    "Layer",
    "LayerPoset",
    "build_layer_poset",
    "local_arrangement",
    "arrangement_A0",
    "chamber_extension",
    "separating_set_at",
    "x_flat",
    "project_layer",
    "TorusQuotient",
    "StabilizerGroup",
    "subarrangement",
    "quotient_arrangement",
    "essentialize",
    "essential_stabilizer",
    "stab_of_layer",
    "poincare_polynomial",
]


def _normalize_character(character, offset):
    a = tuple(int(v) for v in character)
    if not any(a):
        raise ValueError("zero character does not define a hypertorus")
    g = math.gcd(*(abs(v) for v in a))
    if g != 1:
        raise ValueError(f"character {a} is not primitive")
    theta = Fraction(offset)
    lead = next(v for v in a if v)
    if lead < 0:
        a = tuple(-v for v in a)
        theta = -theta
    return a, theta - theta.__floor__()


class Hypertorus:
    """A single hypertorus ``a . x = offset (mod 1)``."""

    __slots__ = ("character", "offset")

    def __init__(self, character, offset, normalize=True):
        if normalize:
            character, offset = _normalize_character(character, offset)
        self.character = tuple(int(v) for v in character)
        self.offset = Fraction(offset)

    def key(self):
        a, theta = _normalize_character(self.character, self.offset)
        return a, theta

    def __repr__(self):
        return f"Hypertorus({self.character}, {self.offset})"


class ToricArrangement:
    """A finite ordered list of hypertori in (R/Z)^d."""

    def __init__(self, dim, hypertori, normalize=True):
        self.dim = dim
        self.hypertori = []
        seen = set()
        for h in hypertori:
            if not isinstance(h, Hypertorus):
                h = Hypertorus(h[0], h[1], normalize=normalize)
            elif normalize:
                h = Hypertorus(h.character, h.offset, normalize=True)
            if len(h.character) != dim:
                raise ValueError("character arity mismatch")
            k = h.key()
            if k in seen:
                raise ValueError(f"duplicate hypertorus {h!r}")
            seen.add(k)
            self.hypertori.append(h)
        self._poset = None

    def __len__(self):
        return len(self.hypertori)

    def characters(self):
        return [h.character for h in self.hypertori]

    def offsets(self):
        return [h.offset for h in self.hypertori]

    def is_essential(self):
        return la.rational_rank(self.characters()) == self.dim

    def layer_poset(self):
        if self._poset is None:
            self._poset = build_layer_poset(self)
        return self._poset

    def __repr__(self):
        return f"ToricArrangement(dim={self.dim}, n={len(self.hypertori)})"


class Layer:
    """A connected component of an intersection of hypertori.

    ``tangent`` is the canonical (column Hermite) basis of the saturated
    direction lattice; ``base`` is a rational point on the layer with
    coordinates in [0,1).  ``support`` indexes the hypertori containing the
    layer.  ``key`` is a full invariant of the underlying subset of the
    torus.
    """

    __slots__ = ("arrangement", "tangent", "base", "support", "key", "index")

    def __init__(self, arrangement, tangent, base):
        self.arrangement = arrangement
        d = arrangement.dim
        self.tangent = _hnf_columns(list(tangent), d)
        self.base = tuple(Fraction(x) - Fraction(x).__floor__() for x in base)
        self.support = frozenset(
            i
            for i, h in enumerate(arrangement.hypertori)
            if self._contained_in(h)
        )
        self.key = (
            tuple(self.tangent),
            tuple(_tangent_projection(self.tangent, d, self.base)),
        )
        self.index = None

    def _contained_in(self, h):
        v = sum(Fraction(a) * x for a, x in zip(h.character, self.base)) - h.offset
        if v.denominator != 1:
            return False
        return all(
            sum(a * t for a, t in zip(h.character, vec)) == 0 for vec in self.tangent
        )

    @property
    def dim(self):
        return len(self.tangent)

    @property
    def rank(self):
        return self.arrangement.dim - len(self.tangent)

    def contains_point(self, x):
        """Membership of a torus point given in [0,1)^d coordinates."""
        diff = [Fraction(a) - b for a, b in zip(x, self.base)]
        proj = _tangent_projection(self.tangent, self.arrangement.dim, diff)
        return all(v == 0 for v in proj)

    def contains_layer(self, other):
        if not self.contains_point(other.base):
            return False
        span = [list(v) for v in self.tangent]
        r = la.rational_rank(span) if span else 0
        for vec in other.tangent:
            if la.rational_rank(span + [list(vec)]) != r:
                return False
        return True

    def translate(self, g):
        """The layer translated by the torus element g."""
        base = [x + Fraction(v) for x, v in zip(self.base, g)]
        return Layer(self.arrangement, self.tangent, base)

    def __repr__(self):
        return f"Layer(dim={self.dim}, base={self.base})"


def _tangent_projection(tangent, d, x):
    """Coordinates of x in the torus quotient by the tangent subtorus, in [0,1).

    Deterministic in the canonical tangent basis; for an empty basis this is
    reduction mod 1.
    """
    if not tangent:
        return [Fraction(v) - Fraction(v).__floor__() for v in x]
    mat = [[vec[i] for vec in tangent] for i in range(d)]
    U, D, _ = la.smith_normal_form(mat)
    k = len(tangent)
    for i in range(k):
        if D[i][i] != 1:
            raise ValueError("tangent lattice is not saturated")
    out = []
    for i in range(k, d):
        v = sum(Fraction(U[i][j]) * Fraction(x[j]) for j in range(d))
        out.append(v - v.__floor__())
    return out


class LayerPoset:
    """All layers of an arrangement, ordered by reverse inclusion."""

    def __init__(self, arrangement, layers):
        self.arrangement = arrangement
        self.layers = layers
        for i, layer in enumerate(layers):
            layer.index = i

    def __len__(self):
        return len(self.layers)

    def by_rank(self, r):
        return [layer for layer in self.layers if layer.rank == r]

    def leq(self, a, b):
        """a <= b in the poset, i.e. the layer a contains the layer b."""
        return a.contains_layer(b)

    def minimum(self):
        """The whole torus: the unique minimum of the reverse-inclusion order."""
        return next(layer for layer in self.layers if layer.rank == 0)

    def find_by_key(self, key):
        for layer in self.layers:
            if layer.key == key:
                return layer
        return None

    def layer_of_point(self, x, support):
        """The layer with the given hypertorus support containing x."""
        support = frozenset(support)
        for layer in self.layers:
            if layer.support == support and layer.contains_point(x):
                return layer
        raise ValueError("no layer with that support through the point")

    def smallest_containing(self, other_layer):
        """The minimal layer of this poset containing the given layer."""
        candidates = [
            layer for layer in self.layers if layer.contains_layer(other_layer)
        ]
        best = None
        for layer in candidates:
            if best is None or best.contains_layer(layer):
                best = layer
        # the minimum exists: candidate supports are closed under union
        for layer in candidates:
            if not layer.contains_layer(best):
                raise RuntimeError("containing layers have no minimum")
        return best


def build_layer_poset(arr):
    """Enumerate the layers of every subfamily intersection."""
    d = arr.dim
    found = {}
    for mask in range(1 << len(arr.hypertori)):
        idx = [i for i in range(len(arr.hypertori)) if mask >> i & 1]
        A = [list(arr.hypertori[i].character) for i in idx]
        b = [arr.hypertori[i].offset for i in idx]
        tangent = la.kernel_basis(A) if idx else [
            [1 if i == j else 0 for i in range(d)] for j in range(d)
        ]
        for rep in la.solve_congruence(A, b, dim=d):
            layer = Layer(arr, tangent, rep)
            found.setdefault(layer.key, layer)
    layers = sorted(found.values(), key=lambda L: (L.rank, L.key))
    return LayerPoset(arr, layers)


def local_arrangement(arr, layer):
    """The central arrangement of tangent hyperplanes at a layer.

    Returns ``(linear_arrangement, hypertorus_indices)`` where entry ``j``
    of the index list names the hypertorus giving hyperplane ``j``.  Two
    hypertori through a common layer can never share a direction (parallel
    distinct hypertori are disjoint), so the hyperplanes are distinct; this
    is asserted rather than deduplicated.
    """
    idx = sorted(layer.support)
    planes = [(arr.hypertori[i].character, 0) for i in idx]
    directions = {_normalize_character(a, 0)[0] for a, _ in planes}
    if len(directions) != len(planes):
        raise RuntimeError("parallel hypertori through one layer")
    return LinearArrangement(planes, arr.dim), idx


def arrangement_A0(arr):
    """The union of all local arrangements: one central hyperplane per character.

    Returns ``(linear_arrangement, index_of_hypertorus)`` where the list
    maps each hypertorus to its hyperplane's index.
    """
    chars = []
    keys = []
    index_of = []
    for h in arr.hypertori:
        k = _normalize_character(h.character, 0)[0]
        if k in keys:
            index_of.append(keys.index(k))
        else:
            index_of.append(len(keys))
            keys.append(k)
            chars.append(h.character)
    return LinearArrangement([(a, 0) for a in chars], arr.dim), index_of


def chamber_extension(arr, chamber, layer):
    """Restrict a chamber of the direction arrangement to a local arrangement.

    ``chamber`` is a sign vector over ``arrangement_A0(arr)``; the result is
    its restriction to the hyperplanes of ``local_arrangement(arr, layer)``,
    in that arrangement's hyperplane order.
    """
    _, index_of = arrangement_A0(arr)
    return tuple(chamber[index_of[i]] for i in sorted(layer.support))


def separating_set_at(arr, layer, b, b2):
    """Hypertori of the layer's support whose direction separates two chambers.

    ``b`` and ``b2`` are chambers of ``arrangement_A0(arr)``; the result
    contains the hypertorus indices of the support on whose central
    hyperplane the two chambers take opposite nonzero signs.
    """
    _, index_of = arrangement_A0(arr)
    return frozenset(
        i
        for i in layer.support
        if b[index_of[i]] and b2[index_of[i]] and b[index_of[i]] != b2[index_of[i]]
    )


def x_flat(arr, layer):
    """Hyperplane indices of the flat of the 𝒜_0 analogue parallel to a layer.

    The flat is the closure in ``arrangement_A0(arr)`` of the subspace
    spanned by the layer's tangent lattice; it can involve hyperplanes whose
    hypertorus does not contain the layer.
    """
    linear, _ = arrangement_A0(arr)
    return frozenset(
        j
        for j, (normal, _) in enumerate(linear.hyperplanes)
        if all(sum(a * v for a, v in zip(normal, vec)) == 0 for vec in layer.tangent)
    )


def project_layer(quotient_arr, quotient_map, layer):
    """Image of a layer under the torus quotient, as a layer-shaped coset.

    Defined when the quotient direction lies inside the layer's tangent
    space; raises ``ValueError`` otherwise.
    """
    span = [list(v) for v in layer.tangent]
    r = la.rational_rank(span) if span else 0
    for vec in quotient_map.tangent:
        if la.rational_rank(span + [list(vec)]) != r:
            raise ValueError("layer is not saturated along the quotient direction")
    tangent = [
        tuple(int(x) for x in quotient_map.project_vector(v)) for v in layer.tangent
    ]
    base = quotient_map.project_point(layer.base)
    return Layer(quotient_arr, tangent, base)


def subarrangement(arr, indices):
    idx = sorted(set(indices))
    return ToricArrangement(
        arr.dim, [arr.hypertori[i] for i in idx], normalize=False
    ), idx


class TorusQuotient:
    """Projection data for the quotient of the torus by a subtorus.

    ``projection`` is the integer matrix P with x-bar = P x; characters of
    hypertori containing the subtorus direction transport along the chosen
    unimodular splitting.
    """

    def __init__(self, dim, tangent):
        self.dim = dim
        self.codim = dim - len(tangent)
        self.tangent = [tuple(v) for v in tangent]
        if not tangent:
            self.projection = la.identity_matrix(dim)
            self._w_right = la.identity_matrix(dim)
            return
        mat = [[vec[i] for vec in tangent] for i in range(dim)]
        U, D, _ = la.smith_normal_form(mat)
        k = len(tangent)
        for i in range(k):
            if D[i][i] != 1:
                raise ValueError("tangent lattice is not saturated")
        self.projection = [U[i] for i in range(k, dim)]
        # integer inverse of U, for transporting characters
        n = dim
        cols = []
        for col in range(n):
            e = [Fraction(1) if i == col else Fraction(0) for i in range(n)]
            x = la.solve_linear(U, e)
            cols.append([int(v) for v in x])
        self._w_right = [[cols[j][i] for j in range(n)] for i in range(n)]

    def project_point(self, x):
        out = []
        for row in self.projection:
            v = sum(Fraction(a) * Fraction(b) for a, b in zip(row, x))
            out.append(v - v.__floor__())
        return tuple(out)

    def project_vector(self, x):
        return tuple(
            sum(Fraction(a) * Fraction(b) for a, b in zip(row, x))
            for row in self.projection
        )

    def transport_character(self, a):
        """The quotient character with a-bar . (P x) = a . x."""
        W = self._w_right
        full = [sum(a[i] * W[i][j] for i in range(self.dim)) for j in range(self.dim)]
        k = self.dim - self.codim
        if any(full[:k]):
            raise ValueError("character does not descend to the quotient")
        return tuple(full[k:])


def quotient_arrangement(arr, layer):
    """The arrangement of hypertori containing a layer, in the torus quotient.

    Returns ``(quotient_arr, quotient_map, hypertorus_indices)``: the new
    arrangement has dimension equal to the layer's rank and one hypertorus
    per element of the layer's support, with characters transported (not
    re-normalized) so that real sign data agrees with the ambient picture.
    """
    q = TorusQuotient(arr.dim, layer.tangent)
    idx = sorted(layer.support)
    hypertori = []
    for i in idx:
        h = arr.hypertori[i]
        hypertori.append(Hypertorus(q.transport_character(h.character), h.offset, normalize=False))
    quotient = ToricArrangement(q.codim, hypertori, normalize=False)
    return quotient, q, idx


def essentialize(arr):
    """Quotient by the common direction of all hypertori.

    Returns ``(essential_arr, quotient_map)``; for an essential input the
    map is the identity.
    """
    common = la.kernel_basis(arr.characters())
    q = TorusQuotient(arr.dim, [tuple(v) for v in common])
    hypertori = [
        Hypertorus(q.transport_character(h.character), h.offset, normalize=False)
        for h in arr.hypertori
    ]
    return ToricArrangement(q.codim, hypertori, normalize=False), q


class StabilizerGroup:
    """The finite component group of translations preserving given hypertori.

    Elements are rational representatives, one per connected component of
    the solution group of ``A g = 0 (mod 1)``.
    """

    def __init__(self, arr, indices):
        self.arrangement = arr
        self.indices = sorted(set(indices))
        A = [list(arr.hypertori[i].character) for i in self.indices]
        self.elements = la.solve_congruence(A, [0] * len(self.indices), dim=arr.dim)
        self._free = la.kernel_basis(A) if self.indices else [
            [1 if i == j else 0 for i in range(arr.dim)] for j in range(arr.dim)
        ]

    def __len__(self):
        return len(self.elements)

    def normalize(self, g):
        """The stored representative of g's component."""
        basis = _hnf_columns(self._free, self.arrangement.dim)
        for rep in self.elements:
            diff = [Fraction(a) - b for a, b in zip(g, rep)]
            proj = _tangent_projection(basis, self.arrangement.dim, diff)
            if all(v == 0 for v in proj):
                return rep
        raise ValueError("element is not in the stabilizer group")

    def add(self, g, h):
        return self.normalize(tuple((Fraction(a) + Fraction(b)) for a, b in zip(g, h)))


def _hnf_columns(vectors, d):
    if not vectors:
        return []
    hnf = la.column_hermite_form(
        [[vec[i] for vec in vectors] for i in range(d)], drop_zero_columns=True
    )
    width = len(hnf[0]) if hnf else 0
    return [tuple(hnf[i][j] for i in range(d)) for j in range(width)]


def essential_stabilizer(arr, indices=None):
    """Component group of translations fixing each listed hypertorus setwise."""
    if indices is None:
        indices = range(len(arr.hypertori))
    return StabilizerGroup(arr, indices)


def stab_of_layer(group, layer):
    """Elements of the group whose translation fixes the layer."""
    out = []
    for g in group.elements:
        if layer.translate(g).key == layer.key:
            out.append(g)
    return out


def poincare_polynomial(arr):
    """Coefficients of sum_L #nbc_{rk L}(local) t^rk (1+t)^(d-rk)."""
    d = arr.dim
    poset = arr.layer_poset()
    coeffs = [0] * (d + 1)
    for layer in poset.layers:
        linear, _ = local_arrangement(arr, layer)
        normals = [h[0] for h in linear.hyperplanes]
        r = layer.rank
        count = len(nbc_sets(normals, size=r)) if normals else (1 if r == 0 else 0)
        # t^r (1+t)^(d-r)
        for j in range(d - r + 1):
            coeffs[r + j] += count * math.comb(d - r, j)
    return coeffs
