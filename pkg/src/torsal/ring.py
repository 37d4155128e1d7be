"""Dual bases, restriction maps, and module generators of the model's cohomology.

The degree-one homology of the toric Salvetti model is spanned by the
circle cycles of a basis of circle layers together with one square
cycle per hypertorus.  Fixing a chamber adjacent to every layer's
direction flat, a basis of circle layers for the torus, and an
independent family of circle layers inside each positive-dimensional
layer determines a dual basis of degree-one cohomology and, for every
layer, a stratum of the model carrying a local dual basis of the same
shape.  This module builds those choices, computes the restriction
homomorphism onto every stratum, and assembles the distinguished
classes that generate the cohomology as a module over the classes
pulled back from the torus.

The degree-one restriction is computed twice.  A closed route fills
the circle rows from winding coordinates and from the square counts
of the base-change identity, and the square rows from matching
hypertori.  An independent route pairs each included local cycle
against the global duals.  Any disagreement is a hard error.

The distinguished class of a layer and a top no-broken-circuit set of
its local arrangement is found by solving the linear system that
prescribes its restriction to every stratum: on the stratum of a
layer Y it restricts to the product of the square duals over the set,
divided by the order of the stabilizer of the smallest layer over Y
in the subarrangement the set spans, whenever that smallest layer
contains the base layer, and to zero otherwise.  The solution must be
unique and integral, it must pass the same conditions on every
admissible stratum face, and it must admit an integer cocycle
representative.
"""

import csv
import io
from fractions import Fraction
from itertools import combinations

from torsal import chains
from torsal import intlinalg as la
from torsal.cycles import (
    adjacent_chambers,
    build_lambda,
    build_omega,
    chain_on,
    choice_gallery,
    map_phi,
    omega_generator,
    verify_base_change,
)
from torsal.linearfaces import nbc_sets
from torsal.model import (
    arrangement_A0,
    essential_stabilizer,
    local_arrangement,
    project_layer,
    stab_of_layer,
    subarrangement,
    x_flat,
)
from torsal.salvetti import ToricSalvetti, nerve

__all__ = [
    "ChoiceData",
    "CommonChamberReport",
    "InjectivityReport",
    "OmegaSL",
    "Presentation",
    "RestrictionMap",
    "RestrictionTable",
    "RingData",
    "StratumData",
    "check_common_chamber",
    "layer_label",
    "make_choices",
    "module_generators",
    "nbc_basis",
    "restriction_table",
    "verify_injectivity",
]


def _num(value):
    f = Fraction(value)
    return int(f) if f.denominator == 1 else f


def _as_int(value):
    f = Fraction(value)
    if f.denominator != 1:
        raise RuntimeError("expected an integer pairing, found %s" % f)
    return int(f)


def _json_num(value):
    f = Fraction(value)
    return int(f) if f.denominator == 1 else str(f)


def layer_label(arr, layer):
    """A short stable name: T, H<i> for hypertori, P<j> for points."""
    if layer.rank == 0:
        return "T"
    if layer.rank == 1 and len(layer.support) == 1:
        return "H%d" % min(layer.support)
    poset = arr.layer_poset()
    same = [l for l in poset.layers if l.rank == layer.rank]
    j = next(i for i, l in enumerate(same) if l.key == layer.key)
    if layer.dim == 0:
        return "P%d" % j
    return "L%d_%d" % (layer.rank, j)


def _resolve_layer(poset, ref):
    """The layer named by a key, a support set, or a layer object."""
    if hasattr(ref, "key"):
        found = poset.find_by_key(ref.key)
        if found is None:
            raise ValueError("layer does not belong to this arrangement")
        return found
    if isinstance(ref, (set, frozenset, list)) or (
        isinstance(ref, tuple) and all(isinstance(v, int) for v in ref)
    ):
        support = frozenset(ref)
        hits = [l for l in poset.layers if l.support == support]
        if not hits:
            raise ValueError("no layer has support %s" % sorted(support))
        if len(hits) > 1:
            raise ValueError(
                "support %s is ambiguous, pass a layer key" % sorted(support)
            )
        return hits[0]
    found = poset.find_by_key(ref)
    if found is None:
        raise ValueError("unknown layer reference %r" % (ref,))
    return found


class ChoiceData:
    """Chambers, faces, circle layers, and galleries fixed for a computation.

    ``base`` maps a layer key to its chamber of the direction
    arrangement and ``face`` to the face obtained by zeroing that
    chamber on the layer's flat.  ``basis_layers`` lists the circle
    layers whose classes form a basis over the torus; ``n_layers``
    gives, for every layer, the chosen independent circle layers
    inside it.  ``galleries`` fixes one gallery per circle layer,
    ``hyper_chamber`` one adjacent chamber per hypertorus, and
    ``nbc_reverse`` the total order used for broken circuits.
    """

    __slots__ = (
        "arrangement",
        "base",
        "face",
        "basis_layers",
        "n_layers",
        "galleries",
        "hyper_chamber",
        "nbc_reverse",
    )

    def __init__(self, arrangement, base, face, basis_layers, n_layers,
                 galleries, hyper_chamber, nbc_reverse):
        self.arrangement = arrangement
        self.base = base
        self.face = face
        self.basis_layers = basis_layers
        self.n_layers = n_layers
        self.galleries = galleries
        self.hyper_chamber = hyper_chamber
        self.nbc_reverse = nbc_reverse

    def base_of(self, layer):
        return self.base[layer.key]

    def face_of(self, layer):
        return self.face[layer.key]

    def n_of(self, layer):
        return self.n_layers[layer.key]

    def gallery_of(self, layer):
        return self.galleries[layer.key]

    def __repr__(self):
        return "ChoiceData(layers=%d, basis=%d)" % (
            len(self.base), len(self.basis_layers)
        )


def make_choices(arr, overrides=None):
    """Deterministic ring choices for an essential arrangement.

    Defaults pick the lexicographically least chamber adjacent to each
    layer's flat, a greedy direction-independent family of circle
    layers for the torus basis and inside every layer, and the default
    gallery of every circle layer.  ``overrides`` may replace any of
    these through the keys ``base``, ``gallery``, ``basis``,
    ``n_layers``, ``hyper_chamber``, and ``nbc_reverse``; layers are
    named by key or by support set when unambiguous.  Every override
    is validated, and one that breaks adjacency, containment, or
    independence is rejected.
    """
    if not arr.is_essential():
        raise ValueError("ring choices need an essential arrangement")
    poset = arr.layer_poset()
    a0, _ = arrangement_A0(arr)
    ov = dict(overrides or {})
    known = {"base", "gallery", "basis", "n_layers", "hyper_chamber",
             "nbc_reverse"}
    extra = set(ov) - known
    if extra:
        raise ValueError("unknown override keys: %s" % sorted(extra))

    def by_layer(mapping):
        out = {}
        for ref, value in (mapping or {}).items():
            out[_resolve_layer(poset, ref).key] = value
        return out

    ov_base = by_layer(ov.get("base"))
    ov_gallery = by_layer(ov.get("gallery"))
    ov_n = by_layer(ov.get("n_layers"))

    base = {}
    face = {}
    for layer in poset.layers:
        flat = x_flat(arr, layer)
        options = adjacent_chambers(a0, flat)
        if not options:
            raise RuntimeError("no chamber is adjacent to a layer's flat")
        chamber = ov_base.get(layer.key)
        if chamber is None:
            chamber = options[0]
        else:
            chamber = tuple(int(s) for s in chamber)
            if chamber not in options:
                raise ValueError(
                    "override chamber is not adjacent to the layer's flat"
                )
        base[layer.key] = chamber
        face[layer.key] = tuple(
            0 if j in flat else s for j, s in enumerate(chamber)
        )

    ones = [l for l in poset.layers if l.dim == 1]
    if "basis" in ov:
        basis = [_resolve_layer(poset, r) for r in ov["basis"]]
        if any(l.dim != 1 for l in basis):
            raise ValueError("basis overrides must be circle layers")
    else:
        basis = []
        for l in ones:
            vecs = [list(m.tangent[0]) for m in basis] + [list(l.tangent[0])]
            if la.rational_rank(vecs) > len(basis):
                basis.append(l)
            if len(basis) == arr.dim:
                break
    if len(basis) != arr.dim or la.rational_rank(
        [list(l.tangent[0]) for l in basis]
    ) != arr.dim:
        raise ValueError("circle layers do not span the torus directions")

    n_layers = {}
    for layer in poset.layers:
        if layer.rank == 0:
            if layer.key in ov_n:
                raise ValueError("the torus takes its circles from the basis")
            n_layers[layer.key] = tuple(basis)
            continue
        if layer.dim == 0:
            if ov_n.get(layer.key):
                raise ValueError("point layers admit no circle choices")
            n_layers[layer.key] = ()
            continue
        if layer.key in ov_n:
            chosen = [_resolve_layer(poset, r) for r in ov_n[layer.key]]
            for l in chosen:
                if l.dim != 1 or not poset.leq(layer, l):
                    raise ValueError(
                        "circle choices must be circle layers inside the layer"
                    )
        else:
            chosen = []
            for l in ones:
                if not poset.leq(layer, l):
                    continue
                vecs = [list(m.tangent[0]) for m in chosen]
                vecs.append(list(l.tangent[0]))
                if la.rational_rank(vecs) > len(chosen):
                    chosen.append(l)
                if len(chosen) == layer.dim:
                    break
        if len(chosen) != layer.dim or la.rational_rank(
            [list(l.tangent[0]) for l in chosen]
        ) != layer.dim:
            raise ValueError("circle layers do not span a layer's directions")
        n_layers[layer.key] = tuple(chosen)

    galleries = {}
    for layer in ones:
        galleries[layer.key] = choice_gallery(
            arr, layer, ov_gallery.get(layer.key)
        )

    hyper_chamber = {}
    ov_hc = ov.get("hyper_chamber") or {}
    for h in range(len(arr.hypertori)):
        hlayer = next(
            l for l in poset.layers if l.rank == 1 and h in l.support
        )
        options = adjacent_chambers(a0, x_flat(arr, hlayer))
        chamber = ov_hc.get(h)
        if chamber is None:
            chamber = options[0]
        else:
            chamber = tuple(int(s) for s in chamber)
            if chamber not in options:
                raise ValueError(
                    "override chamber is not adjacent to the hypertorus"
                )
        hyper_chamber[h] = chamber

    return ChoiceData(
        arr, base, face, tuple(basis), n_layers, galleries, hyper_chamber,
        bool(ov.get("nbc_reverse", False)),
    )


class CommonChamberReport:
    """Whether one direction chamber is adjacent to every layer's flat.

    ``chamber`` is the least qualifying chamber when one exists;
    ``failures`` maps each chamber to the indices of the layers whose
    flat its closure meets in too small a dimension.
    """

    def __init__(self, chamber, failures):
        self.chamber = chamber
        self.failures = failures

    def __bool__(self):
        return self.chamber is not None

    def __repr__(self):
        return "CommonChamberReport(chamber=%r)" % (self.chamber,)


def check_common_chamber(arr):
    """Scan the direction chambers for one adjacent to every layer's flat.

    A chamber qualifies when zeroing it on each layer's flat leaves a
    realizable face of the flat's full dimension, so that its closure
    meets every layer of the arrangement in full dimension.
    """
    poset = arr.layer_poset()
    a0, _ = arrangement_A0(arr)
    faces = a0.faces()
    flats = [(layer, x_flat(arr, layer)) for layer in poset.layers]
    dims = {flat: a0.flat_dim(flat) for _, flat in flats}
    found = None
    failures = {}
    for c in sorted(a0.chambers()):
        bad = []
        for layer, flat in flats:
            wall = tuple(0 if j in flat else s for j, s in enumerate(c))
            if wall not in faces or a0.face_dim(wall) != dims[flat]:
                bad.append(layer.index)
        failures[c] = tuple(bad)
        if not bad and found is None:
            found = c
    return CommonChamberReport(found, failures)


def nbc_basis(arr, layer, reverse=False):
    """Top no-broken-circuit sets of a layer's local arrangement.

    The total order is the hypertorus index order, or its reversal
    when ``reverse`` is set; each set is returned as an ascending
    tuple of hypertorus indices.
    """
    linear, idx = local_arrangement(arr, layer)
    normals = [list(a) for a, _ in linear.hyperplanes]
    out = nbc_sets(normals, size=layer.rank, reverse=reverse)
    return [tuple(idx[p] for p in s) for s in out]


def _omega_label(arr, indices, layer):
    if layer.rank == 0:
        return "unit"
    if layer.rank == 1:
        return "om(H%d)" % indices[0]
    return "om[%s]%s" % (
        ",".join(str(h) for h in indices), layer_label(arr, layer)
    )


class _ProductBasis:
    """A basis of stratum cohomology by products, with its pairing solve."""

    __slots__ = ("labels", "cochains", "cycles", "_ref")

    def __init__(self, labels, cochains, cycles, ref):
        self.labels = labels
        self.cochains = cochains
        self.cycles = cycles
        self._ref = ref

    def coordinates(self, cochain):
        """Coordinates of a stratum cocycle in the product basis."""
        rhs = {}
        for i, z in enumerate(self.cycles):
            v = chains.pair(z, cochain)
            if v:
                rhs[i] = v
        x = self._ref.solve(rhs)
        if x is None:
            raise RuntimeError("class escapes the stratum's product basis")
        return [_num(x.get(i, 0)) for i in range(len(self.cochains))]


class StratumData:
    """One stratum of the model with its nerve, inclusion, and local classes.

    The local degree-one basis lists the circle cycles of the layer's
    chosen circle layers over the layer's base chamber, then one
    square cycle per hypertorus containing the layer, built over the
    least vertex of the layer so that every cell lies in the stratum.
    """

    def __init__(self, ring, layer, face):
        self.ring = ring
        self.layer = layer
        self.face = face
        self.handle = ring.model.subcomplex(layer, face)
        self.nerve = nerve(
            self.handle.category, max_degree=ring.arrangement.dim + 1
        )
        self.inclusion = chains.inclusion_functor(
            self.nerve, ring.nerve, self.handle.object_ids
        )
        self._remap = {o: i for i, o in enumerate(self.handle.object_ids)}
        self._homology = {}
        self._cohomology = {}
        self._local = None
        self._duals = None
        self._products = {}

    def homology(self, k):
        hit = self._homology.get(k)
        if hit is None:
            hit = chains.homology(self.nerve, k)
            if hit.torsion:
                raise RuntimeError("stratum homology has torsion")
            self._homology[k] = hit
        return hit

    def cohomology(self, k):
        hit = self._cohomology.get(k)
        if hit is None:
            hit = chains.cohomology(self.nerve, k)
            if hit.torsion:
                raise RuntimeError("stratum cohomology has torsion")
            self._cohomology[k] = hit
        return hit

    def local_chain(self, arrow_coeffs):
        """A chain of the stratum's nerve from full-model arrow data."""
        out = {}
        for (s, d, key), c in arrow_coeffs.items():
            try:
                triple = (self._remap[s], self._remap[d], key)
            except KeyError:
                raise RuntimeError("cycle leaves the stratum") from None
            out[triple] = c
        return chain_on(self.nerve, out)

    @property
    def local_cycles(self):
        """Labelled local basis cycles with their stratum and model chains."""
        if self._local is None:
            ring = self.ring
            choices = ring.choices
            arr = ring.arrangement
            base = choices.base_of(self.layer)
            entries = []
            for n_layer in choices.n_of(self.layer):
                lam = ring.lambda_cycle(n_layer, base)
                entries.append(
                    (("lam", layer_label(arr, n_layer)), lam.arrow_coeffs)
                )
            for h in sorted(self.layer.support):
                sq = ring.stratum_square(self.layer, h)
                entries.append((("om", "H%d" % h), sq.arrow_coeffs))
            if len(entries) != self.homology(1).rank:
                raise RuntimeError(
                    "stratum degree-one rank disagrees with the chosen classes"
                )
            self._local = [
                (label, coeffs, self.local_chain(coeffs))
                for label, coeffs in entries
            ]
        return self._local

    @property
    def local_duals(self):
        """Stratum cocycles pairing as the identity against the local basis."""
        if self._duals is None:
            self._duals = chains.dual_basis_cochains(
                self.nerve, [chain for _, _, chain in self.local_cycles]
            )
        return self._duals

    def product_basis(self, r):
        """Labelled products of local duals forming a degree r basis.

        Products combine distinct circle duals with a no-broken-circuit
        set of the hypertori through the layer.  Their count matches
        the free rank of the stratum, and the pairing matrix against
        the homology basis must be invertible.
        """
        hit = self._products.get(r)
        if hit is not None:
            return hit
        ring = self.ring
        arr = ring.arrangement
        duals = self.local_duals
        labels1 = [label for label, _, _ in self.local_cycles]
        k = self.layer.dim
        sup = sorted(self.layer.support)
        hmap = {h: k + i for i, h in enumerate(sup)}
        linear, idx = local_arrangement(arr, self.layer)
        normals = [list(a) for a, _ in linear.hyperplanes]
        entries = []
        for j in range(r + 1):
            if j > k or r - j > len(sup):
                continue
            for tset in combinations(range(k), j):
                for s in nbc_sets(
                    normals, size=r - j, reverse=ring.choices.nbc_reverse
                ):
                    hs = tuple(idx[p] for p in s)
                    label = tuple(labels1[t] for t in tset)
                    label += tuple(("om", "H%d" % h) for h in hs)
                    entries.append((label, tset, hs))
        cochains = []
        for _, tset, hs in entries:
            factors = [duals[t] for t in tset]
            factors += [duals[hmap[h]] for h in hs]
            if not factors:
                prod = chains.unit_cochain(self.nerve)
            else:
                prod = factors[0]
                for f in factors[1:]:
                    prod = chains.cup_product(self.nerve, prod, f)
            cochains.append(prod)
        basis_chains = self.homology(r).basis
        if len(entries) != self.homology(r).rank:
            raise RuntimeError(
                "product count disagrees with the stratum rank"
            )
        rows = []
        for z in basis_chains:
            row = {}
            for i, q in enumerate(cochains):
                v = chains.pair(z, q)
                if v:
                    row[i] = v
            rows.append(row)
        ref = la.RowEchelonQ(rows, len(cochains))
        if ref.rank != len(cochains):
            raise RuntimeError("stratum products are dependent")
        hit = _ProductBasis(
            [label for label, _, _ in entries], cochains, basis_chains, ref
        )
        self._products[r] = hit
        return hit

    def __repr__(self):
        return "StratumData(%s, %d objects)" % (
            layer_label(self.ring.arrangement, self.layer),
            len(self.handle.object_ids),
        )


class RestrictionMap:
    """Degree-one restriction onto a stratum in dual-basis coordinates.

    ``matrix[i][j]`` is the coefficient of the i-th local dual class
    in the image of the j-th global one.
    """

    __slots__ = ("layer", "row_labels", "col_labels", "matrix")

    def __init__(self, layer, row_labels, col_labels, matrix):
        self.layer = layer
        self.row_labels = row_labels
        self.col_labels = col_labels
        self.matrix = matrix

    def __repr__(self):
        return "RestrictionMap(%d x %d)" % (
            len(self.row_labels), len(self.col_labels)
        )


class OmegaSL:
    """A distinguished class with its coordinates and integer cocycle.

    ``coordinates`` pairs the class against the integral homology
    basis of its degree; ``cochain`` is an integer cocycle with those
    pairings.
    """

    __slots__ = ("indices", "layer", "degree", "coordinates", "cochain",
                 "label")

    def __init__(self, indices, layer, degree, coordinates, cochain, label):
        self.indices = indices
        self.layer = layer
        self.degree = degree
        self.coordinates = coordinates
        self.cochain = cochain
        self.label = label

    def __repr__(self):
        return "OmegaSL(%s)" % self.label


class InjectivityReport:
    """Domain rank against achieved rank of the combined restrictions."""

    def __init__(self, by_degree):
        self.by_degree = by_degree

    @property
    def kernel_ranks(self):
        return {k: dom - got for k, (dom, got) in self.by_degree.items()}

    def __bool__(self):
        return all(dom == got for dom, got in self.by_degree.values())

    def __repr__(self):
        return "InjectivityReport(%s)" % (self.by_degree,)


class Presentation:
    """Module generators with their spanning report."""

    def __init__(self, ring, generators, torus_labels, span):
        self.ring = ring
        self.generators = generators
        self.torus_labels = torus_labels
        self.span = span

    def __bool__(self):
        return all(ok for _, ok in self.span.values())

    def to_json(self):
        """A serializable presentation including the restriction table."""
        arr = self.ring.arrangement
        table = self.ring.restriction_table()
        return {
            "torus_basis": ["%s(%s)" % label for label in self.torus_labels],
            "generators": [
                {
                    "label": g.label,
                    "degree": g.degree,
                    "layer": layer_label(arr, g.layer),
                    "indices": list(g.indices),
                    "coordinates": list(g.coordinates),
                }
                for g in self.generators
            ],
            "span": {
                str(k): {"factors": list(factors), "full": ok}
                for k, (factors, ok) in self.span.items()
            },
            "restrictions": table.to_json(),
        }

    def __repr__(self):
        return "Presentation(generators=%d, full=%s)" % (
            len(self.generators), bool(self)
        )


class RestrictionTable:
    """A sparse table of restricted classes in stratum product coordinates.

    ``cells`` maps a row and column label to a list of coefficient and
    product-label pairs; absent cells are zero.
    """

    def __init__(self, rows, cols, cells):
        self.rows = rows
        self.cols = cols
        self.cells = cells

    def entry(self, row, col):
        return self.cells.get((row, col), [])

    @staticmethod
    def format_entry(entry):
        parts = []
        for coeff, label in entry:
            name = "".join("%s(%s)" % (k, v) for k, v in label)
            if not name:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(name)
            elif coeff == -1:
                parts.append("-" + name)
            else:
                parts.append("%s*%s" % (coeff, name))
        return " + ".join(parts)

    def to_csv(self):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow([""] + list(self.cols))
        for row in self.rows:
            writer.writerow(
                [row] + [self.format_entry(self.entry(row, c)) for c in self.cols]
            )
        return buffer.getvalue()

    def to_json(self):
        return {
            "rows": list(self.rows),
            "columns": list(self.cols),
            "cells": [
                {
                    "row": row,
                    "column": col,
                    "entry": [
                        {
                            "coefficient": _json_num(v),
                            "factors": ["%s(%s)" % f for f in label],
                        }
                        for v, label in entry
                    ],
                }
                for (row, col), entry in sorted(self.cells.items())
            ],
        }

    def __repr__(self):
        return "RestrictionTable(%d x %d)" % (len(self.rows), len(self.cols))


class RingData:
    """All cohomology ring data of the model over one set of choices.

    Builds the Salvetti model and its nerve up to one degree above the
    torus dimension, then lazily the homology, the global dual basis,
    the strata with their restriction maps, and the distinguished
    classes.  Homology must be torsion free in every degree, and the
    circle and square classes must span degree one.
    """

    def __init__(self, arr, choices=None, model=None):
        self.arrangement = arr
        if choices is None:
            choices = make_choices(arr)
        elif choices.arrangement.dim != arr.dim or [
            h.key() for h in choices.arrangement.hypertori
        ] != [h.key() for h in arr.hypertori]:
            raise ValueError("choices belong to a different arrangement")
        self.choices = choices
        self.model = model if model is not None else ToricSalvetti(arr)
        self.nerve = nerve(self.model.category, max_degree=arr.dim + 1)
        self.poset = arr.layer_poset()
        self._homology = {}
        self._cohomology = {}
        self._strata = {}
        self._phi = {}
        self._lambdas = {}
        self._omega = {}
        self._squares = {}
        self._omega_s = {}
        self._omega_sl = {}
        self._amatrix = {}
        self._rows_cache = {}
        self._t_monomials = {}
        self._int_sys = {}
        self._basis = None
        self._basis_duals = None
        self._torus = None

    # -- global homology and the dual basis --------------------------------

    def homology(self, k):
        hit = self._homology.get(k)
        if hit is None:
            hit = chains.homology(self.nerve, k)
            if hit.torsion:
                raise RuntimeError(
                    "model homology has torsion in degree %d" % k
                )
            self._homology[k] = hit
        return hit

    def cohomology(self, k):
        hit = self._cohomology.get(k)
        if hit is None:
            hit = chains.cohomology(self.nerve, k)
            if hit.torsion:
                raise RuntimeError(
                    "model cohomology has torsion in degree %d" % k
                )
            self._cohomology[k] = hit
        return hit

    def lambda_cycle(self, layer, base):
        """The circle cycle of a circle layer over a chamber, cached."""
        key = (layer.key, tuple(base))
        hit = self._lambdas.get(key)
        if hit is None:
            hit = build_lambda(
                self.model, base, layer, self.choices.gallery_of(layer)
            )
            self._lambdas[key] = hit
        return hit

    def omega_cycle(self, h):
        """The square cycle of a hypertorus over its least spanning cell."""
        hit = self._omega.get(h)
        if hit is None:
            hit = omega_generator(self.model, h, self.choices.hyper_chamber[h])
            self._omega[h] = hit
        return hit

    def stratum_square(self, layer, h):
        """A square cycle of a hypertorus over the least vertex of a layer.

        Every face of the layer lies on the hypertorus, so the square
        stays inside each stratum of the layer.
        """
        key = (layer.key, h)
        hit = self._squares.get(key)
        if hit is None:
            cells = self.model.cells
            vertices = [
                f for f in cells.objects
                if f.dim == 0 and self.poset.leq(layer, f.support)
            ]
            if not vertices:
                raise RuntimeError("layer carries no vertex cell")
            f0 = min(vertices, key=lambda f: f.index)
            options = []
            for m in cells.morphisms:
                if m.src != f0.index:
                    continue
                g = cells.objects[m.dst]
                if g.support.rank == 1 and h in g.support.support:
                    options.append(m)
            if not options:
                raise RuntimeError("no spanning cell attaches to the vertex")
            m = min(options, key=lambda m: m.triple())
            hit = build_omega(self.model, m, self.choices.hyper_chamber[h])
            self._squares[key] = hit
        return hit

    @property
    def basis_cycles(self):
        """Labelled degree-one cycles: circle classes then square classes."""
        if self._basis is None:
            arr = self.arrangement
            t_layer = self.poset.minimum()
            base = self.choices.base_of(t_layer)
            entries = []
            for m in self.choices.basis_layers:
                lam = self.lambda_cycle(m, base)
                entries.append(
                    (("lam", layer_label(arr, m)), lam.arrow_coeffs)
                )
            for h in range(len(arr.hypertori)):
                entries.append(
                    (("om", "H%d" % h), self.omega_cycle(h).arrow_coeffs)
                )
            if self.homology(1).rank != len(entries):
                raise RuntimeError(
                    "degree-one rank disagrees with the circle and square count"
                )
            self._basis = [
                (label, coeffs, chain_on(self.nerve, coeffs))
                for label, coeffs in entries
            ]
        return self._basis

    @property
    def basis_duals(self):
        """Cocycles pairing as the identity against the global basis."""
        if self._basis_duals is None:
            self._basis_duals = chains.dual_basis_cochains(
                self.nerve, [c for _, _, c in self.basis_cycles]
            )
        return self._basis_duals

    def a_matrix(self, layer):
        """Winding coordinates of a layer's circles in the basis circles.

        Row h solves the winding vector of the layer's h-th circle
        against the winding vectors of the basis circles; inside the
        torus stratum the classes satisfy the same relations.
        """
        hit = self._amatrix.get(layer.key)
        if hit is None:
            t_layer = self.poset.minimum()
            base = self.choices.base_of(t_layer)
            cols = [
                self.lambda_cycle(m, base).torus_class()
                for m in self.choices.basis_layers
            ]
            d = self.arrangement.dim
            mat = [[Fraction(cols[j][i]) for j in range(d)] for i in range(d)]
            hit = []
            for n_layer in self.choices.n_of(layer):
                t = self.lambda_cycle(n_layer, base).torus_class()
                sol = la.solve_linear(mat, [Fraction(v) for v in t])
                if sol is None:
                    raise RuntimeError("circle winding escapes the basis span")
                hit.append([_num(v) for v in sol])
            self._amatrix[layer.key] = hit
        return hit

    # -- strata and restriction maps ----------------------------------------

    def stratum(self, layer, face=None):
        """The stratum data of a layer at a face, default the chosen face."""
        if face is None:
            face = self.choices.face_of(layer)
        face = tuple(face)
        key = (layer.key, face)
        hit = self._strata.get(key)
        if hit is None:
            hit = StratumData(self, layer, face)
            self._strata[key] = hit
        return hit

    def admissible_faces(self, layer):
        """All direction faces whose zero set is exactly the layer's flat."""
        a0, _ = arrangement_A0(self.arrangement)
        flat = x_flat(self.arrangement, layer)
        out = []
        for f in sorted(a0.faces()):
            zeros = frozenset(j for j, s in enumerate(f) if s == 0)
            if zeros == flat:
                out.append(f)
        return out

    def phi_star(self, layer, face=None):
        """The degree-one restriction matrix onto a stratum, computed twice.

        The closed route fills the circle rows from the winding
        coordinates and the square counts of the base-change identity,
        and the square rows from matching hypertori.  The pullback
        route pairs each included local cycle against the global
        duals.  The two must agree exactly.
        """
        if face is None:
            face = self.choices.face_of(layer)
        face = tuple(face)
        key = (layer.key, face)
        hit = self._phi.get(key)
        if hit is not None:
            return hit
        arr = self.arrangement
        st = self.stratum(layer, face)
        col_labels = [label for label, _, _ in self.basis_cycles]
        row_labels = [label for label, _, _ in st.local_cycles]
        duals = self.basis_duals
        pull = [
            [chains.pair(chain_on(self.nerve, coeffs), beta) for beta in duals]
            for _, coeffs, _ in st.local_cycles
        ]
        t_layer = self.poset.minimum()
        base_t = self.choices.base_of(t_layer)
        base_l = self.choices.base_of(layer)
        amat = self.a_matrix(layer)
        n = len(arr.hypertori)
        closed = []
        for h_idx, n_layer in enumerate(self.choices.n_of(layer)):
            if base_l == base_t:
                corr = {}
            else:
                vb = verify_base_change(
                    self.model, base_l, base_t, n_layer,
                    self.choices.gallery_of(n_layer),
                )
                if not vb.exact:
                    raise RuntimeError(
                        "base change is not exact at chain level"
                    )
                corr = vb.omega_coefficients
            closed.append(
                list(amat[h_idx]) + [corr.get(h, 0) for h in range(n)]
            )
        for h in sorted(layer.support):
            row = [0] * len(self.choices.basis_layers)
            row += [1 if j == h else 0 for j in range(n)]
            closed.append(row)
        for i, row in enumerate(closed):
            for j, value in enumerate(row):
                if Fraction(value) != Fraction(pull[i][j]):
                    raise RuntimeError(
                        "restriction routes disagree at %s, row %s, column "
                        "%s: %s against %s" % (
                            layer_label(arr, layer), row_labels[i],
                            col_labels[j], value, pull[i][j],
                        )
                    )
        hit = RestrictionMap(
            layer, row_labels, col_labels,
            [[_num(v) for v in row] for row in pull],
        )
        self._phi[key] = hit
        return hit

    # -- products and distinguished classes ---------------------------------

    def omega_product(self, indices):
        """The cup product of the square duals over an ascending index set."""
        indices = tuple(sorted(indices))
        hit = self._omega_s.get(indices)
        if hit is None:
            if len(set(indices)) != len(indices):
                raise ValueError("repeated hypertorus in a product")
            duals = self.basis_duals
            r = len(self.choices.basis_layers)
            if not indices:
                hit = chains.unit_cochain(self.nerve)
            else:
                hit = duals[r + indices[0]]
                for h in indices[1:]:
                    hit = chains.cup_product(self.nerve, hit, duals[r + h])
            self._omega_s[indices] = hit
        return hit

    def _stratum_rows(self, k, layer, face=None):
        """Included degree k stratum cycles with their model coordinates."""
        st = self.stratum(layer, face)
        key = (k, layer.key, st.face)
        hit = self._rows_cache.get(key)
        if hit is None:
            hk = self.homology(k)
            hit = []
            for z in st.homology(k).basis:
                full = chains.pushforward(st.inclusion, z)
                coords = hk.coordinates(full)
                row = {j: c for j, c in enumerate(coords) if c}
                hit.append((row, full))
            self._rows_cache[key] = hit
        return hit

    def _omega_sl_conditions(self, indices, layer):
        """Containment flags and stabilizer orders, one pair per layer."""
        sub, _ = subarrangement(self.arrangement, indices)
        sposet = sub.layer_poset()
        group = essential_stabilizer(self.arrangement, indices)
        out = {}
        for y in self.poset.layers:
            ybar = sposet.smallest_containing(y)
            if ybar.contains_layer(layer):
                out[y.key] = (True, len(stab_of_layer(group, ybar)))
            else:
                out[y.key] = (False, 1)
        return out

    def build_omega_SL(self, indices, layer):
        """The class prescribed by its restriction to every stratum.

        The conditions are solved over the chosen stratum of every
        layer, then validated on every admissible face.  The class
        must be determined uniquely, its coordinates must be integers,
        and an integer cocycle representative must exist.
        """
        indices = tuple(sorted(indices))
        key = (indices, layer.key)
        hit = self._omega_sl.get(key)
        if hit is not None:
            return hit
        if len(indices) != layer.rank:
            raise ValueError("index set size must match the layer's rank")
        options = nbc_basis(
            self.arrangement, layer, self.choices.nbc_reverse
        )
        if indices not in set(options):
            raise ValueError("index set breaks a circuit of the layer")
        k = layer.rank
        hk = self.homology(k)
        data = self._omega_sl_conditions(indices, layer)
        omega_s = self.omega_product(indices)
        rows = []
        rhs = {}
        for y in self.poset.layers:
            inside, denom = data[y.key]
            for row, full in self._stratum_rows(k, y):
                if inside:
                    value = Fraction(chains.pair(full, omega_s), denom)
                    if value:
                        rhs[len(rows)] = value
                rows.append(row)
        ref = la.RowEchelonQ(rows, hk.rank)
        if ref.rank != hk.rank:
            raise RuntimeError(
                "restriction conditions do not determine the class"
            )
        sol = ref.solve(rhs)
        if sol is None:
            raise RuntimeError("restriction conditions are infeasible")
        u = [Fraction(sol.get(j, 0)) for j in range(hk.rank)]
        if any(v.denominator != 1 for v in u):
            raise RuntimeError(
                "class coordinates are not integral: %s"
                % [str(v) for v in u]
            )
        u = [int(v) for v in u]
        self._validate_omega_sl(indices, layer, u, data, omega_s, k)
        rep = self._integral_cocycle(k, u)
        hit = OmegaSL(
            indices, layer, k, tuple(u), rep,
            _omega_label(self.arrangement, indices, layer),
        )
        self._omega_sl[key] = hit
        return hit

    def _validate_omega_sl(self, indices, layer, u, data, omega_s, k):
        """Replay the restriction conditions on every admissible face."""
        for y in self.poset.layers:
            inside, denom = data[y.key]
            for face in self.admissible_faces(y):
                for row, full in self._stratum_rows(k, y, face):
                    have = sum(c * u[j] for j, c in row.items())
                    if inside:
                        want = Fraction(chains.pair(full, omega_s), denom)
                    else:
                        want = 0
                    if have != want:
                        raise RuntimeError(
                            "restriction conditions fail for %s at %s over "
                            "face %s" % (
                                _omega_label(self.arrangement, indices, layer),
                                layer_label(self.arrangement, y), face,
                            )
                        )

    def _integer_system(self, k):
        hit = self._int_sys.get(k)
        if hit is None:
            rows = []
            if self.nerve.rank(k + 1):
                rows = [dict(col) for col in self.nerve.boundary_columns(k + 1)]
            cut = len(rows)
            rows += [dict(z.coeffs) for z in self.homology(k).basis]
            snf = la.SparseSNF(
                rows, self.nerve.rank(k), track_row_ops=True, track_v=True
            )
            hit = (snf, cut, len(rows))
            self._int_sys[k] = hit
        return hit

    def _integral_cocycle(self, k, u):
        """An integer cocycle pairing as prescribed against the basis."""
        snf, cut, nrows = self._integer_system(k)
        rhs = [0] * cut + list(u)
        assert len(rhs) == nrows
        carried = snf.apply_row_ops(rhs)
        diag = snf.diagonal()
        y = {}
        for i, value in enumerate(carried):
            if i < len(diag) and diag[i]:
                q, r = divmod(value, diag[i])
                if r:
                    y = None
                    break
                if q:
                    y[i] = q
            elif value:
                y = None
                break
        if y is None:
            raise RuntimeError("class admits no integer cocycle")
        rep = chains.CochainVec(k, snf.v_times(y))
        if not chains.is_cocycle(self.nerve, rep):
            raise RuntimeError("integer representative fails the cocycle test")
        return rep

    # -- torus classes and the module structure -----------------------------

    @property
    def torus_cocycles(self):
        """Labelled integer cocycles spanning the classes from the torus.

        These are the integral degree-one classes pairing to zero with
        every square cycle.  When the circle duals are integral they
        are that lattice's basis and are used directly; otherwise a
        saturated kernel basis replaces them.
        """
        if self._torus is None:
            h1 = self.homology(1)
            r = len(self.choices.basis_layers)
            n = len(self.arrangement.hypertori)
            duals = self.basis_duals
            integral = all(
                Fraction(chains.pair(z, duals[i])).denominator == 1
                for i in range(r)
                for z in h1.basis
            )
            if integral:
                labels = [label for label, _, _ in self.basis_cycles[:r]]
                self._torus = (labels, [duals[i] for i in range(r)])
            else:
                coh = self.cohomology(1)
                rows = [
                    [
                        _as_int(chains.pair(self.basis_cycles[r + h][2], x))
                        for x in coh.basis
                    ]
                    for h in range(n)
                ]
                kern = la.kernel_basis(rows)
                if len(kern) != self.arrangement.dim:
                    raise RuntimeError("torus classes have unexpected rank")
                cocycles = []
                for vec in kern:
                    acc = chains.CochainVec(1, {})
                    for c, x in zip(vec, coh.basis):
                        if c:
                            acc = acc + c * x
                    cocycles.append(acc)
                labels = [("tau", str(i)) for i in range(len(cocycles))]
                self._torus = (labels, cocycles)
        return self._torus

    def torus_monomial(self, subset):
        """Cup product of torus cocycles over an ascending index subset."""
        subset = tuple(sorted(subset))
        hit = self._t_monomials.get(subset)
        if hit is None:
            _, cocycles = self.torus_cocycles
            if not subset:
                hit = chains.unit_cochain(self.nerve)
            else:
                hit = cocycles[subset[0]]
                for i in subset[1:]:
                    hit = chains.cup_product(self.nerve, hit, cocycles[i])
            self._t_monomials[subset] = hit
        return hit

    def generators(self):
        """All distinguished classes, by degree, layer, and index set."""
        out = []
        for layer in self.poset.layers:
            for s in nbc_basis(
                self.arrangement, layer, self.choices.nbc_reverse
            ):
                out.append(self.build_omega_SL(s, layer))
        out.sort(key=lambda g: (g.degree, g.layer.index, g.indices))
        return out

    def module_generators(self):
        """Span of the distinguished classes over the torus classes.

        For every degree the torus monomials times the generator
        cocycles are paired against the homology basis; the resulting
        integer matrix must hit the full lattice.
        """
        d = self.arrangement.dim
        gens = self.generators()
        t_labels, _ = self.torus_cocycles
        span = {}
        for k in range(d + 1):
            hk = self.homology(k)
            if hk.rank == 0:
                span[k] = ((), True)
                continue
            rows = []
            for g in gens:
                extra = k - g.degree
                if extra < 0 or extra > d:
                    continue
                for subset in combinations(range(d), extra):
                    if subset:
                        prod = chains.cup_product(
                            self.nerve, self.torus_monomial(subset), g.cochain
                        )
                    else:
                        prod = g.cochain
                    row = {}
                    for j, z in enumerate(hk.basis):
                        v = chains.pair(z, prod)
                        if v:
                            row[j] = _as_int(v)
                    rows.append(row)
            snf = la.SparseSNF(rows, hk.rank)
            ok = snf.rank == hk.rank and all(
                f == 1 for f in snf.invariant_factors
            )
            span[k] = (tuple(snf.invariant_factors), ok)
        return Presentation(self, gens, t_labels, span)

    def restriction_table(self):
        """Rows of generators against stratum columns, in product coordinates.

        Rows list the circle duals and then the distinguished classes
        of positive rank; each entry expresses the restricted class in
        the stratum's product basis, and zero entries are omitted.
        """
        arr = self.arrangement
        r = len(self.choices.basis_layers)
        rows = []
        for i in range(r):
            label = "lam(%s)" % self.basis_cycles[i][0][1]
            rows.append((label, 1, self.basis_duals[i]))
        for g in self.generators():
            if g.layer.rank == 0:
                continue
            rows.append((g.label, g.degree, g.cochain))
        cols = [("S_%s" % layer_label(arr, l), l) for l in self.poset.layers]
        cells = {}
        for rlabel, degree, cochain in rows:
            for clabel, l in cols:
                st = self.stratum(l)
                if st.homology(degree).rank == 0:
                    continue
                pulled = chains.pullback(st.inclusion, cochain)
                basis = st.product_basis(degree)
                coords = basis.coordinates(pulled)
                entry = [
                    (v, basis.labels[i]) for i, v in enumerate(coords) if v
                ]
                if entry:
                    cells[(rlabel, clabel)] = entry
        return RestrictionTable(
            [label for label, _, _ in rows], [label for label, _ in cols],
            cells,
        )

    # -- verification reports ------------------------------------------------

    def injectivity(self):
        """Ranks of the combined stratum restrictions, degree by degree."""
        report = {}
        for k in range(self.arrangement.dim + 1):
            dom = self.cohomology(k)
            if dom.rank == 0:
                report[k] = (0, 0)
                continue
            rows = []
            for x in dom.basis:
                row = []
                for y in self.poset.layers:
                    st = self.stratum(y)
                    if st.cohomology(k).rank == 0:
                        continue
                    pulled = chains.pullback(st.inclusion, x)
                    row.extend(
                        Fraction(v)
                        for v in st.cohomology(k).coordinates(pulled)
                    )
                rows.append(row)
            width = len(rows[0]) if rows else 0
            if width == 0:
                report[k] = (dom.rank, 0)
            else:
                report[k] = (dom.rank, la.rational_rank(rows))
        return InjectivityReport(report)

    def verify_ideal_containment(self):
        """Circle duals restrict into the span of the local circle duals."""
        for layer in self.poset.layers:
            phi = self.phi_star(layer)
            k = layer.dim
            for i in range(k, len(phi.row_labels)):
                for j in range(len(self.choices.basis_layers)):
                    if phi.matrix[i][j]:
                        return False
        return True

    def verify_null_products(self):
        """Torus products of degree above a layer's corank restrict to zero."""
        d = self.arrangement.dim
        for layer in self.poset.layers:
            st = self.stratum(layer)
            for size in range(d - layer.rank + 1, d + 1):
                basis = st.homology(size).basis
                if not basis:
                    continue
                for subset in combinations(range(d), size):
                    pulled = chains.pullback(
                        st.inclusion, self.torus_monomial(subset)
                    )
                    if any(chains.pair(z, pulled) for z in basis):
                        return False
        return True

    def verify_local_module_generation(self):
        """Stratum cohomology is spanned by the no-broken-circuit products.

        For every layer and degree, the restrictions of the index-set
        products times the torus monomials must span the stratum's
        lattice over the integers.
        """
        arr = self.arrangement
        d = arr.dim
        for layer in self.poset.layers:
            st = self.stratum(layer)
            linear, idx = local_arrangement(arr, layer)
            normals = [list(a) for a, _ in linear.hyperplanes]
            grouped = nbc_sets(normals, reverse=self.choices.nbc_reverse)
            for k in range(d + 1):
                hk = st.homology(k)
                if hk.rank == 0:
                    continue
                rows = []
                for j in range(k + 1):
                    for subset in combinations(range(d), j):
                        for s in grouped.get(k - j, []):
                            hs = tuple(idx[p] for p in s)
                            x = chains.cup_product(
                                self.nerve,
                                self.torus_monomial(subset),
                                self.omega_product(hs),
                            )
                            pulled = chains.pullback(st.inclusion, x)
                            row = {}
                            for i, z in enumerate(hk.basis):
                                v = chains.pair(z, pulled)
                                if v:
                                    row[i] = _as_int(v)
                            rows.append(row)
                snf = la.SparseSNF(rows, hk.rank)
                if snf.rank != hk.rank or any(
                    f != 1 for f in snf.invariant_factors
                ):
                    return False
        return True

    def dimension_identity(self):
        """Total homology rank and the layer census that must equal it."""
        arr = self.arrangement
        d = arr.dim
        total = sum(self.homology(k).rank for k in range(d + 1))
        census = 0
        for layer in self.poset.layers:
            census += 2 ** (d - layer.rank) * len(
                nbc_basis(arr, layer, self.choices.nbc_reverse)
            )
        return total, census

    # -- quotient cross-checks ------------------------------------------------

    def quotient_ring(self, layer, check=False):
        """A ring over the quotient by a layer's directions, with the map.

        The quotient's torus chamber restricts this ring's, so the
        chosen top faces correspond under the projection.
        """
        mm = map_phi(
            self.model, layer, max_degree=self.arrangement.dim + 1,
            check=check,
        )
        qarr = mm.target.arrangement
        _, index_of = arrangement_A0(self.arrangement)
        _, qindex = arrangement_A0(qarr)
        t_layer = self.poset.minimum()
        bt = self.choices.base_of(t_layer)
        qa0_size = max(qindex) + 1 if qindex else 0
        qchamber = [0] * qa0_size
        for j, h in enumerate(mm.kept):
            qchamber[qindex[j]] = bt[index_of[h]]
        qposet = qarr.layer_poset()
        overrides = {
            "base": {qposet.minimum().key: tuple(qchamber)},
            "nbc_reverse": self.choices.nbc_reverse,
        }
        qring = RingData(qarr, make_choices(qarr, overrides), model=mm.target)
        return mm, qring

    def verify_quotient_one_forms(self, layer):
        """Square duals pull back to square duals along the quotient map."""
        mm, qring = self.quotient_ring(layer)
        r = len(self.choices.basis_layers)
        h1 = self.homology(1)
        qr = len(qring.choices.basis_layers)
        out = True
        for j, h in enumerate(mm.kept):
            pulled = chains.pullback(mm.functor, qring.basis_duals[qr + j])
            want = self.basis_duals[r + h]
            if any(
                chains.pair(z, pulled) != chains.pair(z, want)
                for z in h1.basis
            ):
                out = False
        return out

    def verify_quotient_pullback(self, layer):
        """Pulled back distinguished classes restrict as the statement says.

        For every index set of the layer, the pullback of the quotient
        class agrees with the index product on strata of layers inside
        the layer, and restricts into the circle ideal on all others.
        Returns a list of violations, empty on success.
        """
        mm, qring = self.quotient_ring(layer)
        lbar_coset = project_layer(qring.arrangement, mm.qmap, layer)
        lbar = qring.poset.find_by_key(lbar_coset.key)
        if lbar is None:
            raise RuntimeError("layer image is missing from the quotient")
        kept = list(mm.kept)
        k = layer.rank
        violations = []
        for s in nbc_basis(self.arrangement, layer, self.choices.nbc_reverse):
            sbar = tuple(sorted(kept.index(h) for h in s))
            alpha = qring.build_omega_SL(sbar, lbar)
            pulled = chains.pullback(mm.functor, alpha.cochain)
            prod = self.omega_product(s)
            for lp in self.poset.layers:
                st = self.stratum(lp)
                if st.homology(k).rank == 0:
                    continue
                got = chains.pullback(st.inclusion, pulled)
                if layer.contains_layer(lp):
                    want = chains.pullback(st.inclusion, prod)
                    same = all(
                        chains.pair(z, got) == chains.pair(z, want)
                        for z in st.homology(k).basis
                    )
                    if not same:
                        violations.append(
                            "pullback differs from the product on %s"
                            % layer_label(self.arrangement, lp)
                        )
                else:
                    coords = st.product_basis(k).coordinates(got)
                    for i, v in enumerate(coords):
                        label = st.product_basis(k).labels[i]
                        if v and not any(kind == "lam" for kind, _ in label):
                            violations.append(
                                "pullback escapes the circle ideal on %s"
                                % layer_label(self.arrangement, lp)
                            )
                            break
        return violations

    def __repr__(self):
        return "RingData(%r)" % (self.arrangement,)


def verify_injectivity(arr, choices=None):
    """Kernel report of the combined stratum restrictions, degreewise."""
    return RingData(arr, choices).injectivity()


def module_generators(arr, choices=None):
    """Spanning report of the distinguished classes of an arrangement."""
    return RingData(arr, choices).module_generators()


def restriction_table(arr, choices=None):
    """Restriction table of an arrangement over fresh ring data."""
    return RingData(arr, choices).restriction_table()
