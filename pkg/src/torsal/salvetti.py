"""Salvetti complexes of real and toric arrangements, and their nerves.

The Salvetti poset of a real arrangement has one element per pair of a
face and an adjacent chamber; its order complex models the complement of
the complexified arrangement.  For a toric arrangement the model is an
acyclic category fibered over the face category of the torus: the fiber
over a cell is the Salvetti poset of the central arrangement at the
cell's support, and boundary attachments act on fibers by copying signs
on shared hyperplanes and filling the remaining ones from the attachment
sign vector.

Nerves of these categories are chain complexes whose degree k simplices
are chains of k composable non-identity arrows; the boundary drops one
object at a time, composing around interior drops.
"""

from .linearfaces import compose, leq
from .model import arrangement_A0, local_arrangement, x_flat
from .toruscells import face_category


def salvetti_poset(linear):
    """The Salvetti poset of a real arrangement."""
    return SalvettiPoset(linear)


def strata_subposet(poset, face):
    """The subposet of sections over all chambers adjacent to a face."""
    return poset.category(poset.strata_union(face))


def toric_salvetti(arr, cells=None):
    """The Salvetti model of an essential toric arrangement."""
    return ToricSalvetti(arr, cells)


def nerve(category, max_degree=None):
    """The nerve chain complex of an acyclic category.

    Accepts a category directly, or any carrier object exposing one
    through a ``category`` attribute or method.
    """
    if not isinstance(category, AcyclicCategory):
        category = category.category
        if callable(category):
            category = category()
    return NerveComplex(category, max_degree)


class SalvettiPoset:
    """Pairs [G, C] of a face and an adjacent chamber of a real arrangement.

    [G, C] >= [G', C'] holds when G lies in the closure of G' and C' is
    the chamber next to G' on the same side as C.  Elements are sorted by
    sign vectors, so indices are reproducible.
    """

    def __init__(self, linear):
        self.arrangement = linear
        chambers = linear.chambers()
        self.elements = sorted(
            (g, c) for g in linear.faces() for c in chambers if leq(g, c)
        )
        self._index = {p: i for i, p in enumerate(self.elements)}
        self._ups = {}
        self._strata = {}

    def __len__(self):
        return len(self.elements)

    def index(self, pair):
        return self._index[tuple(pair)]

    def greater_eq(self, p, q):
        """Whether p >= q in the Salvetti order."""
        g, c = p
        g2, c2 = q
        return leq(g, g2) and compose(g2, c) == c2

    def up_set(self, pair):
        """Indices of all elements >= the given pair, the pair included."""
        key = (tuple(pair[0]), tuple(pair[1]))
        hit = self._ups.get(key)
        if hit is None:
            hit = tuple(
                i for i, p in enumerate(self.elements) if self.greater_eq(p, key)
            )
            self._ups[key] = hit
        return hit

    def stratum(self, chamber):
        """Indices of the section over a chamber: one element per face."""
        key = tuple(chamber)
        hit = self._strata.get(key)
        if hit is None:
            hit = tuple(
                sorted(
                    self._index[(g, compose(g, key))]
                    for g in self.arrangement.faces()
                )
            )
            self._strata[key] = hit
        return hit

    def strata_union(self, face):
        """Indices lying in the section of some chamber adjacent to the face."""
        if tuple(face) not in self.arrangement.faces():
            raise ValueError("not a face of the arrangement")
        keep = set()
        for c in self.arrangement.chambers():
            if leq(face, c):
                keep.update(self.stratum(c))
        return tuple(sorted(keep))

    def category(self, subset=None):
        """The poset as an acyclic category, with arrows running upward."""
        ids = sorted(subset) if subset is not None else range(len(self.elements))
        labels = [self.elements[i] for i in ids]
        arrows = []
        for s, i in enumerate(ids):
            for t, j in enumerate(ids):
                if i != j and self.greater_eq(self.elements[j], self.elements[i]):
                    arrows.append((s, t, None))
        return AcyclicCategory(labels, arrows)


class AcyclicCategory:
    """A finite acyclic category with labelled objects.

    ``arrows`` lists the non-identity morphisms as (source, target, key)
    triples over object indices; parallel morphisms carry distinct keys.
    ``composer`` maps two consecutive triples to the triple of their
    composite, which must again be listed.  The default, suited to posets,
    keeps the key None, so composites are determined by their endpoints.
    """

    def __init__(self, labels, arrows, composer=None):
        self.labels = list(labels)
        self.arrows = sorted(arrows)
        self._arrow_index = {a: i for i, a in enumerate(self.arrows)}
        if len(self._arrow_index) != len(self.arrows):
            raise ValueError("duplicate arrows")
        self._composer = composer
        self._out = [[] for _ in self.labels]
        for i, (src, _, _) in enumerate(self.arrows):
            self._out[src].append(i)
        self._compose_cache = {}

    def __len__(self):
        return len(self.labels)

    def out_arrows(self, obj):
        return self._out[obj]

    def arrows_between(self, src, dst):
        return [i for i in self._out[src] if self.arrows[i][1] == dst]

    def arrow_index(self, triple):
        return self._arrow_index[tuple(triple)]

    def compose(self, i, j):
        """The index of the composite of arrow i followed by arrow j."""
        hit = self._compose_cache.get((i, j))
        if hit is None:
            a = self.arrows[i]
            b = self.arrows[j]
            if a[1] != b[0]:
                raise ValueError("arrows are not consecutive")
            t = (a[0], b[1], None) if self._composer is None else self._composer(a, b)
            hit = self._arrow_index[t]
            self._compose_cache[(i, j)] = hit
        return hit

    def induced(self, objects):
        """The full subcategory on the given object indices."""
        keep = sorted(set(objects))
        remap = {o: i for i, o in enumerate(keep)}
        labels = [self.labels[o] for o in keep]
        arrows = [
            (remap[src], remap[dst], key)
            for src, dst, key in self.arrows
            if src in remap and dst in remap
        ]
        if self._composer is None:
            composer = None
        else:

            def composer(a, b, _parent=self._composer, _orig=keep, _remap=remap):
                s, d, k = _parent(
                    (_orig[a[0]], _orig[a[1]], a[2]),
                    (_orig[b[0]], _orig[b[1]], b[2]),
                )
                return (_remap[s], _remap[d], k)

        return AcyclicCategory(labels, arrows, composer)


class ToricSalvetti:
    """The Salvetti model of a toric arrangement, fibered over its cells.

    Objects are pairs of a cell F and an element [G, C] of the Salvetti
    poset of the central arrangement at F's support.  An arrow runs from
    (F', x) to (F, y) for every attachment m of F to F' whose transport
    of x sits below y in the fiber over F; identities are left implicit.
    """

    def __init__(self, arr, cells=None):
        self.arrangement = arr
        self.cells = cells if cells is not None else face_category(arr)
        self._m = {m.triple(): m for m in self.cells.morphisms}
        self._fibers = []
        self._hyper = []
        shared = {}
        for face in self.cells.objects:
            key = face.support.key
            if key not in shared:
                linear, idx = local_arrangement(arr, face.support)
                shared[key] = (SalvettiPoset(linear), tuple(idx))
            poset, idx = shared[key]
            self._fibers.append(poset)
            self._hyper.append(idx)
        self.objects = []
        self._fiber_start = []
        self._obj_index = {}
        for face in self.cells.objects:
            self._fiber_start.append(len(self.objects))
            for pair in self._fibers[face.index].elements:
                self._obj_index[(face.index, pair)] = len(self.objects)
                self.objects.append((face.index, pair))
        arrows = []
        for m in self.cells.morphisms:
            carry = self._transport(m)
            fiber = self._fibers[m.src]
            for x in self._fibers[m.dst].elements:
                src_obj = self._obj_index[(m.dst, x)]
                for j in fiber.up_set(carry(x)):
                    y = fiber.elements[j]
                    if m.is_identity and y == x:
                        continue
                    arrows.append((src_obj, self._obj_index[(m.src, y)], m.triple()))
        self.category = AcyclicCategory(self.objects, arrows, self._compose_arrows)

    def __len__(self):
        return len(self.objects)

    def _transport(self, m):
        """The map on Salvetti pairs induced by the attachment m."""
        hs = self._hyper[m.src]
        pos = {h: i for i, h in enumerate(self._hyper[m.dst])}
        att = m.attachment
        faces = self._fibers[m.src].arrangement.faces()

        def carry(pair):
            out = []
            for sv in pair:
                img = tuple(
                    sv[pos[h]] if h in pos else att[i] for i, h in enumerate(hs)
                )
                if img not in faces:
                    raise RuntimeError(
                        "transported sign vector is not a face of the local arrangement"
                    )
                out.append(img)
            return tuple(out)

        return carry

    def _compose_arrows(self, a, b):
        m = self.cells.compose(self._m[b[2]], self._m[a[2]])
        return (a[0], b[1], m.triple())

    def fiber_poset(self, face_index):
        return self._fibers[face_index]

    def fiber_objects(self, face_index):
        """Object indices lying over one cell."""
        start = self._fiber_start[face_index]
        return list(range(start, start + len(self._fibers[face_index])))

    def fiber_category(self, face_index):
        return self.category.induced(self.fiber_objects(face_index))

    def object_index(self, face_index, pair):
        return self._obj_index[(face_index, (tuple(pair[0]), tuple(pair[1])))]

    def subcomplex(self, layer, base_face):
        """The part of the model over a layer, cut to the strata of a base face.

        ``base_face`` is a sign vector of the direction arrangement; its
        zero set must span exactly the directions vanishing on the layer.
        The fibers keep the sections over chambers adjacent to the base
        face, restricted to each cell's local arrangement.
        """
        a0, index_of = arrangement_A0(self.arrangement)
        signs = tuple(int(s) for s in base_face)
        if signs not in a0.faces():
            raise ValueError("base face is not a face of the direction arrangement")
        zeros = frozenset(i for i, s in enumerate(signs) if s == 0)
        if zeros != x_flat(self.arrangement, layer):
            raise ValueError("the hull of the base face must match the layer's flat")
        poset = self.arrangement.layer_poset()
        keep = []
        for face in self.cells.objects:
            if not poset.leq(layer, face.support):
                continue
            local = tuple(signs[index_of[h]] for h in self._hyper[face.index])
            start = self._fiber_start[face.index]
            keep.extend(start + j for j in self._fibers[face.index].strata_union(local))
        return SubcomplexHandle(self, layer, signs, tuple(sorted(keep)))


class SubcomplexHandle:
    """A subcomplex of the toric model over one layer and one base face."""

    def __init__(self, model, layer, base_face, object_ids):
        self.model = model
        self.layer = layer
        self.base_face = base_face
        self.object_ids = object_ids
        self.category = model.category.induced(object_ids)

    def __len__(self):
        return len(self.object_ids)


class NerveComplex:
    """The chain complex of composable chains of non-identity arrows.

    Degree 0 simplices are the objects; a degree k simplex is a tuple of
    k consecutive arrow indices.  Unless capped, chains are enumerated up
    to the length of the longest one.
    """

    def __init__(self, category, max_degree=None):
        self.category = category
        cap = len(category.labels) - 1 if max_degree is None else max_degree
        self.simplices = [list(range(len(category.labels)))]
        self._index = [None]
        cur = [(i,) for i in range(len(category.arrows))]
        k = 1
        while cur and k <= cap:
            self.simplices.append(cur)
            self._index.append({s: i for i, s in enumerate(cur)})
            k += 1
            if k > cap:
                break
            nxt = []
            for t in cur:
                dst = category.arrows[t[-1]][1]
                nxt.extend(t + (a,) for a in category.out_arrows(dst))
            cur = nxt
        self._columns = {}
        self._rows = {}
        self._solvers = {}

    @property
    def dimension(self):
        return len(self.simplices) - 1

    def rank(self, k):
        if 0 <= k < len(self.simplices):
            return len(self.simplices[k])
        return 0

    def index_of(self, k, simplex):
        if k == 0:
            return simplex
        return self._index[k][tuple(simplex)]

    def boundary_columns(self, k):
        """The boundary of each degree k simplex, over degree k-1 indices."""
        hit = self._columns.get(k)
        if hit is not None:
            return hit
        if k < 1 or k > self.dimension:
            cols = [{} for _ in range(self.rank(k))]
        elif k == 1:
            cols = []
            for (a,) in self.simplices[1]:
                src, dst, _ = self.category.arrows[a]
                cols.append({dst: 1, src: -1})
        else:
            index = self._index[k - 1]
            compose = self.category.compose
            cols = []
            for t in self.simplices[k]:
                col = {}
                for i in range(k + 1):
                    if i == 0:
                        f = t[1:]
                    elif i == k:
                        f = t[:-1]
                    else:
                        f = t[: i - 1] + (compose(t[i - 1], t[i]),) + t[i + 1 :]
                    j = index[f]
                    v = col.get(j, 0) + (-1 if i % 2 else 1)
                    if v:
                        col[j] = v
                    elif j in col:
                        del col[j]
                cols.append(col)
        self._columns[k] = cols
        return cols

    def boundary_rows(self, k):
        """The same matrix as sparse rows, one per degree k-1 simplex."""
        hit = self._rows.get(k)
        if hit is None:
            hit = [dict() for _ in range(self.rank(k - 1))]
            for j, col in enumerate(self.boundary_columns(k)):
                for i, v in col.items():
                    hit[i][j] = v
            self._rows[k] = hit
        return hit

    def to_json(self):
        """A JSON friendly dump of objects, arrows, simplices and boundaries."""

        def plain(v):
            if isinstance(v, (tuple, list)):
                return [plain(x) for x in v]
            return v

        boundaries = {}
        for k in range(1, self.dimension + 1):
            boundaries[str(k)] = sorted(
                [i, j, v]
                for j, col in enumerate(self.boundary_columns(k))
                for i, v in col.items()
            )
        return {
            "objects": [plain(l) for l in self.category.labels],
            "arrows": [plain(a) for a in self.category.arrows],
            "simplices": [[plain(s) for s in level] for level in self.simplices],
            "boundaries": boundaries,
        }
