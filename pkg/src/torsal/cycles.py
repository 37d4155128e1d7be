"""Explicit 1-cycles on the toric Salvetti model and maps between models.

The first homology of the model is generated by circle cycles, one
over each 1-dimensional layer, together with square cycles, one over
each hypertorus.  A circle cycle is assembled from a minimal gallery
of the direction arrangement: over every vertex of the layer the
gallery restricts to a zig-zag of Salvetti cells, and the zig-zags are
glued around the layer through the attachment arrows of its edges.
Wall squares measure how a circle cycle moves when its base chamber
changes; the base-change identity is checked exactly at chain level
and again in homology.

Models are compared through cellular functors on their nerves: the
quotient map onto the hypertori containing a fixed layer, the
coarsening map onto a full-rank subarrangement, and translation by a
torus point preserving the arrangement.  Chains push forward and
cochains pull back along each of them.
"""

from fractions import Fraction

from torsal import chains
from torsal import intlinalg as la
from torsal.linearfaces import compose
from torsal.model import (
    Hypertorus,
    TorusQuotient,
    arrangement_A0,
    chamber_extension,
    essentialize,
    quotient_arrangement,
    separating_set_at,
    subarrangement,
    x_flat,
)
from torsal.salvetti import ToricSalvetti, nerve

__all__ = [
    "ChoiceGallery",
    "PathData",
    "LambdaCycle",
    "OmegaCycle",
    "XiCycle",
    "BaseChangeResult",
    "ModelMap",
    "adjacent_chambers",
    "choice_gallery",
    "build_path",
    "build_lambda",
    "build_omega",
    "omega_generator",
    "build_xi",
    "epsilon",
    "verify_base_change",
    "map_phi",
    "map_psi",
    "map_mu",
    "chain_on",
]


def _negate(sv):
    return tuple(-s for s in sv)


def _accumulate(coeffs, key, value):
    w = coeffs.get(key, 0) + value
    if w:
        coeffs[key] = w
    elif key in coeffs:
        del coeffs[key]


def chain_on(nerve_complex, arrow_coeffs):
    """A 1-chain on a nerve from coefficients indexed by category arrows."""
    cat = nerve_complex.category
    out = {}
    for triple, c in arrow_coeffs.items():
        idx = nerve_complex.index_of(1, (cat.arrow_index(triple),))
        _accumulate(out, idx, c)
    return chains.ChainVec(1, out)


def adjacent_chambers(linear, flat):
    """Chambers whose closure contains a flat, in lexicographic order.

    ``flat`` must be a flat-closed set of hyperplane indices of the
    central arrangement; a chamber qualifies when zeroing it on the flat
    leaves a realizable face of the flat's full dimension.
    """
    flat = frozenset(flat)
    faces = linear.faces()
    dim = linear.flat_dim(flat)
    out = []
    for c in linear.chambers():
        wall = tuple(0 if i in flat else s for i, s in enumerate(c))
        if wall in faces and linear.face_dim(wall) == dim:
            out.append(c)
    return sorted(out)


class ChoiceGallery:
    """A minimal gallery across the directions transverse to a 1-dim layer.

    ``chamber`` is a chamber of the direction arrangement adjacent to
    the layer's tangent line; the gallery runs from it to the opposite
    chamber across the line, crossing every hyperplane that does not
    contain the line exactly once.  ``walls[t]`` is the index of the
    hyperplane crossed between ``gallery[t]`` and ``gallery[t + 1]``.
    """

    __slots__ = ("layer", "chamber", "gallery", "walls", "flat")

    def __init__(self, layer, chamber, gallery, walls, flat):
        self.layer = layer
        self.chamber = chamber
        self.gallery = gallery
        self.walls = walls
        self.flat = flat

    @property
    def k(self):
        return len(self.walls)

    def __repr__(self):
        return f"ChoiceGallery(chamber={self.chamber}, k={self.k})"


def choice_gallery(arr, layer, chamber=None):
    """Gallery data for a 1-dimensional layer.

    The default starting chamber is the lexicographically least one
    adjacent to the layer's tangent line; any adjacent chamber may be
    passed instead.
    """
    if layer.dim != 1:
        raise ValueError("galleries are attached to 1-dimensional layers")
    a0, _ = arrangement_A0(arr)
    flat = x_flat(arr, layer)
    options = adjacent_chambers(a0, flat)
    if chamber is None:
        if not options:
            raise ValueError("no chamber is adjacent to the layer's line")
        chamber = options[0]
    else:
        chamber = tuple(int(s) for s in chamber)
        if chamber not in options:
            raise ValueError("chamber is not adjacent to the layer's line")
    target = a0.opposite_chamber(_negate(chamber), flat)
    gallery = a0.minimal_gallery(chamber, target)
    walls = a0.gallery_walls(gallery)
    expected = set(range(len(a0))) - set(flat)
    if set(walls) != expected or len(set(walls)) != len(walls):
        raise RuntimeError("gallery must cross each transverse hyperplane once")
    return ChoiceGallery(layer, chamber, tuple(gallery), tuple(walls), flat)


class PathData:
    """The zig-zag of Salvetti cells over one face of a circle layer.

    ``chambers`` lists the local chambers met by the gallery in first
    occurrence order and ``walls[t]`` is the local wall crossed between
    ``chambers[t]`` and ``chambers[t + 1]``; ``base`` is the local
    restriction of the base chamber.  ``vertex``, ``edge`` and
    ``coedge`` return Salvetti pairs in the fiber over the face.
    """

    __slots__ = (
        "face",
        "base",
        "chambers",
        "walls",
        "wall_positions",
        "wall_hypertori",
    )

    def __init__(self, face, base, chambers, walls, positions, hypertori):
        self.face = face
        self.base = base
        self.chambers = chambers
        self.walls = walls
        self.wall_positions = positions
        self.wall_hypertori = hypertori

    @property
    def k(self):
        return len(self.walls)

    def vertex(self, t):
        c = self.chambers[t]
        return (c, c)

    def edge(self, t):
        w = self.walls[t]
        return (w, compose(w, self.base))

    def coedge(self, t):
        w = self.walls[t]
        return (w, compose(w, _negate(self.base)))

    def __repr__(self):
        return f"PathData(face={self.face.index}, k={self.k})"


def build_path(model, base, face, gallery):
    """Restrict a gallery to the fiber over one face of its layer.

    ``base`` is a chamber of the direction arrangement.  The result is
    a single vertex when the face is an edge of the layer and a zig-zag
    with one wall per transverse hypertorus through the face otherwise.
    """
    arr = model.arrangement
    poset = arr.layer_poset()
    if not poset.leq(gallery.layer, face.support):
        raise ValueError("face does not lie on the gallery's layer")
    _, index_of = arrangement_A0(arr)
    sup = sorted(face.support.support)
    cols = [index_of[h] for h in sup]
    seq = []
    for c in gallery.gallery:
        local = tuple(c[j] for j in cols)
        if not seq or local != seq[-1]:
            seq.append(local)
    if len(set(seq)) != len(seq):
        raise RuntimeError("gallery revisits a local chamber")
    walls = []
    positions = []
    hypertori = []
    for c, d in zip(seq, seq[1:]):
        diff = [p for p, (a, b) in enumerate(zip(c, d)) if a != b]
        if len(diff) != 1:
            raise RuntimeError("consecutive local chambers are not adjacent")
        p = diff[0]
        walls.append(tuple(0 if q == p else s for q, s in enumerate(c)))
        positions.append(p)
        hypertori.append(sup[p])
    local_base = chamber_extension(arr, base, face.support)
    return PathData(
        face, local_base, tuple(seq), tuple(walls), tuple(positions), tuple(hypertori)
    )


class LambdaCycle:
    """A circle of Salvetti cells over a 1-dimensional layer.

    The chain carries +1 on every downhill fiber arrow of each vertex
    path and -1 on the uphill one; attachment arrows from the edges of
    the layer close the circle, signed by the path end they reach.
    ``vertex_faces`` and ``edge_faces`` alternate in circle order,
    starting from the least vertex cell.
    """

    def __init__(self, layer, base, gallery, paths, vertex_faces, edge_faces,
                 objects, subcategory, arrow_coeffs):
        self.layer = layer
        self.base = base
        self.gallery = gallery
        self.paths = paths
        self.vertex_faces = vertex_faces
        self.edge_faces = edge_faces
        self.objects = objects
        self.subcategory = subcategory
        self.arrow_coeffs = arrow_coeffs

    @property
    def ell(self):
        return len(self.vertex_faces)

    def chain(self, nerve_complex):
        return chain_on(nerve_complex, self.arrow_coeffs)

    def torus_class(self):
        """Total winding of the circle, as a vector of the character lattice dual."""
        dim = len(self.layer.base)
        out = [0] * dim
        for (_, _, triple), c in self.arrow_coeffs.items():
            for i, v in enumerate(triple[2]):
                out[i] += c * v
        return tuple(out)

    def __repr__(self):
        return f"LambdaCycle(base={self.base}, ell={self.ell})"


def build_lambda(model, base, layer, gallery=None):
    """The circle cycle of a 1-dimensional layer over a base chamber."""
    arr = model.arrangement
    cells = model.cells
    poset = arr.layer_poset()
    if gallery is None:
        gallery = choice_gallery(arr, layer)
    elif gallery.layer.key != layer.key:
        raise ValueError("gallery belongs to a different layer")
    base = tuple(int(s) for s in base)
    a0, _ = arrangement_A0(arr)
    if base not in a0.chambers():
        raise ValueError("base is not a chamber of the direction arrangement")
    faces = [f for f in cells.objects if poset.leq(layer, f.support)]
    vertex_cells = [f for f in faces if f.dim == 0]
    edge_cells = [f for f in faces if f.dim == 1]

    paths = {}
    coeffs = {}
    objects = set()
    for f in faces:
        path = build_path(model, base, f, gallery)
        if f.dim == 1 and path.k:
            raise RuntimeError("an edge of the layer crosses a wall")
        paths[f.index] = path
        ident = cells.identity(f.index).triple()
        for t in range(path.k + 1):
            objects.add(model.object_index(f.index, path.vertex(t)))
        for t in range(path.k):
            e = model.object_index(f.index, path.edge(t))
            objects.add(e)
            v0 = model.object_index(f.index, path.vertex(t))
            v1 = model.object_index(f.index, path.vertex(t + 1))
            coeffs[(v0, e, ident)] = 1
            coeffs[(v1, e, ident)] = -1

    links = []
    for g in edge_cells:
        path_g = paths[g.index]
        src_obj = model.object_index(g.index, path_g.vertex(0))
        ends = [m for m in cells.morphisms_into(g.index) if not m.is_identity]
        if len(ends) != 2:
            raise RuntimeError("a circle edge must attach at exactly two ends")
        for m in ends:
            p = cells.objects[m.src]
            path_p = paths.get(p.index)
            if path_p is None or path_p.k == 0:
                raise RuntimeError("edge attaches outside the layer's vertices")
            landing = []
            for t in (0, path_p.k):
                dst_obj = model.object_index(p.index, path_p.vertex(t))
                try:
                    model.category.arrow_index((src_obj, dst_obj, m.triple()))
                except KeyError:
                    continue
                landing.append(t)
            if len(landing) != 1:
                raise RuntimeError("attachment arrow must land on one path end")
            t = landing[0]
            dst_obj = model.object_index(p.index, path_p.vertex(t))
            key = (src_obj, dst_obj, m.triple())
            if key in coeffs:
                raise RuntimeError("duplicate attachment arrow in the circle")
            coeffs[key] = 1 if t == 0 else -1
            links.append((g.index, p.index, t))

    net = {}
    for (s, d, _), c in coeffs.items():
        net[d] = net.get(d, 0) + c
        net[s] = net.get(s, 0) - c
    if any(net.values()):
        raise RuntimeError("circle chain has nonzero boundary")

    succ_vertex = {}
    succ_edge = {}
    for g_idx, p_idx, t in links:
        if t == 0:
            if g_idx in succ_vertex:
                raise RuntimeError("two path starts follow one edge")
            succ_vertex[g_idx] = p_idx
        else:
            if p_idx in succ_edge:
                raise RuntimeError("two edges follow one vertex")
            succ_edge[p_idx] = g_idx
    start = min(f.index for f in vertex_cells)
    vertex_order = []
    edge_order = []
    p = start
    for _ in range(len(vertex_cells)):
        vertex_order.append(p)
        g = succ_edge[p]
        edge_order.append(g)
        p = succ_vertex[g]
        if p == start:
            break
    if len(vertex_order) != len(vertex_cells) or len(edge_order) != len(edge_cells):
        raise RuntimeError("circle walk does not visit every face once")

    objects = tuple(sorted(objects))
    subcategory = model.category.induced(objects)
    return LambdaCycle(
        layer, base, gallery, paths, tuple(vertex_order), tuple(edge_order),
        objects, subcategory, coeffs,
    )


class OmegaCycle:
    """The square cycle attached to a morphism into a hypertorus cell.

    The four objects live in the fiber over the morphism's source; the
    chain is the unique 1-cycle on the square whose arrow from the
    chamber extending the chosen side to the attachment edge on that
    side carries +1.
    """

    def __init__(self, morphism, face, hypertorus, chamber, objects, arrow_coeffs):
        self.morphism = morphism
        self.face = face
        self.hypertorus = hypertorus
        self.chamber = chamber
        self.objects = objects
        self.arrow_coeffs = arrow_coeffs

    def chain(self, nerve_complex):
        return chain_on(nerve_complex, self.arrow_coeffs)

    def __repr__(self):
        return f"OmegaCycle(hypertorus={self.hypertorus}, face={self.face.index})"


def build_omega(model, m, chamber=None):
    """The square cycle of a morphism whose target spans a hypertorus.

    ``chamber`` is a chamber of the direction arrangement adjacent to
    the hypertorus's direction; the identity morphism of a hypertorus
    cell yields the full fiber over that cell.
    """
    arr = model.arrangement
    cells = model.cells
    g = cells.objects[m.dst]
    if g.support.rank != 1:
        raise ValueError("the target cell must span a single hypertorus")
    (h,) = tuple(g.support.support)
    f = cells.objects[m.src]
    a0, _ = arrangement_A0(arr)
    flat = x_flat(arr, g.support)
    options = adjacent_chambers(a0, flat)
    if chamber is None:
        chamber = options[0]
    else:
        chamber = tuple(int(s) for s in chamber)
        if chamber not in options:
            raise ValueError("chamber is not adjacent to the hypertorus")
    ext = chamber_extension(arr, chamber, f.support)
    att = m.attachment
    c1 = compose(att, ext)
    c2 = compose(att, _negate(ext))
    if c1 == c2:
        raise RuntimeError("attachment does not separate the two sides")
    pairs = ((c1, c1), (att, c1), (c2, c2), (att, c2))
    v1, e1, v2, e2 = (model.object_index(f.index, p) for p in pairs)
    ident = cells.identity(f.index).triple()
    coeffs = {
        (v1, e1, ident): 1,
        (v2, e1, ident): -1,
        (v2, e2, ident): 1,
        (v1, e2, ident): -1,
    }
    return OmegaCycle(m, f, h, chamber, pairs, coeffs)


def omega_generator(model, h, chamber=None):
    """The square cycle over the least cell spanning the given hypertorus."""
    arr = model.arrangement
    cells = model.cells
    layer = next(
        l for l in arr.layer_poset().layers if l.rank == 1 and h in l.support
    )
    candidates = [f for f in cells.objects if f.support.key == layer.key]
    if not candidates:
        raise RuntimeError("hypertorus carries no cell of its own")
    g = min(candidates, key=lambda f: f.index)
    return build_omega(model, cells.identity(g.index), chamber)


class XiCycle:
    """The wall square of a hypertorus along the path over one face.

    The four objects are the two path vertices beside the unique wall
    lying on the hypertorus, the edge toward the base chamber and the
    edge away from it; the chain carries +1 on the arrow from the
    earlier vertex to the edge toward the base.
    """

    def __init__(self, hypertorus, base, face, position, wall, objects, arrow_coeffs):
        self.hypertorus = hypertorus
        self.base = base
        self.face = face
        self.position = position
        self.wall = wall
        self.objects = objects
        self.arrow_coeffs = arrow_coeffs

    def chain(self, nerve_complex):
        return chain_on(nerve_complex, self.arrow_coeffs)

    def __repr__(self):
        return f"XiCycle(hypertorus={self.hypertorus}, face={self.face.index})"


def build_xi(model, h, base, face, gallery):
    """The wall square of a hypertorus, taken along a gallery's path.

    The hypertorus must pass through the face without containing the
    gallery's layer, so that the path crosses it exactly once.
    """
    path = build_path(model, base, face, gallery)
    hits = [t for t, wh in enumerate(path.wall_hypertori) if wh == h]
    if not hits:
        raise ValueError("the path does not cross the hypertorus")
    if len(hits) > 1:
        raise RuntimeError("the path crosses the hypertorus more than once")
    t = hits[0]
    cells = model.cells
    ident = cells.identity(face.index).triple()
    v0 = model.object_index(face.index, path.vertex(t))
    v1 = model.object_index(face.index, path.vertex(t + 1))
    e = model.object_index(face.index, path.edge(t))
    eb = model.object_index(face.index, path.coedge(t))
    coeffs = {
        (v0, e, ident): 1,
        (v1, e, ident): -1,
        (v1, eb, ident): 1,
        (v0, eb, ident): -1,
    }
    objects = (path.vertex(t), path.edge(t), path.vertex(t + 1), path.coedge(t))
    return XiCycle(h, tuple(base), face, t, path.walls[t], objects, coeffs)


def epsilon(arr, h, base, chamber):
    """+1 when the chamber sits on the base's side of a hypertorus's direction."""
    _, index_of = arrangement_A0(arr)
    pos = index_of[h]
    sb, sc = base[pos], chamber[pos]
    if not sb or not sc:
        raise ValueError("epsilon compares chambers, not faces")
    return 1 if sb == sc else -1


class BaseChangeResult:
    """Outcome of comparing the circle cycles of two base chambers.

    ``exact`` reports whether the difference of the two circles equals
    the sum of its wall squares arrow by arrow; ``witness`` bounds the
    residual when it is a boundary.  ``omega_coefficients`` gives the
    class of the difference in terms of the square cycle of each
    hypertorus.
    """

    def __init__(self, holds, exact, witness, xi, omega_coefficients, residual):
        self.holds = holds
        self.exact = exact
        self.witness = witness
        self.xi = xi
        self.omega_coefficients = omega_coefficients
        self.residual = residual

    def __bool__(self):
        return self.holds

    def __repr__(self):
        return f"BaseChangeResult(holds={self.holds}, exact={self.exact})"


def verify_base_change(model, base, base2, layer, gallery=None, nerve_complex=None):
    """Check that changing the base chamber adds exactly the wall squares.

    Both circles are built over the same gallery.  One wall square
    appears for every vertex of the layer and every hypertorus through
    that vertex separating the two bases without containing the layer.
    """
    arr = model.arrangement
    if gallery is None:
        gallery = choice_gallery(arr, layer)
    base = tuple(int(s) for s in base)
    base2 = tuple(int(s) for s in base2)
    lam = build_lambda(model, base, layer, gallery)
    lam2 = build_lambda(model, base2, layer, gallery)
    xi = []
    omega_coefficients = {}
    for p_idx in lam.vertex_faces:
        p = model.cells.objects[p_idx]
        sep = separating_set_at(arr, p.support, base, base2) - layer.support
        for h in sorted(sep):
            xi.append(build_xi(model, h, base, p, gallery))
            sign = epsilon(arr, h, base, gallery.chamber)
            omega_coefficients[h] = omega_coefficients.get(h, 0) + sign
    residual = dict(lam.arrow_coeffs)
    for key, c in lam2.arrow_coeffs.items():
        _accumulate(residual, key, -c)
    for cyc in xi:
        for key, c in cyc.arrow_coeffs.items():
            _accumulate(residual, key, -c)
    exact = not residual
    if exact:
        witness = chains.ChainVec(2, {})
        holds = True
    else:
        if nerve_complex is None:
            nerve_complex = nerve(model.category, max_degree=2)
        witness = chains.boundary_witness(nerve_complex, chain_on(nerve_complex, residual))
        holds = witness is not None
    return BaseChangeResult(holds, exact, witness, xi, omega_coefficients, residual)


class ModelMap:
    """A cellular functor between two toric Salvetti models.

    ``object_map`` and ``arrow_map`` follow the source category; the
    functor acts between nerves capped at ``max_degree``.  ``push``
    accepts a chain on the source nerve, a cycle object, or a raw
    arrow coefficient dictionary.
    """

    def __init__(self, source, target, qmap, object_map, arrow_map,
                 max_degree=2, check=True):
        self.source = source
        self.target = target
        self.qmap = qmap
        self.object_map = object_map
        self.arrow_map = arrow_map
        self.source_nerve = nerve(source.category, max_degree=max_degree)
        self.target_nerve = nerve(target.category, max_degree=max_degree)
        self.functor = chains.CellularFunctor(
            self.source_nerve, self.target_nerve, object_map, arrow_map, check=check
        )

    def push(self, item):
        if not isinstance(item, chains.ChainVec):
            item = chain_on(self.source_nerve, getattr(item, "arrow_coeffs", item))
        return chains.pushforward(self.functor, item)

    def pull(self, cochain):
        return chains.pullback(self.functor, cochain)


def _functor_maps(source, target, face_map, pair_map, morphism_map):
    """Object and arrow maps of a functor given its action on cells."""
    object_map = []
    for face_index, pair in source.objects:
        face = source.cells.objects[face_index]
        img_face = face_map(face)
        img_pair = pair_map(face, img_face, pair)
        try:
            object_map.append(target.object_index(img_face.index, img_pair))
        except KeyError:
            raise RuntimeError(
                "the image of a Salvetti pair is not a pair of the target"
            ) from None
    morphisms = {m.triple(): m for m in source.cells.morphisms}
    arrow_map = []
    for s, d, triple in source.category.arrows:
        if object_map[s] == object_map[d]:
            arrow_map.append(None)
            continue
        img_m = morphism_map(morphisms[triple])
        try:
            arrow_map.append(
                target.category.arrow_index(
                    (object_map[s], object_map[d], img_m.triple())
                )
            )
        except KeyError:
            raise RuntimeError(
                "the image of an arrow is not an arrow of the target"
            ) from None
    return object_map, arrow_map


def _restriction_pair_map(hyper_map):
    """Restrict Salvetti pairs to the support positions kept by a map.

    ``hyper_map`` sends each hypertorus index of the target arrangement
    to the index of the source hypertorus over it.
    """

    def pair_map(face, img_face, pair):
        pos = {h: i for i, h in enumerate(sorted(face.support.support))}
        cols = []
        for j in sorted(img_face.support.support):
            h = hyper_map[j]
            if h not in pos:
                raise RuntimeError("image support escapes the source support")
            cols.append(pos[h])
        return tuple(tuple(sv[c] for c in cols) for sv in pair)

    return pair_map


def map_phi(model, layer, max_degree=2, check=True):
    """The functor onto the model of the hypertori containing a layer.

    The target arrangement lives in the torus quotient by the layer's
    direction subtorus, with one hypertorus per element of the layer's
    support.  Circle cycles over layers parallel to the quotient
    direction collapse; square cycles survive exactly over the kept
    hypertori.
    """
    if layer.rank == 0:
        raise ValueError("the quotient by the whole torus is trivial")
    arr = model.arrangement
    quotient, qmap, kept = quotient_arrangement(arr, layer)
    target = ToricSalvetti(quotient)
    cells = model.cells
    tcells = target.cells

    def face_map(face):
        return cells.project_face(tcells, qmap, face)

    def morphism_map(m):
        return cells.project_morphism(tcells, qmap, m)

    pair_map = _restriction_pair_map(dict(enumerate(kept)))
    object_map, arrow_map = _functor_maps(model, target, face_map, pair_map, morphism_map)
    out = ModelMap(model, target, qmap, object_map, arrow_map, max_degree, check)
    out.layer = layer
    out.kept = tuple(kept)
    return out


def map_psi(model, indices, allow_essentialize=False, max_degree=2, check=True):
    """The coarsening functor onto a subarrangement of the same rank.

    Each cell maps to the smallest cell of the coarser cellularization
    containing it.  A subarrangement of lower rank is rejected unless
    ``allow_essentialize`` is set, in which case the target is the
    essentialization of the subarrangement.
    """
    arr = model.arrangement
    sub, kept = subarrangement(arr, indices)
    if la.rational_rank(sub.characters()) != la.rational_rank(arr.characters()):
        if not allow_essentialize:
            raise ValueError("subarrangement drops rank")
        target_arr, qmap = essentialize(sub)
    else:
        target_arr, qmap = sub, TorusQuotient(arr.dim, [])
    target = ToricSalvetti(target_arr)
    cells = model.cells
    tcells = target.cells

    def face_map(face):
        return cells.project_face(tcells, qmap, face)

    def morphism_map(m):
        return cells.project_morphism(tcells, qmap, m)

    pair_map = _restriction_pair_map(dict(enumerate(kept)))
    object_map, arrow_map = _functor_maps(model, target, face_map, pair_map, morphism_map)
    out = ModelMap(model, target, qmap, object_map, arrow_map, max_degree, check)
    out.kept = tuple(kept)
    return out


def map_mu(model, g, max_degree=2, check=True):
    """The automorphism translating the model by a torus point.

    The translation must send every hypertorus to one of the
    arrangement, matching characters exactly; it permutes the cells and
    leaves every local sign picture unchanged.
    """
    arr = model.arrangement
    g = tuple(Fraction(v) for v in g)
    if len(g) != arr.dim:
        raise ValueError("translation arity mismatch")
    keys = {h.key(): i for i, h in enumerate(arr.hypertori)}
    sigma_inv = {}
    for i, h in enumerate(arr.hypertori):
        shift = sum(Fraction(a) * v for a, v in zip(h.character, g))
        j = keys.get(Hypertorus(h.character, h.offset + shift).key())
        if j is None:
            raise ValueError("translation does not preserve the arrangement")
        if arr.hypertori[j].character != h.character:
            raise ValueError("translation needs a sign-normalized arrangement")
        sigma_inv[j] = i
    cells = model.cells

    def face_map(face):
        return cells.translate_object(face, g)

    def morphism_map(m):
        return cells.translate_morphism(m, g)

    def pair_map(face, img_face, pair):
        pos = {h: i for i, h in enumerate(sorted(face.support.support))}
        cols = []
        for j in sorted(img_face.support.support):
            h = sigma_inv.get(j)
            if h is None or h not in pos:
                raise RuntimeError("translated support does not match")
            cols.append(pos[h])
        return tuple(tuple(sv[c] for c in cols) for sv in pair)

    object_map, arrow_map = _functor_maps(model, model, face_map, pair_map, morphism_map)
    out = ModelMap(model, model, None, object_map, arrow_map, max_degree, check)
    out.translation = g
    return out
