"""The face category of the compact torus cut by a toric arrangement.

Objects are the cells of the polyhedral cellularization induced on
``(R/Z)^d`` by the hypertori; a morphism ``F -> G`` records one way the
cell ``F`` appears in the boundary of ``G``.  The same pair can carry
several morphisms (a loop edge receives its endpoint twice), so the objects
and morphisms form an acyclic category rather than a poset.

Cells are computed on a periodic lift.  Finitely many integer translates of
each hypertorus suffice to carve, inside an enlarged window around the unit
box, every cell whose closure meets the box, together with all faces of
those cells.  Cells are then identified under integer translation by a
canonical shift of their vertex sets.
"""

import math
from fractions import Fraction

from torsal.feasibility import feasible_point, sign_constraints
from torsal.linearfaces import LinearArrangement, leq
from torsal.model import local_arrangement

__all__ = ["ToricFace", "FaceMorphism", "FaceCategory", "face_category"]


def _vec_add(u, v):
    return tuple(Fraction(a) + Fraction(b) for a, b in zip(u, v))


def _vec_sub(u, v):
    return tuple(Fraction(a) - Fraction(b) for a, b in zip(u, v))


def _canonicalize_vertices(vertices):
    """Sorted vertex tuple shifted so the least vertex lies in [0,1)^d.

    Returns ``(key, shift)`` with ``key`` the canonical tuple and ``shift``
    the integer vector subtracted; translates of one cell share the key.
    """
    vs = sorted(tuple(Fraction(c) for c in v) for v in vertices)
    z = tuple(math.floor(c) for c in vs[0])
    key = tuple(tuple(c - s for c, s in zip(v, z)) for v in vs)
    return key, z


class ToricFace:
    """One cell of the torus cellularization.

    ``vertices`` are the canonical lift's vertex coordinates, ``witness``
    their centroid (a relative interior point of the lift), ``signs`` the
    lift's sign vector in the window arrangement, and ``support`` the
    minimal layer containing the cell.
    """

    __slots__ = ("key", "dim", "vertices", "witness", "signs", "support", "index")

    def __init__(self, key, dim, witness, signs, support):
        self.key = key
        self.vertices = key
        self.dim = dim
        self.witness = witness
        self.signs = signs
        self.support = support
        self.index = None

    def __repr__(self):
        return f"ToricFace(dim={self.dim}, witness={self.witness})"


class FaceMorphism:
    """An occurrence of ``src`` in the boundary of ``dst``.

    ``shift`` is the integer translation placing the canonical lift of
    ``src`` inside the closure of the canonical lift of ``dst``.
    ``attachment`` gives, per hypertorus of the source's support (in sorted
    index order), the side of that hypertorus's lift on which ``dst`` lies;
    it is the sign vector of a face of the local arrangement at ``src``.
    """

    __slots__ = ("src", "dst", "shift", "attachment")

    def __init__(self, src, dst, shift, attachment):
        self.src = src
        self.dst = dst
        self.shift = shift
        self.attachment = attachment

    @property
    def is_identity(self):
        return self.src == self.dst

    def triple(self):
        return (self.src, self.dst, self.shift)

    def __eq__(self, other):
        return isinstance(other, FaceMorphism) and self.triple() == other.triple()

    def __hash__(self):
        return hash(self.triple())

    def __repr__(self):
        return f"FaceMorphism({self.src} -> {self.dst}, shift={self.shift})"


def face_category(arr):
    """The category of faces of an essential toric arrangement."""
    return FaceCategory(arr)


class FaceCategory:
    def __init__(self, arr):
        if not arr.is_essential():
            raise ValueError("face enumeration requires an essential arrangement")
        self.arrangement = arr
        self.poset = arr.layer_poset()
        d = arr.dim
        planes = []
        self.plane_hypertorus = []
        self.plane_level = []
        for hidx, h in enumerate(arr.hypertori):
            a, theta = h.character, h.offset
            lo = sum(min(v, 0) for v in a)
            hi = sum(max(v, 0) for v in a)
            for k in range(math.floor(lo - theta) - 1, math.ceil(hi - theta) + 2):
                planes.append((a, theta + k))
                self.plane_hypertorus.append(hidx)
                self.plane_level.append(k)
        self.window = LinearArrangement(planes, d)
        self._enumerate_objects()
        self._enumerate_morphisms()

    # -- object enumeration -------------------------------------------------

    def _enumerate_objects(self):
        d = self.arrangement.dim
        faces = self.window.faces()
        self._zero_faces = [
            (sv, tuple(w)) for sv, w in faces.items() if self.window.face_dim(sv) == 0
        ]
        self._vertex_cache = {}
        lifts = []
        for sv in faces:
            if not self._meets_unit_box(sv):
                continue
            verts = self._vertices_of(sv)
            key, shift = _canonicalize_vertices(verts)
            lifts.append((key, shift, sv))
        self.objects = []
        for key in sorted({key for key, _, _ in lifts}):
            witness = _centroid(key)
            signs = self.window.sign_vector(witness)
            dim = self.window.face_dim(signs)
            support = self._support_layer(key, witness)
            self.objects.append(ToricFace(key, dim, witness, signs, support))
        self.objects.sort(key=lambda f: (f.dim, f.key))
        self._key_index = {}
        for i, face in enumerate(self.objects):
            face.index = i
            self._key_index[face.key] = i
        # window sign vector -> (object index, lift shift)
        self._sv_lift = {}
        for key, shift, sv in lifts:
            self._sv_lift[sv] = (self._key_index[key], shift)
        for face in self.objects:
            self._sv_lift.setdefault(face.signs, (face.index, (0,) * d))

    def _meets_unit_box(self, sv):
        d = self.arrangement.dim
        cons = sign_constraints(self.window.hyperplanes, sv)
        for i in range(d):
            unit = tuple(1 if j == i else 0 for j in range(d))
            cons.append((unit, Fraction(1), True))
            cons.append((tuple(-x for x in unit), Fraction(0), False))
        return feasible_point(cons, d) is not None

    def _vertices_of(self, sv):
        if sv not in self._vertex_cache:
            self._vertex_cache[sv] = [
                w for zsv, w in self._zero_faces if leq(zsv, sv)
            ]
        return self._vertex_cache[sv]

    def _support_layer(self, key, witness):
        support = set()
        for i, h in enumerate(self.arrangement.hypertori):
            vals = {
                sum(a * Fraction(c) for a, c in zip(h.character, v)) for v in key
            }
            if len(vals) == 1 and (vals.pop() - h.offset).denominator == 1:
                support.add(i)
        point = tuple(c - math.floor(c) for c in witness)
        return self.poset.layer_of_point(point, support)

    # -- morphism enumeration ----------------------------------------------

    def _enumerate_morphisms(self):
        faces = self.window.faces()
        self.morphisms = []
        self._mor = {}
        self._into = {i: [] for i in range(len(self.objects))}
        for g in self.objects:
            for fsv in faces:
                if not leq(fsv, g.signs):
                    continue
                verts = self._vertices_of(fsv)
                key, shift = _canonicalize_vertices(verts)
                f = self.objects[self._key_index[key]]
                lift_witness = _centroid(verts)
                att = tuple(
                    _sign(
                        sum(
                            a * x
                            for a, x in zip(
                                self.arrangement.hypertori[h].character,
                                _vec_sub(g.witness, lift_witness),
                            )
                        )
                    )
                    for h in sorted(f.support.support)
                )
                m = FaceMorphism(f.index, g.index, shift, att)
                self.morphisms.append(m)
                self._mor[m.triple()] = m
                self._into[g.index].append(m)
        self.morphisms.sort(key=lambda m: m.triple())
        for i in self._into:
            self._into[i].sort(key=lambda m: m.triple())

    # -- category structure --------------------------------------------------

    def __len__(self):
        return len(self.objects)

    def objects_of_dim(self, k):
        return [f for f in self.objects if f.dim == k]

    def euler_characteristic(self):
        return sum((-1) ** f.dim for f in self.objects)

    def identity(self, i):
        face = self.objects[i]
        zero = (0,) * self.arrangement.dim
        return self._mor[(i, i, zero)]

    def morphisms_between(self, i, j):
        return [m for m in self._into[j] if m.src == i]

    def morphisms_into(self, j):
        return list(self._into[j])

    def compose(self, m1, m2):
        """The composite of ``m1: F -> G`` and ``m2: G -> H``."""
        if m1.dst != m2.src:
            raise ValueError("morphisms are not composable")
        shift = tuple(a + b for a, b in zip(m1.shift, m2.shift))
        return self._mor[(m1.src, m2.dst, shift)]

    def local_faces(self, face):
        """The central arrangement at a face's support (with hypertorus indices)."""
        return local_arrangement(self.arrangement, face.support)

    # -- geometric maps -------------------------------------------------------

    def face_of_point(self, x):
        """The cell whose relative interior contains the torus point x."""
        r = tuple(Fraction(c) - math.floor(Fraction(c)) for c in x)
        sv = self.window.sign_vector(r)
        return self.objects[self._sv_lift[sv][0]]

    def _locate_lift(self, x):
        """(object index, shift) of the periodic cell whose relint contains x."""
        x = tuple(Fraction(c) for c in x)
        fl = tuple(math.floor(c) for c in x)
        r = tuple(c - f for c, f in zip(x, fl))
        idx, z0 = self._sv_lift[self.window.sign_vector(r)]
        return idx, tuple(a + b for a, b in zip(z0, fl))

    def translate_object(self, face, g):
        """The image cell under translation by a torus element fixing each hypertorus."""
        key, _ = _canonicalize_vertices([_vec_add(v, g) for v in face.vertices])
        if key not in self._key_index:
            raise ValueError("translation does not preserve the cellularization")
        return self.objects[self._key_index[key]]

    def translate_morphism(self, m, g):
        src = self.objects[m.src]
        dst = self.objects[m.dst]
        key_f, z_f = _canonicalize_vertices([_vec_add(v, g) for v in src.vertices])
        key_g, z_g = _canonicalize_vertices([_vec_add(v, g) for v in dst.vertices])
        shift = tuple(s + a - b for s, a, b in zip(m.shift, z_f, z_g))
        return self._mor[(self._key_index[key_f], self._key_index[key_g], shift)]

    def project_face(self, target, qmap, face):
        """Image of a cell in the category of a quotient arrangement."""
        return target.face_of_point(qmap.project_point(face.witness))

    def project_morphism(self, target, qmap, m):
        """Image of a morphism in the category of a quotient arrangement."""
        src = self.objects[m.src]
        dst = self.objects[m.dst]
        w_src = qmap.project_vector(_vec_add(src.witness, m.shift))
        w_dst = qmap.project_vector(dst.witness)
        i_src, z_src = target._locate_lift(w_src)
        i_dst, z_dst = target._locate_lift(w_dst)
        shift = tuple(a - b for a, b in zip(z_src, z_dst))
        return target._mor[(i_src, i_dst, shift)]


def _centroid(points):
    n = len(points)
    return tuple(sum(col) / n for col in zip(*points))


def _sign(v):
    return (v > 0) - (v < 0)
