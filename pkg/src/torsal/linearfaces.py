"""Faces, chambers and galleries of real rational hyperplane arrangements.

A hyperplane is ``(normal, offset)`` for ``{x : normal . x = offset}``; a
face is its sign vector, a tuple over the arrangement's hyperplane order
with entries in {-1, 0, +1}.  Enumeration is exact, via Fourier-Motzkin
witnesses.
"""

from fractions import Fraction
from itertools import combinations

from torsal import intlinalg as la
from torsal.feasibility import feasible_point, sign_constraints

__all__ = [
    "LinearArrangement",
    "compose",
    "leq",
    "separating_set",
    "nbc_sets",
]


def compose(g, k):
    """Face composition: the sign of g where nonzero, of k elsewhere."""
    return tuple(a if a else b for a, b in zip(g, k))


def leq(g, k):
    """Face order: g lies in the closure of k."""
    return all(a == 0 or a == b for a, b in zip(g, k))


def separating_set(c, d):
    """Indices of hyperplanes with strictly opposite signs on c and d."""
    return frozenset(i for i, (a, b) in enumerate(zip(c, d)) if a * b == -1)


class LinearArrangement:
    """A finite list of rational affine hyperplanes in R^dim."""

    def __init__(self, hyperplanes, dim):
        self.hyperplanes = [
            (tuple(int(v) for v in normal), Fraction(offset))
            for normal, offset in hyperplanes
        ]
        self.dim = dim
        for normal, _ in self.hyperplanes:
            if len(normal) != dim:
                raise ValueError("normal vector arity mismatch")
        self._faces = None
        self._adjacency = None

    def __len__(self):
        return len(self.hyperplanes)

    def is_central(self):
        return all(offset == 0 for _, offset in self.hyperplanes)

    # -- sign vectors ------------------------------------------------------

    def sign_vector(self, point):
        out = []
        for normal, offset in self.hyperplanes:
            v = sum(Fraction(a) * Fraction(x) for a, x in zip(normal, point)) - offset
            out.append(0 if v == 0 else (1 if v > 0 else -1))
        return tuple(out)

    def witness(self, signs):
        """A rational point with the given sign vector, or ``None``."""
        return feasible_point(sign_constraints(self.hyperplanes, signs), self.dim)

    # -- face enumeration --------------------------------------------------

    def faces(self):
        """All realizable sign vectors, mapped to a rational witness point."""
        if self._faces is None:
            partial = {(): [Fraction(0)] * self.dim}
            for i, (normal, offset) in enumerate(self.hyperplanes):
                prefix = self.hyperplanes[: i + 1]
                new = {}
                for signs, w in partial.items():
                    v = sum(Fraction(a) * Fraction(x) for a, x in zip(normal, w)) - offset
                    have = 0 if v == 0 else (1 if v > 0 else -1)
                    new[signs + (have,)] = w
                    if have == 0:
                        others = (-1, 1)
                    else:
                        # a convex face reaches the far side only through
                        # the hyperplane, so skip the far test on a miss
                        others = (0, -have)
                    for s in others:
                        cand = signs + (s,)
                        w2 = feasible_point(sign_constraints(prefix, cand), self.dim)
                        if w2 is not None:
                            new[cand] = w2
                        elif s == 0:
                            break
                partial = new
            self._faces = partial
        return self._faces

    def chambers(self):
        return sorted(sv for sv in self.faces() if 0 not in sv)

    def face_dim(self, signs):
        """Dimension of the face: ambient dim minus rank of its zero set."""
        zeros = [self.hyperplanes[i][0] for i, s in enumerate(signs) if s == 0]
        if not zeros:
            return self.dim
        return self.dim - la.rational_rank(zeros)

    def faces_of_dim(self, k):
        return sorted(sv for sv in self.faces() if self.face_dim(sv) == k)

    # -- flats (central arrangements) ---------------------------------------

    def flat_closure(self, index_set):
        """All hyperplane indices containing the intersection of the given ones."""
        if not self.is_central():
            raise ValueError("flats are only defined for central arrangements")
        idx = sorted(index_set)
        base = [self.hyperplanes[i][0] for i in idx]
        r = la.rational_rank(base)
        out = set()
        for j, (normal, _) in enumerate(self.hyperplanes):
            if la.rational_rank(base + [normal]) == r:
                out.add(j)
        return frozenset(out)

    def flat_dim(self, index_set):
        normals = [self.hyperplanes[i][0] for i in index_set]
        return self.dim - la.rational_rank(normals)

    # -- chamber operations --------------------------------------------------

    def closest_chamber(self, g, c):
        """The chamber adjacent to face g on the same side as chamber c."""
        out = compose(g, c)
        if 0 in out:
            raise ValueError("composition with a chamber must be a chamber")
        return out

    def opposite_chamber(self, c, flip_indices):
        """Flip the signs of c on exactly the given hyperplanes.

        ``flip_indices`` must be flat-closed (use :meth:`flat_closure`); c
        must be adjacent to the flat, meaning the face supported there with
        c's remaining signs is realizable with the flat's full dimension.
        """
        flip = set(flip_indices)
        wall = tuple(0 if i in flip else s for i, s in enumerate(c))
        if wall not in self.faces():
            raise ValueError("chamber is not adjacent to the flat")
        if self.face_dim(wall) != self.flat_dim(flip):
            raise ValueError("chamber is not adjacent to the flat")
        out = tuple(-s if i in flip else s for i, s in enumerate(c))
        if out not in self.faces():
            raise ValueError("opposite chamber is not realizable")
        return out

    # -- galleries -------------------------------------------------------------

    def _adjacency_map(self):
        if self._adjacency is None:
            chambers = self.chambers()
            adj = {c: [] for c in chambers}
            for c, d in combinations(chambers, 2):
                diff = [i for i, (a, b) in enumerate(zip(c, d)) if a != b]
                if len(diff) == 1:
                    adj[c].append((diff[0], d))
                    adj[d].append((diff[0], c))
            for c in adj:
                adj[c].sort()
            self._adjacency = adj
        return self._adjacency

    def minimal_gallery(self, c, d):
        """Chamber sequence from c to d of length |S(c,d)|.

        Ties are broken toward the lexicographically least wall index
        sequence, so the result is deterministic.
        """
        adj = self._adjacency_map()
        if c not in adj or d not in adj:
            raise ValueError("gallery endpoints must be chambers")
        gallery = [c]
        current = c
        while current != d:
            remaining = separating_set(current, d)
            step = None
            for wall, neighbor in adj[current]:
                if wall in remaining:
                    step = neighbor
                    break
            if step is None:
                raise RuntimeError("gallery construction stalled")
            gallery.append(step)
            current = step
        return gallery

    def gallery_walls(self, gallery):
        walls = []
        for c, d in zip(gallery, gallery[1:]):
            diff = [i for i, (a, b) in enumerate(zip(c, d)) if a != b]
            if len(diff) != 1:
                raise ValueError("consecutive gallery chambers are not adjacent")
            walls.append(diff[0])
        return walls


def nbc_sets(normals, size=None, reverse=False):
    """Subsets containing no broken circuit, under the index order.

    ``normals`` has one entry per hyperplane of a central arrangement; a
    broken circuit is a circuit minus its least element (largest when
    ``reverse``).  Returns the antichain-of-interest as sorted tuples,
    grouped by size unless ``size`` is given.
    """
    n = len(normals)
    full_rank = la.rational_rank(list(normals))

    def rank_of(subset):
        return la.rational_rank([normals[i] for i in subset])

    circuits = []
    for k in range(2, full_rank + 2):
        for subset in combinations(range(n), k):
            if rank_of(subset) < len(subset) and all(
                rank_of(c) == len(c) for c in combinations(subset, len(subset) - 1)
            ):
                circuits.append(frozenset(subset))
    broken = []
    for circ in circuits:
        drop = max(circ) if reverse else min(circ)
        broken.append(circ - {drop})

    sizes = [size] if size is not None else list(range(full_rank + 1))
    out = {}
    for k in sizes:
        found = []
        for subset in combinations(range(n), k):
            s = set(subset)
            if rank_of(subset) < k:
                continue
            if any(b <= s for b in broken):
                continue
            found.append(subset)
        out[k] = found
    return out[size] if size is not None else out
