"""Tests for chains, homology with torsion, cup products and functors."""

import functools
import random
from fractions import Fraction

import pytest

from torsal import chains
from torsal.chains import (
    CellularFunctor,
    ChainVec,
    CochainVec,
    boundary,
    boundary_witness,
    coboundary,
    cohomology,
    cup_product,
    dual_basis_cochains,
    homology,
    identity_functor,
    inclusion_functor,
    is_cocycle,
    is_cycle,
    pair,
    pullback,
    pushforward,
    unit_cochain,
)
from torsal.model import ToricArrangement
from torsal.salvetti import AcyclicCategory, NerveComplex, nerve, toric_salvetti

EX_DATA = [((1, 0), 0), ((1, 2), 0), ((0, 1), 0)]


@functools.lru_cache(maxsize=None)
def ex_salvetti():
    return toric_salvetti(ToricArrangement(2, EX_DATA))


@functools.lru_cache(maxsize=None)
def ex_nerve():
    return nerve(ex_salvetti())


@functools.lru_cache(maxsize=None)
def torus_sub():
    ts = ex_salvetti()
    layer = ts.arrangement.layer_poset().minimum()
    return ts.subcomplex(layer, (1, 1, 1))


@functools.lru_cache(maxsize=None)
def torus_nerve():
    return nerve(torus_sub())


def simplicial_complex_category(top_faces):
    """The face poset of a simplicial complex as an acyclic category."""
    faces = set()
    for f in top_faces:
        f = tuple(sorted(f))
        for mask in range(1, 1 << len(f)):
            faces.add(tuple(f[i] for i in range(len(f)) if mask >> i & 1))
    labels = sorted(faces, key=lambda f: (len(f), f))
    index = {f: i for i, f in enumerate(labels)}
    arrows = [
        (index[a], index[b], None)
        for a in labels
        for b in labels
        if a != b and set(a) <= set(b)
    ]
    return AcyclicCategory(labels, arrows)


# the unique 6 vertex triangulation of the real projective plane
RP2_TRIANGLES = [
    (1, 2, 4), (1, 2, 5), (1, 3, 4), (1, 3, 6), (1, 5, 6),
    (2, 3, 5), (2, 3, 6), (2, 4, 6), (3, 4, 5), (4, 5, 6),
]


@functools.lru_cache(maxsize=None)
def rp2_nerve():
    return nerve(simplicial_complex_category(RP2_TRIANGLES))


# ---------------------------------------------------------------------------
# sparse vector algebra
# ---------------------------------------------------------------------------


def test_vector_algebra():
    a = ChainVec(1, {0: 2, 3: -1})
    b = ChainVec(1, {0: -2, 5: 4})
    assert (a + b).coeffs == {3: -1, 5: 4}
    assert (a - a).coeffs == {}
    assert (-a).coeffs == {0: -2, 3: 1}
    assert (3 * a).coeffs == {0: 6, 3: -3}
    assert (0 * a).coeffs == {}
    assert a.get(0) == 2 and a.get(99) == 0
    assert ChainVec(1, {2: Fraction(4, 2)}).coeffs == {2: 2}
    assert not ChainVec(1, {0: 0})


def test_vector_kind_and_degree_mismatch():
    with pytest.raises(ValueError):
        ChainVec(1, {0: 1}) + ChainVec(2, {0: 1})
    with pytest.raises(ValueError):
        ChainVec(1, {0: 1}) + CochainVec(1, {0: 1})
    with pytest.raises(ValueError):
        pair(ChainVec(1, {0: 1}), CochainVec(2, {0: 1}))


# ---------------------------------------------------------------------------
# boundaries and the pairing
# ---------------------------------------------------------------------------


def test_boundary_of_an_arrow():
    nv = ex_nerve()
    src, dst, _ = nv.category.arrows[17]
    d = boundary(nv, ChainVec(1, {17: 1}))
    assert d.coeffs == {dst: 1, src: -1}


def test_boundary_coboundary_adjoint():
    nv = torus_nerve()
    rng = random.Random(9)
    for k in (1, 2):
        chain = ChainVec(
            k, {rng.randrange(nv.rank(k)): rng.randint(-2, 2) for _ in range(8)}
        )
        cochain = CochainVec(
            k - 1,
            {rng.randrange(nv.rank(k - 1)): rng.randint(-2, 2) for _ in range(8)},
        )
        assert pair(boundary(nv, chain), cochain) == pair(
            chain, coboundary(nv, cochain)
        )


def test_boundary_squares_to_zero_on_rp2():
    nv = rp2_nerve()
    for k in (2,):
        for j in range(0, nv.rank(k), 7):
            assert not boundary(nv, boundary(nv, ChainVec(k, {j: 1})))


# ---------------------------------------------------------------------------
# homology and cohomology with torsion
# ---------------------------------------------------------------------------


def test_rp2_homology():
    nv = rp2_nerve()
    h0, h1, h2 = homology(nv, 0), homology(nv, 1), homology(nv, 2)
    assert (h0.rank, h0.torsion) == (1, ())
    assert (h1.rank, h1.torsion) == (0, (2,))
    assert (h2.rank, h2.torsion) == (0, ())
    # over the rationals the torsion disappears
    assert homology(nv, 1, coefficients="Q").torsion == ()
    assert homology(nv, 1, coefficients="Q").rank == 0


def test_rp2_cohomology_shifts_torsion():
    nv = rp2_nerve()
    assert cohomology(nv, 1).rank == 0
    assert cohomology(nv, 1).torsion == ()
    assert cohomology(nv, 2).rank == 0
    assert cohomology(nv, 2).torsion == (2,)


def test_rp2_torsion_representative():
    nv = rp2_nerve()
    h1 = homology(nv, 1)
    z = h1.torsion_basis[0]
    assert is_cycle(nv, z)
    # the class is two-torsion: twice the cycle bounds, once does not
    assert boundary_witness(nv, z) is None
    w = boundary_witness(nv, 2 * z)
    assert w is not None and boundary(nv, w) == 2 * z


def test_bad_coefficients_rejected():
    with pytest.raises(ValueError):
        homology(rp2_nerve(), 1, coefficients="R")


def test_ex_homology_basis_and_coordinates():
    nv = ex_nerve()
    h1 = homology(nv, 1)
    assert (h1.rank, h1.torsion) == (5, ())
    basis = h1.basis
    assert all(is_cycle(nv, c) for c in basis)
    for i, c in enumerate(basis):
        want = [0] * 5
        want[i] = 1
        assert h1.coordinates(c) == want
    mix = 3 * basis[0] - 2 * basis[4]
    assert h1.coordinates(mix) == [3, 0, 0, 0, -2]
    # shifting by a boundary does not change coordinates
    shift = boundary(nv, ChainVec(2, {11: 5, 200: -1}))
    assert h1.coordinates(mix + shift) == [3, 0, 0, 0, -2]
    with pytest.raises(ValueError):
        h1.coordinates(ChainVec(1, {0: 1}))  # a single arrow is not a cycle


def test_ex_cohomology_basis():
    nv = ex_nerve()
    hc1 = cohomology(nv, 1)
    assert (hc1.rank, hc1.torsion) == (5, ())
    basis = hc1.basis
    assert all(is_cocycle(nv, c) for c in basis)
    for i, c in enumerate(basis):
        want = [0] * 5
        want[i] = 1
        assert hc1.coordinates(c) == want
    assert cohomology(nv, 2).rank == 7
    assert cohomology(nv, 0).rank == 1


def test_torus_subcomplex_homology():
    nv = torus_nerve()
    assert homology(nv, 1).rank == 2
    assert homology(nv, 2).rank == 1
    assert homology(nv, 1).torsion == ()
    top = homology(nv, 2).basis[0]
    assert is_cycle(nv, top)


def test_boundary_witness_roundtrip():
    nv = torus_nerve()
    rng = random.Random(21)
    w0 = ChainVec(2, {rng.randrange(nv.rank(2)): rng.randint(-2, 2) for _ in range(6)})
    target = boundary(nv, w0)
    w = boundary_witness(nv, target)
    assert w is not None and boundary(nv, w) == target
    # a homologically nontrivial cycle has no witness
    z = homology(nv, 1).basis[0]
    assert boundary_witness(nv, z) is None


def test_empty_degrees():
    nv = rp2_nerve()
    assert homology(nv, 5).rank == 0
    assert homology(nv, 5).basis == []
    assert cohomology(nv, 5).rank == 0


# ---------------------------------------------------------------------------
# cup products
# ---------------------------------------------------------------------------


def test_unit_cochain_is_a_unit():
    nv = torus_nerve()
    u = unit_cochain(nv)
    assert is_cocycle(nv, u)
    rng = random.Random(4)
    for k in (0, 1, 2):
        x = CochainVec(
            k, {rng.randrange(nv.rank(k)): rng.randint(-2, 2) for _ in range(6)}
        )
        assert cup_product(nv, u, x) == x
        assert cup_product(nv, x, u) == x


def test_cup_is_associative_on_cochains():
    nv = torus_nerve()
    rng = random.Random(8)

    def rand(k, n=5):
        return CochainVec(
            k, {rng.randrange(nv.rank(k)): rng.randint(-2, 2) for _ in range(n)}
        )

    for degrees in [(0, 1, 1), (1, 0, 1), (1, 1, 0), (0, 0, 2)]:
        a, b, c = (rand(k) for k in degrees)
        left = cup_product(nv, cup_product(nv, a, b), c)
        right = cup_product(nv, a, cup_product(nv, b, c))
        assert left == right


def test_cup_of_cocycles_is_a_cocycle():
    nv = torus_nerve()
    h1 = cohomology(nv, 1)
    a, b = h1.basis[0], h1.basis[1]
    ab = cup_product(nv, a, b)
    assert is_cocycle(nv, ab)


def test_cup_degree_overflow_is_zero():
    nv = torus_nerve()
    h1 = cohomology(nv, 1)
    top = cohomology(nv, nv.dimension)
    if top.rank:
        x = top.basis[0]
        assert not cup_product(nv, x, h1.basis[0])


def test_torus_cup_structure():
    # on a 2-torus the two degree one classes multiply to a fundamental
    # class and each squares to zero in cohomology
    nv = torus_nerve()
    h1 = cohomology(nv, 1)
    h2_cycles = homology(nv, 2)
    a, b = h1.basis
    ab = cup_product(nv, a, b)
    ba = cup_product(nv, b, a)
    top = h2_cycles.basis[0]
    assert pair(top, ab) != 0
    # graded commutativity holds on classes, not cochains
    assert pair(top, ab) == -pair(top, ba)
    for x in (a, b):
        sq = cup_product(nv, x, x)
        assert pair(top, sq) == 0


def test_graded_commutativity_up_to_coboundary():
    nv = torus_nerve()
    h1 = cohomology(nv, 1)
    a, b = h1.basis
    diff = cup_product(nv, a, b) + cup_product(nv, b, a)
    # the symmetrized product pairs to zero against every 2-cycle
    h2 = homology(nv, 2)
    assert all(pair(z, diff) == 0 for z in h2.basis)
    assert is_cocycle(nv, diff)


# ---------------------------------------------------------------------------
# dual bases
# ---------------------------------------------------------------------------


def test_dual_basis_pairs_as_identity():
    nv = ex_nerve()
    for k in (1, 2):
        hk = homology(nv, k)
        duals = dual_basis_cochains(nv, hk.basis)
        assert all(is_cocycle(nv, d) for d in duals)
        for i, c in enumerate(hk.basis):
            for j, d in enumerate(duals):
                assert pair(c, d) == (1 if i == j else 0)


def test_dual_basis_rejects_dependent_cycles():
    nv = ex_nerve()
    h1 = homology(nv, 1)
    z = h1.basis[0]
    with pytest.raises(ValueError):
        dual_basis_cochains(nv, [z, 2 * z])
    # a boundary is dependent with anything, even alone
    b = boundary(nv, ChainVec(2, {3: 1}))
    with pytest.raises(ValueError):
        dual_basis_cochains(nv, [b])


def test_dual_basis_empty():
    assert dual_basis_cochains(ex_nerve(), []) == []


# ---------------------------------------------------------------------------
# cellular functors
# ---------------------------------------------------------------------------


def test_identity_functor_roundtrip():
    nv = torus_nerve()
    f = identity_functor(nv)
    z = homology(nv, 1).basis[0]
    assert pushforward(f, z) == z
    d = cohomology(nv, 1).basis[0]
    assert pullback(f, d) == d


def test_inclusion_functor_adjointness():
    ts = ex_salvetti()
    sub = torus_sub()
    nv, amb = torus_nerve(), ex_nerve()
    f = inclusion_functor(nv, amb, sub.object_ids)
    rng = random.Random(12)
    for k in (1, 2):
        chain = ChainVec(
            k, {rng.randrange(nv.rank(k)): rng.randint(-2, 2) for _ in range(7)}
        )
        cochain = CochainVec(
            k, {rng.randrange(amb.rank(k)): rng.randint(-2, 2) for _ in range(7)}
        )
        assert pair(pushforward(f, chain), cochain) == pair(
            chain, pullback(f, cochain)
        )


def test_inclusion_commutes_with_boundary():
    sub = torus_sub()
    nv, amb = torus_nerve(), ex_nerve()
    f = inclusion_functor(nv, amb, sub.object_ids)
    rng = random.Random(13)
    chain = ChainVec(2, {rng.randrange(nv.rank(2)): 1 for _ in range(9)})
    assert boundary(amb, pushforward(f, chain)) == pushforward(
        f, boundary(nv, chain)
    )


def test_pullback_is_multiplicative_for_inclusions():
    sub = torus_sub()
    nv, amb = torus_nerve(), ex_nerve()
    f = inclusion_functor(nv, amb, sub.object_ids)
    hc1 = cohomology(amb, 1)
    a, b = hc1.basis[0], hc1.basis[1]
    left = pullback(f, cup_product(amb, a, b))
    right = cup_product(nv, pullback(f, a), pullback(f, b))
    assert left == right


def test_collapse_functor_kills_chains():
    # collapse a two object poset onto a single point
    src_cat = AcyclicCategory(["a", "b"], [(0, 1, None)])
    dst_cat = AcyclicCategory(["pt"], [])
    src, dst = NerveComplex(src_cat), NerveComplex(dst_cat)
    f = CellularFunctor(src, dst, [0, 0], [None])
    assert pushforward(f, ChainVec(1, {0: 1})).coeffs == {}
    assert pushforward(f, ChainVec(0, {0: 1, 1: 2})).coeffs == {0: 3}
    assert pullback(f, CochainVec(0, {0: 1})).coeffs == {0: 1, 1: 1}


def test_functor_validation():
    # arrows are kept sorted: index 0 is (0,1), 1 is (0,2), 2 is (1,2)
    cat3 = AcyclicCategory([0, 1, 2], [(0, 1, None), (1, 2, None), (0, 2, None)])
    cat2 = AcyclicCategory([0, 1], [(0, 1, None)])
    pair_cat = AcyclicCategory([0, 1], [(0, 1, "x"), (0, 1, "y")])
    n3, n2 = NerveComplex(cat3), NerveComplex(cat2)
    np = NerveComplex(pair_cat)
    with pytest.raises(ValueError):
        CellularFunctor(n3, n2, [0, 1], [0, 0, None])  # object map too short
    with pytest.raises(ValueError):
        # collapsing an arrow whose endpoints map to different objects
        CellularFunctor(n3, n2, [0, 1, 1], [0, None, 0])
    with pytest.raises(ValueError):
        # endpoint compatible, but the composite lands on the wrong arrow
        CellularFunctor(n3, np, [0, 1, 1], [0, 1, None])


def test_functor_composition_check_passes_for_projection():
    # project the poset 0 < 1 < 2 onto 0 < 1 by merging the top two
    cat3 = AcyclicCategory([0, 1, 2], [(0, 1, None), (1, 2, None), (0, 2, None)])
    cat2 = AcyclicCategory([0, 1], [(0, 1, None)])
    n3, n2 = NerveComplex(cat3), NerveComplex(cat2)
    f = CellularFunctor(n3, n2, [0, 1, 1], [0, 0, None])
    z = ChainVec(1, {cat3.arrow_index((0, 1, None)): 1,
                     cat3.arrow_index((1, 2, None)): 1})
    assert pushforward(f, z).coeffs == {0: 1}
