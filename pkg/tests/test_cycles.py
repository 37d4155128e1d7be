"""Tests for the explicit 1-cycles and the cellular maps between models."""

import functools
import math
import random
from fractions import Fraction

import pytest

from torsal import chains, cycles, intlinalg
from torsal.linearfaces import leq
from torsal.model import ToricArrangement, arrangement_A0, chamber_extension, x_flat
from torsal.salvetti import nerve, toric_salvetti

EX_DATA = [((1, 0), 0), ((1, 2), 0), ((0, 1), 0)]

HALF = Fraction(1, 2)

# chambers of the direction arrangement, ordered (x, x + 2y, y)
B0 = (-1, 1, 1)
B1 = (-1, -1, 1)
ALL_CHAMBERS = [
    (-1, -1, -1), (-1, -1, 1), (-1, 1, 1),
    (1, -1, -1), (1, 1, -1), (1, 1, 1),
]


@functools.lru_cache(maxsize=None)
def ex_arrangement():
    return ToricArrangement(2, EX_DATA)


@functools.lru_cache(maxsize=None)
def ex_model():
    return toric_salvetti(ex_arrangement())


@functools.lru_cache(maxsize=None)
def ex_nerve():
    return nerve(ex_model(), max_degree=2)


@functools.lru_cache(maxsize=None)
def ex_h1():
    return chains.homology(ex_nerve(), 1)


def ex_layers():
    poset = ex_arrangement().layer_poset()
    return {
        "T": poset.minimum(),
        "P": poset.layer_of_point((0, 0), {0, 1, 2}),
        "Q": poset.layer_of_point((0, HALF), {0, 1}),
        "H0": poset.layer_of_point((0, Fraction(1, 3)), {0}),
        "H1": poset.layer_of_point((Fraction(1, 3), Fraction(1, 3)), {1}),
        "H2": poset.layer_of_point((Fraction(1, 3), 0), {2}),
    }


@functools.lru_cache(maxsize=None)
def ex_gallery(support):
    layers = ex_layers()
    name = {(0,): "H0", (1,): "H1", (2,): "H2"}[support]
    return cycles.choice_gallery(ex_arrangement(), layers[name])


def faces_over(layer):
    model = ex_model()
    return [f for f in model.cells.objects if f.support.key == layer.key]


def omega_coords(h):
    model = ex_model()
    return ex_h1().coordinates(cycles.omega_generator(model, h).chain(ex_nerve()))


def random_toric(rng, dim, max_tori=3, max_denominator=3):
    while True:
        seen = set()
        tori = []
        for _ in range(rng.randint(dim, max_tori)):
            a = tuple(rng.randint(-2, 2) for _ in range(dim))
            if not any(a):
                continue
            g = math.gcd(*(abs(x) for x in a))
            a = tuple(x // g for x in a)
            lead = next(v for v in a if v)
            if lead < 0:
                a = tuple(-x for x in a)
            q = rng.randint(1, max_denominator)
            theta = Fraction(rng.randrange(q), q)
            if (a, theta) in seen:
                continue
            seen.add((a, theta))
            tori.append((a, theta))
        arr = ToricArrangement(dim, tori)
        if arr.is_essential():
            return arr


# ---------------------------------------------------------------------------
# galleries
# ---------------------------------------------------------------------------


def test_gallery_default_pins():
    g = ex_gallery((0,))
    assert g.chamber == (-1, -1, -1)
    assert g.flat == frozenset({0})
    assert g.k == 2
    assert g.walls == (2, 1)
    assert g.gallery[0] == g.chamber
    # endpoint keeps the flat signs and flips the transverse ones
    assert g.gallery[-1] == (-1, 1, 1)


def test_gallery_crosses_each_transverse_direction_once():
    arr = ex_arrangement()
    layers = ex_layers()
    for name in ("H0", "H1", "H2"):
        layer = layers[name]
        flat = x_flat(arr, layer)
        a0, _ = arrangement_A0(arr)
        for chamber in cycles.adjacent_chambers(a0, flat):
            g = cycles.choice_gallery(arr, layer, chamber)
            assert sorted(g.walls) == sorted(set(range(3)) - flat)
            assert len(g.gallery) == g.k + 1


def test_gallery_rejects_bad_input():
    arr = ex_arrangement()
    layers = ex_layers()
    with pytest.raises(ValueError):
        cycles.choice_gallery(arr, layers["P"])
    with pytest.raises(ValueError):
        cycles.choice_gallery(arr, layers["H0"], (1, 1, -1))


# ---------------------------------------------------------------------------
# paths over faces
# ---------------------------------------------------------------------------


def test_path_pins_over_vertices():
    model = ex_model()
    layers = ex_layers()
    g = ex_gallery((0,))
    (p_face,) = faces_over(layers["P"])
    (q_face,) = faces_over(layers["Q"])
    path_p = cycles.build_path(model, B0, p_face, g)
    assert path_p.k == 2
    assert path_p.wall_hypertori == (2, 1)
    assert path_p.base == chamber_extension(ex_arrangement(), B0, p_face.support)
    path_q = cycles.build_path(model, B0, q_face, g)
    assert path_q.k == 1
    assert path_q.wall_hypertori == (1,)


def test_path_over_edges_is_a_single_vertex():
    model = ex_model()
    layers = ex_layers()
    g = ex_gallery((0,))
    for f in faces_over(layers["H0"]):
        path = cycles.build_path(model, B0, f, g)
        assert path.k == 0
        assert len(path.chambers) == 1


def test_path_rejects_face_off_the_layer():
    model = ex_model()
    layers = ex_layers()
    g = ex_gallery((0,))
    off = faces_over(layers["H2"])[0]
    with pytest.raises(ValueError):
        cycles.build_path(model, B0, off, g)


# ---------------------------------------------------------------------------
# circle cycles
# ---------------------------------------------------------------------------


def test_lambda_cycles_close_and_look_like_circles():
    model = ex_model()
    layers = ex_layers()
    nc = ex_nerve()
    expected_ell = {"H0": 2, "H1": 2, "H2": 1}
    for name, ell in expected_ell.items():
        g = ex_gallery(tuple(sorted(layers[name].support)))
        for base in ALL_CHAMBERS:
            lam = cycles.build_lambda(model, base, layers[name], g)
            assert lam.ell == ell
            assert len(lam.edge_faces) == ell
            assert chains.is_cycle(nc, lam.chain(nc))
            # the coefficient-carrying arrows form one closed circuit
            degree = {}
            edges = set()
            for src, dst, _ in lam.arrow_coeffs:
                degree[src] = degree.get(src, 0) + 1
                degree[dst] = degree.get(dst, 0) + 1
                edges.add((src, dst))
            assert set(degree) == set(lam.objects)
            assert all(d == 2 for d in degree.values())
            seen = {lam.objects[0]}
            frontier = [lam.objects[0]]
            while frontier:
                x = frontier.pop()
                for s, d in edges:
                    for y in ((d,) if s == x else ()) + ((s,) if d == x else ()):
                        if y not in seen:
                            seen.add(y)
                            frontier.append(y)
            assert seen == set(lam.objects)


def test_lambda_torus_classes_are_primitive_tangents():
    model = ex_model()
    layers = ex_layers()
    expected = {"H0": (0, 1), "H1": (2, -1), "H2": (1, 0)}
    for name, tangent in expected.items():
        g = ex_gallery(tuple(sorted(layers[name].support)))
        lam = cycles.build_lambda(model, B0, layers[name], g)
        assert lam.torus_class() == tangent
        # winding is orthogonal to the defining character
        char = EX_DATA[int(name[1])][0]
        assert sum(a * v for a, v in zip(char, tangent)) == 0


def test_lambda_basis_pair_independent_over_q():
    model = ex_model()
    layers = ex_layers()
    nc = ex_nerve()
    h1 = ex_h1()
    rows = [
        h1.coordinates(cycles.build_lambda(model, B0, layers["H0"]).chain(nc)),
        h1.coordinates(cycles.build_lambda(model, B0, layers["H2"]).chain(nc)),
    ]
    assert intlinalg.rational_rank(rows) == 2


def test_h1_rank_is_torus_rank_plus_number_of_hypertori():
    h1 = ex_h1()
    assert h1.rank == 2 + 3
    assert h1.torsion == ()
    rng = random.Random(7)
    arr = random_toric(rng, 2)
    nc = nerve(toric_salvetti(arr), max_degree=2)
    assert chains.homology(nc, 1).rank == 2 + len(arr)


def test_lambda_class_depends_only_on_transverse_orientation():
    # galleries from chambers with equal transverse signs give homologous
    # circles; flipping the transverse signs reverses the cycle exactly
    model = ex_model()
    layers = ex_layers()
    arr = ex_arrangement()
    nc = ex_nerve()
    h1 = ex_h1()
    g = ex_gallery((0,))
    g_same = cycles.choice_gallery(arr, layers["H0"], (1, -1, -1))
    g_flip = cycles.choice_gallery(arr, layers["H0"], (-1, 1, 1))
    lam = cycles.build_lambda(model, B0, layers["H0"], g)
    lam_same = cycles.build_lambda(model, B0, layers["H0"], g_same)
    lam_flip = cycles.build_lambda(model, B0, layers["H0"], g_flip)
    assert h1.coordinates(lam.chain(nc)) == h1.coordinates(lam_same.chain(nc))
    witness = chains.boundary_witness(nc, lam.chain(nc) - lam_same.chain(nc))
    assert witness is not None
    assert lam_flip.arrow_coeffs == {k: -v for k, v in lam.arrow_coeffs.items()}


def test_lambda_walk_labels_follow_the_landing_rule():
    model = ex_model()
    layers = ex_layers()
    for name in ("H0", "H2"):
        g = ex_gallery(tuple(sorted(layers[name].support)))
        lam = cycles.build_lambda(model, B0, layers[name], g)
        ell = lam.ell
        for i in range(ell):
            p_now = lam.vertex_faces[i]
            g_now = lam.edge_faces[i]
            p_next = lam.vertex_faces[(i + 1) % ell]
            src = model.object_index(g_now, lam.paths[g_now].vertex(0))
            path_now = lam.paths[p_now]
            path_next = lam.paths[p_next]
            end = model.object_index(p_now, path_now.vertex(path_now.k))
            start = model.object_index(p_next, path_next.vertex(0))
            picked = {
                (s, d): c for (s, d, _), c in lam.arrow_coeffs.items() if s == src
            }
            assert picked[(src, end)] == -1
            assert picked[(src, start)] == 1


def test_lambda_edge_after_least_vertex_sits_against_the_negated_base():
    # with the gallery based at the chamber equal to the base, the edge
    # following each vertex attaches on the side of the negated base
    model = ex_model()
    layers = ex_layers()
    arr = ex_arrangement()
    base = (-1, -1, -1)
    g = cycles.choice_gallery(arr, layers["H0"], base)
    lam = cycles.build_lambda(model, base, layers["H0"], g)
    cells = model.cells
    for i in range(lam.ell):
        p_idx = lam.vertex_faces[i]
        g_idx = lam.edge_faces[i]
        local_base = chamber_extension(arr, base, cells.objects[p_idx].support)
        negated = tuple(-s for s in local_base)
        ends = [
            m for m in cells.morphisms_into(g_idx)
            if not m.is_identity and m.src == p_idx
        ]
        adjacent = [m for m in ends if leq(m.attachment, negated)]
        assert len(adjacent) == 1
        src = model.object_index(g_idx, lam.paths[g_idx].vertex(0))
        path_p = lam.paths[p_idx]
        end = model.object_index(p_idx, path_p.vertex(path_p.k))
        assert lam.arrow_coeffs[(src, end, adjacent[0].triple())] == -1


def test_lambda_contained_in_strata_of_the_base():
    model = ex_model()
    layers = ex_layers()
    arr = ex_arrangement()
    lam = cycles.build_lambda(model, B0, layers["H0"])
    whole = model.subcomplex(layers["T"], B0)
    assert set(lam.objects) <= set(whole.object_ids)
    flat = x_flat(arr, layers["H0"])
    face0 = tuple(0 if i in flat else s for i, s in enumerate(B0))
    layer_part = model.subcomplex(layers["H0"], face0)
    assert set(lam.objects) <= set(layer_part.object_ids)


def test_lambda_rejects_bad_input():
    model = ex_model()
    layers = ex_layers()
    with pytest.raises(ValueError):
        cycles.build_lambda(model, (0, 1, 1), layers["H0"])
    with pytest.raises(ValueError):
        cycles.build_lambda(model, B0, layers["H1"], ex_gallery((0,)))


# ---------------------------------------------------------------------------
# square cycles
# ---------------------------------------------------------------------------


def test_omega_identity_square_is_the_full_fiber():
    model = ex_model()
    nc = ex_nerve()
    for h in range(3):
        om = cycles.omega_generator(model, h)
        assert om.hypertorus == h
        ids = {model.object_index(om.face.index, p) for p in om.objects}
        assert ids == set(model.fiber_objects(om.face.index))
        assert chains.is_cycle(nc, om.chain(nc))


def test_omega_chain_does_not_depend_on_the_side_chamber():
    model = ex_model()
    arr = ex_arrangement()
    layers = ex_layers()
    a0, _ = arrangement_A0(arr)
    for h, name in enumerate(("H0", "H1", "H2")):
        flat = x_flat(arr, layers[name])
        options = cycles.adjacent_chambers(a0, flat)
        reference = cycles.omega_generator(model, h, options[0])
        for chamber in options[1:]:
            other = cycles.omega_generator(model, h, chamber)
            assert other.arrow_coeffs == reference.arrow_coeffs


def test_omega_class_independent_of_the_morphism():
    model = ex_model()
    cells = model.cells
    layers = ex_layers()
    nc = ex_nerve()
    h1 = ex_h1()
    for h, name in enumerate(("H0", "H1", "H2")):
        key = layers[name].key
        ms = [m for m in cells.morphisms if cells.objects[m.dst].support.key == key]
        assert len(ms) >= 3
        coords = [h1.coordinates(cycles.build_omega(model, m).chain(nc)) for m in ms]
        assert all(c == coords[0] for c in coords)


def test_omega_rejects_targets_off_hypertori():
    model = ex_model()
    layers = ex_layers()
    (p_face,) = faces_over(layers["P"])
    with pytest.raises(ValueError):
        cycles.build_omega(model, model.cells.identity(p_face.index))
    top = [f for f in model.cells.objects if f.support.rank == 0][0]
    with pytest.raises(ValueError):
        cycles.build_omega(model, model.cells.identity(top.index))
    with pytest.raises(ValueError):
        cycles.omega_generator(model, 1, (1, 1, 1))


# ---------------------------------------------------------------------------
# wall squares
# ---------------------------------------------------------------------------


def test_xi_squares_sit_on_the_crossing_wall():
    model = ex_model()
    layers = ex_layers()
    nc = ex_nerve()
    g = ex_gallery((0,))
    (p_face,) = faces_over(layers["P"])
    xi2 = cycles.build_xi(model, 2, B0, p_face, g)
    assert xi2.position == 0
    xi1 = cycles.build_xi(model, 1, B0, p_face, g)
    assert xi1.position == 1
    for xi in (xi1, xi2):
        assert chains.is_cycle(nc, xi.chain(nc))
        assert len(xi.arrow_coeffs) == 4


def test_xi_base_dependence_matches_the_separating_set():
    # W1 separates B0 from B1, W2 does not: the square over H2 is shared
    # while the square over H1 flips orientation
    model = ex_model()
    layers = ex_layers()
    g = ex_gallery((0,))
    (p_face,) = faces_over(layers["P"])
    assert (
        cycles.build_xi(model, 2, B0, p_face, g).arrow_coeffs
        == cycles.build_xi(model, 2, B1, p_face, g).arrow_coeffs
    )
    flipped = cycles.build_xi(model, 1, B1, p_face, g).arrow_coeffs
    reference = cycles.build_xi(model, 1, B0, p_face, g).arrow_coeffs
    assert flipped == {k: -v for k, v in reference.items()}


def test_xi_rejects_walls_on_the_layer():
    model = ex_model()
    layers = ex_layers()
    g = ex_gallery((0,))
    (p_face,) = faces_over(layers["P"])
    with pytest.raises(ValueError):
        cycles.build_xi(model, 0, B0, p_face, g)


def test_xi_equals_signed_omega_at_chain_level():
    # the wall square equals the square of the morphism attached along the
    # same wall, up to the side of the base relative to the gallery chamber
    model = ex_model()
    arr = ex_arrangement()
    cells = model.cells
    layers = ex_layers()
    poset = arr.layer_poset()
    for name in ("H0", "H1", "H2"):
        g = ex_gallery(tuple(sorted(layers[name].support)))
        for base in (B0, B1):
            for p_idx in cycles.build_lambda(model, base, layers[name], g).vertex_faces:
                p_face = cells.objects[p_idx]
                path = cycles.build_path(model, base, p_face, g)
                for t, h in enumerate(path.wall_hypertori):
                    xi = cycles.build_xi(model, h, base, p_face, g)
                    sign = cycles.epsilon(arr, h, base, g.chamber)
                    ms = [
                        m
                        for m in cells.morphisms
                        if m.src == p_idx and m.attachment == path.walls[t]
                    ]
                    assert ms, "no morphism attaches along the wall"
                    for m in ms:
                        om = cycles.build_omega(model, m)
                        assert xi.arrow_coeffs == {
                            k: sign * v for k, v in om.arrow_coeffs.items()
                        }


def test_epsilon_pins():
    arr = ex_arrangement()
    assert cycles.epsilon(arr, 1, B1, B0) == -1
    for chamber in ALL_CHAMBERS:
        for h in range(3):
            assert cycles.epsilon(arr, h, chamber, chamber) == 1
            negated = tuple(-s for s in chamber)
            assert cycles.epsilon(arr, h, negated, chamber) == -1
    with pytest.raises(ValueError):
        cycles.epsilon(arr, 0, (0, 1, 1), B0)


# ---------------------------------------------------------------------------
# base change
# ---------------------------------------------------------------------------


def test_base_change_with_equal_bases_is_trivial():
    model = ex_model()
    layers = ex_layers()
    res = cycles.verify_base_change(model, B0, B0, layers["H0"])
    assert res.holds and res.exact
    assert res.xi == []
    assert res.omega_coefficients == {}
    assert not res.witness.coeffs


def test_base_change_worked_example():
    model = ex_model()
    layers = ex_layers()
    nc = ex_nerve()
    h1 = ex_h1()
    g = ex_gallery((0,))
    res = cycles.verify_base_change(model, B0, B1, layers["H0"], g, nc)
    assert res.holds and res.exact
    # both vertices contribute the wall over the middle hypertorus
    assert len(res.xi) == 2
    assert set(res.omega_coefficients) == {1}
    assert abs(res.omega_coefficients[1]) == 2
    # the chain identity descends to homology in the square-cycle basis
    lam_b0 = cycles.build_lambda(model, B0, layers["H0"], g)
    lam_b1 = cycles.build_lambda(model, B1, layers["H0"], g)
    diff = h1.coordinates(lam_b0.chain(nc) - lam_b1.chain(nc))
    combo = [0] * h1.rank
    for h, c in res.omega_coefficients.items():
        for i, v in enumerate(omega_coords(h)):
            combo[i] += c * v
    assert diff == combo


def test_base_change_is_chain_exact_everywhere():
    model = ex_model()
    layers = ex_layers()
    nc = ex_nerve()
    for name in ("H0", "H1", "H2"):
        layer = layers[name]
        g = ex_gallery(tuple(sorted(layer.support)))
        for base in ALL_CHAMBERS:
            for base2 in ALL_CHAMBERS:
                if name != "H0" and base != B0:
                    continue
                res = cycles.verify_base_change(model, base, base2, layer, g, nc)
                assert res.holds and res.exact


def test_base_change_on_a_random_arrangement():
    rng = random.Random(11)
    arr = random_toric(rng, 2)
    model = toric_salvetti(arr)
    poset = arr.layer_poset()
    lines = [l for l in poset.layers if l.dim == 1]
    a0, _ = arrangement_A0(arr)
    chambers = a0.chambers()
    for layer in lines:
        res = cycles.verify_base_change(model, chambers[0], chambers[-1], layer)
        assert res.holds and res.exact


# ---------------------------------------------------------------------------
# quotient functor
# ---------------------------------------------------------------------------


def test_phi_rejects_the_trivial_quotient():
    model = ex_model()
    layers = ex_layers()
    with pytest.raises(ValueError):
        cycles.map_phi(model, layers["T"])


def test_phi_collapses_the_parallel_circle():
    model = ex_model()
    layers = ex_layers()
    phi = cycles.map_phi(model, layers["H0"])
    gone = phi.push(cycles.build_lambda(model, B0, layers["H0"]))
    assert not gone.coeffs
    kept = phi.push(cycles.build_lambda(model, B0, layers["H2"]))
    assert kept.coeffs


def test_phi_sends_squares_to_squares():
    model = ex_model()
    layers = ex_layers()
    phi = cycles.map_phi(model, layers["H0"])
    target_h1 = chains.homology(phi.target_nerve, 1)
    assert target_h1.rank == 1 + 1
    image = target_h1.coordinates(phi.push(cycles.omega_generator(model, 0)))
    expected = target_h1.coordinates(
        cycles.omega_generator(phi.target, 0).chain(phi.target_nerve)
    )
    assert image == expected
    for h in (1, 2):
        assert not phi.push(cycles.omega_generator(model, h)).coeffs


def test_phi_at_a_point_layer_relabels_nothing():
    model = ex_model()
    layers = ex_layers()
    phi = cycles.map_phi(model, layers["P"])
    assert phi.object_map == list(range(len(model)))


def test_phi_respects_strata():
    model = ex_model()
    layers = ex_layers()
    phi = cycles.map_phi(model, layers["H0"])
    source_part = model.subcomplex(layers["P"], (0, 0, 0))
    image_ids = {phi.object_map[i] for i in source_part.object_ids}
    target_poset = phi.target.arrangement.layer_poset()
    target_point = target_poset.layer_of_point((0,), {0})
    target_part = phi.target.subcomplex(target_point, (0,))
    assert image_ids <= set(target_part.object_ids)


# ---------------------------------------------------------------------------
# subarrangement functor
# ---------------------------------------------------------------------------


def test_psi_on_the_full_set_is_the_identity():
    model = ex_model()
    psi = cycles.map_psi(model, [0, 1, 2])
    assert psi.object_map == list(range(len(model)))
    assert psi.arrow_map == list(range(len(model.category.arrows)))


def test_psi_keeps_and_drops_squares():
    model = ex_model()
    psi = cycles.map_psi(model, [0, 2])
    assert not psi.push(cycles.omega_generator(model, 1)).coeffs
    target_h1 = chains.homology(psi.target_nerve, 1)
    for h_src, h_dst in ((0, 0), (2, 1)):
        image = target_h1.coordinates(psi.push(cycles.omega_generator(model, h_src)))
        expected = target_h1.coordinates(
            cycles.omega_generator(psi.target, h_dst).chain(psi.target_nerve)
        )
        assert image == expected


def test_psi_preserves_circle_classes():
    model = ex_model()
    layers = ex_layers()
    psi = cycles.map_psi(model, [0, 1])
    target_h1 = chains.homology(psi.target_nerve, 1)
    image = target_h1.coordinates(psi.push(cycles.build_lambda(model, B0, layers["H0"])))
    target_poset = psi.target.arrangement.layer_poset()
    target_layer = target_poset.layer_of_point((0, Fraction(1, 3)), {0})
    mirrored = cycles.build_lambda(psi.target, (-1, 1), target_layer)
    assert image == target_h1.coordinates(mirrored.chain(psi.target_nerve))


def test_psi_rank_drop_needs_the_flag():
    model = ex_model()
    layers = ex_layers()
    with pytest.raises(ValueError):
        cycles.map_psi(model, [0])
    psi = cycles.map_psi(model, [0], allow_essentialize=True)
    assert not psi.push(cycles.build_lambda(model, B0, layers["H0"])).coeffs


# ---------------------------------------------------------------------------
# translation functor
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def sub_model():
    return toric_salvetti(ToricArrangement(2, EX_DATA[:2]))


def test_mu_rejects_bad_translations():
    model = ex_model()
    with pytest.raises(ValueError):
        cycles.map_mu(model, (0, HALF))
    with pytest.raises(ValueError):
        cycles.map_mu(model, (0, 0, 0))


def test_mu_identity_translation():
    model = sub_model()
    mu = cycles.map_mu(model, (0, 0))
    assert mu.object_map == list(range(len(model)))


def test_mu_swaps_the_two_vertex_fibers():
    model = sub_model()
    mu = cycles.map_mu(model, (0, HALF))
    vertices = [f for f in model.cells.objects if f.dim == 0]
    assert len(vertices) == 2
    a, b = (set(model.fiber_objects(v.index)) for v in vertices)
    assert {mu.object_map[i] for i in a} == b
    assert {mu.object_map[i] for i in b} == a
    assert [mu.object_map[mu.object_map[i]] for i in range(len(model))] == list(
        range(len(model))
    )


def test_mu_acts_trivially_on_cohomology():
    model = sub_model()
    mu = cycles.map_mu(model, (0, HALF))
    nc = mu.source_nerve
    h1 = chains.homology(nc, 1)
    for z in h1.basis:
        assert h1.coordinates(chains.pushforward(mu.functor, z)) == h1.coordinates(z)
    duals = chains.dual_basis_cochains(nc, h1.basis)
    matrix = [[chains.pair(z, mu.pull(d)) for d in duals] for z in h1.basis]
    assert matrix == [
        [1 if i == j else 0 for j in range(h1.rank)] for i in range(h1.rank)
    ]


def test_mu_is_the_identity_on_the_circle_stratum():
    model = sub_model()
    arr = model.arrangement
    mu = cycles.map_mu(model, (0, HALF))
    poset = arr.layer_poset()
    circle = poset.layer_of_point((0, Fraction(1, 3)), {0})
    flat = x_flat(arr, circle)
    face0 = tuple(0 if i in flat else 1 for i in range(2))
    handle = model.subcomplex(circle, face0)
    ids = handle.object_ids
    assert {mu.object_map[i] for i in ids} == set(ids)
    position = {o: i for i, o in enumerate(ids)}
    cat = handle.category
    translated = {
        m.triple(): model.cells.translate_morphism(m, (0, HALF)).triple()
        for m in model.cells.morphisms
    }
    object_map = [position[mu.object_map[o]] for o in ids]
    arrow_map = []
    for s, d, key in cat.arrows:
        image = (object_map[s], object_map[d], translated[key])
        arrow_map.append(cat.arrow_index(image))
    sub_nerve = nerve(cat, max_degree=2)
    functor = chains.CellularFunctor(sub_nerve, sub_nerve, object_map, arrow_map)
    h1 = chains.homology(sub_nerve, 1)
    duals = chains.dual_basis_cochains(sub_nerve, h1.basis)
    matrix = [
        [chains.pair(z, chains.pullback(functor, d)) for d in duals]
        for z in h1.basis
    ]
    assert matrix == [
        [1 if i == j else 0 for j in range(h1.rank)] for i in range(h1.rank)
    ]


def test_modelmap_push_accepts_plain_dictionaries():
    model = ex_model()
    psi = cycles.map_psi(model, [0, 1, 2])
    assert not psi.push({}).coeffs
    lam = cycles.build_lambda(model, B0, ex_layers()["H0"])
    via_dict = psi.push(lam.arrow_coeffs)
    via_cycle = psi.push(lam)
    assert via_dict.coeffs == via_cycle.coeffs
