"""Complexes of representations: homology, tensor, Kan extensions, resolutions."""

import random

import pytest

from quivertt import (
    ComplexRQ,
    FGModule,
    Integers,
    IntegersLocalized,
    Matrix,
    NotDerivable,
    PolyOverPrimeField,
    PrimeField,
    Rationals,
    ShapeMismatch,
    box_tensor,
    build_quiver,
    change_ring,
    complex_r,
    cone,
    direct_sum_complexes,
    ensure_perfect,
    eval_vertex,
    homology,
    homology_fingerprint,
    homology_range,
    i_times,
    is_acyclic,
    kan_extend,
    koszul_complex,
    projective_rep,
    projective_resolution,
    shift_complex,
    stalk_complex,
    unit_complex,
    unit_restriction,
    zero_complex,
)
from quivertt.complexes import ComplexMorphism, RepMorphism
from quivertt.samples import random_perfect_complex

Z = Integers()
A2 = build_quiver([1, 2], ["a: 1 -> 2"])
A3 = build_quiver([1, 2, 3], ["a: 1 -> 2", "b: 2 -> 3"])


def fibers_of(h):
    return {v: str(h.fibers[v]) for v in h.quiver.vertices}


def scale_map(x, c):
    """Multiplication by the integer c on every term of x."""
    ring = x.ring
    parts = {}
    for n in x.degrees:
        rep = x.term(n)
        mats = {v: Matrix.identity(ring, rep.gens(v)).scale(ring.from_int(c)) for v in x.quiver.vertices}
        parts[n] = RepMorphism(rep, rep, mats)
    return ComplexMorphism(x, x, parts)


# --- Koszul complexes ---------------------------------------------------------


def test_koszul_single_prime():
    k2 = koszul_complex(Z, [2])
    assert k2.degrees == [-1, 0]
    assert k2.perfect
    h = homology(k2, 0)
    assert str(h.fibers["pt"]) == "R/(2)"
    assert homology(k2, -1).fibers["pt"].is_zero_module


def test_koszul_coprime_pair_acyclic():
    assert is_acyclic(koszul_complex(Z, [2, 3]))


def test_koszul_over_poly_ring():
    r = PolyOverPrimeField(2)
    kx = koszul_complex(r, [r.parse_elem("x")])
    assert str(homology(kx, 0).fibers["pt"]) == "R/(x)"


def test_koszul_squares_to_zero_three_generators():
    k = koszul_complex(Z, [2, 3, 5])
    assert k.degrees == [-3, -2, -1, 0]
    # validation already ran in the constructor; rebuild with checks on
    ComplexRQ(k.quiver, k.ring, k.terms, k.diffs, check=True)


# --- structural operations ----------------------------------------------------


def test_shift_moves_homology():
    k2 = koszul_complex(Z, [4])
    s = shift_complex(k2, 1)
    assert homology_fingerprint(s) == tuple(
        (n - 1, key, rank, tors) for n, key, rank, tors in homology_fingerprint(k2)
    )
    assert homology_fingerprint(shift_complex(s, -1)) == homology_fingerprint(k2)


def test_direct_sum_adds_fibers():
    u = unit_complex(A2, Z)
    two = direct_sum_complexes([u, u])
    assert two.term(0).gens("1") == 2
    assert fibers_of(homology(two, 0)) == {"1": "R^2", "2": "R^2"}


def test_zero_complex_is_zero():
    z = zero_complex(A2, Z)
    assert z.is_zero and is_acyclic(z)


def test_invalid_differential_rejected():
    urep = unit_complex(A2, Z).term(0)
    ident = {v: Matrix.identity(Z, 1) for v in A2.vertices}
    with pytest.raises(ShapeMismatch):
        ComplexRQ(
            A2,
            Z,
            {0: urep, 1: urep, 2: urep},
            {0: RepMorphism(urep, urep, ident), 1: RepMorphism(urep, urep, ident)},
        )


def test_morphism_naturality_checked():
    urep = unit_complex(A2, Z).term(0)
    with pytest.raises(ShapeMismatch):
        RepMorphism(urep, urep, {"1": Matrix.identity(Z, 1), "2": Matrix.identity(Z, 1).scale(2)})


# --- cones and homology -------------------------------------------------------


def test_cone_of_multiplication():
    u = unit_complex(A2, Z)
    c = cone(scale_map(u, 6))
    assert fibers_of(homology(c, 0)) == {"1": "R/(6)", "2": "R/(6)"}
    # the induced arrow map stays the identity on the quotient
    assert homology(c, 0).arrows["a"].entries == ((1,),)


def test_cone_vertex_evaluation():
    c = cone(scale_map(unit_complex(A2, Z), 2))
    for v in (1, 2):
        cv = eval_vertex(c, v)
        assert cv.degrees == [-1, 0]
        assert str(homology(cv, 0).fibers["pt"]) == "R/(2)"


def test_homology_of_unit():
    u = unit_complex(A2, Z)
    assert fibers_of(homology(u, 0)) == {"1": "R", "2": "R"}
    assert all(homology(u, n).fibers[v].is_zero_module for n in (-1, 1) for v in A2.vertices)


def test_homology_range_brackets_support():
    x = shift_complex(koszul_complex(Z, [2]), 3)
    ns = homology_range(x)
    assert all(n in ns for n in (-4, -3))


# --- vertex functors ----------------------------------------------------------


def test_eval_vertex_of_unit_and_projective():
    u = unit_complex(A2, Z)
    assert fibers_of(homology(eval_vertex(u, 1), 0)) == {"pt": "R"}
    p1 = stalk_complex(projective_rep(A2, Z, 1))
    assert eval_vertex(p1, 2).term(0).gens("pt") == 1


def test_kan_left_gives_projective():
    m = complex_r(Z, {0: FGModule.free(Z, 1)}, {})
    ext = kan_extend(m, A2, 1, "left")
    p1 = stalk_complex(projective_rep(A2, Z, 1))
    assert homology_fingerprint(ext) == homology_fingerprint(p1)
    assert ext.term(0).arrows["a"].entries == ((1,),)


def test_kan_left_at_sink():
    m = complex_r(Z, {0: FGModule.free(Z, 1)}, {})
    ext = kan_extend(m, A2, 2, "left")
    assert [ext.term(0).gens(v) for v in A2.vertices] == [0, 1]


def test_kan_right_empty_product():
    m = complex_r(Z, {0: FGModule.free(Z, 1)}, {})
    ext = kan_extend(m, A2, 1, "right")
    assert [ext.term(0).gens(v) for v in A2.vertices] == [1, 0]


def test_parking_and_restriction():
    k2 = koszul_complex(Z, [2])
    parked = i_times(k2, A2, 1)
    assert homology_fingerprint(eval_vertex(parked, 1)) == homology_fingerprint(k2)
    assert is_acyclic(eval_vertex(parked, 2))
    u1 = i_times(complex_r(Z, {0: FGModule.free(Z, 1)}, {}), A2, 1)
    assert fibers_of(homology(u1, 0)) == {"1": "R", "2": "0"}


# --- box tensor ---------------------------------------------------------------


def test_box_unit_law():
    u = unit_complex(A2, Z)
    x = cone(scale_map(u, 6))
    assert homology_fingerprint(box_tensor(u, x)) == homology_fingerprint(x)
    assert homology_fingerprint(box_tensor(x, u)) == homology_fingerprint(x)


def test_box_disjoint_vertex_units():
    f2 = PrimeField(2)
    u1 = stalk_complex(unit_restriction(A2, f2, ("1",)))
    u2 = stalk_complex(unit_restriction(A2, f2, ("2",)))
    assert is_acyclic(box_tensor(ensure_perfect(u1), ensure_perfect(u2)))


def test_box_parked_koszul_tor():
    # Z/2 x Z/2 contributes a Tor term one degree down
    k = i_times(koszul_complex(Z, [2]), A2, 1)
    sq = box_tensor(k, k)
    assert fibers_of(homology(sq, 0)) == {"1": "R/(2)", "2": "0"}
    assert fibers_of(homology(sq, -1)) == {"1": "R/(2)", "2": "0"}


def test_box_needs_a_usable_side():
    tors = Matrix.from_rows(Z, [[2]])
    m = complex_r(Z, {0: FGModule(Z, tors)}, {})
    x = i_times(m, A2, 1)
    with pytest.raises(NotDerivable):
        box_tensor(x, x)
    ok = box_tensor(ensure_perfect(x), ensure_perfect(x))
    assert not is_acyclic(ok)


def test_box_koszul_signs_square():
    # totalization signs: d^2 = 0 checked by the constructor on a 2x2 grid
    a = koszul_complex(Z, [2])
    b = koszul_complex(Z, [3])
    prod = box_tensor(a, b)
    ComplexRQ(prod.quiver, prod.ring, prod.terms, prod.diffs, check=True)


# --- resolutions and perfection ------------------------------------------------


def test_resolution_of_projective_stalk():
    f2 = PrimeField(2)
    u2 = stalk_complex(unit_restriction(A2, f2, ("2",)))
    assert u2.perfect  # the sink simple is the projective P(2)
    r = projective_resolution(u2)
    assert r.perfect
    assert homology_fingerprint(r) == homology_fingerprint(u2)


def test_resolution_of_source_simple():
    f2 = PrimeField(2)
    u1 = stalk_complex(unit_restriction(A2, f2, ("1",)))
    assert not u1.perfect
    r = projective_resolution(u1)
    assert r.perfect and len(r.degrees) == 2
    assert homology_fingerprint(r) == homology_fingerprint(u1)


def test_resolution_of_torsion_fibers():
    x = cone(scale_map(unit_complex(A2, Z), 4))
    r = ensure_perfect(x)
    assert r.perfect
    assert homology_fingerprint(r) == homology_fingerprint(x)


def test_ensure_perfect_random_battery():
    rng = random.Random(17)
    for _ in range(6):
        x = random_perfect_complex(A3, Z, rng)
        assert x.perfect
        assert homology_fingerprint(ensure_perfect(x)) == homology_fingerprint(x)


# --- base change ----------------------------------------------------------------


def test_change_ring_localizes_torsion():
    c = cone(scale_map(unit_complex(A2, Z), 6))
    at2 = change_ring(c, IntegersLocalized(2))
    h = homology(at2, 0)
    assert str(h.fibers["1"]) == "R/(2)"  # the 3-part dies at (2)
    assert is_acyclic(change_ring(c, Rationals()))


def test_change_ring_keeps_free_part():
    u = unit_complex(A2, Z)
    q = change_ring(u, Rationals())
    assert fibers_of(homology(q, 0)) == {"1": "R", "2": "R"}


def test_change_ring_to_residue_field():
    k2 = koszul_complex(Z, [2])
    f3 = PrimeField(3)
    assert is_acyclic(change_ring(k2, f3))
    f2 = PrimeField(2)
    red = change_ring(k2, f2)
    assert str(homology(red, 0).fibers["pt"]) == "R"
    assert str(homology(red, -1).fibers["pt"]) == "R"
