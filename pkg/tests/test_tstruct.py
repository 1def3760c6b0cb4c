"""Filtrations, aisles, the field-case chain form, filtration systems."""

import random

import pytest

from quivertt import (
    BadElement,
    Integers,
    NotAField,
    PrimeField,
    aisle_membership,
    box_tensor,
    build_quiver,
    c_aisle_decompose,
    c_aisle_reassemble,
    check_filtration_system,
    compact_support,
    component_restrict,
    component_times,
    ensure_perfect,
    filtration,
    filtration_from_objects,
    filtration_system,
    i_times,
    koszul_complex,
    prime_ideal,
    q_support,
    q_support_all,
    serre_translation,
    serre_untranslate,
    shift_complex,
    stalk_complex,
    standard_filtration,
    unit_complex,
    unit_restriction,
)
from quivertt.rings import sp_closed_contains, sp_points
from quivertt.samples import random_perfect_complex, random_q_support

Z = Integers()
A2 = build_quiver([1, 2], ["a: 1 -> 2"])
D5T = build_quiver(
    [1, 2, 3, 4, 5, 6],
    ["a: 1 -> 3", "b: 2 -> 3", "c: 3 -> 4", "d: 4 -> 5", "e: 4 -> 6"],
)


# --- membership in the standard aisle -------------------------------------------


def test_standard_membership_of_shifts():
    u = unit_complex(A2, Z)
    f = standard_filtration(A2, Z)
    assert aisle_membership(u, f)
    assert aisle_membership(shift_complex(u, 1), f)
    assert not aisle_membership(shift_complex(u, -1), f)


def test_parked_koszul_against_cut():
    k = i_times(koszul_complex(Z, [2]), A2, 1)
    f = filtration_from_objects([shift_complex(k, -3)])
    # the level sets drop to nothing just above the generator's degree
    assert str(f.tail_low.at("1")) == "{(2)}"
    assert f.tail_low.at("2").is_empty
    assert f.entries[0][0] == 4
    assert aisle_membership(shift_complex(k, -3), f)
    assert aisle_membership(shift_complex(k, -2), f)
    assert not aisle_membership(shift_complex(k, -4), f)
    assert not aisle_membership(i_times(koszul_complex(Z, [3]), A2, 1), f)


def test_membership_matches_direct_homology():
    from quivertt import homology, homology_range, module_support

    rng = random.Random(44)
    f = standard_filtration(A2, Z)
    for _ in range(15):
        x = random_perfect_complex(A2, Z, rng)
        direct = all(
            homology(x, n).fibers[v].is_zero_module
            for n in homology_range(x)
            if n >= 1
            for v in A2.vertices
        )
        assert aisle_membership(x, f) == direct


# --- generation -------------------------------------------------------------------


def test_unit_generates_standard_filtration():
    assert filtration_from_objects([unit_complex(A2, Z)]) == standard_filtration(A2, Z)


def test_generators_belong_and_union():
    rng = random.Random(3)
    xs = [random_perfect_complex(A2, Z, rng) for _ in range(2)]
    f = filtration_from_objects(xs)
    for x in xs:
        assert aisle_membership(x, f)
        assert aisle_membership(shift_complex(x, 2), f)
    both = filtration_from_objects([xs[0]])
    merged = filtration_from_objects(xs)
    # adding a generator can only grow the level sets
    for n in range(-4, 6):
        for v in A2.vertices:
            assert sp_closed_contains(merged.at(n).at(v), prime_ideal(Z, 2)) or not sp_closed_contains(
                both.at(n).at(v), prime_ideal(Z, 2)
            )


def test_aisle_tensor_closed_against_standard():
    rng = random.Random(9)
    std = standard_filtration(A2, Z)
    for _ in range(10):
        x = random_perfect_complex(A2, Z, rng)
        y = random_perfect_complex(A2, Z, rng)
        f = filtration_from_objects([x])
        if aisle_membership(y, std):
            assert aisle_membership(box_tensor(x, y), f)


def test_filtration_must_decrease():
    small = q_support(A2, Z, {"1": sp_points(Z, {prime_ideal(Z, 2)})})
    with pytest.raises(BadElement):
        filtration(A2, Z, [(0, small), (1, q_support_all(A2, Z))], q_support_all(A2, Z))


# --- field-case chain form ----------------------------------------------------------


def test_serre_chain_of_standard():
    f2 = PrimeField(2)
    ch = serre_translation(standard_filtration(A2, f2))
    assert ch.at(0) == frozenset({"1", "2"})
    assert ch.at(1) == frozenset()
    assert serre_untranslate(ch, f2) == standard_filtration(A2, f2)


def test_serre_chain_of_single_simple():
    f2 = PrimeField(2)
    u1 = ensure_perfect(stalk_complex(unit_restriction(A2, f2, ("1",))))
    ch = serre_translation(filtration_from_objects([u1]))
    assert ch.at(0) == frozenset({"1"})
    assert ch.at(1) == frozenset()
    assert ch.at(-5) == frozenset({"1"})


def test_serre_requires_field():
    with pytest.raises(NotAField):
        serre_translation(standard_filtration(A2, Z))


def test_serre_roundtrip_random():
    f3 = PrimeField(3)
    rng = random.Random(14)
    for _ in range(10):
        xs = [random_perfect_complex(A2, f3, rng)]
        f = filtration_from_objects(xs)
        assert serre_untranslate(serre_translation(f), f3) == f


# --- filtration systems ---------------------------------------------------------------


def test_singleton_system_on_the_tree():
    c = filtration_system(D5T, [frozenset((v,)) for v in D5T.vertices])
    rep = check_filtration_system(c, D5T)
    assert rep["is_system"] and rep["is_dynkin_support"]
    assert rep["witness"] == [4, 5, 3, 2, 0, 1]


def test_five_one_split_system():
    c = filtration_system(D5T, [frozenset("12345"), frozenset("6")])
    rep = check_filtration_system(c, D5T)
    assert rep["is_system"] and rep["is_dynkin_support"]
    assert rep["witness"] == [1, 0]


def test_whole_quiver_system_not_dynkin():
    c = filtration_system(D5T, [frozenset(D5T.vertices)])
    rep = check_filtration_system(c, D5T)
    assert rep["is_system"] and not rep["is_dynkin_support"]


def test_overlap_and_gap_rejected():
    overlap = filtration_system(A2, [frozenset("1"), frozenset("12")])
    assert not check_filtration_system(overlap, A2)["is_system"]
    gap = filtration_system(A2, [frozenset("1")])
    assert not check_filtration_system(gap, A2)["is_system"]


def test_bad_order_still_found():
    # {1},{2} over A2: only sink-first orderings certify, and one exists
    c = filtration_system(A2, [frozenset("1"), frozenset("2")])
    rep = check_filtration_system(c, A2)
    assert rep["is_system"] and rep["witness"] == [1, 0]


# --- component functors -----------------------------------------------------------------


def test_trivial_system_components_identity():
    c = filtration_system(A2, [frozenset(A2.vertices)])
    x = random_perfect_complex(A2, Z, random.Random(2))
    from quivertt import homology_fingerprint

    assert homology_fingerprint(component_restrict(x, 0, c)) == homology_fingerprint(x)


def test_component_roundtrip_on_tree():
    f2 = PrimeField(2)
    c = filtration_system(D5T, [frozenset("12345"), frozenset("6")])
    rng = random.Random(21)
    x = random_perfect_complex(D5T, f2, rng)
    cut = component_restrict(x, 0, c)
    back = component_times(cut, 0, c)
    s = compact_support(back)
    assert s.at("6").is_empty
    from quivertt import homology_fingerprint

    assert homology_fingerprint(component_restrict(back, 0, c)) == homology_fingerprint(cut)


def test_aisle_decomposition_roundtrip():
    rng = random.Random(33)
    c = filtration_system(D5T, [frozenset("12345"), frozenset("6")])
    for _ in range(5):
        xs = [random_perfect_complex(D5T, Z, rng)]
        f = filtration_from_objects(xs)
        parts = c_aisle_decompose(f, c)
        assert len(parts) == 2
        assert c_aisle_reassemble(parts, c, Z) == f


def test_aisle_decomposition_vertexwise():
    c = filtration_system(A2, [frozenset("1"), frozenset("2")])
    rng = random.Random(6)
    s = random_q_support(A2, Z, rng)
    f = filtration(A2, Z, [(0, s)], q_support_all(A2, Z))
    parts = c_aisle_decompose(f, c)
    assert [len(p.tail_low.quiver.vertices) for p in parts] == [1, 1]
    assert c_aisle_reassemble(parts, c, Z) == f
