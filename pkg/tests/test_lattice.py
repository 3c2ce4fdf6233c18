import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from pointfree.catalog import (
    ANTICHAIN2,
    LATTICES,
    M3,
    M3_POSET,
    N5_POSET,
    SIERP,
    SQUARE,
    TWO,
    distributive_lattices,
    lattices,
)
from pointfree.errors import LawViolation, NotDistributive, SizeLimitExceeded
from pointfree.lattice import (
    FRAME,
    SLAT,
    birkhoff,
    chain,
    classify_lattice,
    compose,
    frame_pushout,
    hom_enumerate,
    identity,
    lattice,
    lattice_isomorphism,
    point_filter,
    points,
    spatial_reconstruction,
    validate_morphism,
)
from pointfree.poset import enumerate_posets, is_isomorphic

DL4 = distributive_lattices(4)
DL5 = distributive_lattices(5)
DL6 = distributive_lattices(6)


def unique_map(F):
    return hom_enumerate(TWO, F, FRAME)[0]


# -- classification ---------------------------------------------------------------

def test_classify_examples():
    assert classify_lattice(SQUARE.carrier).kind == "distributive"
    m3 = classify_lattice(M3_POSET)
    assert m3.kind == "semilattice" and m3.witness == ("x", ("y", "z"))
    n5 = classify_lattice(N5_POSET)
    assert n5.kind == "semilattice" and n5.witness is not None
    assert classify_lattice(ANTICHAIN2).kind == "not-semilattice"


@pytest.mark.parametrize("P", [M3_POSET, N5_POSET], ids=["M3", "N5"])
def test_distributivity_witness_is_a_real_failure(P):
    x, (y, z) = classify_lattice(P).witness
    lhs = oracles.lub(P, [oracles.glb(P, [x, y]), oracles.glb(P, [x, z])])
    rhs = oracles.glb(P, [x, oracles.lub(P, [y, z])])
    assert lhs != rhs


def test_classification_agrees_with_brute_force():
    for n in range(1, 6):
        for P in enumerate_posets(n):
            bounded = all(oracles.glb(P, S) is not None for S in oracles.subsets(P.elements))
            kind = classify_lattice(P).kind
            if not bounded:
                assert kind == "not-semilattice"
            else:
                want = "distributive" if oracles.is_distributive(P) else "semilattice"
                assert kind == want


def test_lattice_counts():
    by_size = [sum(1 for L in DL6 if L.n == k) for k in range(1, 7)]
    assert by_size == [1, 1, 1, 2, 3, 5]
    assert [sum(1 for L in lattices(5) if L.n == k) for k in range(1, 6)] == [1, 1, 1, 2, 5]


def test_enumerated_lattices_distinct():
    for i, F in enumerate(DL6):
        for G in DL6[i + 1:]:
            assert not is_isomorphic(F.carrier, G.carrier)


def test_not_distributive_raised():
    with pytest.raises(NotDistributive) as exc:
        birkhoff(M3)
    assert exc.value.witness == ("x", ("y", "z"))


# -- morphisms -------------------------------------------------------------------------

def test_validate_morphism_examples():
    validate_morphism(SIERP, TWO, {"bot": "bot", "u": "top", "top": "top"}, FRAME)
    validate_morphism(SIERP, TWO, {"bot": "bot", "u": "bot", "top": "top"}, FRAME)
    with pytest.raises(LawViolation) as exc:
        validate_morphism(SQUARE, TWO, {"bot": "bot", "a": "top", "b": "top", "top": "top"}, FRAME)
    assert exc.value.law == "meet"


def test_hom_counts():
    assert len(hom_enumerate(SIERP, TWO, FRAME)) == 2
    assert len(hom_enumerate(TWO, TWO, SLAT)) == 2
    for F in DL5:
        assert len(hom_enumerate(TWO, F, FRAME)) == 1


@pytest.mark.parametrize("F", DL4, ids=lambda F: f"F{F.n}")
@pytest.mark.parametrize("G", DL4, ids=lambda G: f"G{G.n}")
def test_frame_homs_match_brute_force(F, G):
    got = sorted(tuple(sorted(f.as_dict().items())) for f in hom_enumerate(F, G, FRAME))
    want = sorted(tuple(sorted(f.items())) for f in oracles.frame_homs(F, G))
    assert got == want


@pytest.mark.parametrize("F", lattices(4), ids=lambda F: f"F{F.n}")
def test_slat_homs_match_brute_force(F):
    for G in (TWO, SIERP, SQUARE, M3):
        got = sorted(tuple(sorted(f.as_dict().items())) for f in hom_enumerate(F, G, SLAT))
        want = sorted(tuple(sorted(f.items())) for f in oracles.slat_homs(F, G))
        assert got == want


def test_compose_with_identity():
    for f in hom_enumerate(SQUARE, SIERP, FRAME):
        assert compose(identity(SQUARE), f).table == f.table
        assert compose(f, identity(SIERP)).table == f.table


# -- points and spatiality ---------------------------------------------------------------

def test_point_counts():
    assert len(points(SIERP)) == 2
    assert len(points(TWO)) == 1
    pts = points(SQUARE)
    assert len(pts) == 2
    assert sorted(point_filter(p) for p in pts) == [["a", "top"], ["b", "top"]]


@pytest.mark.parametrize("name", ["TWO", "SIERP", "SQUARE"])
def test_spatial_named(name):
    r = spatial_reconstruction(LATTICES[name])
    assert r.iso


def test_square_point_space_is_discrete():
    r = spatial_reconstruction(SQUARE)
    assert r.opens.n == 4 and len(r.points) == 2


@pytest.mark.parametrize("F", DL6, ids=lambda F: f"n{F.n}")
def test_every_small_frame_is_spatial(F):
    r = spatial_reconstruction(F)
    assert r.iso
    assert len(r.points) == len(oracles.frame_homs(F, TWO))


# -- Birkhoff --------------------------------------------------------------------------

def test_birkhoff_examples():
    b = birkhoff(SQUARE)
    assert set(b.irreducibles.elements) == {"a", "b"} and not b.irreducibles.pairs()
    assert b.downsets.n == 4
    b = birkhoff(SIERP)
    assert b.irreducibles.pairs() == [("u", "top")] and b.downsets.n == 3
    assert birkhoff(TWO).irreducibles.elements == ("top",)


@pytest.mark.parametrize("F", DL6, ids=lambda F: f"n{F.n}")
def test_birkhoff_round_trip(F):
    b = birkhoff(F)
    assert compose(b.forward, b.backward).table == identity(F).table
    assert compose(b.backward, b.forward).table == identity(b.downsets).table


# -- pushouts ---------------------------------------------------------------------------

def test_pushout_along_identity_leg():
    r = frame_pushout(identity(TWO), unique_map(SIERP), catalog=DL4)
    assert lattice_isomorphism(r.lattice, SIERP) is not None
    assert r.certificate["ok"]


def test_pushout_of_sierpinski_frames():
    f = unique_map(SIERP)
    r = frame_pushout(f, f, catalog=DL4)
    assert r.lattice.n == 6
    assert list(r.lattice.elements) == ["bot", "u&u", "u&top", "top&u", "u&top|top&u", "top&top"]
    assert len(points(r.lattice)) == 4 == len(points(SIERP)) ** 2
    assert r.certificate["ok"] and len(r.certificate["targets"]) == len(DL4)
    # opens of the product of two Sierpinski spaces
    assert classify_lattice(r.lattice.carrier).kind == "distributive"


def test_pushout_of_squares_is_boolean():
    f = unique_map(SQUARE)
    r = frame_pushout(f, f, catalog=())
    assert r.lattice.n == 16
    assert len(points(r.lattice)) == 4
    assert lattice_isomorphism(r.lattice, spatial_reconstruction(r.lattice).opens)
    atoms = [e for e in r.lattice.elements
             if r.lattice.carrier.down[r.lattice.carrier.index(e)].bit_count() == 2]
    assert len(atoms) == 4


def test_pushout_size_guard():
    f = unique_map(SQUARE)
    with pytest.raises(SizeLimitExceeded):
        frame_pushout(f, f, max_generators=8)


def test_pushout_needs_common_source():
    with pytest.raises(LawViolation):
        frame_pushout(identity(SIERP), unique_map(SIERP))


PAIRS = [(H, F, G) for H in DL4[:4] for F in DL4 for G in DL4]


@pytest.mark.parametrize("k", range(0, len(PAIRS), 3))
def test_pushout_points_are_the_fiber_product(k):
    H, F, G = PAIRS[k]
    for f in hom_enumerate(H, F, FRAME)[:2]:
        for g in hom_enumerate(H, G, FRAME)[:2]:
            r = frame_pushout(f, g, catalog=DL4[:4])
            fiber = [(p, q) for p in points(F) for q in points(G)
                     if compose(f, p).table == compose(g, q).table]
            assert len(points(r.lattice)) == len(fiber)
            assert r.certificate["points_ok"] and r.certificate["ok"]


@given(st.sampled_from(DL5), st.sampled_from(DL5))
def test_pushout_over_initial_frame_counts_points(F, G):
    if F.n * G.n > 25:
        return
    r = frame_pushout(unique_map(F), unique_map(G))
    assert len(points(r.lattice)) == len(points(F)) * len(points(G))


def test_chain_constructor():
    C = chain(["0", "1", "2"])
    assert C.bottom == "0" and C.top == "2"
    L = lattice(["0", "a", "1"], [("0", "a"), ("a", "1")])
    assert L == C.__class__(L.carrier, "1", "0")
