from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from pointfree.catalog import (
    ANTICHAIN2,
    LUK3,
    LUK3_SQ,
    LUK4,
    M3,
    NONTOP3,
    SIERP,
    SQUARE,
    TWO,
    distributive_lattices,
    lattices,
    quantale_catalog,
    random_quantales,
)
from pointfree.errors import FlagMissing, LawViolation
from pointfree.lattice import FRAME, SLAT, classify_lattice, hom_enumerate
from pointfree.poset import identity_map, validate_poset
from pointfree.quantale import (
    cidem,
    cidem_lattice,
    cidem_semilattice,
    factor_check,
    idem,
    iota,
    marked_isomorphic,
    monoidal_homs,
    monoidal_structures,
    transpose_frm,
    transpose_slat,
    validate_monoidal_map,
    validate_monoidal_poset,
)

CATALOG = quantale_catalog(0)
SMALL_Q = {k: Q for k, Q in CATALOG.items() if Q.n <= 4}
FLAGGED = {k: Q for k, Q in SMALL_Q.items() if Q.fully_flagged}


def check_laws(Q):
    """Monoid and flag facts recomputed from names."""
    P, E = Q.carrier, Q.elements
    t = lambda x, y: oracles.tensor(Q, x, y)
    for x, y, z in product(E, repeat=3):
        assert t(x, y) == t(y, x)
        assert t(t(x, y), z) == t(x, t(y, z))
        if oracles.le(P, y, z):
            assert oracles.le(P, t(x, y), t(x, z))
    for x in E:
        assert t(x, Q.unit) == x
    joins = all(oracles.lub(P, list(S)) is not None for S in oracles.subsets(E))
    assert Q.has_finite_joins == joins
    if joins:
        dist = all(t(x, oracles.lub(P, list(S))) == oracles.lub(P, [t(x, s) for s in S])
                   for x in E for S in oracles.subsets(E))
        assert Q.tensor_distributes == dist


# -- validation -----------------------------------------------------------------------

def test_cartesian_structure_is_valid_and_flagged():
    for F in distributive_lattices(5):
        Q = iota(F)
        assert Q.fully_flagged
        check_laws(Q)


def test_luk3_valid():
    assert LUK3.fully_flagged
    check_laws(LUK3)


def test_commutativity_violation():
    P = validate_poset(["0", "a", "1"], [("0", "a"), ("a", "1")])
    with pytest.raises(LawViolation) as exc:
        validate_monoidal_poset(P, [["0", "a", "0"], ["0", "0", "a"], ["0", "a", "1"]], "1")
    assert exc.value.law == "commutativity"


def test_unit_violation():
    P = validate_poset(["0", "1"], [("0", "1")])
    with pytest.raises(LawViolation) as exc:
        validate_monoidal_poset(P, [["0", "0"], ["0", "0"]], "1")
    assert exc.value.law == "unit"


def test_monotonicity_violation():
    P = validate_poset(["0", "a", "1"], [("0", "a"), ("a", "1")])
    with pytest.raises(LawViolation) as exc:
        validate_monoidal_poset(P, [["a", "0", "0"], ["0", "a", "a"], ["0", "a", "1"]], "1")
    assert exc.value.law == "monotonicity"


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_catalog_flags_are_facts(name):
    check_laws(CATALOG[name])


def test_flags_not_trusted_on_antichain():
    Qs = monoidal_structures(ANTICHAIN2, "a")
    assert Qs
    for Q in Qs:
        assert not Q.has_finite_joins and not Q.fully_flagged


def test_monoidal_structures_complete_on_three_chain():
    P = LUK3.carrier
    found = {Q.tensor for Q in monoidal_structures(P, "1")}
    brute = set()
    for vals in product(range(3), repeat=3):
        t = [[0, 0, 0], [0, 0, 1], [0, 1, 2]]
        t[0][0], t[0][1], t[1][1] = vals
        t[1][0] = t[0][1]
        try:
            validate_monoidal_poset(P, t, "1")
        except LawViolation:
            continue
        brute.add(tuple(map(tuple, t)))
    assert found == brute and LUK3.tensor in found


# -- coidempotents and idempotents ----------------------------------------------------

def test_cidem_examples():
    assert set(cidem(iota(SQUARE)).members) == set(SQUARE.elements)
    assert set(cidem(LUK3).members) == {"0", "1"}
    assert set(cidem(NONTOP3).members) == {"0", "1"}
    assert set(cidem(LUK4).members) == {"0", "3"}


def test_idem_examples():
    assert idem(iota(SQUARE)).members == ("top",)
    assert set(idem(NONTOP3).members) == {"1", "t"}
    assert idem(LUK3).members == ("1",)


def test_idem_cidem_not_marked_isomorphic():
    i, c = idem(NONTOP3), cidem(NONTOP3)
    assert i.poset.n == c.poset.n == 2
    assert not marked_isomorphic(i, c)


def test_marked_isomorphic_on_self():
    assert marked_isomorphic(cidem(LUK3), cidem(LUK3))


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_cidem_closed_under_tensor_and_meet_is_tensor(name):
    Q = CATALOG[name]
    C = cidem(Q)
    assert Q.unit in C.members
    for a in C.members:
        for b in C.members:
            t = Q.mul(a, b)
            assert t in C.members
            assert t == oracles.glb(C.poset, [a, b])
    cidem_semilattice(Q)


@pytest.mark.parametrize("name", sorted(k for k, Q in CATALOG.items() if Q.fully_flagged))
def test_cidem_lattice_is_distributive(name):
    Q = CATALOG[name]
    L = cidem_lattice(Q)
    assert classify_lattice(L.carrier).kind == "distributive"
    assert oracles.is_distributive(L.carrier)
    assert L.top == Q.unit


def test_cidem_lattice_examples():
    F = cidem_lattice(iota(SQUARE))
    assert set(F.elements) == set(SQUARE.elements)
    L = cidem_lattice(LUK3)
    assert L.elements == ("0", "1") and L.bottom == "0"
    B = cidem_lattice(LUK3_SQ)
    assert set(B.elements) == {"(0,0)", "(0,1)", "(1,0)", "(1,1)"}
    assert classify_lattice(B.carrier).kind == "distributive"


def test_cidem_lattice_needs_flags():
    Q = monoidal_structures(ANTICHAIN2, "a")[0]
    with pytest.raises(FlagMissing):
        cidem_lattice(Q)


def test_iota_examples():
    assert iota(TWO).fully_flagged
    assert cidem(iota(SQUARE)).poset == SQUARE.carrier
    Q = iota(M3)
    check_laws(Q)


@pytest.mark.parametrize("L", lattices(5), ids=lambda L: f"n{L.n}")
def test_triangle_identities_on_objects(L):
    Q = iota(L)
    assert cidem(Q).poset == L.carrier
    assert idem(Q).members == (L.top,)


def test_random_quantales_seeded():
    assert random_quantales(3, 5) == random_quantales(3, 5)
    for Q in random_quantales(7, 6):
        check_laws(Q)


# -- monoidal maps and transposition ----------------------------------------------------

def test_monoidal_hom_examples():
    assert len(monoidal_homs(iota(TWO), LUK3, False)) == 2
    assert len(monoidal_homs(LUK3, iota(TWO), False)) == 2
    P = iota(SQUARE)
    assert identity_map(SQUARE.carrier).table in {f.table for f in monoidal_homs(P, P, False)}


@pytest.mark.parametrize("pair", [("TWO", "LUK3"), ("SIERP", "LUK3"), ("SQUARE", "NONTOP3"),
                                  ("SQUARE", "LUK4"), ("SIERP", "LUK3_SQ")])
def test_monoidal_homs_match_brute_force(pair):
    from pointfree.catalog import LATTICES
    A, B = iota(LATTICES[pair[0]]), CATALOG[pair[1]]
    for joins in (False, True):
        if joins and not B.has_finite_joins:
            continue
        got = sorted(tuple(sorted(zip(A.elements, (B.elements[i] for i in f.table))))
                     for f in monoidal_homs(A, B, joins))
        want = sorted(tuple(sorted(f.items())) for f in oracles.monoidal_maps(A, B, joins))
        assert got == want


def test_monoidal_map_violation():
    with pytest.raises(LawViolation):
        validate_monoidal_map(iota(TWO), LUK3, {"bot": "a", "top": "1"})


def test_factor_check_examples():
    for f in monoidal_homs(iota(TWO), LUK3, False):
        g = factor_check(f, TWO, LUK3)
        assert set(g.as_dict().values()) <= {"0", "1"}
    idm = monoidal_homs(iota(SQUARE), iota(SQUARE), False)
    ident = [f for f in idm if f.table == tuple(range(4))][0]
    assert factor_check(ident, SQUARE, iota(SQUARE)).table == tuple(range(4))


def test_transpose_examples():
    assert transpose_slat(TWO, LUK3).counts == (2, 2)
    assert transpose_frm(SIERP, LUK3).counts == (2, 2)
    c = transpose_slat(SQUARE, LUK3)
    assert c.counts[0] == c.counts[1] == len(oracles.slat_homs(SQUARE, cidem_semilattice(LUK3)))
    for F in distributive_lattices(4):
        for name, Q in FLAGGED.items():
            if F.n == 2:
                assert transpose_frm(F, Q).counts == (1, 1)


@pytest.mark.parametrize("name", sorted(SMALL_Q))
def test_transpose_slat_all_small(name):
    Q = SMALL_Q[name]
    for P in lattices(4):
        c = transpose_slat(P, Q)
        assert c.ok
        for k, j in c.forward.items():
            assert c.backward[j] == k


@pytest.mark.parametrize("name", sorted(FLAGGED))
def test_transpose_frm_all_small(name):
    Q = FLAGGED[name]
    for F in distributive_lattices(4):
        c = transpose_frm(F, Q)
        assert c.ok
        left = len(oracles.frame_homs(F, cidem_lattice(Q)))
        right = len(oracles.monoidal_maps(iota(F), Q, True))
        assert c.counts == (left, right)


def test_cartesian_transpose_is_frame_homs():
    for F in distributive_lattices(4):
        for G in distributive_lattices(4):
            c = transpose_frm(F, iota(G))
            assert c.counts[0] == len(hom_enumerate(F, G, FRAME))


@given(st.integers(0, 10_000))
def test_random_quantale_transposition(seed):
    Q = random_quantales(seed, 1, max_size=4)[0]
    for P in (TWO, SIERP, SQUARE):
        assert transpose_slat(P, Q).ok
        if Q.fully_flagged:
            assert transpose_frm(P, Q).ok
    assert len(hom_enumerate(TWO, cidem_semilattice(Q), SLAT)) == len(monoidal_homs(iota(TWO), Q))
