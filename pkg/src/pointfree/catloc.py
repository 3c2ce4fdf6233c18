"""Categorified locales one level down.

A ``QLocale`` is a finite frame X, a fully flagged monoidal poset Q and a
frame map X -> cIdem(Q).  Locale maps are always stored in frame
direction; the flip to locale direction happens only when displaying.

Stability has no poset analog, so only the unstable notion is modelled.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import BijectionFailure, FlagMissing, LawViolation, SquareViolation
from .lattice import FRAME, DistLattice, LatticeMorphism, hom_enumerate, law_violation, validate_morphism
from .poset import MonotoneMap
from .quantale import (
    MonoidalPoset,
    cidem_lattice,
    factor_check,
    include,
    iota,
    monoidal_homs,
    monoidal_violation,
)


@dataclass(frozen=True)
class QLocale:
    space: DistLattice
    cat: MonoidalPoset
    structure: LatticeMorphism  # space -> cidem_lattice(cat)


@dataclass(frozen=True)
class QLocaleMorphism:
    source: QLocale
    target: QLocale
    space_map: LatticeMorphism  # target.space -> source.space
    cat_map: MonotoneMap        # target.cat -> source.cat


def validate_qlocale(space: DistLattice, cat: MonoidalPoset, structure) -> QLocale:
    """``structure`` is a dict of names or an index table into cidem_lattice(cat)."""
    if not cat.fully_flagged:
        missing = [k for k, v in cat.flags().items() if not v]
        raise FlagMissing("the monoidal poset must have joins distributing over the tensor",
                          missing)
    C = cidem_lattice(cat)
    if isinstance(structure, LatticeMorphism):
        structure = structure.table
    return QLocale(space, cat, validate_morphism(space, C, structure, FRAME))


def cidem_map(f: MonotoneMap, A: MonoidalPoset, B: MonoidalPoset) -> tuple:
    """A monoidal map A -> B restricted to cIdem(A) -> cIdem(B), as an index table."""
    CA, CB = cidem_lattice(A), cidem_lattice(B)
    return tuple(CB.carrier.index(B.elements[f.table[A.carrier.index(c)]])
                 for c in CA.elements)


def square_witness(L: QLocale, M: QLocale, space_table, cat_map: MonotoneMap):
    """First open U of M.space where the square fails, or None.

    The square compares cIdem(cat_map) . M.structure with L.structure . space_map.
    """
    c = cidem_map(cat_map, M.cat, L.cat)
    for u in range(M.space.n):
        if c[M.structure.table[u]] != L.structure.table[space_table[u]]:
            return M.space.elements[u]
    return None


def validate_qlocale_morphism(source: QLocale, target: QLocale, space_map, cat_map) -> QLocaleMorphism:
    """Morphism source -> target given by frame map target.space -> source.space
    and join-preserving monoidal map target.cat -> source.cat (dicts or tables)."""
    if isinstance(space_map, LatticeMorphism):
        space_map = space_map.table
    sm = validate_morphism(target.space, source.space, space_map, FRAME)
    if isinstance(cat_map, MonotoneMap):
        cat_map = cat_map.table
    elif isinstance(cat_map, dict):
        cat_map = tuple(source.cat.carrier.index(cat_map[e]) for e in target.cat.elements)
    bad = monoidal_violation(target.cat, source.cat, tuple(cat_map), True)
    if bad:
        raise LawViolation(*bad)
    cm = MonotoneMap(target.cat.carrier, source.cat.carrier, tuple(cat_map))
    w = square_witness(source, target, sm.table, cm)
    if w is not None:
        raise SquareViolation(f"square does not commute at {w!r}", w)
    return QLocaleMorphism(source, target, sm, cm)


def to_arrow(L: QLocale) -> MonotoneMap:
    """The structure map followed by cIdem(Q) -> Q: a join-preserving monoidal map."""
    f = include(L.structure, L.cat)
    bad = monoidal_violation(iota(L.space), L.cat, f.table, True)
    if bad:
        raise LawViolation(*bad)
    return f


def from_arrow(f: MonotoneMap, space: DistLattice, cat: MonoidalPoset) -> QLocale:
    return QLocale(space, cat, factor_check(f, space, cat, FRAME))


@dataclass(frozen=True)
class HomCertificate:
    morphisms: list   # (space table, cat table) pairs on the locale side
    squares: list     # (space table, cat table) pairs on the arrow side
    forward: dict
    backward: dict

    @property
    def counts(self):
        return len(self.morphisms), len(self.squares)


def hom_bijection_check(L: QLocale, M: QLocale) -> HomCertificate:
    """Locale-side morphisms L -> M versus arrow-category squares from
    to_arrow(M) to to_arrow(L), each enumerated independently."""
    cat_maps = monoidal_homs(M.cat, L.cat, True)
    morphisms = []
    for s in hom_enumerate(M.space, L.space, FRAME):
        for c in cat_maps:
            if square_witness(L, M, s.table, c) is None:
                morphisms.append((s.table, c.table))
    aM, aL = to_arrow(M), to_arrow(L)
    squares = []
    for u in monoidal_homs(iota(M.space), iota(L.space), True):
        if law_violation(M.space, L.space, u.table, FRAME):
            continue
        for v in cat_maps:
            if all(v.table[aM.table[x]] == aL.table[u.table[x]] for x in range(M.space.n)):
                squares.append((u.table, v.table))
    morphisms.sort()
    squares.sort()
    # the correspondence is the identity on underlying pairs of maps
    mi = {p: k for k, p in enumerate(morphisms)}
    si = {p: k for k, p in enumerate(squares)}
    forward, backward = {}, {}
    for k, p in enumerate(morphisms):
        if p not in si:
            raise BijectionFailure("locale morphism without a matching square", p)
        forward[k] = si[p]
    for k, p in enumerate(squares):
        if p not in mi:
            raise BijectionFailure("square without a matching locale morphism", p)
        backward[k] = mi[p]
    if any(backward[forward[k]] != k for k in forward) or len(morphisms) != len(squares):
        raise BijectionFailure("round trip fails", (len(morphisms), len(squares)))
    return HomCertificate(morphisms, squares, forward, backward)


def identity_qlocale(F: DistLattice) -> QLocale:
    """(F, F with tensor = meet, identity)."""
    Q = iota(F)
    return validate_qlocale(F, Q, list(range(F.n)))


def qlocales_over(F: DistLattice, Q: MonoidalPoset) -> list[QLocale]:
    """Every QLocale with the given frame and monoidal poset."""
    C = cidem_lattice(Q)
    return [QLocale(F, Q, s) for s in hom_enumerate(F, C, FRAME)]
