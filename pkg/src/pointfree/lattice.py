"""Semilattices, finite frames (= finite distributive lattices) and their maps.

Also: points, spatial reconstruction, the Birkhoff representation and
pushouts of finite frames.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import LawViolation, NotDistributive, SizeLimitExceeded
from .poset import (
    FinPoset,
    MonotoneMap,
    bits,
    downset_masks,
    find_isomorphism,
    join_idx,
    meet_idx,
    monotone_violation,
    poset_from_masks,
    subposet,
    validate_poset,
)

SLAT = "slat"
FRAME = "frame"


@dataclass(frozen=True, eq=False)
class Semilattice:
    """Finite poset with all finite meets; ``top`` is the empty meet."""

    carrier: FinPoset
    top: str
    meet: tuple = field(init=False, repr=False)

    def __post_init__(self):
        P = self.carrier
        table = []
        for i in range(P.n):
            row = []
            for j in range(P.n):
                m = meet_idx(P, 1 << i | 1 << j)
                if m is None:
                    raise LawViolation("meet", (P.elements[i], P.elements[j]))
                row.append(m)
            table.append(tuple(row))
        object.__setattr__(self, "meet", tuple(table))
        if meet_idx(P, 0) != P.index(self.top):
            raise LawViolation("top", self.top)

    @property
    def elements(self):
        return self.carrier.elements

    @property
    def n(self):
        return self.carrier.n

    @property
    def top_idx(self):
        return self.carrier.index(self.top)

    def __eq__(self, other):
        return type(self) is type(other) and self.carrier == other.carrier

    def __hash__(self):
        return hash(self.carrier)

    def __repr__(self):
        return f"{type(self).__name__}({list(self.elements)})"


@dataclass(frozen=True, eq=False)
class DistLattice(Semilattice):
    """A finite distributive lattice, i.e. a finite frame."""

    bottom: str = ""
    join: tuple = field(init=False, repr=False)

    def __post_init__(self):
        super().__post_init__()
        P = self.carrier
        table = []
        for i in range(P.n):
            row = []
            for j in range(P.n):
                m = join_idx(P, 1 << i | 1 << j)
                if m is None:
                    raise LawViolation("join", (P.elements[i], P.elements[j]))
                row.append(m)
            table.append(tuple(row))
        object.__setattr__(self, "join", tuple(table))
        if join_idx(P, 0) != P.index(self.bottom):
            raise LawViolation("bottom", self.bottom)
        bad = distributivity_witness(P, self.meet, self.join)
        if bad:
            raise NotDistributive(bad)

    @property
    def bottom_idx(self):
        return self.carrier.index(self.bottom)

    def join_mask(self, mask: int) -> int:
        out = self.bottom_idx
        for i in bits(mask):
            out = self.join[out][i]
        return out


def distributivity_witness(P: FinPoset, meet, join):
    # Binary distributivity suffices: the empty case is x ^ bot = bot and
    # larger finite S follow by induction.
    for x in range(P.n):
        for y, z in combinations(range(P.n), 2):
            if meet[x][join[y][z]] != join[meet[x][y]][meet[x][z]]:
                return (P.elements[x], (P.elements[y], P.elements[z]))
    return None


@dataclass(frozen=True)
class Classification:
    kind: str  # "not-semilattice" | "semilattice" | "distributive"
    witness: object = None


def classify_lattice(P: FinPoset) -> Classification:
    top = meet_idx(P, 0)
    if top is None:
        return Classification("not-semilattice", ("no top", None))
    for i, j in combinations(range(P.n), 2):
        if meet_idx(P, 1 << i | 1 << j) is None:
            return Classification("not-semilattice",
                                  ("no meet", (P.elements[i], P.elements[j])))
    # a finite poset with all finite meets also has all joins
    L = Semilattice(P, P.elements[top])
    join = [[join_idx(P, 1 << i | 1 << j) for j in range(P.n)] for i in range(P.n)]
    bad = distributivity_witness(P, L.meet, join)
    if bad:
        return Classification("semilattice", bad)
    return Classification("distributive")


def as_semilattice(P: FinPoset) -> Semilattice:
    top = meet_idx(P, 0)
    if top is None:
        raise LawViolation("top", None)
    return Semilattice(P, P.elements[top])


def as_lattice(P: FinPoset) -> DistLattice:
    top, bot = meet_idx(P, 0), join_idx(P, 0)
    if top is None:
        raise LawViolation("top", None)
    if bot is None:
        raise LawViolation("bottom", None)
    return DistLattice(P, P.elements[top], P.elements[bot])


def lattice(elements, pairs) -> DistLattice:
    return as_lattice(validate_poset(elements, pairs))


def chain(names) -> DistLattice:
    names = list(names)
    return lattice(names, list(zip(names, names[1:])))


# -- morphisms ---------------------------------------------------------------

@dataclass(frozen=True)
class LatticeMorphism:
    source: Semilattice
    target: Semilattice
    map: MonotoneMap
    kind: str

    @property
    def table(self):
        return self.map.table

    def __call__(self, e):
        return self.map(e)

    def as_dict(self):
        return self.map.as_dict()


def law_violation(source: Semilattice, target: Semilattice, table, kind):
    """First violated law as (law, witness), or None."""
    S = source.carrier
    bad = monotone_violation(S, target.carrier, table)
    if bad:
        return ("monotonicity", bad)
    if table[source.top_idx] != target.top_idx:
        return ("top", source.top)
    for i, j in combinations(range(S.n), 2):
        if table[source.meet[i][j]] != target.meet[table[i]][table[j]]:
            return ("meet", (S.elements[i], S.elements[j]))
    if kind == FRAME:
        if table[source.bottom_idx] != target.bottom_idx:
            return ("bottom", source.bottom)
        for i, j in combinations(range(S.n), 2):
            if table[source.join[i][j]] != target.join[table[i]][table[j]]:
                return ("join", (S.elements[i], S.elements[j]))
    return None


def validate_morphism(source: Semilattice, target: Semilattice, mapping, kind=FRAME) -> LatticeMorphism:
    """Check ``mapping`` (dict of names, or index table) against the laws of ``kind``."""
    if isinstance(mapping, dict):
        missing = [e for e in source.elements if e not in mapping]
        if missing:
            raise LawViolation("totality", missing[0])
        table = tuple(target.carrier.index(mapping[e]) for e in source.elements)
    else:
        table = tuple(mapping)
    bad = law_violation(source, target, table, kind)
    if bad:
        raise LawViolation(*bad)
    return LatticeMorphism(source, target, MonotoneMap(source.carrier, target.carrier, table), kind)


def hom_enumerate(F: Semilattice, G: Semilattice, kind=FRAME) -> list[LatticeMorphism]:
    """All morphisms of ``kind`` from F to G, sorted by index table.

    Backtracking along a linear extension; a pair is checked as soon as both
    arguments and their meet (join) are assigned.
    """
    S, T = F.carrier, G.carrier
    order = S.linear_extension()
    pos = {i: k for k, i in enumerate(order)}
    frame = kind == FRAME
    forced = {F.top_idx: G.top_idx}
    if frame:
        if F.bottom_idx in forced and forced[F.bottom_idx] != G.bottom_idx:
            return []
        forced[F.bottom_idx] = G.bottom_idx
    # checks[k]: constraints that become decidable once order[k] is assigned
    checks = [[] for _ in range(S.n)]
    for i in range(S.n):
        for j in range(S.n):
            if i < j:
                m = F.meet[i][j]
                checks[max(pos[i], pos[j], pos[m])].append(("m", i, j, m))
                if frame:
                    u = F.join[i][j]
                    checks[max(pos[i], pos[j], pos[u])].append(("j", i, j, u))
            if i != j and S.leq[i][j]:
                checks[max(pos[i], pos[j])].append(("le", i, j, None))
    table = [None] * S.n
    out = []

    def ok(k):
        for tag, i, j, r in checks[k]:
            a, b = table[i], table[j]
            if tag == "le":
                if not T.leq[a][b]:
                    return False
            elif tag == "m":
                if G.meet[a][b] != table[r]:
                    return False
            elif G.join[a][b] != table[r]:
                return False
        return True

    def extend(k):
        if k == S.n:
            out.append(tuple(table))
            return
        i = order[k]
        for v in ([forced[i]] if i in forced else range(T.n)):
            table[i] = v
            if ok(k):
                extend(k + 1)
        table[i] = None

    extend(0)
    out.sort()
    return [LatticeMorphism(F, G, MonotoneMap(S, T, t), kind) for t in out]


def compose(f: LatticeMorphism, g: LatticeMorphism) -> LatticeMorphism:
    """``g`` after ``f``."""
    kind = FRAME if f.kind == g.kind == FRAME else SLAT
    return LatticeMorphism(f.source, g.target, f.map.then(g.map), kind)


def identity(F: Semilattice) -> LatticeMorphism:
    return LatticeMorphism(F, F, MonotoneMap(F.carrier, F.carrier, tuple(range(F.n))),
                           FRAME if isinstance(F, DistLattice) else SLAT)


def lattice_isomorphism(F: DistLattice, G: DistLattice):
    """A frame isomorphism F -> G, or None."""
    t = find_isomorphism(F.carrier, G.carrier)
    if t is None:
        return None
    return validate_morphism(F, G, t, FRAME)


# -- points and spatiality --------------------------------------------------------

TWO = chain(["bot", "top"])


def points(F: DistLattice) -> list[LatticeMorphism]:
    return hom_enumerate(F, TWO, FRAME)


def point_filter(p: LatticeMorphism) -> list[str]:
    """The elements a point sends to top (a prime filter)."""
    return [e for e, i in zip(p.source.elements, p.table) if i == 1]


def subset_name(names) -> str:
    return "{" + ",".join(names) + "}"


def lattice_of_sets(sets, universe: list[str]):
    """Inclusion-ordered lattice on a family of subsets of ``universe``.

    Element names list members in universe order.  Returns the lattice and
    a dict from each subset to its element index.
    """
    order = {u: k for k, u in enumerate(universe)}
    sets = sorted(set(sets), key=lambda s: (len(s), sorted(order[x] for x in s)))
    names = [subset_name(sorted(s, key=order.__getitem__)) for s in sets]
    down = [sum(1 << a for a, s in enumerate(sets) if s <= t) for t in sets]
    return as_lattice(poset_from_masks(names, down)), {s: k for k, s in enumerate(sets)}


@dataclass(frozen=True)
class SpatialResult:
    points: list
    opens: DistLattice
    comparison: LatticeMorphism
    iso: bool


def spatial_reconstruction(F: DistLattice) -> SpatialResult:
    pts = points(F)
    labels = [f"p{k}" for k in range(len(pts))]
    image = [frozenset(labels[k] for k, p in enumerate(pts) if p.table[i] == 1)
             for i in range(F.n)]
    opens = set(image) | {frozenset(), frozenset(labels)}
    grown = True
    while grown:
        grown = False
        for a, b in combinations(list(opens), 2):
            for c in (a | b, a & b):
                if c not in opens:
                    opens.add(c)
                    grown = True
    O, where = lattice_of_sets(opens, labels)
    table = [where[s] for s in image]
    comparison = validate_morphism(F, O, table, FRAME)
    iso = len(set(table)) == F.n == O.n and all(
        F.carrier.leq[i][j] == O.carrier.leq[table[i]][table[j]]
        for i in range(F.n) for j in range(F.n))
    return SpatialResult(pts, O, comparison, iso)


# -- Birkhoff -----------------------------------------------------------------------

def join_irreducibles(F: DistLattice) -> list[int]:
    out = []
    for i in range(F.n):
        if i == F.bottom_idx:
            continue
        strictly_below = F.carrier.down[i] & ~(1 << i)
        if F.join_mask(strictly_below) != i:
            out.append(i)
    return out


def down_lattice(P: FinPoset) -> DistLattice:
    """Downsets of P ordered by inclusion."""
    return lattice_of_sets([frozenset(P.names(m)) for m in downset_masks(P)],
                           list(P.elements))[0]


@dataclass(frozen=True)
class BirkhoffResult:
    irreducibles: FinPoset
    downsets: DistLattice
    forward: LatticeMorphism
    backward: LatticeMorphism


def birkhoff(F: Semilattice) -> BirkhoffResult:
    if not isinstance(F, DistLattice):
        kind = classify_lattice(F.carrier)
        if kind.kind != "distributive":
            raise NotDistributive(kind.witness)
        F = as_lattice(F.carrier)
    irr = join_irreducibles(F)
    J = subposet(F.carrier, [F.elements[i] for i in irr])
    D, where = lattice_of_sets([frozenset(J.names(m)) for m in downset_masks(J)],
                               list(J.elements))
    fwd = [where[frozenset(F.elements[j] for j in irr if F.carrier.leq[j][i])]
           for i in range(F.n)]
    back = [0] * D.n
    for s_, k in where.items():
        back[k] = F.join_mask(F.carrier.mask(s_))
    forward = validate_morphism(F, D, fwd, FRAME)
    backward = validate_morphism(D, F, back, FRAME)
    return BirkhoffResult(J, D, forward, backward)


# -- pushouts -----------------------------------------------------------------------

@dataclass(frozen=True)
class PushoutResult:
    lattice: DistLattice
    left: LatticeMorphism
    right: LatticeMorphism
    certificate: dict


def frame_pushout(f: LatticeMorphism, g: LatticeMorphism, *, catalog=(), max_generators=64,
                  certify=True) -> PushoutResult:
    """Pushout of finite frames F <- H -> G.

    An element of the pushout is a join of formal meets ``a & b`` (a in F,
    b in G); after applying the laws of F and G every such term is a
    downset of rectangles in F x G.  The quotient by the lattice laws and
    by f(h) = g(h) is computed by saturating downsets (nucleus fixpoints),
    and each element is named by its maximal rectangles outside the bottom.
    """
    F, G = f.target, g.target
    if f.source != g.source:
        raise LawViolation("common source", (f.source, g.source))
    H = f.source
    nF, nG = F.n, G.n
    if nF * nG > max_generators:
        raise SizeLimitExceeded(f"{nF}x{nG} rectangles exceed {max_generators}", nF * nG)

    def rid(a, b):
        return a * nG + b

    # rectangle r1 <= r2 componentwise
    rect_down = [0] * (nF * nG)
    for a in range(nF):
        for b in range(nG):
            m = 0
            for a2 in bits(F.carrier.down[a]):
                for b2 in bits(G.carrier.down[b]):
                    m |= 1 << rid(a2, b2)
            rect_down[rid(a, b)] = m
    base = 0
    for a in range(nF):
        base |= 1 << rid(a, G.bottom_idx)
    for b in range(nG):
        base |= 1 << rid(F.bottom_idx, b)
    links = [(F.meet[a][f.table[h]], b, a, G.meet[b][g.table[h]])
             for h in range(H.n) for a in range(nF) for b in range(nG)]

    def closure(mask):
        mask |= base
        while True:
            new = mask
            for r in bits(mask):
                new |= rect_down[r]
            for a1 in range(nF):
                for a2 in range(a1 + 1, nF):
                    for b in range(nG):
                        if new >> rid(a1, b) & 1 and new >> rid(a2, b) & 1:
                            new |= 1 << rid(F.join[a1][a2], b)
            for b1 in range(nG):
                for b2 in range(b1 + 1, nG):
                    for a in range(nF):
                        if new >> rid(a, b1) & 1 and new >> rid(a, b2) & 1:
                            new |= 1 << rid(a, G.join[b1][b2])
            for a1, b1, a2, b2 in links:
                x, y = new >> rid(a1, b1) & 1, new >> rid(a2, b2) & 1
                if x != y:
                    new |= 1 << rid(a1, b1) | 1 << rid(a2, b2)
            if new == mask:
                return mask
            mask = new

    bottom = closure(0)
    closed = {bottom}
    principal = {closure(1 << r) for r in range(nF * nG)}
    closed |= principal
    frontier = list(closed)
    while frontier:
        nxt = []
        for x in frontier:
            for y in list(closed):
                z = closure(x | y)
                if z not in closed:
                    closed.add(z)
                    nxt.append(z)
        frontier = nxt

    def name(mask):
        tops = [r for r in bits(mask)
                if not any(r != s and rect_down[s] >> r & 1 for s in bits(mask))]
        tops = [r for r in tops if not bottom >> r & 1]
        if not tops:
            return "bot"
        return "|".join(f"{F.elements[r // nG]}&{G.elements[r % nG]}" for r in tops)

    elems = sorted(closed, key=lambda m: (bin(m).count("1"), sorted(bits(m))))
    down = [sum(1 << k for k, x in enumerate(elems) if x & y == x) for y in elems]
    P = as_lattice(poset_from_masks([name(m) for m in elems], down))
    where = {m: k for k, m in enumerate(elems)}
    left = validate_morphism(
        F, P, [where[closure(rect_down[rid(a, G.top_idx)])] for a in range(nF)], FRAME)
    right = validate_morphism(
        G, P, [where[closure(rect_down[rid(F.top_idx, b)])] for b in range(nG)], FRAME)
    if compose(f, left).table != compose(g, right).table:
        raise LawViolation("cocone", None)
    cert = {}
    if certify:
        cert = pushout_certificate(f, g, P, left, right, catalog)
    return PushoutResult(P, left, right, cert)


def pushout_certificate(f, g, P, left, right, catalog) -> dict:
    """Exhaustive universal-property check.

    Point level: points of P biject with compatible pairs of points.  Frame
    level: for each K in ``catalog`` every cocone F -> K <- G factors
    through exactly one frame map P -> K.
    """
    F, G = f.target, g.target
    pairs = [(p.table, q.table) for p in points(F) for q in points(G)
             if compose(f, p).table == compose(g, q).table]
    induced = [(compose(left, r).table, compose(right, r).table) for r in points(P)]
    point_ok = sorted(induced) == sorted(pairs) and len(set(induced)) == len(induced)
    per_target = []
    for K in catalog:
        cocones = [(u.table, v.table) for u in hom_enumerate(F, K) for v in hom_enumerate(G, K)
                   if compose(f, u).table == compose(g, v).table]
        found = {}
        for w in hom_enumerate(P, K):
            key = (compose(left, w).table, compose(right, w).table)
            found[key] = found.get(key, 0) + 1
        ok = all(found.get(c, 0) == 1 for c in cocones) and len(found) == len(cocones)
        per_target.append({"target_size": K.n, "cocones": len(cocones), "ok": ok})
    return {
        "points": len(induced),
        "compatible_point_pairs": len(pairs),
        "points_ok": point_ok,
        "targets": per_target,
        "ok": point_ok and all(t["ok"] for t in per_target),
    }
