"""Finite commutative monoidal posets and their (co)idempotent elements.

A monoidal poset stands in for a symmetric monoidal category with equality
playing the role of equivalence.  A coidempotent object c -> 1 becomes an
element c <= unit with c (x) c = c; an idempotent one becomes unit <= e with
e (x) e = e.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .errors import (
    BijectionFailure,
    FactorizationFailure,
    FlagMissing,
    InternalTheoremViolation,
    LawViolation,
)
from .lattice import (
    FRAME,
    SLAT,
    DistLattice,
    LatticeMorphism,
    Semilattice,
    as_lattice,
    classify_lattice,
    hom_enumerate,
    law_violation,
)
from .poset import (
    FinPoset,
    MonotoneMap,
    find_isomorphism,
    join_idx,
    monotone_violation,
    subposet,
    validate_poset,
)


@dataclass(frozen=True, eq=False)
class MonoidalPoset:
    carrier: FinPoset
    tensor: tuple  # index table
    unit: str
    has_finite_joins: bool = field(init=False)
    has_all_joins: bool = field(init=False)
    tensor_distributes: bool = field(init=False)
    join: tuple = field(init=False, repr=False)

    def __post_init__(self):
        P, t = self.carrier, self.tensor
        bot = join_idx(P, 0)
        join = None
        if bot is not None:
            join = [[join_idx(P, 1 << i | 1 << j) for j in range(P.n)] for i in range(P.n)]
            if any(None in row for row in join):
                join = None
        joins = join is not None
        dist = joins and all(t[x][bot] == bot for x in range(P.n)) and all(
            t[x][join[y][z]] == join[t[x][y]][t[x][z]]
            for x in range(P.n) for y, z in combinations(range(P.n), 2))
        object.__setattr__(self, "has_finite_joins", joins)
        # finite carrier: finite joins are all joins
        object.__setattr__(self, "has_all_joins", joins)
        object.__setattr__(self, "tensor_distributes", dist)
        object.__setattr__(self, "join", tuple(map(tuple, join)) if joins else None)

    @property
    def elements(self):
        return self.carrier.elements

    @property
    def n(self):
        return self.carrier.n

    @property
    def unit_idx(self):
        return self.carrier.index(self.unit)

    @property
    def fully_flagged(self):
        return self.has_finite_joins and self.has_all_joins and self.tensor_distributes

    @property
    def bottom_idx(self):
        return join_idx(self.carrier, 0)

    def mul(self, a: str, b: str) -> str:
        P = self.carrier
        return P.elements[self.tensor[P.index(a)][P.index(b)]]

    def flags(self) -> dict:
        return {"has_finite_joins": self.has_finite_joins,
                "has_all_joins": self.has_all_joins,
                "tensor_distributes": self.tensor_distributes}

    def tensor_names(self):
        return [[self.elements[k] for k in row] for row in self.tensor]

    def __eq__(self, other):
        return (isinstance(other, MonoidalPoset) and self.carrier == other.carrier
                and self.tensor == other.tensor and self.unit == other.unit)

    def __hash__(self):
        return hash((self.carrier, self.tensor, self.unit))

    def __repr__(self):
        return f"MonoidalPoset({list(self.elements)}, unit={self.unit!r})"


def monoid_violation(P: FinPoset, t, u):
    n = P.n
    for a in range(n):
        for b in range(a + 1, n):
            if t[a][b] != t[b][a]:
                return ("commutativity", (P.elements[a], P.elements[b]))
    for a in range(n):
        if t[u][a] != a:
            return ("unit", P.elements[a])
    for a in range(n):
        for b in range(n):
            ab = t[a][b]
            for c in range(n):
                if t[ab][c] != t[a][t[b][c]]:
                    return ("associativity", (P.elements[a], P.elements[b], P.elements[c]))
    for a in range(n):
        for b in range(n):
            if P.leq[a][b]:
                for c in range(n):
                    if not P.leq[t[a][c]][t[b][c]]:
                        return ("monotonicity", (P.elements[a], P.elements[b], P.elements[c]))
    return None


def validate_monoidal_poset(poset: FinPoset, tensor, unit: str) -> MonoidalPoset:
    """``tensor`` is a row-major table of element names (or of indices)."""
    n = poset.n
    if len(tensor) != n or any(len(row) != n for row in tensor):
        raise LawViolation("shape", (n, [len(r) for r in tensor]))
    t = tuple(tuple(poset.index(x) if isinstance(x, str) else int(x) for x in row)
              for row in tensor)
    bad = monoid_violation(poset, t, poset.index(unit))
    if bad:
        raise LawViolation(*bad)
    return MonoidalPoset(poset, t, unit)


def iota(P: Semilattice) -> MonoidalPoset:
    """The cartesian monoidal structure: tensor = meet, unit = top."""
    return MonoidalPoset(P.carrier, P.meet, P.top)


def product_quantale(A: MonoidalPoset, B: MonoidalPoset) -> MonoidalPoset:
    names = [f"({a},{b})" for a in A.elements for b in B.elements]
    nB = B.n
    pairs = [(names[i], names[j]) for i in range(len(names)) for j in range(len(names))
             if A.carrier.leq[i // nB][j // nB] and B.carrier.leq[i % nB][j % nB]]
    P = validate_poset(names, pairs)
    t = [[A.tensor[i // nB][j // nB] * nB + B.tensor[i % nB][j % nB]
          for j in range(len(names))] for i in range(len(names))]
    return validate_monoidal_poset(P, t, f"({A.unit},{B.unit})")


# -- (co)idempotents ------------------------------------------------------------

@dataclass(frozen=True)
class UnitSubposet:
    """A subposet of a monoidal poset that contains the unit."""

    parent: MonoidalPoset
    members: tuple[str, ...]
    poset: FinPoset

    @property
    def unit(self):
        return self.parent.unit

    def marked(self):
        return self.poset, self.unit


class CIdemPoset(UnitSubposet):
    pass


class IdemPoset(UnitSubposet):
    pass


def cidem(Q: MonoidalPoset) -> CIdemPoset:
    P, t, u = Q.carrier, Q.tensor, Q.unit_idx
    members = [P.elements[c] for c in range(Q.n) if P.leq[c][u] and t[c][c] == c]
    return CIdemPoset(Q, tuple(members), subposet(P, members))


def idem(Q: MonoidalPoset) -> IdemPoset:
    P, t, u = Q.carrier, Q.tensor, Q.unit_idx
    members = [P.elements[e] for e in range(Q.n) if P.leq[u][e] and t[e][e] == e]
    return IdemPoset(Q, tuple(members), subposet(P, members))


def marked_isomorphic(A: UnitSubposet, B: UnitSubposet) -> bool:
    """Order isomorphism sending unit to unit."""
    PA, ua = A.marked()
    PB, ub = B.marked()
    return find_isomorphism(PA, PB, {PA.index(ua): PB.index(ub)}) is not None


def cidem_semilattice(Q: MonoidalPoset) -> Semilattice:
    """cIdem(Q) with top = unit; checks that the induced meet is the tensor."""
    C = cidem(Q)
    L = Semilattice(C.poset, Q.unit)
    _check_meet_is_tensor(Q, C, L)
    return L


def _check_meet_is_tensor(Q, C, L):
    P = Q.carrier
    idx = [P.index(c) for c in C.members]
    for a, ia in enumerate(idx):
        for b, ib in enumerate(idx):
            if idx[L.meet[a][b]] != Q.tensor[ia][ib]:
                raise InternalTheoremViolation(
                    "meet in cIdem differs from the tensor", (C.members[a], C.members[b]))


def cidem_lattice(Q: MonoidalPoset) -> DistLattice:
    """The frame of coidempotents.

    top = unit, meet = tensor, bottom = least element of Q, binary join =
    the join in Q.  Each of these facts is re-checked here rather than
    assumed.
    """
    if not (Q.has_finite_joins and Q.tensor_distributes):
        missing = [k for k, v in Q.flags().items() if not v]
        raise FlagMissing(f"cidem_lattice needs {', '.join(missing)}", missing)
    C = cidem(Q)
    P, t = Q.carrier, Q.tensor
    members = {P.index(c) for c in C.members}
    if Q.unit_idx not in members:
        raise InternalTheoremViolation("unit is not coidempotent", Q.unit)
    for a in members:
        for b in members:
            if t[a][b] not in members:
                raise InternalTheoremViolation("tensor of coidempotents", (P.elements[a], P.elements[b]))
            j = Q.join[a][b]
            if j not in members:
                raise InternalTheoremViolation("join of coidempotents", (P.elements[a], P.elements[b]))
    bot = Q.bottom_idx
    if bot not in members:
        raise InternalTheoremViolation("least element is not coidempotent", P.elements[bot])
    kind = classify_lattice(C.poset)
    if kind.kind != "distributive":
        raise InternalTheoremViolation("cIdem is not distributive", kind.witness)
    L = as_lattice(C.poset)
    _check_meet_is_tensor(Q, C, L)
    idx = [P.index(c) for c in C.members]
    for a in range(L.n):
        for b in range(L.n):
            if idx[L.join[a][b]] != Q.join[idx[a]][idx[b]]:
                raise InternalTheoremViolation("join in cIdem differs from the join in Q",
                                               (C.members[a], C.members[b]))
    if idx[L.bottom_idx] != bot:
        raise InternalTheoremViolation("bottom of cIdem", L.bottom)
    return L


# -- monoidal maps --------------------------------------------------------------

def monoidal_violation(A: MonoidalPoset, B: MonoidalPoset, table, require_joins=False):
    bad = monotone_violation(A.carrier, B.carrier, table)
    if bad:
        return ("monotonicity", bad)
    if table[A.unit_idx] != B.unit_idx:
        return ("unit", A.unit)
    for a in range(A.n):
        for b in range(A.n):
            if table[A.tensor[a][b]] != B.tensor[table[a]][table[b]]:
                return ("tensor", (A.elements[a], A.elements[b]))
    if require_joins:
        if table[A.bottom_idx] != B.bottom_idx:
            return ("bottom", A.elements[A.bottom_idx])
        for a, b in combinations(range(A.n), 2):
            if table[A.join[a][b]] != B.join[table[a]][table[b]]:
                return ("join", (A.elements[a], A.elements[b]))
    return None


def validate_monoidal_map(A, B, mapping, require_joins=False) -> MonotoneMap:
    if isinstance(mapping, dict):
        table = tuple(B.carrier.index(mapping[e]) for e in A.elements)
    else:
        table = tuple(mapping)
    bad = monoidal_violation(A, B, table, require_joins)
    if bad:
        raise LawViolation(*bad)
    return MonotoneMap(A.carrier, B.carrier, table)


def monoidal_homs(A: MonoidalPoset, B: MonoidalPoset, require_joins=False) -> list[MonotoneMap]:
    """All monotone unit- and tensor-preserving maps A -> B (optionally join-preserving)."""
    if require_joins and not (A.has_finite_joins and B.has_finite_joins):
        raise FlagMissing("join preservation needs finite joins on both sides")
    S = A.carrier
    order = S.linear_extension()
    pos = {i: k for k, i in enumerate(order)}
    forced = {A.unit_idx: B.unit_idx}
    if require_joins:
        if forced.get(A.bottom_idx, B.bottom_idx) != B.bottom_idx:
            return []
        forced[A.bottom_idx] = B.bottom_idx
    checks = [[] for _ in range(S.n)]
    for i in range(S.n):
        for j in range(i, S.n):
            m = A.tensor[i][j]
            checks[max(pos[i], pos[j], pos[m])].append(("t", i, j, m))
            if require_joins and i != j:
                u = A.join[i][j]
                checks[max(pos[i], pos[j], pos[u])].append(("j", i, j, u))
            if i != j and S.leq[i][j]:
                checks[max(pos[i], pos[j])].append(("le", i, j, None))
            if i != j and S.leq[j][i]:
                checks[max(pos[i], pos[j])].append(("le", j, i, None))
    T = B.carrier
    table = [None] * S.n
    out = []

    def ok(k):
        for tag, i, j, r in checks[k]:
            a, b = table[i], table[j]
            if tag == "le":
                if not T.leq[a][b]:
                    return False
            elif tag == "t":
                if B.tensor[a][b] != table[r]:
                    return False
            elif B.join[a][b] != table[r]:
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
    return [MonotoneMap(S, T, t) for t in out]


def factor_check(f: MonotoneMap, P: Semilattice, Q: MonoidalPoset, kind=SLAT) -> LatticeMorphism:
    """Corestrict a monoidal map out of a semilattice to cIdem(Q).

    Each value f(p) = f(p ^ p) = f(p) (x) f(p) lies below f(top) = unit, so
    the image is coidempotent; this is checked, not assumed.
    """
    C = cidem_lattice(Q) if kind == FRAME else cidem_semilattice(Q)
    members = set(C.elements)
    table = []
    for i, j in enumerate(f.table):
        e = Q.elements[j]
        if e not in members:
            raise FactorizationFailure("value is not coidempotent", (P.elements[i], e))
        table.append(C.carrier.index(e))
    bad = law_violation(P, C, table, kind)
    if bad:
        raise FactorizationFailure(f"corestriction breaks {bad[0]}", bad[1])
    return LatticeMorphism(P, C, MonotoneMap(P.carrier, C.carrier, tuple(table)), kind)


def include(g: LatticeMorphism, Q: MonoidalPoset) -> MonotoneMap:
    """Postcompose a map into cIdem(Q) with the inclusion cIdem(Q) -> Q."""
    C = g.target
    return MonotoneMap(g.source.carrier, Q.carrier,
                       tuple(Q.carrier.index(C.elements[j]) for j in g.table))


@dataclass(frozen=True)
class BijectionCertificate:
    left: list      # lattice morphisms into cIdem(Q)
    right: list     # monoidal maps into Q
    forward: dict   # left index -> right index
    backward: dict  # right index -> left index

    @property
    def counts(self):
        return len(self.left), len(self.right)

    @property
    def ok(self):
        return len(self.left) == len(self.right)


def _certify(left, right, fwd, back):
    rindex = {m.table: k for k, m in enumerate(right)}
    lindex = {m.table: k for k, m in enumerate(left)}
    forward, backward = {}, {}
    for k, g in enumerate(left):
        t = fwd(g).table
        if t not in rindex:
            raise BijectionFailure("transpose of a left map is not a right map", g.as_dict())
        forward[k] = rindex[t]
    for k, f in enumerate(right):
        t = back(f).table
        if t not in lindex:
            raise BijectionFailure("transpose of a right map is not a left map", f.as_dict())
        backward[k] = lindex[t]
    for k in forward:
        if backward[forward[k]] != k:
            raise BijectionFailure("round trip on the left is not the identity", left[k].as_dict())
    for k in backward:
        if forward[backward[k]] != k:
            raise BijectionFailure("round trip on the right is not the identity", right[k].as_dict())
    if len(left) != len(right):
        raise BijectionFailure("hom-set sizes differ", (len(left), len(right)))
    return BijectionCertificate(left, right, forward, backward)


def transpose_slat(P: Semilattice, Q: MonoidalPoset) -> BijectionCertificate:
    """Hom_SLat(P, cIdem Q)  ~  monoidal maps iota(P) -> Q."""
    C = cidem_semilattice(Q)
    left = hom_enumerate(P, C, SLAT)
    right = monoidal_homs(iota(P), Q, False)
    return _certify(left, right, lambda g: include(g, Q), lambda f: factor_check(f, P, Q, SLAT))


def transpose_frm(F: DistLattice, Q: MonoidalPoset) -> BijectionCertificate:
    """Hom_Frm(F, cIdem Q)  ~  join-preserving monoidal maps F -> Q."""
    C = cidem_lattice(Q)
    left = hom_enumerate(F, C, FRAME)
    right = monoidal_homs(iota(F), Q, True)
    return _certify(left, right, lambda g: include(g, Q), lambda f: factor_check(f, F, Q, FRAME))


# -- generating quantales -------------------------------------------------------------

def monoidal_structures(P: FinPoset, unit: str, limit=None) -> list[MonoidalPoset]:
    """Every commutative monoid structure on P with the given unit that is
    monotone, in lexicographic order of the tensor table."""
    n, u = P.n, P.index(unit)
    others = [i for i in range(n) if i != u]
    slots = [(a, b) for k, a in enumerate(others) for b in others[k:]]
    out = []
    for values in product(range(n), repeat=len(slots)):
        t = [[0] * n for _ in range(n)]
        for i in range(n):
            t[u][i] = t[i][u] = i
        for (a, b), v in zip(slots, values):
            t[a][b] = t[b][a] = v
        t = tuple(map(tuple, t))
        if monoid_violation(P, t, u) is None:
            out.append(MonoidalPoset(P, t, unit))
            if limit and len(out) >= limit:
                break
    return out
