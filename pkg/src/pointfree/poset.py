"""Finite posets, monotone maps and downward-closed subsets.

Elements are opaque strings but every algorithm works on their integer
index (input order).  The order is stored as its full closure table plus
bitmasks of the principal down- and up-sets, so ``x <= y`` is O(1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Iterable, Sequence

from .errors import (
    CycleError,
    DuplicateElementError,
    LawViolation,
    MeetAbsentError,
    UnknownElementError,
)


def bits(mask: int):
    """Indices of the set bits of ``mask`` in increasing order."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@dataclass(frozen=True, eq=False)
class FinPoset:
    elements: tuple[str, ...]
    leq: tuple[tuple[bool, ...], ...]
    _index: dict = field(init=False, repr=False)
    down: tuple[int, ...] = field(init=False, repr=False)
    up: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.elements)
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(self.elements)})
        object.__setattr__(self, "down", tuple(
            sum(1 << j for j in range(n) if self.leq[j][i]) for i in range(n)))
        object.__setattr__(self, "up", tuple(
            sum(1 << j for j in range(n) if self.leq[i][j]) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def __len__(self):
        return self.n

    def __eq__(self, other):
        return (isinstance(other, FinPoset) and self.elements == other.elements
                and self.leq == other.leq)

    def __hash__(self):
        return hash((self.elements, self.leq))

    def __repr__(self):
        return f"FinPoset({list(self.elements)})"

    def index(self, e: str) -> int:
        try:
            return self._index[e]
        except KeyError:
            raise UnknownElementError(f"unknown element {e!r}", e) from None

    def le(self, a: str, b: str) -> bool:
        return self.leq[self.index(a)][self.index(b)]

    def mask(self, names: Iterable[str]) -> int:
        m = 0
        for e in names:
            m |= 1 << self.index(e)
        return m

    def names(self, mask: int) -> list[str]:
        return [self.elements[i] for i in bits(mask)]

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram as (lower, upper) index pairs."""
        out = []
        for i in range(self.n):
            for j in range(self.n):
                if i != j and self.leq[i][j]:
                    between = self.up[i] & self.down[j] & ~(1 << i) & ~(1 << j)
                    if not between:
                        out.append((i, j))
        return out

    def linear_extension(self) -> list[int]:
        """Indices sorted so that every element comes after everything below it."""
        return sorted(range(self.n), key=lambda i: (bin(self.down[i]).count("1"), i))

    def pairs(self) -> list[tuple[str, str]]:
        return [(self.elements[i], self.elements[j])
                for i in range(self.n) for j in range(self.n)
                if i != j and self.leq[i][j]]


def poset_from_masks(elements: Sequence[str], down: Sequence[int]) -> FinPoset:
    """Build a poset from already-closed principal downsets (trusted input)."""
    n = len(elements)
    leq = tuple(tuple(bool(down[j] >> i & 1) for j in range(n)) for i in range(n))
    return FinPoset(tuple(elements), leq)


def validate_poset(elements: Sequence[str], pairs: Iterable[Sequence[str]]) -> FinPoset:
    """Reflexive-transitive closure of ``pairs``; rejects cycles and duplicates."""
    elements = tuple(elements)
    if len(set(elements)) != len(elements):
        dup = next(e for e in elements if elements.count(e) > 1)
        raise DuplicateElementError(f"duplicate element {dup!r}", dup)
    idx = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    rel = [[i == j for j in range(n)] for i in range(n)]
    for pair in pairs:
        a, b = pair
        for e in (a, b):
            if e not in idx:
                raise UnknownElementError(f"unknown element {e!r}", e)
        rel[idx[a]][idx[b]] = True
    for k in range(n):
        for i in range(n):
            if rel[i][k]:
                row_k = rel[k]
                row_i = rel[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    for i in range(n):
        for j in range(i + 1, n):
            if rel[i][j] and rel[j][i]:
                raise CycleError(
                    f"{elements[i]!r} and {elements[j]!r} lie on a cycle",
                    (elements[i], elements[j]))
    return FinPoset(elements, tuple(tuple(r) for r in rel))


# -- bounds -----------------------------------------------------------------

def lower_bounds(P: FinPoset, mask: int) -> int:
    lb = P.full
    for i in bits(mask):
        lb &= P.down[i]
    return lb


def upper_bounds(P: FinPoset, mask: int) -> int:
    ub = P.full
    for i in bits(mask):
        ub &= P.up[i]
    return ub


def greatest(P: FinPoset, mask: int):
    """Index of the greatest element of the subset ``mask`` or None."""
    for i in bits(mask):
        if P.down[i] & mask == mask:
            return i
    return None


def least(P: FinPoset, mask: int):
    for i in bits(mask):
        if P.up[i] & mask == mask:
            return i
    return None


def meet_idx(P: FinPoset, mask: int):
    return greatest(P, lower_bounds(P, mask))


def join_idx(P: FinPoset, mask: int):
    return least(P, upper_bounds(P, mask))


def meet_of(P: FinPoset, S: Iterable[str]):
    """Greatest lower bound of ``S``, or None when it does not exist.

    The empty meet is the top element (if any).
    """
    i = meet_idx(P, P.mask(S))
    return None if i is None else P.elements[i]


def join_of(P: FinPoset, S: Iterable[str]):
    i = join_idx(P, P.mask(S))
    return None if i is None else P.elements[i]


# -- downsets -----------------------------------------------------------------

@dataclass(frozen=True)
class DownSet:
    parent: FinPoset
    members: frozenset

    @property
    def mask(self) -> int:
        return self.parent.mask(self.members)

    def sorted(self) -> list[str]:
        return self.parent.names(self.mask)


def close_down(P: FinPoset, mask: int) -> int:
    out = 0
    for i in bits(mask):
        out |= P.down[i]
    return out


def is_down_closed(P: FinPoset, mask: int) -> bool:
    return close_down(P, mask) == mask


def downward_closure(P: FinPoset, S: Iterable[str]) -> DownSet:
    return DownSet(P, frozenset(P.names(close_down(P, P.mask(S)))))


def downset_masks(P: FinPoset, within: int | None = None) -> list[int]:
    """All downsets contained in ``within`` (default: everything).

    Ordered by size, then by sorted index vector.
    """
    if within is None:
        within = P.full
    idx = list(bits(within))
    out = []
    for r in range(len(idx) + 1):
        for combo in combinations(idx, r):
            m = 0
            for i in combo:
                m |= 1 << i
            if close_down(P, m) == m:
                out.append(m)
    return out


def subset_key(mask: int):
    return (bin(mask).count("1"), tuple(bits(mask)))


def directed_subsets(P: FinPoset) -> list[frozenset]:
    """Nonempty subsets in which every pair has an upper bound inside the subset.

    In a finite poset each of these contains its own join (induct on the
    pairwise bounds), which is why the directed-join sheaf condition is
    vacuous on finite sites.
    """
    out = []
    for r in range(1, P.n + 1):
        for combo in combinations(range(P.n), r):
            m = 0
            for i in combo:
                m |= 1 << i
            if all(P.up[a] & P.up[b] & m for a, b in combinations(combo, 2)):
                out.append(frozenset(P.names(m)))
    return out


def subposet(P: FinPoset, members: Iterable[str]) -> FinPoset:
    """Full subposet on ``members``, kept in the parent's index order."""
    mask = P.mask(members)
    keep = list(bits(mask))
    return FinPoset(tuple(P.elements[i] for i in keep),
                    tuple(tuple(P.leq[i][j] for j in keep) for i in keep))


def lambda02_hypothesis(P: FinPoset, p: str, q: str) -> bool:
    """Whether every element of P lies below p or below q."""
    if meet_idx(P, P.mask([p, q])) is None:
        raise MeetAbsentError(f"{p!r} and {q!r} have no meet", (p, q))
    return P.down[P.index(p)] | P.down[P.index(q)] == P.full


# -- maps -----------------------------------------------------------------

@dataclass(frozen=True)
class MonotoneMap:
    source: FinPoset
    target: FinPoset
    table: tuple[int, ...]

    def __call__(self, e: str) -> str:
        return self.target.elements[self.table[self.source.index(e)]]

    def as_dict(self) -> dict[str, str]:
        return {self.source.elements[i]: self.target.elements[j]
                for i, j in enumerate(self.table)}

    def then(self, other: "MonotoneMap") -> "MonotoneMap":
        """``other`` after ``self``."""
        return MonotoneMap(self.source, other.target,
                           tuple(other.table[j] for j in self.table))


def monotone_violation(source: FinPoset, target: FinPoset, table):
    for i in range(source.n):
        for j in bits(source.up[i]):
            if not target.leq[table[i]][table[j]]:
                return (source.elements[i], source.elements[j])
    return None


def validate_monotone(source: FinPoset, target: FinPoset, mapping: dict) -> MonotoneMap:
    missing = [e for e in source.elements if e not in mapping]
    if missing:
        raise UnknownElementError(f"map is undefined on {missing[0]!r}", missing[0])
    table = tuple(target.index(mapping[e]) for e in source.elements)
    bad = monotone_violation(source, target, table)
    if bad:
        raise LawViolation("monotonicity", bad)
    return MonotoneMap(source, target, table)


def identity_map(P: FinPoset) -> MonotoneMap:
    return MonotoneMap(P, P, tuple(range(P.n)))


# -- isomorphism ------------------------------------------------------------

def _degrees(P: FinPoset, i: int):
    return (bin(P.down[i]).count("1"), bin(P.up[i]).count("1"))


def find_isomorphism(P: FinPoset, Q: FinPoset, fixed: dict | None = None):
    """An order isomorphism P -> Q as an index table, or None.

    Backtracking restricted to elements of equal (down-degree, up-degree);
    ``fixed`` pins some source indices (used for marked posets).  The first
    witness in lexicographic order is returned.
    """
    if P.n != Q.n:
        return None
    if sorted(_degrees(P, i) for i in range(P.n)) != sorted(_degrees(Q, i) for i in range(Q.n)):
        return None
    fixed = fixed or {}
    order = P.linear_extension()
    cand = {i: [j for j in range(Q.n) if _degrees(Q, j) == _degrees(P, i)]
            for i in range(P.n)}
    for i, j in fixed.items():
        if j not in cand[i]:
            return None
        cand[i] = [j]
    table = [None] * P.n
    used = [False] * Q.n

    def extend(k):
        if k == P.n:
            return True
        i = order[k]
        for j in cand[i]:
            if used[j]:
                continue
            ok = True
            for i2 in order[:k]:
                j2 = table[i2]
                if P.leq[i][i2] != Q.leq[j][j2] or P.leq[i2][i] != Q.leq[j2][j]:
                    ok = False
                    break
            if ok:
                table[i] = j
                used[j] = True
                if extend(k + 1):
                    return True
                used[j] = False
        table[i] = None
        return False

    return tuple(table) if extend(0) else None


def is_isomorphic(P: FinPoset, Q: FinPoset) -> bool:
    return find_isomorphism(P, Q) is not None


def canonical_form(P: FinPoset) -> tuple:
    """Isomorphism-invariant key: the lexicographically least relation matrix.

    Only permutations sorting elements by (down-degree, up-degree) are tried.
    """
    groups = {}
    for i in range(P.n):
        groups.setdefault(_degrees(P, i), []).append(i)
    keys = sorted(groups)
    best = None
    for parts in product(*(permutations(groups[k]) for k in keys)):
        order = [i for part in parts for i in part]
        code = tuple(P.leq[a][b] for a in order for b in order)
        if best is None or code < best:
            best = code
    return (tuple(keys), best)


def enumerate_posets(n: int, names: Sequence[str] | None = None) -> list[FinPoset]:
    """All posets on n elements up to isomorphism.

    Every poset has a labelling by a linear extension, so only relations
    contained in {(i, j): i < j} are generated, then deduplicated by
    canonical form.
    """
    names = tuple(names) if names is not None else tuple(f"p{i}" for i in range(n))
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen = {}
    for choice in product((False, True), repeat=len(slots)):
        lt = [[False] * n for _ in range(n)]
        for (i, j), c in zip(slots, choice):
            lt[i][j] = c
        if any(lt[i][k] and lt[k][j] and not lt[i][j]
               for i in range(n) for k in range(n) for j in range(n)):
            continue
        P = FinPoset(names, tuple(tuple(lt[i][j] or i == j for j in range(n)) for i in range(n)))
        seen.setdefault(canonical_form(P), P)
    return list(seen.values())
