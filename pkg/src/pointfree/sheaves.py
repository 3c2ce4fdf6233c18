"""Set-valued presheaves on finite frames.

A presheaf assigns to each element V of a finite distributive lattice a
finite set of opaque section names, with restriction tables along every
U <= V.  Two sheaf tests are provided and must agree:

* ``is_sheaf_oracle`` checks gluing against every covering sieve;
* ``is_sheaf_fast`` checks that the bottom carries exactly one section and
  that every square F(V v V') -> F(V) x_{F(V ^ V')} F(V') is a bijection.

The third (directed-join) condition of the general criterion is vacuous on
finite sites: a finite directed subset D contains its join, so the map
F(join D) -> lim_D F is the projection from an initial index, an identity.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations_with_replacement, product

from .errors import FunctorialityViolation, IsoFailure, LawViolation, ParseError, SiteMismatch
from .lattice import FRAME, DistLattice, LatticeMorphism, as_lattice, classify_lattice, validate_morphism
from .poset import bits, downset_masks, poset_from_masks, subset_key


@dataclass(frozen=True, eq=False)
class Presheaf:
    site: DistLattice
    sections: tuple  # element index -> tuple of section names
    res: dict        # (v, u) with u <= v -> tuple: section index of v -> section index of u

    def size(self, v: int) -> int:
        return len(self.sections[v])

    def sizes(self) -> dict:
        return {e: len(s) for e, s in zip(self.site.elements, self.sections)}

    def restrict(self, V: str, U: str, s: str) -> str:
        """Restriction of the section ``s`` of V to U."""
        v, u = self.site.carrier.index(V), self.site.carrier.index(U)
        k = self.res[(v, u)][self.sections[v].index(s)]
        return self.sections[u][k]

    def __repr__(self):
        return f"Presheaf({self.sizes()})"


def check_functoriality(site: DistLattice, sections, res):
    """First violated functoriality law as (law, witness), or None."""
    P = site.carrier
    for v in range(P.n):
        if res.get((v, v)) != tuple(range(len(sections[v]))):
            return ("identity", P.elements[v])
        for u in bits(P.down[v]):
            t = res.get((v, u))
            if t is None or len(t) != len(sections[v]) or any(
                    not 0 <= x < len(sections[u]) for x in t):
                return ("table", (P.elements[v], P.elements[u]))
    for v in range(P.n):
        for w in bits(P.down[v]):
            for u in bits(P.down[w]):
                a, b, c = res[(v, w)], res[(w, u)], res[(v, u)]
                for s in range(len(sections[v])):
                    if b[a[s]] != c[s]:
                        return ("composition", (P.elements[v], P.elements[w], P.elements[u],
                                                sections[v][s]))
    return None


def make_presheaf(site: DistLattice, sections, res, check=True) -> Presheaf:
    sections = tuple(tuple(s) for s in sections)
    res = {k: tuple(v) for k, v in res.items()}
    if check:
        bad = check_functoriality(site, sections, res)
        if bad:
            raise FunctorialityViolation(f"{bad[0]} fails at {bad[1]!r}", bad)
    return Presheaf(site, sections, res)


def validate_presheaf(site: DistLattice, sections: dict, restrictions: dict) -> Presheaf:
    """Build a presheaf from name-level data.

    ``restrictions`` maps "V>U" to a dict of section names.  Identity
    restrictions may be omitted; a missing pair U < V is derived by
    composing through an intermediate element, and all given and derived
    tables must agree.
    """
    P = site.carrier
    secs = []
    for e in P.elements:
        if e not in sections:
            raise ParseError(f"no sections given for {e!r}", e)
        names = [str(s) for s in sections[e]]
        if len(set(names)) != len(names):
            raise ParseError(f"duplicate section names at {e!r}", e)
        secs.append(tuple(names))
    given = {}
    for key, table in restrictions.items():
        parts = key.split(">")
        if len(parts) != 2:
            raise ParseError(f"bad restriction key {key!r}", key)
        v, u = P.index(parts[0]), P.index(parts[1])
        if not P.leq[u][v]:
            raise ParseError(f"restriction {key!r} is not along an order relation", key)
        try:
            given[(v, u)] = tuple(secs[u].index(str(table[s])) for s in secs[v])
        except (KeyError, ValueError):
            raise FunctorialityViolation(f"restriction {key!r} is not a total map", key) from None
    res = dict(given)
    for v in range(P.n):
        res.setdefault((v, v), tuple(range(len(secs[v]))))

    def derive(v, u):
        if (v, u) in res:
            return res[(v, u)]
        if len(secs[u]) == 1:
            res[(v, u)] = (0,) * len(secs[v])
            return res[(v, u)]
        mids = [w for w in bits(P.down[v] & P.up[u]) if w not in (u, v)]
        if not mids:
            raise FunctorialityViolation(
                f"restriction {P.elements[v]}>{P.elements[u]} is missing",
                (P.elements[v], P.elements[u]))
        w = mids[0]
        a, b = derive(v, w), derive(w, u)
        res[(v, u)] = tuple(b[x] for x in a)
        return res[(v, u)]

    for v in range(P.n):
        for u in bits(P.down[v]):
            derive(v, u)
    return make_presheaf(site, secs, res)


def presheaf_descriptor(F: Presheaf, site_ref: str) -> dict:
    P = F.site.carrier
    restrictions = {}
    for v in range(P.n):
        for u in bits(P.down[v]):
            if u != v:
                restrictions[f"{P.elements[v]}>{P.elements[u]}"] = {
                    F.sections[v][s]: F.sections[u][t] for s, t in enumerate(F.res[(v, u)])}
    return {"site": site_ref,
            "sections": {e: list(s) for e, s in zip(P.elements, F.sections)},
            "restrictions": restrictions}


# -- sieves and matching families -----------------------------------------------------

@dataclass(frozen=True)
class Sieve:
    site: DistLattice
    target: int
    mask: int

    @property
    def members(self) -> list[str]:
        return self.site.carrier.names(self.mask)

    @property
    def covering(self) -> bool:
        return self.site.join_mask(self.mask) == self.target


@dataclass(frozen=True)
class MatchingFamily:
    sieve: Sieve
    choice: dict  # member name -> section name


def sieve(site: DistLattice, V: str, members) -> Sieve:
    P = site.carrier
    v, m = P.index(V), P.mask(members)
    if m & ~P.down[v]:
        raise LawViolation("sieve containment", V)
    if any(P.down[i] & ~m for i in bits(m)):
        raise LawViolation("downward closure", members)
    return Sieve(site, v, m)


def covering_masks(site: DistLattice, v: int) -> list[int]:
    return [m for m in downset_masks(site.carrier, site.carrier.down[v])
            if site.join_mask(m) == v]


def covering_sieves(site: DistLattice, V: str) -> list[Sieve]:
    v = site.carrier.index(V)
    return [Sieve(site, v, m) for m in covering_masks(site, v)]


def families(F: Presheaf, mask: int) -> list[tuple]:
    """Compatible families over the downset ``mask``.

    Each family is a tuple of section indices, one per member in increasing
    index order.  Members are visited from the top down; a member below an
    already-chosen one is forced to its restriction.
    """
    P = F.site.carrier
    members = list(bits(mask))
    slot = {u: k for k, u in enumerate(members)}
    order = sorted(members, key=lambda u: (-bin(P.down[u]).count("1"), u))
    choice = [None] * len(members)
    out = []

    def extend(k):
        if k == len(order):
            out.append(tuple(choice))
            return
        u = order[k]
        above = [w for w in order[:k] if P.leq[u][w]]
        if above:
            vals = {F.res[(w, u)][choice[slot[w]]] for w in above}
            if len(vals) != 1:
                return
            options = vals
        else:
            options = range(F.size(u))
        for s in options:
            choice[slot[u]] = s
            extend(k + 1)
        choice[slot[u]] = None

    extend(0)
    out.sort()
    return out


def matching_families(F: Presheaf, R: Sieve) -> list[MatchingFamily]:
    members = list(bits(R.mask))
    names = F.site.elements
    return [MatchingFamily(R, {names[u]: F.sections[u][s] for u, s in zip(members, fam)})
            for fam in families(F, R.mask)]


def canonical_family(F: Presheaf, v: int, mask: int, s: int) -> tuple:
    return tuple(F.res[(v, u)][s] for u in bits(mask))


@dataclass(frozen=True)
class SheafCheck:
    ok: bool
    condition: str = ""
    witness: object = None


def is_sheaf_oracle(F: Presheaf) -> SheafCheck:
    """Gluing against every covering sieve of every element."""
    P = F.site.carrier
    for v in range(P.n):
        for m in covering_masks(F.site, v):
            fams = families(F, m)
            image = [canonical_family(F, v, m, s) for s in range(F.size(v))]
            if len(set(image)) != len(image) or set(image) != set(fams):
                return SheafCheck(False, "sieve", {
                    "element": P.elements[v], "sieve": P.names(m),
                    "sections": F.size(v), "families": len(fams)})
    return SheafCheck(True)


def pullback(F: Presheaf, v: int, w: int) -> list[tuple]:
    m = F.site.meet[v][w]
    return [(x, y) for x in range(F.size(v)) for y in range(F.size(w))
            if F.res[(v, m)][x] == F.res[(w, m)][y]]


def is_sheaf_fast(F: Presheaf) -> SheafCheck:
    """Bottom condition plus binary gluing squares."""
    L = F.site
    P = L.carrier
    if F.size(L.bottom_idx) != 1:
        return SheafCheck(False, "bottom", {"element": L.bottom, "sections": F.size(L.bottom_idx)})
    for v in range(P.n):
        for w in range(v + 1, P.n):
            j = L.join[v][w]
            pb = pullback(F, v, w)
            image = [(F.res[(j, v)][s], F.res[(j, w)][s]) for s in range(F.size(j))]
            if len(set(image)) != len(image) or set(image) != set(pb):
                return SheafCheck(False, "square", {
                    "pair": (P.elements[v], P.elements[w]),
                    "sections": F.size(j), "pullback": len(pb)})
    # directed joins: vacuous on a finite site, see the module docstring
    return SheafCheck(True)


def binary_cover_reduction(F: Presheaf, V: str, W: str) -> bool:
    """Families over the sieve generated by V and W versus the pullback
    F(V) x_{F(V ^ W)} F(W), compared through explicit inverse tables."""
    L = F.site
    P = L.carrier
    v, w = P.index(V), P.index(W)
    m = P.down[v] | P.down[w]
    members = list(bits(m))
    slot = {u: k for k, u in enumerate(members)}
    fams = families(F, m)
    pb = pullback(F, v, w)
    to_pair = {fam: (fam[slot[v]], fam[slot[w]]) for fam in fams}
    to_fam = {}
    for x, y in pb:
        fam = tuple(F.res[(v, u)][x] if P.leq[u][v] else F.res[(w, u)][y] for u in members)
        to_fam[(x, y)] = fam
    if set(to_pair.values()) != set(pb) or set(to_fam.values()) != set(fams):
        return False
    return (all(to_fam[to_pair[f]] == f for f in fams)
            and all(to_pair[to_fam[p]] == p for p in pb))


# -- morphisms ----------------------------------------------------------------------------

@dataclass(frozen=True)
class PresheafMorphism:
    source: Presheaf
    target: Presheaf
    components: tuple  # element index -> tuple of section indices

    def is_iso(self) -> bool:
        return all(len(set(c)) == len(c) == self.target.size(v)
                   for v, c in enumerate(self.components))

    def then(self, other: "PresheafMorphism") -> "PresheafMorphism":
        return PresheafMorphism(self.source, other.target, tuple(
            tuple(other.components[v][x] for x in c) for v, c in enumerate(self.components)))


def naturality_violation(F: Presheaf, G: Presheaf, comps):
    P = F.site.carrier
    for v in range(P.n):
        for u in bits(P.down[v]):
            for s in range(F.size(v)):
                if G.res[(v, u)][comps[v][s]] != comps[u][F.res[(v, u)][s]]:
                    return (P.elements[v], P.elements[u], F.sections[v][s])
    return None


def presheaf_homs(F: Presheaf, G: Presheaf) -> list[PresheafMorphism]:
    """Every natural transformation F -> G (brute force with pruning)."""
    if F.site != G.site:
        raise SiteMismatch("presheaves live on different sites")
    P = F.site.carrier
    order = sorted(range(P.n), key=lambda u: (-bin(P.down[u]).count("1"), u))
    comps = [None] * P.n
    out = []

    def extend(k):
        if k == P.n:
            out.append(PresheafMorphism(F, G, tuple(comps)))
            return
        u = order[k]
        for c in product(range(G.size(u)), repeat=F.size(u)):
            ok = True
            for v in order[:k]:
                if P.leq[u][v]:
                    rF, rG = F.res[(v, u)], G.res[(v, u)]
                    if any(rG[comps[v][s]] != c[rF[s]] for s in range(F.size(v))):
                        ok = False
                        break
            if ok:
                comps[u] = c
                extend(k + 1)
        comps[u] = None

    extend(0)
    return out


# -- sheafification -------------------------------------------------------------------------

def minimal_covering_mask(site: DistLattice, v: int) -> int:
    """Terminal index of the colimit defining the plus construction.

    Covering sieves on v are closed under intersection (distributivity:
    the pairwise meets of two covers of v join to v), so under reverse
    inclusion they form a directed poset whose greatest element is the
    intersection of all of them.  The colimit over such a poset is its
    value at that element.  Both facts are checked here.
    """
    masks = covering_masks(site, v)
    m = site.carrier.full
    for x in masks:
        m &= x
    if m not in masks:
        raise LawViolation("covering sieves are not directed", site.elements[v])
    return m


def _family_name(F: Presheaf, mask: int, fam: tuple) -> str:
    names = F.site.elements
    return "[" + ",".join(f"{names[u]}={F.sections[u][s]}" for u, s in zip(bits(mask), fam)) + "]"


def plus(F: Presheaf) -> tuple[Presheaf, PresheafMorphism]:
    """One plus construction, with its unit F -> F+."""
    L = F.site
    P = L.carrier
    mins = [minimal_covering_mask(L, v) for v in range(P.n)]
    fams = [families(F, mins[v]) for v in range(P.n)]
    sections = [tuple(_family_name(F, mins[v], f) for f in fams[v]) for v in range(P.n)]
    res = {}
    for v in range(P.n):
        slot = {u: k for k, u in enumerate(bits(mins[v]))}
        for u in bits(P.down[v]):
            # mins[u] is contained in mins[v] ^ down(u), itself a cover of u
            keep = [slot[w] for w in bits(mins[u])]
            target = {f: k for k, f in enumerate(fams[u])}
            res[(v, u)] = tuple(target[tuple(f[i] for i in keep)] for f in fams[v])
    Fp = make_presheaf(L, sections, res)
    unit = tuple(
        tuple({f: k for k, f in enumerate(fams[v])}[canonical_family(F, v, mins[v], s)]
              for s in range(F.size(v)))
        for v in range(P.n))
    eta = PresheafMorphism(F, Fp, unit)
    bad = naturality_violation(F, Fp, unit)
    if bad:
        raise FunctorialityViolation("plus unit is not natural", bad)
    return Fp, eta


def plus_colimit_sizes(F: Presheaf) -> list[int]:
    """Plus construction computed as a genuine colimit over all covering sieves.

    Families over a sieve R are identified with their restrictions to every
    smaller covering sieve; classes are counted with union-find.  Used to
    cross-check ``plus``.
    """
    L = F.site
    out = []
    for v in range(L.n):
        masks = covering_masks(L, v)
        nodes = {}
        parent = []

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        per = {}
        for m in masks:
            per[m] = families(F, m)
            for fam in per[m]:
                nodes[(m, fam)] = len(parent)
                parent.append(len(parent))
        for m in masks:
            members = list(bits(m))
            for m2 in masks:
                if m2 != m and m2 & m == m2:
                    keep = [k for k, u in enumerate(members) if m2 >> u & 1]
                    for fam in per[m]:
                        a = find(nodes[(m, fam)])
                        b = find(nodes[(m2, tuple(fam[k] for k in keep))])
                        parent[a] = b
        out.append(len({find(x) for x in range(len(parent))}))
    return out


def sheafify(F: Presheaf) -> tuple[Presheaf, PresheafMorphism]:
    """Plus construction applied twice; returns the sheaf and the unit."""
    F1, e1 = plus(F)
    F2, e2 = plus(F1)
    return F2, e1.then(e2)


# -- special presheaves ------------------------------------------------------------------

def constant_presheaf(site: DistLattice, names) -> Presheaf:
    names = tuple(names)
    P = site.carrier
    res = {(v, u): tuple(range(len(names))) for v in range(P.n) for u in bits(P.down[v])}
    return make_presheaf(site, [names] * P.n, res)


def terminal_presheaf(site: DistLattice) -> Presheaf:
    return constant_presheaf(site, ["*"])


def indicator_presheaf(site: DistLattice, mask: int) -> Presheaf:
    """One section on the downset ``mask``, none elsewhere."""
    P = site.carrier
    sections = [("*",) if mask >> v & 1 else () for v in range(P.n)]
    res = {(v, u): (0,) if mask >> v & 1 else ()
           for v in range(P.n) for u in bits(P.down[v])}
    return make_presheaf(site, sections, res)


def subterminal_candidates(site: DistLattice) -> list[Presheaf]:
    """All presheaves with at most one section everywhere (one per downset)."""
    return [indicator_presheaf(site, m) for m in downset_masks(site.carrier)]


def day_product(F: Presheaf, G: Presheaf) -> Presheaf:
    """Pointwise product with componentwise restrictions."""
    if F.site != G.site:
        raise SiteMismatch("presheaves live on different sites")
    P = F.site.carrier
    sections, res = [], {}
    for v in range(P.n):
        sections.append(tuple(f"({a},{b})" for a in F.sections[v] for b in G.sections[v]))
    for v in range(P.n):
        nG = G.size(v)
        for u in bits(P.down[v]):
            nGu = G.size(u)
            rF, rG = F.res[(v, u)], G.res[(v, u)]
            res[(v, u)] = tuple(rF[k // nG] * nGu + rG[k % nG] for k in range(F.size(v) * nG))
    return make_presheaf(F.site, sections, res)


# -- generation ---------------------------------------------------------------------------

def _assemble(site: DistLattice, choice) -> Presheaf:
    """Presheaf from, per element, a list of families over its strict downset."""
    P = site.carrier
    sections, res = [None] * P.n, {}
    for v in range(P.n):
        sections[v] = tuple(f"s{k}" for k in range(len(choice[v])))
        strict = list(bits(P.down[v] & ~(1 << v)))
        res[(v, v)] = tuple(range(len(choice[v])))
        for k, u in enumerate(strict):
            res[(v, u)] = tuple(fam[k] for fam in choice[v])
    return make_presheaf(site, sections, res, check=False)


def _partial(site, choice, upto):
    """The presheaf built so far, restricted to elements already in ``choice``."""
    P = site.carrier
    sections = [tuple(range(len(choice[v]))) if choice[v] is not None else () for v in range(P.n)]
    res = {}
    for v in upto:
        strict = list(bits(P.down[v] & ~(1 << v)))
        res[(v, v)] = tuple(range(len(choice[v])))
        for k, u in enumerate(strict):
            res[(v, u)] = tuple(fam[k] for fam in choice[v])
    return Presheaf(site, tuple(sections), res)


def random_presheaf(site: DistLattice, rng: random.Random, max_sections: int = 3) -> Presheaf:
    """A random presheaf built bottom-up.

    Each section of V picks a compatible family over the elements strictly
    below V, so functoriality holds by construction.  A per-presheaf bias
    decides how often an element copies the gluing data exactly, which
    yields a healthy mix of sheaves and near-misses.
    """
    P = site.carrier
    bias = rng.choice((0.0, 0.6, 0.9, 1.0))
    choice = [None] * P.n
    done = []
    for v in P.linear_extension():
        strict = P.down[v] & ~(1 << v)
        fams = families(_partial(site, choice, done), strict)
        if rng.random() < bias:
            if v == site.bottom_idx:
                picked = [()]
            elif site.join_mask(strict) == v and len(fams) <= max_sections:
                picked = list(fams)
            else:
                k = rng.randint(0, min(max_sections, len(fams)))
                picked = rng.sample(fams, k)
        else:
            k = rng.randint(0, max_sections) if fams else 0
            picked = [rng.choice(fams) for _ in range(k)]
        choice[v] = picked
        done.append(v)
    return _assemble(site, choice)


def all_presheaves(site: DistLattice, max_sections: int):
    """Every presheaf with at most ``max_sections`` sections per element.

    Generated up to relabelling of the sections at each element (multisets
    of families); isomorphic copies may still repeat.
    """
    P = site.carrier
    order = P.linear_extension()
    choice = [None] * P.n

    def extend(k):
        if k == len(order):
            yield _assemble(site, choice)
            return
        v = order[k]
        strict = P.down[v] & ~(1 << v)
        fams = families(_partial(site, choice, order[:k]), strict)
        for size in range(max_sections + 1):
            for picked in combinations_with_replacement(fams, size):
                choice[v] = list(picked)
                yield from extend(k + 1)
        choice[v] = None

    yield from extend(0)


# -- subterminal sheaves -------------------------------------------------------------------

@dataclass(frozen=True)
class SubterminalResult:
    frame: DistLattice
    sheaves: list          # indicator presheaves, in frame element order
    iso: LatticeMorphism   # site -> frame, W |-> S_W


def subterminal_frame(site: DistLattice) -> SubterminalResult:
    """Sheaves with at most one section everywhere, ordered pointwise.

    Such a sheaf is the indicator of a downset; the claim checked here is
    that the ones passing the oracle are exactly the principal downsets
    and that W |-> indicator(down W) is a frame isomorphism.
    """
    P = site.carrier
    masks = [m for m in downset_masks(P) if is_sheaf_oracle(indicator_presheaf(site, m)).ok]
    masks.sort(key=subset_key)
    names = []
    for m in masks:
        top = site.join_mask(m)
        names.append(f"S_{P.elements[top]}" if P.down[top] == m else "S_" + "+".join(P.names(m)))
    down = [sum(1 << a for a, x in enumerate(masks) if x & y == x) for y in masks]
    frame_poset = poset_from_masks(names, down)
    if classify_lattice(frame_poset).kind != "distributive":
        raise IsoFailure("subterminal sheaves do not form a frame", names)
    frame = as_lattice(frame_poset)
    where = {m: k for k, m in enumerate(masks)}
    table = []
    for w in range(P.n):
        if P.down[w] not in where:
            raise IsoFailure("principal indicator is not a sheaf", P.elements[w])
        table.append(where[P.down[w]])
    if len(set(table)) != frame.n or len(table) != frame.n:
        raise IsoFailure("W |-> S_W is not a bijection", table)
    try:
        iso = validate_morphism(site, frame, table, FRAME)
    except LawViolation as exc:
        raise IsoFailure(str(exc), exc.witness) from None
    inverse = [table.index(k) for k in range(frame.n)]
    try:
        validate_morphism(frame, site, inverse, FRAME)
    except LawViolation as exc:
        raise IsoFailure("inverse is not a frame map", exc.witness) from None
    return SubterminalResult(frame, [indicator_presheaf(site, m) for m in masks], iso)

