"""Named small structures and exhaustive/seeded families of them."""
from __future__ import annotations

import random
from functools import lru_cache

from .lattice import DistLattice, Semilattice, as_lattice, as_semilattice, chain, classify_lattice, lattice
from .poset import FinPoset, enumerate_posets, validate_poset
from .quantale import MonoidalPoset, iota, monoidal_structures, product_quantale, validate_monoidal_poset

ONE = chain(["top"])
TWO = chain(["bot", "top"])
SIERP = chain(["bot", "u", "top"])
CHAIN4 = chain(["bot", "l", "h", "top"])
SQUARE = lattice(["bot", "a", "b", "top"],
                 [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])
ANTICHAIN2 = validate_poset(["a", "b"], [])
M3_POSET = validate_poset(
    ["bot", "x", "y", "z", "top"],
    [("bot", "x"), ("bot", "y"), ("bot", "z"), ("x", "top"), ("y", "top"), ("z", "top")])
N5_POSET = validate_poset(
    ["bot", "p", "q", "r", "top"],
    [("bot", "p"), ("p", "q"), ("bot", "r"), ("q", "top"), ("r", "top")])
M3 = as_semilattice(M3_POSET)
N5 = as_semilattice(N5_POSET)

# Lukasiewicz 3-chain: a (x) a = 0, unit 1 on top
LUK3 = validate_monoidal_poset(
    validate_poset(["0", "a", "1"], [("0", "a"), ("a", "1")]),
    [["0", "0", "0"], ["0", "0", "a"], ["0", "a", "1"]], "1")

# 3-chain whose unit is not the top: 0 < 1 < t with t (x) t = t
NONTOP3 = validate_monoidal_poset(
    validate_poset(["0", "1", "t"], [("0", "1"), ("1", "t")]),
    [["0", "0", "0"], ["0", "1", "t"], ["0", "t", "t"]], "1")

# 4-chain Lukasiewicz: i (x) j = max(0, i + j - 3)
LUK4 = validate_monoidal_poset(
    validate_poset(["0", "1", "2", "3"], [("0", "1"), ("1", "2"), ("2", "3")]),
    [[str(max(0, i + j - 3)) for j in range(4)] for i in range(4)], "3")

LUK3_SQ = product_quantale(LUK3, LUK3)

LATTICES = {"ONE": ONE, "TWO": TWO, "SIERP": SIERP, "CHAIN4": CHAIN4, "SQUARE": SQUARE}
SEMILATTICES = {**LATTICES, "M3": M3, "N5": N5}
POSETS = {"ANTICHAIN2": ANTICHAIN2, "M3": M3_POSET, "N5": N5_POSET,
          **{k: v.carrier for k, v in LATTICES.items()}}
QUANTALES = {"LUK3": LUK3, "NONTOP3": NONTOP3, "LUK4": LUK4, "LUK3_SQ": LUK3_SQ,
             **{f"I_{k}": iota(v) for k, v in SEMILATTICES.items()}}


@lru_cache(maxsize=None)
def distributive_lattices(max_size: int) -> tuple[DistLattice, ...]:
    """Every distributive lattice with at most ``max_size`` elements, up to iso.

    A bounded poset with n >= 2 elements is determined by its middle part,
    an arbitrary poset on n - 2 elements; each candidate is kept when it is
    a distributive lattice.  Element names are "bot", "top", "x0", "x1", ...
    """
    out = [ONE] if max_size >= 1 else []
    for n in range(2, max_size + 1):
        for mid in enumerate_posets(n - 2, [f"x{i}" for i in range(n - 2)]):
            pairs = [("bot", e) for e in mid.elements] + [(e, "top") for e in mid.elements]
            pairs += mid.pairs() + [("bot", "top")]
            P = validate_poset(["bot", *mid.elements, "top"], pairs)
            if classify_lattice(P).kind == "distributive":
                out.append(as_lattice(P))
    return tuple(out)


@lru_cache(maxsize=None)
def lattices(max_size: int) -> tuple[Semilattice, ...]:
    """Every finite lattice (equivalently, finite semilattice) up to iso."""
    out = [ONE] if max_size >= 1 else []
    for n in range(2, max_size + 1):
        for mid in enumerate_posets(n - 2, [f"x{i}" for i in range(n - 2)]):
            pairs = [("bot", e) for e in mid.elements] + [(e, "top") for e in mid.elements]
            pairs += mid.pairs() + [("bot", "top")]
            P = validate_poset(["bot", *mid.elements, "top"], pairs)
            if classify_lattice(P).kind != "not-semilattice":
                out.append(as_semilattice(P))
    return tuple(out)


def random_quantales(seed: int, count: int, max_size: int = 4) -> list[MonoidalPoset]:
    """Seeded sample of valid monoidal posets on small carriers.

    Carriers are drawn from the small lattices and the 2-antichain; the unit
    is drawn uniformly; the table is drawn from all valid ones.  Trivial
    draws (cartesian structures already in the catalog) are allowed.
    """
    rng = random.Random(seed)
    carriers = [L.carrier for L in lattices(max_size) if L.n >= 2] + [ANTICHAIN2]
    out = []
    while len(out) < count:
        P = rng.choice(carriers)
        unit = rng.choice(P.elements)
        options = _structures(P, unit)
        if options:
            out.append(options[rng.randrange(len(options))])
    return out


@lru_cache(maxsize=None)
def _structures(P: FinPoset, unit: str):
    return tuple(monoidal_structures(P, unit))


def quantale_catalog(seed: int = 0, n_random: int = 4) -> dict[str, MonoidalPoset]:
    cat = dict(QUANTALES)
    for k, Q in enumerate(random_quantales(seed, n_random)):
        cat[f"RAND{k}"] = Q
    return cat
