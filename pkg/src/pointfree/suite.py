"""The acceptance battery, shared by the CLI ``suite`` command and the tests.

Each criterion returns a ``CriterionResult`` whose ``details`` hold only
deterministic data (counts, witnesses), never timings.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import product

from . import catalog
from .catloc import from_arrow, hom_bijection_check, qlocales_over, to_arrow
from .errors import PointfreeError
from .lattice import (
    FRAME,
    SLAT,
    birkhoff,
    classify_lattice,
    compose,
    frame_pushout,
    hom_enumerate,
    identity,
    lattice_isomorphism,
    points,
    spatial_reconstruction,
)
from .quantale import (
    cidem,
    cidem_lattice,
    cidem_semilattice,
    idem,
    iota,
    marked_isomorphic,
    monoidal_homs,
    transpose_frm,
    transpose_slat,
)
from .sheaves import (
    all_presheaves,
    is_sheaf_fast,
    is_sheaf_oracle,
    presheaf_homs,
    random_presheaf,
    sheafify,
    subterminal_candidates,
    subterminal_frame,
)


@dataclass
class CriterionResult:
    key: str
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0  # wall time, kept out of reports


def _site_rng(seed, k):
    return random.Random(seed * 7919 + k)


def sheaf_criterion(seed=0, per_site=200, max_size=5) -> CriterionResult:
    sites = catalog.distributive_lattices(max_size)
    total = sheaves = 0
    disagreements = []
    for k, site in enumerate(sites):
        rng = _site_rng(seed, k)
        sample = [random_presheaf(site, rng, 3) for _ in range(per_site)]
        sample += subterminal_candidates(site)
        for F in sample:
            a, b = is_sheaf_oracle(F).ok, is_sheaf_fast(F).ok
            total += 1
            sheaves += a
            if a != b:
                disagreements.append({"site": k, "sizes": F.sizes(), "oracle": a, "fast": b})
    return CriterionResult(
        "sheaf-criterion", "oracle and fast sheaf tests agree", not disagreements,
        {"sites": len(sites), "presheaves": total, "sheaves": sheaves,
         "disagreements": len(disagreements), "witnesses": disagreements[:3]})


def quantale_battery(seed=0, n_random=4):
    cat = catalog.quantale_catalog(seed, n_random)
    for k, L in enumerate(catalog.distributive_lattices(5)):
        cat.setdefault(f"I_DL5_{k}", iota(L))
    return cat


def cidem_frame(seed=0) -> CriterionResult:
    cat = quantale_battery(seed)
    rows, failures = [], []
    for name, Q in cat.items():
        C = cidem(Q)
        row = {"name": name, "size": Q.n, "cidem": len(C.members), "flagged": Q.fully_flagged}
        try:
            L = cidem_semilattice(Q)
            closed = all(Q.mul(a, b) in C.members for a in C.members for b in C.members)
            if not closed or Q.unit not in C.members or L.top != Q.unit:
                failures.append(name)
            if Q.fully_flagged:
                F = cidem_lattice(Q)
                row["distributive"] = classify_lattice(F.carrier).kind == "distributive"
                if not row["distributive"]:
                    failures.append(name)
        except PointfreeError as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
            failures.append(name)
        rows.append(row)
    n_random = sum(1 for k in cat if k.startswith("RAND"))
    ok = not failures and len(cat) >= 12 and n_random >= 3
    return CriterionResult("cidem-frame", "cIdem of a flagged quantale is a frame", ok,
                           {"quantales": len(cat), "random": n_random,
                            "flagged": sum(r["flagged"] for r in rows), "failures": failures})


def adjunctions(seed=0) -> CriterionResult:
    slats = catalog.lattices(4)
    frames = catalog.distributive_lattices(4)
    quants = {k: Q for k, Q in quantale_battery(seed).items() if Q.n <= 4}
    slat_pairs = frm_pairs = 0
    failures = []
    for (P, (qn, Q)) in product(slats, quants.items()):
        try:
            c = transpose_slat(P, Q)
            slat_pairs += 1
            if c.counts[0] != c.counts[1]:
                failures.append(("slat", P.n, qn))
        except PointfreeError as exc:
            failures.append(("slat", P.n, qn, str(exc)))
    for (F, (qn, Q)) in product(frames, quants.items()):
        if not Q.fully_flagged:
            continue
        try:
            c = transpose_frm(F, Q)
            frm_pairs += 1
            if c.counts[0] != c.counts[1]:
                failures.append(("frm", F.n, qn))
        except PointfreeError as exc:
            failures.append(("frm", F.n, qn, str(exc)))
    spot_left = len(hom_enumerate(catalog.TWO, cidem_semilattice(catalog.LUK3), SLAT))
    spot_right = len(monoidal_homs(iota(catalog.TWO), catalog.LUK3, False))
    ok = not failures and spot_left == spot_right == 2
    return CriterionResult("adjunctions", "transposition bijections", ok, {
        "slat_pairs": slat_pairs, "frm_pairs": frm_pairs,
        "spot_slat_two_cidem_luk3": spot_left, "spot_monoidal_two_luk3": spot_right,
        "failures": failures})


def subterminals(seed=0) -> CriterionResult:
    frames = list(catalog.distributive_lattices(5)) + [catalog.SIERP, catalog.SQUARE]
    failures = []
    for F in frames:
        try:
            r = subterminal_frame(F)
            if lattice_isomorphism(F, r.frame) is None:
                failures.append(F.n)
        except PointfreeError as exc:
            failures.append((F.n, str(exc)))
    n_sierp = len(subterminal_frame(catalog.SIERP).sheaves)
    n_square = len(subterminal_frame(catalog.SQUARE).sheaves)
    ok = not failures and n_sierp == 3 and n_square == 4
    return CriterionResult("subterminals", "subterminal sheaves recover the frame", ok,
                           {"frames": len(frames), "SIERP": n_sierp, "SQUARE": n_square,
                            "failures": failures})


def spatiality(seed=0) -> CriterionResult:
    frames = catalog.distributive_lattices(6)
    bad = [k for k, F in enumerate(frames) if not spatial_reconstruction(F).iso]
    birk = []
    for k, F in enumerate(frames):
        b = birkhoff(F)
        if (compose(b.forward, b.backward).table != identity(F).table
                or compose(b.backward, b.forward).table != identity(b.downsets).table):
            birk.append(k)
    ps, pq = len(points(catalog.SIERP)), len(points(catalog.SQUARE))
    ok = not bad and not birk and ps == 2 and pq == 2
    return CriterionResult("spatiality", "finite frames are spatial", ok,
                           {"frames": len(frames), "non_spatial": bad, "birkhoff_failures": birk,
                            "points_SIERP": ps, "points_SQUARE": pq})


def kunneth(seed=0) -> CriterionResult:
    S = catalog.SIERP
    f = hom_enumerate(catalog.TWO, S, FRAME)[0]
    targets = catalog.distributive_lattices(4)
    r = frame_pushout(f, f, catalog=targets)
    n_pts = len(points(r.lattice))
    ok = (r.lattice.n == 6 and n_pts == 4 == len(points(S)) ** 2 and r.certificate["ok"]
          and len(r.certificate["targets"]) == len(targets))
    return CriterionResult("kunneth", "pushout of Sierpinski frames", ok,
                           {"elements": r.lattice.n, "points": n_pts,
                            "targets": len(targets), "certificate_ok": r.certificate["ok"]})


def sheafification(seed=0, max_site=4) -> CriterionResult:
    """Every presheaf with at most two sections per element, on every site
    with at most four elements, against every sheaf of the same bound."""
    sites = catalog.distributive_lattices(max_site)
    unit_iso = idempotent = universal = checked = 0
    failures = []
    for k, site in enumerate(sites):
        targets = [G for G in all_presheaves(site, 2) if is_sheaf_oracle(G).ok]
        for G in targets:
            _, u = sheafify(G)
            unit_iso += u.is_iso()
            if not u.is_iso():
                failures.append(("unit", k))
        for F in all_presheaves(site, 2):
            S, eta = sheafify(F)
            if not is_sheaf_oracle(S).ok:
                failures.append(("not a sheaf", k))
            _, eta2 = sheafify(S)
            idempotent += eta2.is_iso()
            if not eta2.is_iso():
                failures.append(("idempotence", k))
            for G in targets:
                direct = {m.components for m in presheaf_homs(F, G)}
                via = [eta.then(m).components for m in presheaf_homs(S, G)]
                checked += 1
                if len(set(via)) != len(via) or set(via) != direct:
                    failures.append(("universal", k))
                else:
                    universal += 1
    ok = not failures
    return CriterionResult("sheafification", "plus-plus is a sheafification", ok,
                           {"sites": len(sites), "sheaves_unit_iso": unit_iso,
                            "idempotent": idempotent, "universal_checked": checked,
                            "universal_ok": universal, "failures": failures[:5]})


def idem_cidem(seed=0) -> CriterionResult:
    Q = catalog.NONTOP3
    i, c = idem(Q), cidem(Q)
    ok = (set(i.members) == {"1", "t"} and set(c.members) == {"0", "1"}
          and not marked_isomorphic(i, c))
    return CriterionResult("idem-cidem", "Idem and cIdem differ off the stable case", ok,
                           {"idem": list(i.members), "cidem": list(c.members),
                            "marked_isomorphic": marked_isomorphic(i, c)})


def qlocale_catalog():
    out = []
    spaces = [catalog.TWO, catalog.SIERP, catalog.SQUARE]
    cats = [iota(catalog.TWO), iota(catalog.SIERP), catalog.LUK3, catalog.NONTOP3,
            iota(catalog.SQUARE)]
    for F in spaces:
        for Q in cats:
            out += qlocales_over(F, Q)
    return out


def catloc_embedding(seed=0) -> CriterionResult:
    qls = qlocale_catalog()
    round_trip = all(from_arrow(to_arrow(X), X.space, X.cat) == X for X in qls)
    pairs = morphisms = 0
    failures = []
    for L, M in product(qls, qls):
        try:
            c = hom_bijection_check(L, M)
            pairs += 1
            morphisms += c.counts[0]
        except PointfreeError as exc:
            failures.append(str(exc))
    ok = round_trip and not failures
    return CriterionResult("catloc", "categorified locales embed in arrows", ok,
                           {"qlocales": len(qls), "pairs": pairs, "morphisms": morphisms,
                            "round_trip": round_trip, "failures": failures[:3]})


CRITERIA = {
    "sheaf-criterion": sheaf_criterion,
    "cidem-frame": cidem_frame,
    "adjunctions": adjunctions,
    "subterminals": subterminals,
    "spatiality": spatiality,
    "kunneth": kunneth,
    "sheafification": sheafification,
    "idem-cidem": idem_cidem,
    "catloc": catloc_embedding,
}


def run(seed=0, only=None) -> list[CriterionResult]:
    keys = [only] if only else list(CRITERIA)
    out = []
    for key in keys:
        t0 = time.perf_counter()
        r = CRITERIA[key](seed=seed)
        r.elapsed = time.perf_counter() - t0
        out.append(r)
    return out
