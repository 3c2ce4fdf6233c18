"""Command-line front end.

    pointfree [--input PATH ...] [--report text|json] [--max-size N]
              [--seed N] [--only NAME] COMMAND [ARGS ...]

Exit status: 0 when every check passes, 1 when a mathematical check fails
(the report carries the witness), 2 on input errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import suite as suite_mod
from .catalog import TWO, distributive_lattices
from .catloc import from_arrow, hom_bijection_check, to_arrow
from .errors import (
    DuplicateElementError,
    LawViolation,
    ParseError,
    PointfreeError,
    SizeLimitExceeded,
    UnknownElementError,
    UnknownReference,
)
from .lattice import (
    FRAME,
    LatticeMorphism,
    birkhoff,
    classify_lattice,
    frame_pushout,
    hom_enumerate,
    point_filter,
    points,
    spatial_reconstruction,
)
from .quantale import cidem, cidem_lattice, idem, iota, transpose_frm, transpose_slat
from .sheaves import day_product, is_sheaf_fast, is_sheaf_oracle, sheafify, subterminal_frame
from .workspace import (
    SCHEMA,
    Workspace,
    lattice_descriptor,
    morphism_descriptor,
    poset_descriptor,
    presheaf_descriptor,
    qlocale_descriptor,
    quantale_descriptor,
)

INPUT_ERRORS = (ParseError, UnknownReference, SizeLimitExceeded, DuplicateElementError,
                UnknownElementError)


class Report:
    def __init__(self, command):
        self.command = command
        self.ok = True
        self.lines = []
        self.result = {}
        self.decls = {}

    def say(self, line=""):
        self.lines.append(line)

    def fail(self, line=None):
        self.ok = False
        if line:
            self.say(line)

    def declare(self, section, name, descriptor):
        self.decls.setdefault(section, {})[name] = descriptor

    def as_json(self):
        doc = {"schema": SCHEMA,
               "report": {"command": self.command, "ok": self.ok, "result": self.result}}
        doc.update(self.decls)
        return json.dumps(doc, indent=2, ensure_ascii=False, default=_jsonable)

    def as_text(self):
        status = "ok" if self.ok else "FAILED"
        return "\n".join([f"# {self.command}: {status}", *self.lines])


def _jsonable(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    return str(x)


def _fmt_map(d):
    return ", ".join(f"{k}->{v}" for k, v in d.items())


def _fmt_set(xs):
    return "{" + ", ".join(xs) + "}"


# -- commands ----------------------------------------------------------------------

def cmd_validate(ws: Workspace, args, rep: Report):
    summary = {}
    for section in ("posets", "lattices", "quantales", "morphisms", "presheaves", "qlocales"):
        names = list(getattr(ws, section))
        summary[section] = names
        if names:
            rep.say(f"{section}: {', '.join(names)}")
    for name, P in ws.posets.items():
        rep.declare("posets", name, poset_descriptor(P))
    for name, L in ws.lattices.items():
        rep.declare("lattices", name, lattice_descriptor(L))
    for name, Q in ws.quantales.items():
        rep.declare("quantales", name, quantale_descriptor(Q))
    for name, f in ws.morphisms.items():
        s, t = _ref(ws, rep, f.source), _ref(ws, rep, f.target)
        rep.declare("morphisms", name, morphism_descriptor(f, s, t))
    for name, (F, site) in ws.presheaves.items():
        _export_lattice(ws, rep, site)
        rep.declare("presheaves", name, presheaf_descriptor(F, site))
    for name, (X, space, cat) in ws.qlocales.items():
        _export_lattice(ws, rep, space)
        _export_quantale(ws, rep, cat)
        rep.declare("qlocales", name, qlocale_descriptor(X, space, cat))
    if not any(summary.values()):
        rep.say("no declarations")
    rep.result = {"declarations": summary}


def _export_lattice(ws, rep, name):
    if name not in ws.lattices and name in ws.builtin_lattices:
        rep.declare("lattices", name, lattice_descriptor(ws.builtin_lattices[name]))
    elif name in ws.lattices:
        rep.declare("lattices", name, lattice_descriptor(ws.lattices[name]))


def _export_quantale(ws, rep, name):
    Q = ws.quantale(name)
    rep.declare("quantales", name, quantale_descriptor(Q))


def _ref(ws, rep, L):
    name = ws.lattice_name(L)
    if name is None:
        name = f"L{len(rep.decls.get('lattices', {}))}"
    rep.declare("lattices", name, lattice_descriptor(L))
    return name


def cmd_classify(ws, args, rep):
    (name,) = _need(args, 1)
    c = classify_lattice(ws.poset(name))
    rep.say(f"{name}: {c.kind}")
    if c.witness:
        rep.say(f"witness: {c.witness}")
    rep.result = {"name": name, "class": c.kind, "witness": c.witness}


def cmd_points(ws, args, rep):
    (name,) = _need(args, 1)
    F = ws.frame(name)
    pts = points(F)
    rep.say(f"{name}: {len(pts)} points")
    for k, p in enumerate(pts):
        rep.say(f"  p{k}: opens containing it = {_fmt_set(point_filter(p))}")
    rep.result = {"name": name, "count": len(pts), "points": [p.as_dict() for p in pts]}


def cmd_spatial(ws, args, rep):
    (name,) = _need(args, 1)
    F = ws.frame(name)
    r = spatial_reconstruction(F)
    rep.say(f"{name}: {len(r.points)} points, {r.opens.n} opens, iso: {'yes' if r.iso else 'no'}")
    rep.say(f"  U -> opens: {_fmt_map(r.comparison.as_dict())}")
    if not r.iso:
        rep.fail("comparison map is not an isomorphism")
    rep.declare("lattices", f"{name}_opens", lattice_descriptor(r.opens))
    rep.result = {"name": name, "points": len(r.points), "opens": r.opens.n, "iso": r.iso,
                  "comparison": r.comparison.as_dict()}


def cmd_birkhoff(ws, args, rep):
    (name,) = _need(args, 1)
    F = ws.lattice(name)
    b = birkhoff(F)
    J = b.irreducibles
    rep.say(f"{name}: join-irreducibles {_fmt_set(J.elements)}")
    rep.say(f"  order: {', '.join(f'{a}<{c}' for a, c in J.pairs()) or 'discrete'}")
    rep.say(f"  F -> Down(J): {_fmt_map(b.forward.as_dict())}")
    rep.declare("posets", f"{name}_irreducibles", poset_descriptor(J))
    rep.declare("lattices", f"{name}_downsets", lattice_descriptor(b.downsets))
    rep.result = {"name": name, "irreducibles": list(J.elements), "downsets": b.downsets.n,
                  "forward": b.forward.as_dict(), "backward": b.backward.as_dict()}


def _leg(ws, name) -> tuple[LatticeMorphism, str, str]:
    """A morphism name, or a lattice name standing for the map out of TWO."""
    try:
        f = ws.morphism(name)
        return f, _lattice_ref(ws, f.source), _lattice_ref(ws, f.target)
    except UnknownReference:
        F = ws.frame(name)
        return hom_enumerate(TWO, F, FRAME)[0], "TWO", name


def _lattice_ref(ws, L):
    return ws.lattice_name(L) or "?"


def cmd_pushout(ws, args, rep):
    a, b = _need(args, 2)
    (f, hs, fs), (g, hs2, gs) = _leg(ws, a), _leg(ws, b)
    if f.source != g.source:
        raise LawViolation("common source", (hs, hs2))
    targets = [L for L in distributive_lattices(4)]
    r = frame_pushout(f, g, catalog=targets)
    cert = r.certificate
    rep.say(f"pushout of {fs} <- {hs} -> {gs}: {r.lattice.n} elements, {cert['points']} points")
    rep.say(f"  elements: {', '.join(r.lattice.elements)}")
    rep.say(f"  compatible point pairs: {cert['compatible_point_pairs']}")
    rep.say(f"  universal property against {len(targets)} frames: "
            f"{'ok' if cert['ok'] else 'FAILED'}")
    if not cert["ok"]:
        rep.fail()
    for ref in (hs, fs, gs):
        _export_lattice(ws, rep, ref)
    rep.declare("lattices", "pushout", lattice_descriptor(r.lattice))
    rep.declare("morphisms", "pushout_left", morphism_descriptor(r.left, fs, "pushout"))
    rep.declare("morphisms", "pushout_right", morphism_descriptor(r.right, gs, "pushout"))
    rep.result = {"elements": r.lattice.n, "certificate": cert}


def cmd_cidem(ws, args, rep):
    (name,) = _need(args, 1)
    C = cidem(ws.quantale(name))
    rep.say(f"{name}: cIdem = {_fmt_set(C.members)}")
    rep.result = {"name": name, "members": list(C.members)}


def cmd_idem(ws, args, rep):
    (name,) = _need(args, 1)
    I = idem(ws.quantale(name))
    rep.say(f"{name}: Idem = {_fmt_set(I.members)}")
    rep.result = {"name": name, "members": list(I.members)}


def cmd_cidem_lattice(ws, args, rep):
    (name,) = _need(args, 1)
    L = cidem_lattice(ws.quantale(name))
    rep.say(f"{name}: frame of coidempotents {_fmt_set(L.elements)}, "
            f"top {L.top}, bottom {L.bottom}")
    rep.declare("lattices", f"{name}_cidem", lattice_descriptor(L))
    rep.result = {"name": name, "elements": list(L.elements), "top": L.top, "bottom": L.bottom}


def cmd_iota(ws, args, rep):
    (name,) = _need(args, 1)
    Q = iota(ws.lattice(name))
    rep.say(f"{name} with tensor = meet, unit = {Q.unit}")
    rep.declare("quantales", f"{name}_iota", quantale_descriptor(Q))
    rep.result = {"name": name, "unit": Q.unit, "flags": Q.flags()}


def _adjoint(ws, args, rep, frame):
    p, q = _need(args, 2)
    Q = ws.quantale(q)
    c = transpose_frm(ws.frame(p), Q) if frame else transpose_slat(ws.lattice(p), Q)
    left_name = "Hom_Frm" if frame else "Hom_SLat"
    right_name = "join-preserving monoidal maps" if frame else "monoidal maps"
    rep.say(f"|{left_name}({p}, cIdem({q}))| = {c.counts[0]}")
    rep.say(f"|{right_name} {p} -> {q}| = {c.counts[1]}")
    rep.say("round trips: identity")
    for k, g in enumerate(c.left):
        rep.say(f"  {_fmt_map(g.as_dict())}  <->  {_fmt_map(c.right[c.forward[k]].as_dict())}")
    rep.result = {"left": c.counts[0], "right": c.counts[1],
                  "pairs": [[g.as_dict(), c.right[c.forward[k]].as_dict()]
                            for k, g in enumerate(c.left)]}


def cmd_adjoint_slat(ws, args, rep):
    _adjoint(ws, args, rep, False)


def cmd_adjoint_frm(ws, args, rep):
    _adjoint(ws, args, rep, True)


def cmd_sheafcheck(ws, args, rep):
    (name,) = _need(args, 1)
    F, _ = ws.presheaf(name)
    a, b = is_sheaf_oracle(F), is_sheaf_fast(F)
    word = {True: "sheaf", False: "not a sheaf"}
    rep.say(f"oracle: {word[a.ok]}; fast: {word[b.ok]}; agree: {'yes' if a.ok == b.ok else 'no'}")
    if not a.ok:
        rep.say(f"  oracle witness: {a.witness}")
    if not b.ok:
        rep.say(f"  fast witness ({b.condition}): {b.witness}")
    if a.ok != b.ok:
        rep.fail()
    rep.result = {"name": name, "oracle": a.ok, "fast": b.ok, "agree": a.ok == b.ok,
                  "oracle_witness": a.witness, "fast_condition": b.condition,
                  "fast_witness": b.witness}


def cmd_sheafify(ws, args, rep):
    (name,) = _need(args, 1)
    F, site = ws.presheaf(name)
    S, eta = sheafify(F)
    check = is_sheaf_oracle(S)
    rep.say(f"{name}: section counts {F.sizes()} -> {S.sizes()}")
    rep.say(f"  result is a sheaf: {'yes' if check.ok else 'no'}; "
            f"unit is iso: {'yes' if eta.is_iso() else 'no'}")
    if not check.ok:
        rep.fail(f"  witness: {check.witness}")
    _export_lattice(ws, rep, site)
    rep.declare("presheaves", f"{name}_sheaf", presheaf_descriptor(S, site))
    rep.result = {"name": name, "sizes": S.sizes(), "sheaf": check.ok, "unit_iso": eta.is_iso()}


def cmd_subterminals(ws, args, rep):
    (name,) = _need(args, 1)
    r = subterminal_frame(ws.frame(name))
    rep.say(f"{name}: {len(r.sheaves)} subterminal sheaves {_fmt_set(r.frame.elements)}")
    rep.say(f"  W -> S_W: {_fmt_map(r.iso.as_dict())} (frame isomorphism)")
    rep.declare("lattices", f"{name}_subterminals", lattice_descriptor(r.frame))
    rep.result = {"name": name, "count": len(r.sheaves), "iso": r.iso.as_dict()}


def cmd_dayprod(ws, args, rep):
    a, b = _need(args, 2)
    (F, site), (G, _) = ws.presheaf(a), ws.presheaf(b)
    H = day_product(F, G)
    fs, gs, hs = is_sheaf_oracle(F).ok, is_sheaf_oracle(G).ok, is_sheaf_oracle(H)
    rep.say(f"{a} x {b}: section counts {H.sizes()}; sheaf: {'yes' if hs.ok else 'no'}")
    if fs and gs and not hs.ok:
        rep.fail(f"  product of sheaves is not a sheaf: {hs.witness}")
    _export_lattice(ws, rep, site)
    rep.declare("presheaves", f"{a}_x_{b}", presheaf_descriptor(H, site))
    rep.result = {"sizes": H.sizes(), "sheaf": hs.ok}


def cmd_catloc_check(ws, args, rep):
    (name,) = _need(args, 1)
    X, space, cat = ws.qlocale(name)
    arrow = to_arrow(X)
    back = from_arrow(arrow, X.space, X.cat)
    rep.say(f"{name}: locale with frame {space}, monoidal poset {cat}")
    # frame direction internally; as a locale map it goes Sm({cat}) -> {space}
    rep.say(f"  locale map Sm({cat}) -> {space}, frame part: {_fmt_map(X.structure.as_dict())}")
    rep.say(f"  arrow {space} -> {cat}: {_fmt_map(arrow.as_dict())}")
    rep.say(f"  round trip: {'identity' if back == X else 'FAILED'}")
    if back != X:
        rep.fail()
    _export_lattice(ws, rep, space)
    _export_quantale(ws, rep, cat)
    rep.declare("qlocales", name, qlocale_descriptor(X, space, cat))
    rep.result = {"name": name, "arrow": arrow.as_dict(), "round_trip": back == X}


def cmd_catloc_embed(ws, args, rep):
    a, b = _need(args, 2)
    (L, *_), (M, *_) = ws.qlocale(a), ws.qlocale(b)
    c = hom_bijection_check(L, M)
    rep.say(f"morphisms {a} -> {b}: {c.counts[0]}; arrow squares: {c.counts[1]}; bijection: yes")
    rep.result = {"morphisms": c.counts[0], "squares": c.counts[1]}


def cmd_suite(ws, args, rep, seed=0, only=None):
    if only and only not in suite_mod.CRITERIA:
        raise UnknownReference(f"no criterion named {only!r}", only)
    results = suite_mod.run(seed=seed, only=only)
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        rep.say(f"{mark} {r.key}: {r.title}")
        for k, v in r.details.items():
            rep.say(f"    {k}: {v}")
        if not r.passed:
            rep.fail()
    rep.result = {"seed": seed, "criteria": [
        {"key": r.key, "passed": r.passed, "details": r.details} for r in results]}


COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "points": cmd_points,
    "spatial": cmd_spatial,
    "birkhoff": cmd_birkhoff,
    "pushout": cmd_pushout,
    "cidem": cmd_cidem,
    "idem": cmd_idem,
    "cidem-lattice": cmd_cidem_lattice,
    "iota": cmd_iota,
    "adjoint-slat": cmd_adjoint_slat,
    "adjoint-frm": cmd_adjoint_frm,
    "sheafcheck": cmd_sheafcheck,
    "sheafify": cmd_sheafify,
    "subterminals": cmd_subterminals,
    "dayprod": cmd_dayprod,
    "catloc-check": cmd_catloc_check,
    "catloc-embed": cmd_catloc_embed,
    "suite": cmd_suite,
}


def _need(args, k):
    if len(args) != k:
        raise ParseError(f"expected {k} argument(s), got {len(args)}", list(args))
    return args


def build_parser():
    p = argparse.ArgumentParser(prog="pointfree", description=__doc__.splitlines()[0])
    p.add_argument("--input", action="append", default=[], metavar="PATH",
                   help="JSON declarations (repeatable)")
    p.add_argument("--report", choices=["text", "json"], default="text")
    p.add_argument("--max-size", type=int, default=12, metavar="N",
                   help="largest structure accepted from input (elements)")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled structures")
    p.add_argument("--only", metavar="NAME", help="run a single suite criterion")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("args", nargs="*")
    return p


def run(argv=None) -> tuple[int, str]:
    """Execute one command; returns (exit code, report text)."""
    ns = build_parser().parse_args(argv)
    rep = Report(ns.command)
    try:
        ws = Workspace(max_size=ns.max_size)
        for path in ns.input:
            ws.load_path(path)
        fn = COMMANDS[ns.command]
        if ns.command == "suite":
            fn(ws, ns.args, rep, seed=ns.seed, only=ns.only)
        else:
            fn(ws, ns.args, rep)
    except INPUT_ERRORS as exc:
        return 2, _error_report(ns, exc, "input error")
    except PointfreeError as exc:
        return 1, _error_report(ns, exc, "check failed")
    text = rep.as_json() if ns.report == "json" else rep.as_text()
    return (0 if rep.ok else 1), text


def _error_report(ns, exc, what):
    law = getattr(exc, "law", None)
    if ns.report == "json":
        return json.dumps({"schema": SCHEMA, "report": {
            "command": ns.command, "ok": False, "error": type(exc).__name__,
            "law": law, "message": str(exc), "witness": exc.witness}},
            indent=2, ensure_ascii=False, default=_jsonable)
    lines = [f"# {ns.command}: {what}", f"{type(exc).__name__}: {exc}"]
    if exc.witness is not None:
        lines.append(f"witness: {exc.witness}")
    return "\n".join(lines)


def main(argv=None):
    code, text = run(argv)
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
