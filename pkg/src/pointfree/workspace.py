"""JSON declarations: parsing, name resolution and serialisation.

A document looks like::

    {"schema": 1,
     "posets":     {"P": {"elements": [...], "leq": [[a, b], ...]}},
     "lattices":   {"L": {"elements": [...], "leq": [...], "top": t, "bottom": b}},
     "quantales":  {"Q": {"elements": [...], "leq": [...], "tensor": [[...]], "unit": u}},
     "morphisms":  {"f": {"source": "L", "target": "L2", "map": {...}, "kind": "frame"}},
     "presheaves": {"F": {"site": "L", "sections": {...}, "restrictions": {"V>U": {...}}}},
     "qlocales":   {"X": {"space": "L", "cat": "Q", "structure": {...}}}}

Every section is optional.  Other top-level keys (such as "report") are
ignored, so a JSON report can be loaded back as input.  Names may refer to
the built-in catalog (TWO, SIERP, SQUARE, LUK3, ...).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import catalog
from .catloc import QLocale, validate_qlocale
from .errors import ParseError, SizeLimitExceeded, UnknownReference
from .lattice import DistLattice, LatticeMorphism, Semilattice, as_lattice, as_semilattice, classify_lattice, validate_morphism
from .poset import FinPoset, validate_poset
from .quantale import MonoidalPoset, validate_monoidal_poset
from .sheaves import Presheaf, presheaf_descriptor, validate_presheaf

SCHEMA = 1
SECTIONS = ("posets", "lattices", "quantales", "morphisms", "presheaves", "qlocales")


def _product_presheaf():
    site = catalog.SQUARE
    xs, ys = ["x1", "x2"], ["y1", "y2", "y3"]
    tops = [f"{x}{y}" for x in xs for y in ys]
    return validate_presheaf(site, {"bot": ["*"], "a": xs, "b": ys, "top": tops}, {
        "top>a": {t: t[:2] for t in tops},
        "top>b": {t: t[2:] for t in tops},
        "a>bot": {x: "*" for x in xs},
        "b>bot": {y: "*" for y in ys},
    })


def builtin_presheaves() -> dict:
    from .sheaves import constant_presheaf

    return {"SQUARE_PRODUCT": (_product_presheaf(), "SQUARE"),
            "SQUARE_CONST2": (constant_presheaf(catalog.SQUARE, ["p", "q"]), "SQUARE")}


def builtin_qlocales() -> dict:
    from .catloc import identity_qlocale

    return {
        "SIERP_LUK3": (validate_qlocale(catalog.SIERP, catalog.LUK3,
                                        {"bot": "0", "u": "0", "top": "1"}), "SIERP", "LUK3"),
        "ID_TWO": (identity_qlocale(catalog.TWO), "TWO", "I_TWO"),
        "ID_SIERP": (identity_qlocale(catalog.SIERP), "SIERP", "I_SIERP"),
    }


@dataclass
class Workspace:
    posets: dict = field(default_factory=dict)
    lattices: dict = field(default_factory=dict)
    quantales: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    presheaves: dict = field(default_factory=dict)   # name -> (Presheaf, site ref)
    qlocales: dict = field(default_factory=dict)     # name -> (QLocale, space ref, cat ref)
    max_size: int = 12

    def __post_init__(self):
        self.builtin_lattices = {**catalog.SEMILATTICES}
        self.builtin_posets = dict(catalog.POSETS)
        self.builtin_quantales = dict(catalog.QUANTALES)
        self.builtin_presheaves = builtin_presheaves()
        self.builtin_qlocales = builtin_qlocales()

    # -- lookup ---------------------------------------------------------------

    def _find(self, name, *tables, what):
        for t in tables:
            if name in t:
                return t[name]
        raise UnknownReference(f"no {what} named {name!r}", name)

    def lattice(self, name) -> Semilattice:
        return self._find(name, self.lattices, self.builtin_lattices, what="lattice")

    def frame(self, name) -> DistLattice:
        L = self.lattice(name)
        if not isinstance(L, DistLattice):
            return as_lattice(L.carrier)  # raises NotDistributive with witness
        return L

    def poset(self, name) -> FinPoset:
        try:
            return self._find(name, self.posets, self.builtin_posets, what="poset")
        except UnknownReference:
            pass
        try:
            return self.lattice(name).carrier
        except UnknownReference:
            pass
        try:
            return self.quantale(name).carrier
        except UnknownReference:
            raise UnknownReference(f"no poset named {name!r}", name) from None

    def quantale(self, name) -> MonoidalPoset:
        return self._find(name, self.quantales, self.builtin_quantales, what="quantale")

    def morphism(self, name) -> LatticeMorphism:
        return self._find(name, self.morphisms, what="morphism")

    def presheaf(self, name) -> tuple:
        return self._find(name, self.presheaves, self.builtin_presheaves, what="presheaf")

    def qlocale(self, name) -> tuple:
        return self._find(name, self.qlocales, self.builtin_qlocales, what="qlocale")

    def lattice_name(self, L) -> str | None:
        for table in (self.lattices, self.builtin_lattices):
            for k, v in table.items():
                if v == L:
                    return k
        return None

    # -- loading --------------------------------------------------------------

    def _guard(self, name, n):
        if n > self.max_size:
            raise SizeLimitExceeded(f"{name!r} has {n} elements (limit {self.max_size})", name)

    def _claim(self, name):
        taken = (self.posets, self.lattices, self.quantales, self.morphisms,
                 self.presheaves, self.qlocales)
        if any(name in t for t in taken):
            raise ParseError(f"duplicate declaration {name!r}", name)

    def load(self, doc: dict):
        if not isinstance(doc, dict):
            raise ParseError("a document must be a JSON object")
        if doc.get("schema", SCHEMA) != SCHEMA:
            raise ParseError(f"unsupported schema {doc.get('schema')!r}", doc.get("schema"))
        for key in SECTIONS:
            if key in doc and not isinstance(doc[key], dict):
                raise ParseError(f"{key!r} must map names to descriptors", key)
        for name, d in doc.get("posets", {}).items():
            self._claim(name)
            self.posets[name] = _poset(name, d)
            self._guard(name, self.posets[name].n)
        for name, d in doc.get("lattices", {}).items():
            self._claim(name)
            P = _poset(name, d)
            self._guard(name, P.n)
            L = as_lattice(P) if classify_lattice(P).kind == "distributive" else as_semilattice(P)
            for key in ("top", "bottom"):
                if key in d and d[key] != getattr(L, key, None):
                    raise ParseError(f"{name!r}: declared {key} {d[key]!r} is not the {key}", name)
            self.lattices[name] = L
        for name, d in doc.get("quantales", {}).items():
            self._claim(name)
            P = _poset(name, d)
            self._guard(name, P.n)
            try:
                self.quantales[name] = validate_monoidal_poset(P, d["tensor"], d["unit"])
            except KeyError as exc:
                raise ParseError(f"{name!r}: missing {exc.args[0]!r}", name) from None
        for name, d in doc.get("morphisms", {}).items():
            self._claim(name)
            try:
                src, tgt = self.lattice(d["source"]), self.lattice(d["target"])
                kind = d.get("kind", "frame")
                if kind not in ("slat", "frame"):
                    raise ParseError(f"{name!r}: unknown kind {kind!r}", name)
                if kind == "frame":
                    src, tgt = self.frame(d["source"]), self.frame(d["target"])
                self.morphisms[name] = validate_morphism(src, tgt, dict(d["map"]), kind)
            except KeyError as exc:
                raise ParseError(f"{name!r}: missing {exc.args[0]!r}", name) from None
        for name, d in doc.get("presheaves", {}).items():
            self._claim(name)
            try:
                site = self.frame(d["site"])
                F = validate_presheaf(site, d["sections"], d.get("restrictions", {}))
            except KeyError as exc:
                raise ParseError(f"{name!r}: missing {exc.args[0]!r}", name) from None
            self.presheaves[name] = (F, d["site"])
        for name, d in doc.get("qlocales", {}).items():
            self._claim(name)
            try:
                X = validate_qlocale(self.frame(d["space"]), self.quantale(d["cat"]),
                                     dict(d["structure"]))
            except KeyError as exc:
                raise ParseError(f"{name!r}: missing {exc.args[0]!r}", name) from None
            self.qlocales[name] = (X, d["space"], d["cat"])
        return self

    def load_path(self, path):
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}", str(path)) from None
        except OSError as exc:
            raise ParseError(f"{path}: {exc.strerror}", str(path)) from None
        return self.load(doc)


def _poset(name, d) -> FinPoset:
    try:
        return validate_poset([str(e) for e in d["elements"]], [tuple(p) for p in d.get("leq", [])])
    except KeyError as exc:
        raise ParseError(f"{name!r}: missing {exc.args[0]!r}", name) from None
    except (TypeError, ValueError):
        raise ParseError(f"{name!r}: malformed poset descriptor", name) from None


# -- descriptors -----------------------------------------------------------------

def cover_pairs(P: FinPoset) -> list:
    return [[P.elements[i], P.elements[j]] for i, j in P.covers()]


def poset_descriptor(P: FinPoset) -> dict:
    return {"elements": list(P.elements), "leq": cover_pairs(P)}


def lattice_descriptor(L: Semilattice) -> dict:
    d = poset_descriptor(L.carrier)
    d["top"] = L.top
    if isinstance(L, DistLattice):
        d["bottom"] = L.bottom
    return d


def quantale_descriptor(Q: MonoidalPoset) -> dict:
    d = poset_descriptor(Q.carrier)
    d["tensor"] = Q.tensor_names()
    d["unit"] = Q.unit
    return d


def morphism_descriptor(f: LatticeMorphism, source_ref: str, target_ref: str) -> dict:
    return {"source": source_ref, "target": target_ref, "map": f.as_dict(), "kind": f.kind}


def qlocale_descriptor(X: QLocale, space_ref: str, cat_ref: str) -> dict:
    return {"space": space_ref, "cat": cat_ref, "structure": X.structure.as_dict()}


__all__ = ["Workspace", "SCHEMA", "poset_descriptor", "lattice_descriptor",
           "quantale_descriptor", "morphism_descriptor", "presheaf_descriptor",
           "qlocale_descriptor", "Presheaf"]
