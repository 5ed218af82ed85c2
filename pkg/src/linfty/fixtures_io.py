"""Fixture documents: algebras, morphisms, and elements as JSON.

One self-contained document per file, with top-level keys `algebras`,
`morphisms`, `elements`.  Generators are records {id, degree, weight};
tables map word keys "a.b.c" (sorted ids, dot-separated) to element values
{generator id: rational string}.  Absent entries are zero.  Rationals are
written "p/q" (or "p" for integers) and parsed exactly.

Parsing is purely structural; validation (Q.Q = 0, morphism equations) is
a separate step so that deliberately broken fixtures can be loaded and
reported on.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .algebras import LInftyAlgebra, LInftyMorphism
from .coalgebra import MorphismMaps, StructureMaps
from .graded import Element, FilteredSpace, Generator, LinftyError


def parse_fraction(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise LinftyError(f"bad rational {s!r}: {exc}") from None
    raise LinftyError(f"bad rational {s!r} (floats are not accepted)")


def format_fraction(x: Fraction) -> str:
    return str(x)


def parse_element(space: FilteredSpace, data: dict) -> Element:
    out = {}
    for gid, c in data.items():
        g = space.by_id.get(gid)
        if g is None:
            raise LinftyError(f"unknown generator id {gid!r}")
        out[g] = parse_fraction(c)
    return Element(out)


def format_element(e: Element) -> dict:
    return {a.gid: format_fraction(c) for a, c in e.sorted_items()}


def word_key(atoms) -> str:
    return ".".join(sorted(a.gid for a in atoms))


def parse_word(space: FilteredSpace, key: str):
    atoms = []
    for gid in key.split("."):
        g = space.by_id.get(gid)
        if g is None:
            raise LinftyError(f"unknown generator id {gid!r} in word key {key!r}")
        atoms.append(g)
    return tuple(atoms)


def parse_algebra(data: dict) -> LInftyAlgebra:
    gens = []
    for rec in data.get("generators", []):
        gens.append(Generator(str(rec["id"]), int(rec["degree"]),
                              int(rec.get("weight", 1))))
    bound = int(data.get("bound", max((g.weight for g in gens), default=0) + 1))
    space = FilteredSpace(gens, bound)
    q = StructureMaps(space, 1)
    for gid, val in data.get("differential", {}).items():
        word = parse_word(space, gid)
        if len(word) != 1:
            raise LinftyError("differential keys must be single generator ids")
        q.set_entry(1, word, parse_element(space, val))
    for key, val in data.get("brackets", {}).items():
        word = parse_word(space, key)
        if len(word) < 2:
            raise LinftyError("bracket keys must have length >= 2")
        q.set_entry(len(word), word, parse_element(space, val))
    return LInftyAlgebra(space, q)


def format_algebra(L: LInftyAlgebra) -> dict:
    gens = [{"id": g.gid, "degree": g.degree, "weight": g.weight}
            for g in L.space.generators]
    diff = {}
    brackets = {}
    for k, atoms, v in L.Q.entries():
        if k == 1:
            diff[atoms[0].gid] = format_element(v)
        else:
            brackets[word_key(atoms)] = format_element(v)
    return {"generators": gens, "bound": L.space.bound,
            "differential": diff, "brackets": brackets}


def parse_morphism(data: dict, algebras: dict) -> LInftyMorphism:
    try:
        src = algebras[data["source"]]
        tgt = algebras[data["target"]]
    except KeyError as exc:
        raise LinftyError(f"morphism references unknown algebra {exc}") from None
    maps = MorphismMaps(src.space, tgt.space)
    for key, val in data.get("components", {}).items():
        word = parse_word(src.space, key)
        maps.set_entry(len(word), word, parse_element(tgt.space, val))
    return LInftyMorphism(src, tgt, maps)


def format_morphism(Phi: LInftyMorphism, algebra_names: dict) -> dict:
    comps = {}
    for k, atoms, v in Phi.maps.entries():
        comps[word_key(atoms)] = format_element(v)
    return {"source": algebra_names[id(Phi.source)],
            "target": algebra_names[id(Phi.target)],
            "components": comps}


@dataclass
class FixtureDocument:
    algebras: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    elements: dict = field(default_factory=dict)  # name -> (algebra name, Element)

    def algebra(self, name: str) -> LInftyAlgebra:
        try:
            return self.algebras[name]
        except KeyError:
            raise LinftyError(f"no algebra named {name!r} in the fixture") from None

    def morphism(self, name: str) -> LInftyMorphism:
        try:
            return self.morphisms[name]
        except KeyError:
            raise LinftyError(f"no morphism named {name!r} in the fixture") from None

    def element(self, name: str):
        try:
            return self.elements[name]
        except KeyError:
            raise LinftyError(f"no element named {name!r} in the fixture") from None

    def __eq__(self, other):
        return (isinstance(other, FixtureDocument)
                and self.algebras == other.algebras
                and self.morphisms == other.morphisms
                and self.elements == other.elements)


def parse_document(data: dict) -> FixtureDocument:
    doc = FixtureDocument()
    for name, rec in data.get("algebras", {}).items():
        doc.algebras[name] = parse_algebra(rec)
    for name, rec in data.get("morphisms", {}).items():
        doc.morphisms[name] = parse_morphism(rec, doc.algebras)
    for name, rec in data.get("elements", {}).items():
        alg_name = rec["algebra"]
        alg = doc.algebras.get(alg_name)
        if alg is None:
            raise LinftyError(f"element {name!r} references unknown algebra {alg_name!r}")
        doc.elements[name] = (alg_name, parse_element(alg.space, rec.get("value", {})))
    return doc


def serialize_document(doc: FixtureDocument) -> dict:
    names = {id(alg): name for name, alg in doc.algebras.items()}
    return {
        "algebras": {name: format_algebra(alg)
                     for name, alg in sorted(doc.algebras.items())},
        "morphisms": {name: format_morphism(m, names)
                      for name, m in sorted(doc.morphisms.items())},
        "elements": {name: {"algebra": alg_name, "value": format_element(e)}
                     for name, (alg_name, e) in sorted(doc.elements.items())},
    }


def load_document(path) -> FixtureDocument:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise LinftyError(f"fixture parse error at line {exc.lineno}, "
                              f"column {exc.colno}: {exc.msg}") from None
    return parse_document(data)


def dump_document(doc: FixtureDocument, path) -> None:
    with open(path, "w") as fh:
        json.dump(serialize_document(doc), fh, indent=2, sort_keys=True)
        fh.write("\n")


def dumps_document(doc: FixtureDocument) -> str:
    return json.dumps(serialize_document(doc), indent=2, sort_keys=True)
