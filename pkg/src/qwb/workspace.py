"""Single-file JSON workspaces: loading, cross-reference resolution, validation.

Top-level keys are ``lattices``, ``quantaloids``, ``categories``, ``modules``
and ``locale_morphisms``; each maps a name to an entry.  Names share one
namespace, so any of them can be used as an analysis subject.  An entry may
carry an ``expect`` mapping from check names to expected verdicts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .errors import InputError
from . import locmod, qcat, qmod
from .quantaloid import QArrow, Quantaloid, construct_standard, split_idempotent_completion, suspension, validate_quantaloid
from .suplat import FiniteLattice

SECTIONS = ("lattices", "quantaloids", "categories", "modules", "locale_morphisms")
KIND_OF_SECTION = {
    "lattices": "lattice",
    "quantaloids": "quantaloid",
    "categories": "category",
    "modules": "module",
    "locale_morphisms": "locale_morphism",
}


class WorkspaceError(InputError):
    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass
class Workspace:
    lattices: dict = field(default_factory=dict)
    quantaloids: dict = field(default_factory=dict)
    categories: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)
    locale_morphisms: dict = field(default_factory=dict)
    expect: dict = field(default_factory=dict)
    kinds: dict = field(default_factory=dict)
    budget: int | None = None
    source: str = "<memory>"

    def subjects(self) -> list[str]:
        return list(self.kinds)

    def subject(self, name: str) -> tuple[str, Any]:
        try:
            kind = self.kinds[name]
        except KeyError:
            raise InputError(f"unknown subject {name!r}") from None
        section = {v: k for k, v in KIND_OF_SECTION.items()}[kind]
        return kind, getattr(self, section)[name]


def load_workspace(path: str | Path) -> Workspace:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"{p}: cannot read workspace ({exc.strerror})") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WorkspaceError(f"{p}:{exc.lineno}:{exc.colno}", f"JSON parse error: {exc.msg}") from None
    return load_workspace_data(data, source=str(p))


def load_workspace_data(data: Mapping, source: str = "<memory>") -> Workspace:
    if not isinstance(data, Mapping):
        raise WorkspaceError(source, "top level must be an object")
    unknown = set(data) - set(SECTIONS) - {"budget", "description"}
    if unknown:
        raise WorkspaceError(source, f"unknown top-level keys {sorted(unknown)}")
    ws = Workspace(source=source, budget=data.get("budget"))
    loader = _Loader(ws, data)
    loader.run()
    return ws


class _Loader:
    def __init__(self, ws: Workspace, data: Mapping):
        self.ws = ws
        self.data = {s: dict(data.get(s) or {}) for s in SECTIONS}
        self.busy: set = set()
        for s in SECTIONS:
            for name in self.data[s]:
                if name in ws.kinds:
                    raise WorkspaceError(f"{s}.{name}", "name is already used by another entry")
                ws.kinds[name] = KIND_OF_SECTION[s]

    def run(self):
        for s in SECTIONS:
            for name in self.data[s]:
                self.get(s, name)

    def get(self, section: str, name: str):
        store = getattr(self.ws, section)
        if name in store:
            return store[name]
        if name not in self.data[section]:
            raise WorkspaceError(f"reference {name!r}", f"no entry in {section}")
        key = (section, name)
        if key in self.busy:
            raise WorkspaceError(f"{section}.{name}", "circular reference")
        self.busy.add(key)
        entry = self.data[section][name]
        where = f"{section}.{name}"
        if not isinstance(entry, Mapping):
            raise WorkspaceError(where, "entry must be an object")
        exp = entry.get("expect")
        if exp is not None:
            if not isinstance(exp, Mapping):
                raise WorkspaceError(where, "'expect' must be an object")
            self.ws.expect[name] = dict(exp)
        try:
            obj = getattr(self, "_" + KIND_OF_SECTION[section])(entry, name, where)
        except WorkspaceError:
            raise
        except InputError as exc:
            raise WorkspaceError(where, str(exc)) from None
        except (KeyError, TypeError, ValueError) as exc:
            raise WorkspaceError(where, f"malformed entry ({type(exc).__name__}: {exc})") from None
        store[name] = obj
        self.busy.discard(key)
        return obj

    # references that may be inline
    def lattice(self, ref, where: str, name: str | None = None) -> FiniteLattice:
        if isinstance(ref, str):
            return self.get("lattices", ref)
        if isinstance(ref, Mapping):
            return self._lattice(ref, name, where)
        raise WorkspaceError(where, f"bad lattice reference {ref!r}")

    def _lattice(self, e: Mapping, name, where) -> FiniteLattice:
        elements = e["elements"]
        if not isinstance(elements, list) or not all(isinstance(x, str) for x in elements):
            raise WorkspaceError(where, "'elements' must be a list of strings")
        leq = [tuple(p) for p in e.get("leq", [])]
        for p in leq:
            if len(p) != 2:
                raise WorkspaceError(where, f"leq pair {list(p)!r} is not a pair")
            for x in p:
                if x not in elements:
                    raise WorkspaceError(where, f"leq mentions unknown element {x!r}")
        return FiniteLattice(elements, leq, name=name)

    def _quantaloid(self, e: Mapping, name, where) -> Quantaloid:
        kind = e.get("kind")
        if kind in ("locale_suspension", "suspension"):
            L = self.lattice(e["lattice"], where)
            if kind == "locale_suspension":
                q = construct_standard(kind, {"lattice": L, "name": name})
            else:
                q = suspension(L, name=name)
        elif kind == "split_idempotents":
            q, _ = split_idempotent_completion(self.get("quantaloids", e["of"]))
        elif kind in ("two_chain", "free_quantale", "rel"):
            d = {k: v for k, v in e.items() if k not in ("kind", "expect")}
            d["name"] = name
            q = construct_standard(kind, d)
        elif kind is None:
            q = self._explicit_quantaloid(e, name, where)
        else:
            raise WorkspaceError(where, f"unknown quantaloid kind {kind!r}")
        validate_quantaloid(q).raise_if_failed()
        return q

    def _explicit_quantaloid(self, e, name, where) -> Quantaloid:
        objs = list(e["objects"])
        homs = {}
        for key, ref in e["homs"].items():
            A, sep, B = key.partition("->")
            if not sep or A not in objs or B not in objs:
                raise WorkspaceError(where, f"bad hom key {key!r}")
            homs[(A, B)] = self.lattice(ref, f"{where}.homs.{key}")
        for A in objs:
            for B in objs:
                if (A, B) not in homs:
                    raise WorkspaceError(where, f"missing hom {A}->{B}")
        one = len(objs) == 1
        table = {}
        for row in e["compose"]:
            if one and len(row) == 3:
                row = [objs[0]] * 3 + list(row)
            if len(row) != 6:
                raise WorkspaceError(where, f"compose row {row!r} must be [A,B,C,g,f,h]")
            A, B, C, g, f, h = row
            if g not in homs.get((B, C), ()) or f not in homs.get((A, B), ()) or h not in homs.get((A, C), ()):
                raise WorkspaceError(where, f"compose row {row!r} names unknown arrows")
            table[(A, B, C, g, f)] = h
        for A in objs:
            for B in objs:
                for C in objs:
                    for f in homs[(A, B)]:
                        for g in homs[(B, C)]:
                            if (A, B, C, g, f) not in table:
                                raise WorkspaceError(where, f"compose table lacks {g} ∘ {f} for {A}->{B}->{C}")
        ids = dict(e["identities"])
        return Quantaloid(objs, homs, table, ids, name=name, kind="explicit")

    def _category(self, e: Mapping, name, where) -> qcat.QCategory:
        kind = e.get("kind")
        if kind == "module_category":
            C = qmod.module_to_category(self.get("modules", e["module"]))
        elif kind == "star":
            q = self.get("quantaloids", e["base"])
            C = qcat.star(q, e.get("object", q.objects[0]))
        elif kind == "discrete":
            C = qcat.discrete(self.get("quantaloids", e["base"]), dict(e["types"]))
        elif kind == "presheaf_category":
            C = qcat.presheaf_category(self.get("categories", e["of"]), self.ws.budget)
        elif kind == "cauchy_completion":
            C = qcat.cauchy_completion(self.get("categories", e["of"]), self.ws.budget)
        elif kind is None:
            q = self.get("quantaloids", e["base"])
            objs = list(e["objects"])
            types = dict(e["types"])
            homs = {}
            for row in e["homs"]:
                a2, a, elt = row
                homs[(a2, a)] = elt
            for a2 in objs:
                for a in objs:
                    if (a2, a) not in homs:
                        raise WorkspaceError(where, f"homs lack the entry for ({a2}, {a})")
            C = qcat.QCategory(q, objs, types, homs, name=name)
        else:
            raise WorkspaceError(where, f"unknown category kind {kind!r}")
        qcat.validate_category(C).raise_if_failed()
        return C

    def _module(self, e: Mapping, name, where) -> qmod.QModule:
        kind = e.get("kind")
        if kind == "representable":
            q = self.get("quantaloids", e["base"])
            F = qmod.representable(q, e.get("object", q.objects[0]))
        elif kind == "fixpoint":
            q = self.get("quantaloids", e["base"])
            A = e.get("object", q.objects[0])
            F, _, _ = qmod.fixpoint_module(q, q.arrow(A, A, e["idempotent"]))
        elif kind == "lattice_2_module":
            F = qmod.lattice_as_2_module(self.get("quantaloids", e["base"]), self.lattice(e["lattice"], where))
        elif kind == "induced":
            F = locmod.induced_module(self.get("locale_morphisms", e["locale_morphism"]))
        elif kind is None:
            q = self.get("quantaloids", e["base"])
            fibers = {X: self.lattice(ref, f"{where}.fibers.{X}") for X, ref in e["fibers"].items()}
            for X in q.objects:
                if X not in fibers:
                    raise WorkspaceError(where, f"no fiber for object {X!r}")
            table = {}
            for key, pairs in e["action"].items():
                f = parse_arrow(q, key, where)
                table[f] = {y: x for y, x in pairs}
            for f in q.arrows():
                if f not in table:
                    raise WorkspaceError(where, f"action lacks arrow {format_arrow(q, f)!r}")
            F = qmod.QModule(q, fibers, table, name=name)
        else:
            raise WorkspaceError(where, f"unknown module kind {kind!r}")
        F.name = name
        qmod.validate_module(F).raise_if_failed()
        return F

    def _locale_morphism(self, e: Mapping, name, where) -> locmod.LocaleMorphism:
        kind = e.get("kind")
        if kind == "identity":
            f = locmod.identity_locale_morphism(self.lattice(e["locale"], where))
        elif kind == "open_sublocale":
            f = locmod.open_sublocale(self.lattice(e["locale"], where), e["u"])
        elif kind is None:
            Y = self.lattice(e["dom"], where)
            X = self.lattice(e["cod"], where)
            f = locmod.LocaleMorphism(Y, X, dict(e["inv"]))
        else:
            raise WorkspaceError(where, f"unknown locale morphism kind {kind!r}")
        f.name = name
        return f


def parse_arrow(q: Quantaloid, key: str, where: str = "arrow") -> QArrow:
    """``"A->B:f"``, or a bare ``"f"`` over a one-object base."""
    if ":" in key and "->" in key.split(":", 1)[0]:
        ends, elt = key.split(":", 1)
        A, B = ends.split("->", 1)
        if A not in q.objects or B not in q.objects:
            raise WorkspaceError(where, f"unknown objects in {key!r}")
        return q.arrow(A, B, elt)
    if not q.one_object:
        raise WorkspaceError(where, f"arrow {key!r} must be written A->B:f")
    (A,) = q.objects
    return q.arrow(A, A, key)


def format_arrow(q: Quantaloid, f: QArrow) -> str:
    return f.elt if q.one_object else f"{f.dom}->{f.cod}:{f.elt}"
