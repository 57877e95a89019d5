"""JSON encoding of groups, maps, crossed modules, butterflies and friends.

Every object is a plain JSON document.  Wherever a group or crossed module
is expected, a string may be given instead; it is resolved first against the
other documents of the workspace and then against the built-in desk corpus.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from . import samples
from .abelian import Complex2, make_complex
from .butterfly import Butterfly, make_butterfly
from .cocycle import WeakCocycle
from .cohomology import GammaModule, make_module
from .errors import ButterflyAxiomFails, MalformedTable, NoIdentity, ValidationError
from .extension import Extension, make_extension
from .group import FiniteGroup, make_group
from .hom import GroupHom, RightAction, make_action, make_hom, trivial_action
from .xmod import CrossedModule, group_as_xmod, make_crossed_module

SCHEMAS = {
    "group": '{"order": n, "table": [[...], ...]}',
    "hom": '{"image": [...]}',
    "action": '{"table": [[...], ...]}  (rows: space elements, columns: acting elements)',
    "xmod": '{"g2": group, "g1": group, "boundary": hom, "action": action}',
    "butterfly": '{"source": xmod, "target": xmod, "e": group, "iota": hom, "kappa": hom, "sigma": hom, "rho": hom}',
    "cocycle": '{"p1": [...], "p2": [...], "eps": [[...], ...]}',
    "complex": '{"xm1": group, "x0": group, "d": hom}',
    "module": '{"gamma": group, "a": group, "action": action}',
    "extension": '{"n": group, "e": group, "gamma": group, "incl": hom, "proj": hom}',
    "braiding": '{"braiding": [[...], ...]}',
    "section": '{"section": [...]}',
}

# keys that identify a document kind, checked in this order
_SIGNATURES = (
    ("butterfly", {"iota", "kappa", "sigma", "rho"}),
    ("extension", {"incl", "proj"}),
    ("complex", {"xm1", "x0"}),
    ("module", {"gamma", "a"}),
    ("xmod", {"g2", "g1"}),
    ("cocycle", {"p1", "p2", "eps"}),
    ("braiding", {"braiding"}),
    ("section", {"section"}),
    ("group", {"table", "order"}),
    ("hom", {"image"}),
)


class SchemaError(ValueError):
    """Input does not follow any of the declared JSON schemas (a usage error)."""


def kind_of(doc: Any) -> str:
    if isinstance(doc, str):
        return "name"
    if not isinstance(doc, dict):
        raise SchemaError("a document must be a JSON object or a name")
    if "kind" in doc:
        if doc["kind"] not in SCHEMAS:
            raise SchemaError(f"unknown kind {doc['kind']!r}")
        return doc["kind"]
    for kind, keys in _SIGNATURES:
        if keys <= doc.keys():
            return kind
    raise SchemaError("unrecognised document; expected one of:\n" + schema_help())


def schema_help() -> str:
    return "\n".join(f"  {k}: {v}" for k, v in SCHEMAS.items())


def _field(doc: dict, key: str, kind: str):
    try:
        return doc[key]
    except KeyError:
        raise SchemaError(f"{kind} document lacks {key!r}; schema: {SCHEMAS[kind]}") from None


def _int_array(x, what: str) -> np.ndarray:
    try:
        a = np.asarray(x, dtype=np.int64)
    except (TypeError, ValueError):
        raise SchemaError(f"{what} must be an integer array") from None
    return a


# ---------------------------------------------------------------------------
# encoding
# ---------------------------------------------------------------------------


def group_to_json(G: FiniteGroup) -> dict:
    return {"order": G.order, "table": G.table.tolist()}


def hom_to_json(f: GroupHom) -> dict:
    return {"image": f.image.tolist()}


def action_to_json(a: RightAction) -> dict:
    return {"table": a.table.tolist()}


def xmod_to_json(X: CrossedModule) -> dict:
    return {"g2": group_to_json(X.g2), "g1": group_to_json(X.g1),
            "boundary": hom_to_json(X.boundary), "action": action_to_json(X.action)}


def butterfly_to_json(P: Butterfly) -> dict:
    return {"source": xmod_to_json(P.H), "target": xmod_to_json(P.G), "e": group_to_json(P.E),
            "iota": hom_to_json(P.iota), "kappa": hom_to_json(P.kappa),
            "sigma": hom_to_json(P.sigma), "rho": hom_to_json(P.rho)}


def cocycle_to_json(c: WeakCocycle) -> dict:
    return {"p1": c.p1.tolist(), "p2": c.p2.tolist(), "eps": c.eps.tolist()}


def complex_to_json(X: Complex2) -> dict:
    return {"xm1": group_to_json(X.xm1), "x0": group_to_json(X.x0), "d": hom_to_json(X.d)}


def module_to_json(M: GammaModule) -> dict:
    return {"gamma": group_to_json(M.gamma), "a": group_to_json(M.a), "action": action_to_json(M.action)}


def extension_to_json(X: Extension) -> dict:
    return {"n": group_to_json(X.N), "e": group_to_json(X.E), "gamma": group_to_json(X.gamma),
            "incl": hom_to_json(X.incl), "proj": hom_to_json(X.proj)}


def to_json(obj) -> dict:
    for cls, enc in ((Butterfly, butterfly_to_json), (Extension, extension_to_json),
                     (CrossedModule, xmod_to_json), (Complex2, complex_to_json),
                     (GammaModule, module_to_json), (WeakCocycle, cocycle_to_json),
                     (FiniteGroup, group_to_json), (GroupHom, hom_to_json),
                     (RightAction, action_to_json)):
        if isinstance(obj, cls):
            return enc(obj)
    raise TypeError(f"cannot encode {type(obj).__name__}")


# ---------------------------------------------------------------------------
# decoding
# ---------------------------------------------------------------------------


class Workspace:
    """Named documents; names resolve lazily and each resolves once."""

    def __init__(self, docs: dict[str, Any] | None = None):
        self.docs: dict[str, Any] = dict(docs or {})
        self._cache: dict[tuple[str, str], Any] = {}
        self._active: set[str] = set()

    @classmethod
    def from_files(cls, paths) -> tuple["Workspace", list[str]]:
        ws = cls()
        names = []
        for p in paths:
            p = Path(p)
            try:
                doc = json.loads(p.read_text())
            except OSError as exc:
                raise SchemaError(f"cannot read {p}: {exc.strerror}") from None
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{p} is not valid JSON: {exc.msg} (line {exc.lineno})") from None
            name = doc.get("name", p.stem) if isinstance(doc, dict) else p.stem
            if name in ws.docs:
                name = f"{name}#{len(names)}"
            ws.docs[name] = doc
            names.append(name)
        return ws, names

    def check_names(self) -> None:
        """Every string reference must resolve before anything runs."""
        def walk(x):
            if isinstance(x, str):
                if x not in self.docs and x not in samples.GROUPS and x not in samples.XMODS:
                    raise SchemaError(f"unresolved name {x!r}")
            elif isinstance(x, dict):
                for k, v in x.items():
                    if k not in ("name", "kind", "label"):
                        walk(v)
        for d in self.docs.values():
            walk(d)

    def _named(self, name: str, kind: str):
        key = (name, kind)
        if key in self._cache:
            return self._cache[key]
        if name in self.docs:
            if name in self._active:
                raise SchemaError(f"circular reference through {name!r}")
            self._active.add(name)
            try:
                obj = self.load(self.docs[name], kind)
            finally:
                self._active.discard(name)
        elif kind == "group" and name in samples.GROUPS:
            obj = samples.group(name)
        elif kind == "xmod" and name in samples.XMODS:
            obj = samples.xmod(name)
        elif kind == "xmod" and name in samples.GROUPS:
            obj = group_as_xmod(samples.group(name))
        else:
            raise SchemaError(f"unresolved {kind} name {name!r}")
        self._cache[key] = obj
        return obj

    def load(self, doc, kind: str | None = None):
        """Decode ``doc`` as ``kind`` (guessed from its keys when omitted)."""
        if isinstance(doc, str):
            return self._named(doc, kind or "group")
        actual = kind_of(doc)
        kind = kind or actual
        if kind == "xmod" and actual == "group":
            return group_as_xmod(self.group(doc))
        if kind == "xmod" and actual == "complex":
            return self.complex(doc).xmod
        if kind in ("hom", "action", "name"):
            raise SchemaError(f"a bare {kind} needs context")
        if actual != kind:
            raise SchemaError(f"expected a {kind} document, got a {actual}; schema: {SCHEMAS[kind]}")
        return getattr(self, kind)(doc)

    # individual kinds --------------------------------------------------

    def group(self, doc) -> FiniteGroup:
        if isinstance(doc, str):
            return self._named(doc, "group")
        t = _int_array(_field(doc, "table", "group"), "group table")
        n = int(_field(doc, "order", "group"))
        if t.ndim != 2 or t.shape != (n, n):
            raise MalformedTable(f"table shape {t.shape} does not match order {n}")
        if n and not (np.array_equal(t[0], np.arange(n)) and np.array_equal(t[:, 0], np.arange(n))):
            raise NoIdentity("element 0 must be the identity", witness=0)
        return make_group(t, label=doc.get("label", ""))

    def hom(self, doc, domain: FiniteGroup, codomain: FiniteGroup) -> GroupHom:
        if isinstance(doc, dict):
            doc = _field(doc, "image", "hom")
        return make_hom(domain, codomain, _int_array(doc, "hom image"))

    def action(self, doc, group: FiniteGroup, space: FiniteGroup) -> RightAction:
        if isinstance(doc, dict):
            doc = _field(doc, "table", "action")
        return make_action(group, space, _int_array(doc, "action table"))

    def xmod(self, doc) -> CrossedModule:
        if isinstance(doc, str):
            return self._named(doc, "xmod")
        g2 = self.group(_field(doc, "g2", "xmod"))
        g1 = self.group(_field(doc, "g1", "xmod"))
        bd = self.hom(_field(doc, "boundary", "xmod"), g2, g1)
        act = self.action(_field(doc, "action", "xmod"), g1, g2)
        return make_crossed_module(g2, g1, bd, act, label=doc.get("label", ""))

    def butterfly(self, doc) -> Butterfly:
        if isinstance(doc, str):
            return self._named(doc, "butterfly")
        H = self.xmod(_field(doc, "source", "butterfly"))
        G = self.xmod(_field(doc, "target", "butterfly"))
        E = self.group(_field(doc, "e", "butterfly"))
        f = lambda k, a, b: self.hom(_field(doc, k, "butterfly"), a, b)  # noqa: E731
        try:
            maps = (f("iota", G.g2, E), f("kappa", H.g2, E), f("sigma", E, H.g1), f("rho", E, G.g1))
        except ValidationError as exc:
            raise ButterflyAxiomFails(f"{type(exc).__name__}: {exc}", witness=exc.witness) from None
        return make_butterfly(H, G, E, *maps)

    def cocycle(self, doc) -> WeakCocycle:
        if isinstance(doc, str):
            return self._named(doc, "cocycle")
        return WeakCocycle(_int_array(_field(doc, "p1", "cocycle"), "p1"),
                           _int_array(_field(doc, "p2", "cocycle"), "p2"),
                           _int_array(_field(doc, "eps", "cocycle"), "eps"))

    def complex(self, doc) -> Complex2:
        if isinstance(doc, str):
            return self._named(doc, "complex")
        xm1 = self.group(_field(doc, "xm1", "complex"))
        x0 = self.group(_field(doc, "x0", "complex"))
        d = self.hom(doc["d"], xm1, x0) if "d" in doc else None
        return make_complex(xm1, x0, d)

    def module(self, doc) -> GammaModule:
        if isinstance(doc, str):
            return self._named(doc, "module")
        gamma = self.group(_field(doc, "gamma", "module"))
        a = self.group(_field(doc, "a", "module"))
        if "action" in doc:
            act = self.action(doc["action"], gamma, a)
        else:
            act = trivial_action(gamma, a)
        return make_module(gamma, a, act)

    def extension(self, doc) -> Extension:
        if isinstance(doc, str):
            return self._named(doc, "extension")
        N = self.group(_field(doc, "n", "extension"))
        E = self.group(_field(doc, "e", "extension"))
        gamma = self.group(_field(doc, "gamma", "extension"))
        return make_extension(N, E, gamma, self.hom(_field(doc, "incl", "extension"), N, E),
                              self.hom(_field(doc, "proj", "extension"), E, gamma))

    def braiding(self, doc) -> np.ndarray:
        if isinstance(doc, str):
            return self._named(doc, "braiding")
        return _int_array(_field(doc, "braiding", "braiding"), "braiding")

    def section(self, doc) -> np.ndarray:
        if isinstance(doc, str):
            return self._named(doc, "section")
        return _int_array(_field(doc, "section", "section"), "section")


def dumps(obj, **kw) -> str:
    return json.dumps(obj, separators=(",", ": "), **kw)
