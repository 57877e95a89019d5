"""Batch command-line front end.

    weakmaps SUBCOMMAND --input FILE [--input FILE ...] [--output FILE]
             [--format json|text] [--size-limit N] [--seed N]

Exit status: 0 on success, 1 when the input fails validation (the report
names the failing axiom and a witness), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable

import numpy as np

from . import abelian, butterfly as bf, classify, cocycle, cohomology, io, samples
from .config import size_limit
from .errors import NotAnEquivalence, SizeLimit, ValidationError, WeakMapsError
from .hom import iter_homs
from .io import SchemaError, Workspace


class Usage(Exception):
    pass


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    return x


def _group_info(G) -> dict:
    return {"order": G.order, "type": samples.describe_group(G)}


def _xmod_info(X) -> dict:
    h = X.homotopy
    return {"g2": _group_info(X.g2), "g1": _group_info(X.g1),
            "pi1": _group_info(h.pi1), "pi2": _group_info(h.pi2),
            "pi1_action_trivial": h.action.is_trivial}


def _butterfly_info(P) -> dict:
    return {"e": _group_info(P.E), "split": bf.is_split(P), "equivalence": bf.is_equivalence(P),
            "pi1_map": bf.pi1_map(P).image, "pi2_map": bf.pi2_map(P).image}


def _class_info(c) -> dict:
    return {"degree": c.degree, "group": c.group_structure, "index": c.index,
            "zero": c.is_zero, "representative": c.representative}


# ---------------------------------------------------------------------------
# subcommands; each takes the list of decoded-on-demand inputs
# ---------------------------------------------------------------------------


class Inputs:
    def __init__(self, ws: Workspace, names: list[str], command: str):
        self.ws, self.names, self.command = ws, names, command

    def count(self, lo: int, hi: int | None = None) -> int:
        n = len(self.names)
        hi = lo if hi is None else hi
        if not lo <= n <= hi:
            want = str(lo) if lo == hi else f"{lo} to {hi}"
            raise Usage(f"{self.command} takes {want} --input files, got {n}")
        return n

    def get(self, i: int, kind: str):
        doc = self.ws.docs[self.names[i]]
        actual = io.kind_of(doc)
        ok = actual in (kind, "name") or (kind == "xmod" and actual in ("group", "complex"))
        if not ok:
            raise Usage(f"input {i + 1} of {self.command} must be a {kind}: {io.SCHEMAS[kind]}")
        return self.ws.load(doc, kind)

    def kind(self, i: int) -> str:
        return io.kind_of(self.ws.docs[self.names[i]])


def cmd_validate(inp: Inputs, args) -> dict:
    inp.count(1, 64)
    items = []
    for i, name in enumerate(inp.names):
        kind = inp.kind(i)
        if kind == "name":
            kind = "xmod" if name in samples.XMODS else "group"
        if kind in ("hom", "action"):
            raise Usage(f"a bare {kind} cannot be validated without its groups")
        obj = inp.ws.load(inp.ws.docs[name], kind)
        items.append({"input": name, "kind": kind, "summary": _summary(kind, obj)})
    return {"valid": True, "items": items}


def _summary(kind: str, obj) -> str:
    if kind == "group":
        ab = "abelian " if obj.is_abelian else ""
        return f"valid {ab}group of order {obj.order}"
    if kind == "xmod":
        return f"valid crossed module {obj.g2.order} -> {obj.g1.order}"
    if kind == "butterfly":
        return f"valid butterfly with |E| = {obj.E.order}"
    if kind == "complex":
        return f"valid complex {obj.xm1.order} -> {obj.x0.order}"
    if kind == "module":
        return f"valid module {obj.a.order} over a group of order {obj.gamma.order}"
    if kind == "extension":
        return f"valid extension {obj.N.order} -> {obj.E.order} -> {obj.gamma.order}"
    return f"valid {kind}"


def cmd_pi(inp, args):
    inp.count(1)
    X = inp.get(0, "xmod")
    h = X.homotopy
    return {**_xmod_info(X), "pi1_proj": h.proj.image, "pi2_incl": h.incl.image,
            "pi1_action": h.action.table}


def cmd_butterfly_check(inp, args):
    inp.count(1)
    P = inp.get(0, "butterfly")
    return {"valid": True, **_butterfly_info(P)}


def cmd_compose(inp, args):
    inp.count(2)
    Q, P = inp.get(0, "butterfly"), inp.get(1, "butterfly")
    R = bf.compose(Q, P)
    return {**_butterfly_info(R), "butterfly": io.to_json(R)}


def cmd_flip(inp, args):
    inp.count(1)
    P = inp.get(0, "butterfly")
    if not bf.is_equivalence(P):
        raise NotAnEquivalence("the NW-SE sequence is not short exact")
    R = bf.flip(P)
    return {**_butterfly_info(R), "butterfly": io.to_json(R)}


def cmd_kernel(inp, args):
    inp.count(1)
    P = inp.get(0, "butterfly")
    K, incl = bf.kernel(P)
    return {**_xmod_info(K), "trivial": bf.kernel_is_trivial(P), "xmod": io.to_json(K),
            "incl_p1": incl.p1.image}


def cmd_cokernel(inp, args):
    inp.count(1)
    P = inp.get(0, "butterfly")
    co = bf.cokernel(P)
    return {"group": _group_info(co.group), "pi1_size": co.pi1.size, "pi1_reps": co.pi1.reps,
            "pi2": _group_info(co.pi2), "trivial": bf.cokernel_is_trivial(P),
            "rho_bar": co.rho_bar.image}


def _seq_info(S) -> dict:
    return {"terms": list(S.names), "sizes": list(S.sizes), "exact": not S.failures()}


def cmd_les(inp, args):
    inp.count(1)
    P = inp.get(0, "butterfly")
    out = {"fiber": _seq_info(bf.les_fiber(P)), "kernel": _seq_info(bf.les_kernel(P))}
    out["pi1_ker_is_pi2_coker"] = bool(bf.kernel_cokernel_duality(P).is_bijective)
    return out


def cmd_exactness(inp, args):
    inp.count(2)
    Q, P = inp.get(0, "butterfly"), inp.get(1, "butterfly")
    r = bf.is_exact_at(Q, P)
    return {"exact": r.exact, "delta": r.delta.image, "via_cokernel": r.via_cokernel,
            "via_sequence": r.via_sequence}


def _default_braiding(X):
    b = samples.zero_braiding(X)
    if b is None:
        b = samples.commutator_braiding(X)
    if b is None:
        raise Usage("no default braiding for this crossed module; pass one as {\"braiding\": ...}")
    return b


def cmd_braided_check(inp, args):
    n = inp.count(1, 3)
    P = inp.get(0, "butterfly")
    bH = inp.get(1, "braiding") if n > 1 else _default_braiding(P.H)
    bG = inp.get(2, "braiding") if n > 2 else _default_braiding(P.G)
    w = bf.braided_failure(P, bH, bG)
    out = {"braided": w is None, "witness": w}
    if w is None:
        co = bf.braided_cokernel(P, bG)
        out["cokernel"] = _xmod_info(co)
    return out


def cmd_cocycle_to_butterfly(inp, args):
    inp.count(3)
    H, G, c = inp.get(0, "xmod"), inp.get(1, "xmod"), inp.get(2, "cocycle")
    P = cocycle.butterfly_from_cocycle(H, G, c)
    return {**_butterfly_info(P), "butterfly": io.to_json(P)}


def cmd_butterfly_to_cocycle(inp, args):
    n = inp.count(1, 2)
    P = inp.get(0, "butterfly")
    s = inp.get(1, "section") if n > 1 else P.section
    c = cocycle.cocycle_from_butterfly(P, s)
    iso = cocycle.round_trip(P, s)
    return {"section": np.asarray(s), "cocycle": io.to_json(c), "trivial_eps": c.is_trivial_eps,
            "round_trip_iso": iso.f.image}


def cmd_ab_add(inp, args):
    inp.count(2)
    P, Q = inp.get(0, "butterfly"), inp.get(1, "butterfly")
    R = abelian.ab_add(P, Q)
    return {**_butterfly_info(R), "butterfly": io.to_json(R)}


def cmd_ab_classes(inp, args):
    inp.count(2)
    X, Y = inp.get(0, "complex"), inp.get(1, "complex")
    cls = abelian.ab_hom_classes(X, Y)
    classes = [{"e": _group_info(P.E), "ext_class": cls.ext_index[i], "strict": cls.strict[i],
                "split": cls.split[i]} for i, P in enumerate(cls.reps)]
    return {"count": len(cls), "ext_classes": cls.n_ext, "strict_count": sum(cls.strict),
            "sum_table": abelian.sum_table(cls), "classes": classes}


def _cohomology(inp, degree):
    inp.count(1)
    M = inp.get(0, "module")
    H = cohomology.h_n(M, degree)
    return {"degree": degree, "invariants": H.invariants, "order": H.order,
            "generators": [b.ravel() for b in H.basis]}


def cmd_h2(inp, args):
    return _cohomology(inp, 2)


def cmd_h3(inp, args):
    return _cohomology(inp, 3)


def cmd_postnikov(inp, args):
    inp.count(1)
    G = inp.get(0, "xmod")
    M = cohomology.homotopy_module(G)
    H = cohomology.h_n(M, 3)
    c = cohomology.postnikov_class(G, H=H)
    out = {"class": _class_info(c)}
    if args.seed is not None:
        rng = np.random.default_rng(args.seed)
        idx = []
        for _ in range(5):
            s, f = cohomology.random_postnikov_choices(G, rng)
            idx.append(cohomology.postnikov_class(G, s, f, H=H).index)
        out["resampled_indices"] = idx
        out["choice_independent"] = all(i == c.index for i in idx)
    return out


def cmd_obstruction(inp, args):
    n = inp.count(2, 3)
    gamma, G = inp.get(0, "group"), inp.get(1, "xmod")
    pi1 = G.homotopy.pi1
    if n == 3:
        doc = inp.ws.docs[inp.names[2]]
        chis = [inp.ws.hom(doc, gamma, pi1)]
    else:
        chis = list(iter_homs(gamma, pi1))
    rows = []
    for chi in chis:
        c = cohomology.obstruction(chi, G)
        rows.append({"chi": chi.image, "zero": c.is_zero, "class": c.index, "h3": c.group_structure})
    return {"maps": rows}


def cmd_enum_ext(inp, args):
    inp.count(2)
    gamma, N = inp.get(0, "group"), inp.get(1, "group")
    exts = classify.enumerate_extensions(gamma, N)
    out = classify.out_group(N)
    rows = [{"e": _group_info(X.E), "psi": classify.extension_psi(X, out).image,
             "abelian": X.E.is_abelian} for X in exts]
    return {"count": len(exts), "extensions": rows}


def cmd_enum_butterflies(inp, args):
    inp.count(2)
    gamma, G = inp.get(0, "group"), inp.get(1, "xmod")
    cls = classify.enumerate_butterflies(gamma, G)
    rows = [{"e": _group_info(P.E), "chi": P.chi().image} for P in cls.reps]
    fibers = [{"chi": list(k), "size": len(v)} for k, v in sorted(cls.by_chi.items())]
    return {"count": len(cls), "classes": rows, "fibers": fibers}


def cmd_baer(inp, args):
    inp.count(2)
    X0, X = inp.get(0, "extension"), inp.get(1, "extension")
    bp = classify.baer_product(classify.semi_exact_of(X0), classify.semi_exact_of(X))
    return {"group": _group_info(bp.group), "proj": bp.proj.image,
            "sequence": _seq_info(bp.sequence)}


def cmd_diff(inp, args):
    inp.count(2)
    if inp.kind(0) == "butterfly" or inp.kind(1) == "butterfly":
        P0 = classify.butterfly_to_group(inp.get(0, "butterfly"))
        P = classify.butterfly_to_group(inp.get(1, "butterfly"))
        D = classify.difference_butterflies(P0, P)
    else:
        D = classify.difference_ext(inp.get(0, "extension"), inp.get(1, "extension"))
    return {"e": _group_info(D.E), "extension": io.to_json(D)}


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "pi": cmd_pi,
    "butterfly-check": cmd_butterfly_check,
    "compose": cmd_compose,
    "flip": cmd_flip,
    "kernel": cmd_kernel,
    "cokernel": cmd_cokernel,
    "les": cmd_les,
    "exactness": cmd_exactness,
    "braided-check": cmd_braided_check,
    "cocycle-to-butterfly": cmd_cocycle_to_butterfly,
    "butterfly-to-cocycle": cmd_butterfly_to_cocycle,
    "ab-add": cmd_ab_add,
    "ab-classes": cmd_ab_classes,
    "h2": cmd_h2,
    "h3": cmd_h3,
    "postnikov": cmd_postnikov,
    "obstruction": cmd_obstruction,
    "enum-ext": cmd_enum_ext,
    "enum-butterflies": cmd_enum_butterflies,
    "baer": cmd_baer,
    "diff": cmd_diff,
}


HELP = {
    "validate": "validate any documents; one summary line each",
    "pi": "homotopy groups of a crossed module",
    "butterfly-check": "validate a butterfly and report its invariants",
    "compose": "compose Q then P (inputs: Q, P)",
    "flip": "inverse of an equivalence butterfly",
    "kernel": "kernel crossed module of a butterfly",
    "cokernel": "cokernel of a butterfly",
    "les": "long exact sequences of the homotopy fiber and the kernel",
    "exactness": "exactness of K -> H -> G at H (inputs: Q, P)",
    "braided-check": "braided identity (inputs: butterfly [braiding_source braiding_target])",
    "cocycle-to-butterfly": "butterfly of a cocycle triple (inputs: source, target, cocycle)",
    "butterfly-to-cocycle": "cocycle triple of a butterfly (inputs: butterfly [section])",
    "ab-add": "sum of two abelian butterflies",
    "ab-classes": "abelian butterflies between two complexes up to isomorphism",
    "h2": "second cohomology of a module",
    "h3": "third cohomology of a module",
    "postnikov": "Postnikov class; --seed resamples the choices",
    "obstruction": "lifting obstruction (inputs: group, crossed module [hom to pi1])",
    "enum-ext": "extensions of a group by a group (inputs: quotient, kernel)",
    "enum-butterflies": "butterflies from a group into a crossed module up to isomorphism",
    "baer": "Baer product of two extensions",
    "diff": "difference of two extensions or of two butterflies out of a group",
}


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def _text(x, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(x, dict):
        for k, v in x.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(x, list):
        for v in x:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(x))
    return lines


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(e, (dict, list)) for e in v)


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(e) for e in v) + "]"
    if isinstance(v, dict):
        return "{}"
    return str(v)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    if report.get("command") == "validate" and report.get("status") == "ok":
        return "".join(f"{it['input']}: {it['summary']}\n" for it in report["result"]["items"])
    return "\n".join(_text(report)) + "\n"


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", action="append", default=[], metavar="FILE",
                        help="JSON document (repeatable; order matters)")
    common.add_argument("--output", metavar="FILE", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--size-limit", type=int, metavar="N", help="maximal order of any constructed group")
    common.add_argument("--seed", type=int, metavar="N", help="seed for sampled property checks")
    p = argparse.ArgumentParser(prog="weakmaps", description="Butterflies between finite crossed modules.",
                                epilog="input schemas:\n" + io.schema_help(),
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")
    for name, fn in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=HELP[name],
                       epilog="input schemas:\n" + io.schema_help(),
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.size_limit is not None and args.size_limit < 1:
        print("weakmaps: --size-limit must be positive", file=stderr)
        return 2
    report: dict = {"command": args.command}
    code = 0
    try:
        ws, names = Workspace.from_files(args.input)
        ws.check_names()
        inp = Inputs(ws, names, args.command)
        if args.size_limit is not None:
            with size_limit(args.size_limit):
                result = COMMANDS[args.command](inp, args)
        else:
            result = COMMANDS[args.command](inp, args)
        report.update(status="ok", result=result)
    except (Usage, SchemaError) as exc:
        print(f"weakmaps {args.command}: {exc}", file=stderr)
        print("expected schemas:\n" + io.schema_help(), file=stderr)
        return 2
    except (ValidationError, SizeLimit) as exc:
        report.update(status="invalid", error=type(exc).__name__, message=str(exc), witness=exc.witness)
        code = 1
    except WeakMapsError as exc:
        # ExactnessFails and PostconditionFails signal internal bugs
        report.update(status="error", error=type(exc).__name__, message=str(exc), witness=exc.witness)
        code = 1
    text = render(_jsonable(report), args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
