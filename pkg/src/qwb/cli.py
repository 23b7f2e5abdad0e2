"""Analysis suites over workspace subjects, report rendering and the ``qwb`` command."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Any

from .errors import ConsistencyError, InputError, PreconditionError, ResourceError
from . import locmod, qcat, qmod
from .quantaloid import QArrow, check_residuation, two_chain, validate_quantaloid
from .suplat import FiniteLattice, is_totally_algebraic, totally_compact_elements
from .workspace import Workspace, load_workspace

SUITES = ("validate", "compactness", "pg", "lpg", "cauchy", "slh", "etale", "theorems")
SPLIT_EXHAUSTIVE = 2000
SPLIT_SAMPLES = 500


@dataclass
class Check:
    name: str
    verdict: Any
    witness: Any = None


@dataclass
class Report:
    subject: str
    suite: str
    kind: str
    checks: list = field(default_factory=list)
    timing: float = 0.0

    def add(self, name: str, verdict, witness=None) -> Check:
        if verdict is False and witness is None:
            raise ConsistencyError(f"negative verdict {name!r} lacks a witness")
        c = Check(name, verdict, witness)
        self.checks.append(c)
        return c

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "suite": self.suite,
            "kind": self.kind,
            "checks": [
                {"name": c.name, "verdict": jsonable(c.verdict), "witness": jsonable(c.witness)}
                for c in self.checks
            ],
            "timing": round(self.timing, 6),
        }


def jsonable(x):
    """A JSON-ready copy with a canonical ordering for sets."""
    if isinstance(x, QArrow):
        return x.elt
    if isinstance(x, qcat.Presheaf):
        return {"type": x.type, "values": [jsonable(v) for v in x.values]}
    if isinstance(x, dict):
        return {_key(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return sorted((jsonable(v) for v in x), key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return repr(x)


def _key(k) -> str:
    if isinstance(k, str):
        return k
    if isinstance(k, tuple):
        return ":".join(_key(v) for v in k)
    return str(k)


# -- suites ------------------------------------------------------------------


def run_analysis(ws: Workspace, subject: str, suite: str) -> Report:
    if suite not in SUITES:
        raise InputError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    kind, obj = ws.subject(subject)
    rep = Report(subject, suite, kind)
    t0 = time.perf_counter()
    fn = _SUITES.get((kind, suite))
    if fn is not None:
        fn(rep, obj, ws)
    rep.timing = time.perf_counter() - t0
    return rep


def _uncovered(F: qmod.QModule, gens) -> tuple | None:
    for (X, x) in F.elements():
        got = F.fibers[X].join(F.act(qmod.module_hom(F, A, a, X, x), a) for (A, a) in gens)
        if got != x:
            return {"element": (X, x), "generated": got}
    return None


def _elt(F: qmod.QModule, X, x):
    return x if F.base.one_object else (X, x)


# lattices


def _lattice_validate(rep, L: FiniteLattice, ws):
    rep.add("valid", True, {"size": len(L)})
    rep.add("distributive", L.is_distributive(), None if L.is_distributive() else "M3 or N5 sublattice")


def _lattice_compactness(rep, L, ws):
    comp = totally_compact_elements(L)
    rep.add("totally_compact", comp)
    ta = is_totally_algebraic(L)
    miss = [x for x in L if L.join(c for c in comp if L.leq(c, x)) != x]
    rep.add("totally_algebraic", ta, None if ta else {"not_join_of_compacts": miss})


def _lattice_theorems(rep, L, ws):
    F = qmod.lattice_as_2_module(two_chain(), L)
    pr = [x for (_, x) in qmod.principal_elements(F)]
    comp = totally_compact_elements(L)
    rep.add("principal_equals_compact", pr == comp, {"principal": pr, "compact": comp})
    pg, lpg, ta = qmod.is_principally_generated(F), qmod.is_locally_principally_generated(F), is_totally_algebraic(L)
    rep.add("pg_lpg_ta_agree", pg == lpg == ta, {"pg": pg, "lpg": lpg, "totally_algebraic": ta})


# quantaloids


def _quantaloid_validate(rep, q, ws):
    r = validate_quantaloid(q)
    rep.add("valid", r.ok, r.failures or None)
    r2 = check_residuation(q)
    rep.add("residuation", r2.ok, r2.failures or None)


def _quantaloid_theorems(rep, q, ws):
    si, _ = qmod.completion_of(q)
    diagrams = list(qmod.split_diagrams(si, limit=SPLIT_EXHAUSTIVE + 1))
    mode = "exhaustive"
    if len(diagrams) > SPLIT_EXHAUSTIVE:
        diagrams = list(qmod.split_diagrams(si, limit=SPLIT_SAMPLES, seed=17))
        mode = "sampled"
    bad = [d for d in diagrams if not qmod.lemma17_check(si, d)]
    rep.add("lifting_under_splittings", not bad, {"instances": len(diagrams), "mode": mode, "failures": bad[:3]})


# categories


def _category_validate(rep, C, ws):
    r = qcat.validate_category(C)
    rep.add("valid", r.ok, r.failures or None)
    rep.add("skeletal", qcat.is_skeletal(C), None if qcat.is_skeletal(C) else _iso_pair(C))


def _iso_pair(C):
    for i, a in enumerate(C.objects):
        for b in C.objects[i + 1 :]:
            if C.iso(a, b):
                return [a, b]
    return None


def _category_compactness(rep, C, ws):
    wit = qcat.cocompleteness_witness(C)
    rep.add("cocomplete", wit is None, None if wit is None else {"reason": wit[0], "at": wit[1]})
    if wit is not None:
        return
    crit = qcat.compactness_criteria(C, ws.budget)
    sets = [set(crit[k]) for k in (1, 2, 3, 4)]
    rep.add("criteria_agree", all(s == sets[0] for s in sets), {str(k): crit[k] for k in (1, 2, 3, 4)})
    rep.add("totally_compact", crit[2])
    ta = qcat.is_totally_algebraic_cat(C, ws.budget)
    rep.add("totally_algebraic", ta, None if ta else {"compacts": crit[2]})


def _category_cauchy(rep, C, ws):
    PA = qcat.presheaf_category(C, ws.budget)
    reps = [qcat.representable(C, a) for a in C.objects]
    odd = [phi for phi in qcat.cauchy_presheaves(C, ws.budget) if not any(PA.iso(phi, r) for r in reps)]
    rep.add("cauchy_complete", not odd, {"unrepresented": odd[:1]} if odd else None)
    cc = qcat.cauchy_completion(C, ws.budget)
    rep.add("completion_size", len(cc.objects))
    again = qcat.is_cauchy_complete(cc, ws.budget)
    rep.add("completion_cauchy_complete", again, None if again else "completion has unrepresented Cauchy presheaf")
    eq = qcat.is_equivalence(cc.embedding)
    rep.add("yoneda_corestriction_equivalence", eq, None if eq else "embedding is not essentially surjective")
    rep.add("equivalence_iff_cauchy_complete", eq == (not odd), {"equivalence": eq, "cauchy_complete": not odd})


def _category_theorems(rep, C, ws):
    if C.base.kind == "rel":
        er = qcat.entailment_order(C)
        for k in ("x1", "x2", "x3"):
            v = getattr(er, k)
            rep.add(f"entailment_{k}", v, er.witnesses.get(k) if not v else None)
    if not qcat.is_cocomplete(C):
        return
    crit = qcat.compactness_criteria(C, ws.budget)
    same = all(set(crit[k]) == set(crit[1]) for k in (2, 3, 4))
    rep.add("compactness_criteria_agree", same, {str(k): crit[k] for k in (1, 2, 3, 4)})
    R = qcat.R_A(C, ws.budget)
    ff = qcat.is_fully_faithful(R)
    rep.add("R_A_fully_faithful", ff, None if ff else "R_A is not fully faithful")
    eq, ta = qcat.is_equivalence(R), qcat.is_totally_algebraic_cat(C, ws.budget)
    rep.add("R_A_equivalence_iff_totally_algebraic", eq == ta, {"equivalence": eq, "totally_algebraic": ta})
    X = C.types[C.objects[0]]
    hm = qcat.hom_map_check(qcat.star(C.base, X), C, ws.budget)
    rep.add(
        "hom_map_order_isomorphism",
        hm.order_isomorphism,
        {"left": len(hm.left), "right": len(hm.right), "preserves": hm.preserves_order,
         "reflects": hm.reflects_order, "essentially_surjective": hm.essentially_surjective,
         "images_are_maps": hm.images_are_maps},
    )


# modules


def _module_validate(rep, F, ws):
    r = qmod.validate_module(F)
    rep.add("valid", r.ok, r.failures or None)


def _module_pg(rep, F, ws):
    pr = qmod.principal_elements(F)
    rep.add("principal_elements", [_elt(F, X, x) for (X, x) in pr])
    pg = qmod.is_principally_generated(F)
    rep.add("pg", pg, None if pg else {"principal": [_elt(F, X, x) for X, x in pr], **_uncovered(F, pr)})


def _module_lpg(rep, F, ws):
    lpr = qmod.locally_principal_elements(F)
    rep.add("locally_principal", [[_elt(F, A, a), e.elt] for ((A, a), e) in lpr])
    lpg = qmod.is_locally_principally_generated(F)
    gens = list(dict.fromkeys(p for p, _ in lpr))
    wit = [[_elt(F, A, a), e.elt] for ((A, a), e) in lpr] if lpg else {"locally_principal": [_elt(F, A, a) for A, a in gens], **_uncovered(F, gens)}
    rep.add("lpg", lpg, wit)


def _is_locale_base(F) -> bool:
    return F.base.one_object and F.base.kind in ("locale_suspension", "two_chain")


def _module_etale(rep, F, ws):
    if not _is_locale_base(F) or not qmod.is_locally_principally_generated(F):
        return
    r = locmod.is_etale_module(F)
    rep.add("etale", r.value, r.witness if not r.value else None)


def _module_category_suite(fn):
    def run(rep, F, ws):
        fn(rep, qmod.module_to_category(F), ws)

    return run


def _module_theorems(rep, F, ws):
    C = qmod.module_to_category(F)
    pg, ta = qmod.is_principally_generated(F), qcat.is_totally_algebraic_cat(C, ws.budget)
    rep.add("pg_iff_totally_algebraic", pg == ta, {"pg": pg, "totally_algebraic": ta})
    for mode in ("pg", "lpg"):
        try:
            w = qmod.adjoint_retract_factorization(F, mode)
            dec = pg if mode == "pg" else qmod.is_locally_principally_generated(F)
            ok = w.unit_ok and w.retract == dec
            rep.add(f"adjoint_retract_{mode}", ok, {"unit": w.unit_ok, "retract": w.retract, "decider": dec, "summands": len(w.lefts)})
        except ConsistencyError as exc:
            rep.add(f"adjoint_retract_{mode}", False, str(exc))
    pr, lpr = qmod.si_principal_sets(F)
    rep.add("si_principal_matches_local", pr == lpr, {"principal_in_si": pr, "locally_principal": lpr})
    G = qmod.module_si(F)
    a, b = qmod.is_principally_generated(G), qmod.is_locally_principally_generated(F)
    rep.add("si_pg_iff_lpg", a == b, {"si_pg": a, "lpg": b})
    _, j = qmod.completion_of(F.base)
    back = qmod.restrict_module(G, j)
    same = back.fibers == F.fibers and back.action_table() == F.action_table()
    rep.add("si_restricts_back", same, None if same else "restriction along j differs")
    if F.base.one_object:
        (obj,) = F.base.objects
        if is_totally_algebraic(F.base.hom(obj, obj)):
            by_c = qmod.principal_by_compacts(F)
            ok = by_c == qmod.principal_elements(F)
            rep.add("principal_by_compact_scalars", ok, {"by_compacts": by_c, "direct": qmod.principal_elements(F)})
    if _is_locale_base(F) and b:
        f = locmod.module_to_locale_morphism(F)
        M2 = locmod.induced_module(f)
        ok = M2.fibers == F.fibers and all(
            M2.act(QArrow(x.dom, x.cod, x.elt), y) == F.act(x, y) for x in F.base.arrows() for y in F.fibers[x.cod]
        )
        rep.add("locale_roundtrip", ok, {"inv": f.inv.graph})
        dense = locmod.lpr_join_dense_check(F)
        rep.add("lpr_join_dense", dense, None if dense else "an element is not a join of locally principal ones")


# locale morphisms


def _lm_validate(rep, f, ws):
    rep.add("valid", True, {"inv": f.inv.graph, "dir": f.dir.graph})


def _lm_slh(rep, f, ws):
    secs = {}
    for u in f.cod:
        secs[u] = [{"inv": sd.s.inv.graph, "class": sd.classification} for sd in locmod.sections(f, u, ws.budget)]
    rep.add("sections", secs)
    r = locmod.is_skew_local_homeo(f)
    rep.add("slh", r.value, r.witness)
    h = locmod.is_local_homeo(f)
    rep.add("lh", h.value, h.witness)


def _lm_module(fn):
    def run(rep, f, ws):
        fn(rep, locmod.induced_module(f), ws)

    return run


def _lm_theorems(rep, f, ws):
    M = locmod.induced_module(f)
    slh = locmod.is_skew_local_homeo(f).value
    lh = locmod.is_local_homeo(f).value
    rep.add("lh_implies_slh", (not lh) or slh, {"lh": lh, "slh": slh})
    counts = locmod.section_count_check(f)
    ok = all(a == b for a, b in counts.values())
    rep.add("sections_match_lpr", ok, counts)
    if slh:
        et = locmod.is_etale_module(M).value
        rep.add("etale_iff_lh", et == lh, {"etale": et, "lh": lh})
        back = locmod.module_to_locale_morphism(M)
        rep.add("roundtrip", back == f, {"recovered": back.inv.graph})
    hb = locmod.hom_bijection_check(f, f, ws.budget)
    rep.add("hom_bijection_self", hb.ok, {"slice": hb.slice_side, "module": hb.module_side, "order": hb.order_agrees})
    one = locmod.identity_locale_morphism(f.cod)
    hb = locmod.hom_bijection_check(f, one, ws.budget)
    rep.add("hom_bijection_to_base", hb.ok, {"slice": hb.slice_side, "module": hb.module_side, "order": hb.order_agrees})


_SUITES = {
    ("lattice", "validate"): _lattice_validate,
    ("lattice", "compactness"): _lattice_compactness,
    ("lattice", "theorems"): _lattice_theorems,
    ("quantaloid", "validate"): _quantaloid_validate,
    ("quantaloid", "theorems"): _quantaloid_theorems,
    ("category", "validate"): _category_validate,
    ("category", "compactness"): _category_compactness,
    ("category", "cauchy"): _category_cauchy,
    ("category", "theorems"): _category_theorems,
    ("module", "validate"): _module_validate,
    ("module", "compactness"): _module_category_suite(_category_compactness),
    ("module", "cauchy"): _module_category_suite(_category_cauchy),
    ("module", "pg"): _module_pg,
    ("module", "lpg"): _module_lpg,
    ("module", "etale"): _module_etale,
    ("module", "theorems"): _module_theorems,
    ("locale_morphism", "validate"): _lm_validate,
    ("locale_morphism", "slh"): _lm_slh,
    ("locale_morphism", "pg"): _lm_module(_module_pg),
    ("locale_morphism", "lpg"): _lm_module(_module_lpg),
    ("locale_morphism", "etale"): _lm_module(_module_etale),
    ("locale_morphism", "theorems"): _lm_theorems,
}


# -- output -------------------------------------------------------------------


def emit_report(report: Report, fmt: str = "human") -> str:
    if fmt == "json":
        return json.dumps(report.to_json(), sort_keys=True, indent=2)
    if fmt != "human":
        raise InputError(f"unknown format {fmt!r}")
    data = report.to_json()
    lines = [f"{report.subject} [{report.kind}] suite={report.suite}"]
    rows = [(c["name"], json.dumps(c["verdict"]), json.dumps(c["witness"], sort_keys=True)) for c in data["checks"]]
    if not rows:
        lines.append("  (no checks apply)")
        return "\n".join(lines)
    w1 = max(len("check"), *(len(r[0]) for r in rows))
    w2 = max(len("verdict"), *(len(r[1]) for r in rows))
    lines.append(f"  {'check':<{w1}}  {'verdict':<{w2}}  witness")
    for a, b, c in rows:
        lines.append(f"  {a:<{w1}}  {b:<{w2}}  {c if c != 'null' else ''}".rstrip())
    return "\n".join(lines)


def mismatches(ws: Workspace, report: Report) -> list[tuple[str, Any, Any]]:
    exp = ws.expect.get(report.subject, {})
    out = []
    for c in report.checks:
        if c.name in exp and jsonable(c.verdict) != exp[c.name]:
            out.append((c.name, exp[c.name], jsonable(c.verdict)))
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="qwb", description="Decide properties of finite quantaloid-enriched structures.")
    sub = parser.add_subparsers(dest="command", required=True)
    pv = sub.add_parser("validate", help="load a workspace and validate every entry")
    pv.add_argument("workspace")
    pv.add_argument("--format", choices=["human", "json"], default="human")
    pa = sub.add_parser("analyze", help="run one suite on one subject")
    pa.add_argument("workspace")
    pa.add_argument("--subject", required=True)
    pa.add_argument("--suite", required=True, choices=SUITES)
    pa.add_argument("--format", choices=["human", "json"], default="human")
    pa.add_argument("--budget", type=int, default=None, help="enumeration budget (overrides QWB_BUDGET)")
    args = parser.parse_args(argv)

    if getattr(args, "budget", None) is not None:
        if args.budget <= 0:
            print("error: --budget must be positive", file=sys.stderr)
            return 2
        os.environ["QWB_BUDGET"] = str(args.budget)
    try:
        ws = load_workspace(args.workspace)
        if getattr(args, "budget", None) is not None:
            ws.budget = args.budget
        if args.command == "validate":
            reports = [run_analysis(ws, name, "validate") for name in ws.subjects()]
            if args.format == "json":
                print(json.dumps([{k: v for k, v in r.to_json().items() if k != "timing"} for r in reports], sort_keys=True, indent=2))
            else:
                for r in reports:
                    flags = ", ".join(f"{c.name}={json.dumps(jsonable(c.verdict))}" for c in r.checks)
                    print(f"{r.subject:<28} {r.kind:<16} {flags}")
                print(f"{len(reports)} entries loaded from {ws.source}")
            bad = [(r.subject, m) for r in reports for m in mismatches(ws, r)]
        else:
            rep = run_analysis(ws, args.subject, args.suite)
            print(emit_report(rep, args.format))
            bad = [(rep.subject, m) for m in mismatches(ws, rep)]
    except ResourceError as exc:
        print(f"resource: {exc}", file=sys.stderr)
        return 2
    except (InputError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for subject, (name, want, got) in bad:
        print(f"mismatch: {subject}.{name} expected {json.dumps(want)} got {json.dumps(got)}", file=sys.stderr)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
