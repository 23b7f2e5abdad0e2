"""The ten acceptance criteria, one test each; every test prints a single pass/fail line."""

import itertools

from qwb import locmod, qcat, qmod
from qwb.corpus import load_corpus
from qwb.locmod import induced_module
from qwb.quantaloid import two_chain
from qwb.suplat import is_totally_algebraic, totally_compact_elements

WS = load_corpus()
COCOMPLETE = {n: C for n, C in WS.categories.items() if qcat.is_cocomplete(C)}


def test_criterion_01_compactness_criteria(criterion):
    bad = []
    for name, C in COCOMPLETE.items():
        crit = qcat.compactness_criteria(C)
        if any(set(crit[k]) != set(crit[1]) for k in (2, 3, 4)):
            bad.append(name)
    criterion(1, not bad and len(COCOMPLETE) >= 10, f"{len(COCOMPLETE)} cocomplete categories, disagreements: {bad}")


def test_criterion_02_fixpoint_module_of_chain(criterion):
    F = WS.modules["F_e_over_L3"]
    got = {
        "lpg": qmod.is_locally_principally_generated(F),
        "principal": qmod.principal_elements(F),
        "pg": qmod.is_principally_generated(F),
        "si_pg": qmod.is_principally_generated(qmod.module_si(F)),
    }
    want = {"lpg": True, "principal": [], "pg": False, "si_pg": True}
    criterion(2, got == want, f"{got}")


def test_criterion_03_pg_iff_totally_algebraic(criterion):
    bad = [
        n for n, F in WS.modules.items()
        if qmod.is_principally_generated(F) != qcat.is_totally_algebraic_cat(qmod.module_to_category(F))
    ]
    criterion(3, not bad, f"{len(WS.modules)} modules, disagreements: {bad}")


def test_criterion_04_lattices_as_2_modules(criterion):
    bad, verdicts = [], {}
    for name, L in WS.lattices.items():
        F = qmod.lattice_as_2_module(two_chain(), L)
        pr = [x for (_, x) in qmod.principal_elements(F)]
        comp = [c for c in totally_compact_elements(L) if c != L.bottom]
        pg, lpg, ta = qmod.is_principally_generated(F), qmod.is_locally_principally_generated(F), is_totally_algebraic(L)
        verdicts[name] = pg
        if pr != comp or not (pg == lpg == ta):
            bad.append(name)
    pinned = verdicts["M2"] is True and verdicts["M3"] is False and verdicts["L2"] and verdicts["L3"]
    criterion(4, not bad and pinned, f"pg per lattice {verdicts}, failures: {bad}")


def test_criterion_05_adjoint_retracts(criterion):
    bad = []
    for name, F in WS.modules.items():
        for mode, decide in (("pg", qmod.is_principally_generated), ("lpg", qmod.is_locally_principally_generated)):
            w = qmod.adjoint_retract_factorization(F, mode)
            if not w.unit_ok or w.retract != decide(F):
                bad.append((name, mode))
    criterion(5, not bad, f"{len(WS.modules)} modules x 2 modes, failures: {bad}")


def test_criterion_06_slh_roundtrip_and_hom_bijection(criterion):
    slh = {n: f for n, f in WS.locale_morphisms.items() if locmod.is_skew_local_homeo(f).value}
    needed = {"id_L2", "id_L3", "id_M2", "i_L3_e", "i_M2_a", "f_L3_to_L2"}
    bad = []
    for name, f in slh.items():
        M = induced_module(f)
        g = locmod.module_to_locale_morphism(M)
        if g != f or induced_module(g).action_table() != M.action_table():
            bad.append(("roundtrip", name))
    pairs = 0
    for (a, f), (b, g) in itertools.product(slh.items(), repeat=2):
        if f.cod != g.cod:
            continue
        pairs += 1
        hb = locmod.hom_bijection_check(f, g)
        if not hb.ok or hb.slice_side != hb.module_side:
            bad.append(("hom", a, b))
    ok = not bad and needed <= set(slh) and pairs > 0
    criterion(6, ok, f"{len(slh)} slh maps, {pairs} hom pairs, failures: {bad}")


def test_criterion_07_skew_open_versus_open(criterion):
    f = WS.locale_morphisms["f_L3_to_L2"]
    Y = f.dom.carrier
    s1 = next(sd for sd in locmod.sections(f, "1") if sd.s.inv("e") == "0")
    lhs = s1.shriek(Y.meet2("1", s1.s.inv("e")))
    rhs = Y.meet2(s1.shriek("1"), "e")
    M = induced_module(f)
    got = {
        "s1": s1.classification,
        "slh": locmod.is_skew_local_homeo(f).value,
        "lh": locmod.is_local_homeo(f).value,
        "lpg": qmod.is_locally_principally_generated(M),
        "etale": locmod.is_etale_module(M).value,
    }
    want = {"s1": "skew_open", "slh": True, "lh": False, "lpg": True, "etale": False}
    ok = got == want and (lhs, rhs) == ("0", "e")
    criterion(7, ok, f"{got}; witness s1_!(1 ∧ s1*(e)) = {lhs} but s1_!(1) ∧ e = {rhs}")


def test_criterion_08_cauchy_and_hom_maps(criterion):
    bad = []
    for name, C in WS.categories.items():
        cc = qcat.cauchy_completion(C)
        cc2 = qcat.cauchy_completion(cc)
        if len(cc2.objects) != len(cc.objects) or not qcat.is_equivalence(cc2.embedding):
            bad.append(("idempotence", name))
        if qcat.is_equivalence(cc.embedding) != qcat.is_cauchy_complete(C):
            bad.append(("corestriction", name))
    for name, C in COCOMPLETE.items():
        R = qcat.R_A(C)
        if not qcat.is_fully_faithful(R) or qcat.is_equivalence(R) != qcat.is_totally_algebraic_cat(C):
            bad.append(("R_A", name))
    pairs = [("star_two", "cat_M2"), ("star_two", "cat_L3"), ("discrete_two_pair", "cat_L2"),
             ("discrete_two_pair", "cat_M2")]
    iso = 0
    for a, b in pairs:
        r = qcat.hom_map_check(WS.categories[a], WS.categories[b])
        if r.order_isomorphism and r.left:
            iso += 1
        else:
            bad.append(("hom_map", a, b))
    criterion(8, not bad and iso >= 3, f"{len(WS.categories)} categories, {iso} hom-map pairs, failures: {bad}")


def test_criterion_09_lifting_under_splittings(criterion):
    per, bad = {}, 0
    for name, sample in (("Sigma_L3", None), ("two", None), ("rel2", 1000)):
        si, _ = qmod.completion_of(WS.quantaloids[name])
        if sample is None:
            ds = list(qmod.split_diagrams(si))
        else:
            ds = list(qmod.split_diagrams(si, limit=sample, seed=17))
        per[name] = len(ds)
        bad += sum(not qmod.lemma17_check(si, d) for d in ds)
    total = sum(per.values())
    criterion(9, bad == 0 and total >= 1000, f"{total} diagrams {per}, failures: {bad}")


def test_criterion_10_entailment_translation(criterion):
    rel_cats = {n: C for n, C in COCOMPLETE.items() if C.base.kind == "rel"}
    bad, checked = [], 0
    for name, C in rel_cats.items():
        if not qcat.is_skeletal(C):
            continue
        checked += 1
        er = qcat.entailment_order(C)
        if not (er.x1 and er.x2 and er.x3):
            bad.append(name)
    er = qcat.entailment_order(WS.categories["cat_rel2_rows_doubled"])
    neg = not er.x1 and er.witnesses.get("x1") is not None
    ok = not bad and checked >= 3 and neg
    criterion(10, ok, f"{checked} skeletal categories hold; non-skeletal x1 witness {er.witnesses.get('x1')}; failures: {bad}")
