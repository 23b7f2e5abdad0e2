import pytest
from hypothesis import given, settings

from qwb import qcat, qmod, suplat
from qwb.corpus import load_corpus
from qwb.errors import ConsistencyError, InputError, PreconditionError
from qwb.locmod import induced_module
from qwb.quantaloid import QArrow, locale_suspension, rel, two_chain

import oracles as O
from strategies import closure_lattices, poset_maps, preimage_morphism

WS = load_corpus()

# Principal elements, locally principal pairs (a, e), pg and lpg, computed by
# the brute-force oracle in tests/oracles.py and then frozen.
PINNED = {
    "F_e_over_L3": ([], [("0", "0"), ("e", "e")], False, True),
    "L1_over_2": ([], [("0", "0")], True, True),
    "L2_over_2": (["1"], [("0", "0"), ("1", "1")], True, True),
    "L3_over_2": (["e", "1"], [("0", "0"), ("1", "1"), ("e", "1")], True, True),
    "C4_over_2": (["a", "b", "1"], [("0", "0"), ("1", "1"), ("a", "1"), ("b", "1")], True, True),
    "M2_over_2": (["a", "b"], [("0", "0"), ("a", "1"), ("b", "1")], True, True),
    "M3_over_2": ([], [("0", "0")], False, False),
    "N5_over_2": (["a", "b"], [("0", "0"), ("a", "1"), ("b", "1")], False, False),
    "Z2_rep": (["{1}", "{z}"], [("{1}", "{1}"), ("{z}", "{1}"), ("{}", "{}")], True, True),
    "Z2_swap": (["a", "b"], [("0", "{}"), ("a", "{1}"), ("b", "{1}")], True, True),
    "Sigma_L3_rep": (["1"], [("0", "0"), ("1", "1"), ("e", "e")], True, True),
    "Sigma_M2_rep": (["1"], [("0", "0"), ("1", "1"), ("a", "a"), ("b", "b")], True, True),
    "rel2_trivial": ([], [("0", "{}")], True, True),
    "rel2_rows": (
        ["{0,1}"],
        [("{0,1}", "{(0,0),(0,1),(1,0),(1,1)}"), ("{0,1}", "{(0,0),(0,1),(1,1)}"), ("{0,1}", "{(0,0),(0,1)}"),
         ("{0,1}", "{(0,0),(1,0),(1,1)}"), ("{0,1}", "{(0,0),(1,1)}"), ("{0,1}", "{(1,0),(1,1)}"),
         ("{0}", "{(0,0),(1,0)}"), ("{0}", "{(0,0)}"), ("{1}", "{(0,1),(1,1)}"), ("{1}", "{(1,1)}"), ("{}", "{}")],
        True,
        True,
    ),
    # same shape as rel2_rows: the fixed points of "copy row 0 into row 1"
    "rel2_fix_copy": (
        ["{(0,0),(0,1),(1,0),(1,1)}"],
        [("{(0,0),(0,1),(1,0),(1,1)}", "{(0,0),(0,1),(1,0),(1,1)}"), ("{(0,0),(0,1),(1,0),(1,1)}", "{(0,0),(0,1),(1,1)}"),
         ("{(0,0),(0,1),(1,0),(1,1)}", "{(0,0),(0,1)}"), ("{(0,0),(0,1),(1,0),(1,1)}", "{(0,0),(1,0),(1,1)}"),
         ("{(0,0),(0,1),(1,0),(1,1)}", "{(0,0),(1,1)}"), ("{(0,0),(0,1),(1,0),(1,1)}", "{(1,0),(1,1)}"),
         ("{(0,0),(1,0)}", "{(0,0),(1,0)}"), ("{(0,0),(1,0)}", "{(0,0)}"), ("{(0,1),(1,1)}", "{(0,1),(1,1)}"),
         ("{(0,1),(1,1)}", "{(1,1)}"), ("{}", "{}")],
        True,
        True,
    ),
    "induced_f_L3_to_L2": (["e", "1"], [("0", "0"), ("1", "1"), ("e", "1")], True, True),
    "induced_i_M2_a": ([], [("0", "0"), ("a", "a")], False, True),
    "induced_p_L2_to_L3": ([], [("0", "0")], False, False),
}

# modules whose oracle run takes well under a second
FAST = [n for n in PINNED if n not in ("rel2_rows", "rel2_fix_copy")]


def lib_values(F):
    pr = [a for (_, a) in qmod.principal_elements(F)]
    lpr = sorted((a, e.elt) for ((_, a), e) in qmod.locally_principal_elements(F))
    return pr, lpr, qmod.is_principally_generated(F), qmod.is_locally_principally_generated(F)


@pytest.mark.parametrize("name", sorted(PINNED))
def test_module_values_pinned(name):
    pr, lpr, pg, lpg = PINNED[name]
    got = lib_values(WS.modules[name])
    assert got == (pr, sorted(lpr), pg, lpg)


@pytest.mark.parametrize("name", sorted(FAST))
def test_pinned_values_match_oracle(name):
    F = WS.modules[name]
    pr, lpr, pg, lpg = PINNED[name]
    assert O.principal_bf(F) == pr
    assert sorted(O.locally_principal_bf(F)) == sorted(lpr)
    assert O.pg_bf(F) is pg and O.lpg_bf(F) is lpg


def test_validate_module_catches_bad_action():
    q = two_chain()
    L = suplat.L3()
    # the bottom arrow must act as bottom
    F = qmod.QModule(q, {"*": L}, lambda f, y: y)
    rep = qmod.validate_module(F)
    assert "bottom arrow acts as bottom" in rep.laws_failed()


def test_module_action_must_land_in_fiber():
    q = two_chain()
    with pytest.raises(InputError):
        qmod.QModule(q, {"*": suplat.L2()}, lambda f, y: "nope")


def test_fixpoint_module_needs_idempotent():
    q = rel(["0", "1"])
    with pytest.raises(PreconditionError):
        qmod.fixpoint_module(q, q.arrow("*", "*", "{(0,1)}"))


def test_fixpoint_module_example():
    q = locale_suspension(suplat.L3())
    Fe, sigma, pi = qmod.fixpoint_module(q, q.arrow("*", "*", "e"))
    assert Fe.fibers["*"].elements == ("0", "e")
    assert qmod.validate_module_morphism(sigma).ok and qmod.validate_module_morphism(pi).ok
    assert qmod.morphism_right_adjoint(sigma) == pi
    # e generates nothing principally: τ_e has no natural right adjoint
    assert qmod.morphism_right_adjoint(qmod.tau(Fe, "*", "e")) is None


def test_represented_lifting_and_tau():
    F = WS.modules["M2_over_2"]
    t = qmod.tau(F, "*", "a")
    assert qmod.validate_module_morphism(t).ok
    assert qmod.morphism_right_adjoint(t) is not None
    h = qmod.represented_lifting(F, "*", "a", "*", "b")
    assert h.elt == "0"


def test_category_roundtrip():
    for name in ("M2_over_2", "N5_over_2", "Z2_swap", "F_e_over_L3"):
        F = WS.modules[name]
        C = qmod.module_to_category(F)
        assert qcat.is_cocomplete(C) and qcat.is_skeletal(C)
        G = qmod.category_to_module(C)
        assert qmod.validate_module(G).ok
        assert len(G.fibers["*"]) == len(F.fibers["*"])
        assert qcat.is_cocomplete(qmod.module_to_category(G))


def test_category_to_module_rejects_incomplete():
    with pytest.raises(PreconditionError):
        qmod.category_to_module(qcat.discrete(two_chain(), {"a": "*", "b": "*"}))


def test_direct_sum_laws():
    F, G = WS.modules["L3_over_2"], WS.modules["M2_over_2"]
    ds = qmod.direct_sum([F, G])
    assert len(ds.module.fibers["*"]) == 12
    assert qmod.validate_module(ds.module).ok


def test_adjoint_retract_example():
    F = WS.modules["F_e_over_L3"]
    assert qmod.adjoint_retract_witness(F, "pg") is None
    w = qmod.adjoint_retract_witness(F, "lpg")
    assert w is not None and w.unit_ok and w.retract
    with pytest.raises(InputError):
        qmod.adjoint_retract_factorization(F, "other")


def test_module_si_of_example():
    F = WS.modules["F_e_over_L3"]
    G = qmod.module_si(F)
    assert qmod.validate_module(G).ok
    assert qmod.is_principally_generated(G)
    pr, lpr = qmod.si_principal_sets(F)
    assert pr == lpr == {("*", "0", "0"), ("*", "e", "e")}


def test_principal_by_compact_scalars():
    for name in ("Z2_rep", "Z2_swap", "M2_over_2", "N5_over_2", "M3_over_2", "rel2_rows", "rel2_rep"):
        F = WS.modules[name]
        assert qmod.principal_by_compacts(F) == qmod.principal_elements(F), name


def test_principal_by_compacts_preconditions():
    with pytest.raises(PreconditionError):
        qmod.principal_by_compacts(WS.modules["chaotic_rep_A"])


SPLIT_DIAGRAM_COUNTS = {"two": 25, "Sigma_L3": 217}


@pytest.mark.parametrize("name", sorted(SPLIT_DIAGRAM_COUNTS))
def test_lifting_under_splittings_exhaustive(name):
    si, _ = qmod.completion_of(WS.quantaloids[name])
    ds = list(qmod.split_diagrams(si))
    assert len(ds) == SPLIT_DIAGRAM_COUNTS[name]
    assert all(qmod.lemma17_check(si, d) for d in ds)


def test_split_diagram_validation():
    si, _ = qmod.completion_of(WS.quantaloids["Sigma_L3"])
    d = next(d for d in qmod.split_diagrams(si) if d.i.dom != d.i.cod)
    # swapping a splitting's halves breaks p∘i = 1
    bad = qmod.SplitDiagram(d.p, d.i, d.j, d.q2, d.a, d.b)
    with pytest.raises(InputError):
        qmod.validate_split_diagram(si, bad)


def test_lattice_as_2_module_needs_two_chain():
    with pytest.raises(InputError):
        qmod.lattice_as_2_module(rel(["0"]), suplat.L2())


@settings(max_examples=30, deadline=None)
@given(closure_lattices(n_max=3))
def test_two_modules_against_oracle(L):
    F = qmod.lattice_as_2_module(two_chain(), L)
    pr = [a for (_, a) in qmod.principal_elements(F)]
    assert pr == O.principal_bf(F) == O.compacts_bf(L)
    pg = qmod.is_principally_generated(F)
    assert pg == qmod.is_locally_principally_generated(F) == O.totally_algebraic_bf(L)
    assert pg == qcat.is_totally_algebraic_cat(qmod.module_to_category(F))


@settings(max_examples=30, deadline=None)
@given(poset_maps(n_max=2))
def test_induced_modules_against_oracle(data):
    f = preimage_morphism(*data)
    F = induced_module(f)
    assert qmod.validate_module(F).ok
    assert [a for (_, a) in qmod.principal_elements(F)] == O.principal_bf(F)
    assert sorted((a, e.elt) for ((_, a), e) in qmod.locally_principal_elements(F)) == sorted(O.locally_principal_bf(F))
    assert qmod.is_principally_generated(F) == O.pg_bf(F)
    assert qmod.is_locally_principally_generated(F) == O.lpg_bf(F)


@settings(max_examples=20, deadline=None)
@given(poset_maps(n_max=3))
def test_theorems_on_random_induced_modules(data):
    F = induced_module(preimage_morphism(*data))
    C = qmod.module_to_category(F)
    assert qmod.is_principally_generated(F) == qcat.is_totally_algebraic_cat(C)
    pr, lpr = qmod.si_principal_sets(F)
    assert pr == lpr
    assert qmod.is_principally_generated(qmod.module_si(F)) == qmod.is_locally_principally_generated(F)
    for mode in ("pg", "lpg"):
        w = qmod.adjoint_retract_factorization(F, mode)
        assert w.unit_ok
