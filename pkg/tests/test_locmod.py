import pytest
from hypothesis import given, settings

from qwb import locmod, qmod, suplat
from qwb.corpus import load_corpus
from qwb.errors import ConsistencyError, InputError, PreconditionError
from qwb.locmod import (
    LocaleMorphism,
    SliceMorphism,
    all_sections,
    as_locale,
    identity_locale_morphism,
    induced_module,
    is_local_homeo,
    is_skew_local_homeo,
    open_sublocale,
)

import oracles as O
from strategies import poset_maps, preimage_morphism

WS = load_corpus()
MORPHISMS = sorted(WS.locale_morphisms)

# slh / lh from oracles.slh_bf / lh_bf, frozen
PINNED_COVERS = {name: (True, True) for name in MORPHISMS}
PINNED_COVERS.update({"f_L3_to_L2": (True, False), "h_C4_to_L2": (True, False), "p_L2_to_L3": (False, False)})

# the two sections of L3 -> L2 over the top element
S1 = {"0": "0", "e": "0", "1": "1"}
S2 = {"0": "0", "e": "1", "1": "1"}


def section_triples(f):
    return sorted(
        (sd.u, tuple(sorted(sd.s.inv.graph.items())), sd.classification) for sd in all_sections(f)
    )


def oracle_triples(f):
    X, Y = f.cod.carrier, f.dom.carrier
    out = []
    for u in X.elements:
        for s, _, kind in O.sections_bf(Y, X, dict(f.inv.graph), u):
            out.append((u, tuple(sorted(s.items())), kind))
    return sorted(out)


@pytest.mark.parametrize("name", MORPHISMS)
def test_sections_match_oracle(name):
    f = WS.locale_morphisms[name]
    assert section_triples(f) == oracle_triples(f)


@pytest.mark.parametrize("name", MORPHISMS)
def test_covers_pinned(name):
    f = WS.locale_morphisms[name]
    assert (is_skew_local_homeo(f).value, is_local_homeo(f).value) == PINNED_COVERS[name]


@pytest.mark.parametrize("name", MORPHISMS)
def test_pinned_covers_match_oracle(name):
    f = WS.locale_morphisms[name]
    args = (f.dom.carrier, f.cod.carrier, dict(f.inv.graph))
    assert (O.slh_bf(*args), O.lh_bf(*args)) == PINNED_COVERS[name]


def test_skew_open_section_that_is_not_open():
    f = WS.locale_morphisms["f_L3_to_L2"]
    by_graph = {tuple(sorted(sd.s.inv.graph.items())): sd for sd in locmod.sections(f, "1")}
    s1, s2 = by_graph[tuple(sorted(S1.items()))], by_graph[tuple(sorted(S2.items()))]
    assert s1.classification == "skew_open" and s2.classification == "open"
    Y = f.dom.carrier
    # s1_!(1 ∧ s1*(e)) = 0 while s1_!(1) ∧ e = e
    assert s1.shriek(Y.meet2("1", s1.s.inv("e"))) == "0"
    assert Y.meet2(s1.shriek("1"), "e") == "e"
    assert s2.shriek("1") == "e"


def test_skew_local_homeo_witness_covers_every_element():
    f = WS.locale_morphisms["f_L3_to_L2"]
    res = is_skew_local_homeo(f)
    assert res.value
    assert res.witness["1"] == [("1", "1"), ("1", "e")]
    assert res.witness["e"] == [("1", "e")]


def test_lh_fails_but_induced_module_is_lpg():
    f = WS.locale_morphisms["f_L3_to_L2"]
    M = induced_module(f)
    assert qmod.is_locally_principally_generated(M)
    assert not locmod.is_etale_module(M).value


def test_open_sublocale_extremes():
    X = as_locale(suplat.M2())
    top = open_sublocale(X, "1")
    assert top == identity_locale_morphism(X)
    bot = open_sublocale(X, "0")
    assert len(bot.dom) == 1
    a = open_sublocale(X, "a")
    assert a.dom.carrier.elements == ("0", "a")
    assert a.dir("0") == "b"
    with pytest.raises(InputError):
        open_sublocale(X, "nope")


def test_non_distributive_lattice_is_not_a_locale():
    with pytest.raises(InputError):
        as_locale(suplat.N5())


def test_slice_triangle_is_checked():
    f = WS.locale_morphisms["f_L3_to_L2"]
    with pytest.raises(InputError):
        SliceMorphism(identity_locale_morphism(f.dom.carrier), f, WS.locale_morphisms["id_L3"])


def test_open_implies_skew_open_on_corpus():
    for f in WS.locale_morphisms.values():
        for sd in all_sections(f):
            if sd.classification == "open":
                assert sd.shriek is not None


def test_order_on_sections():
    f = WS.locale_morphisms["f_L3_to_L2"]
    s1, s2 = sorted((sd.s for sd in locmod.sections(f, "1")), key=lambda s: s.inv("e"))
    # ordered by direct images, so the inverse images compare the other way
    assert s1.dir("0") == "e" and s2.dir("0") == "0"
    assert s2.leq(s1) and not s1.leq(s2)


def test_roundtrip_on_slh_corpus():
    for name, f in WS.locale_morphisms.items():
        if not PINNED_COVERS[name][0]:
            with pytest.raises(PreconditionError):
                locmod.module_to_locale_morphism(induced_module(f))
            continue
        g = locmod.module_to_locale_morphism(induced_module(f))
        assert g.inv.graph == f.inv.graph, name
        assert locmod.lpr_join_dense_check(induced_module(f)), name


def test_section_counts_match_locally_principal_elements():
    for name, f in WS.locale_morphisms.items():
        if not PINNED_COVERS[name][0]:
            continue
        for u, (images, at_u) in locmod.section_count_check(f).items():
            assert images == at_u, (name, u)


def test_hom_bijection_self_and_to_base():
    f = WS.locale_morphisms["f_L3_to_L2"]
    res = locmod.hom_bijection_check(f, f)
    assert (res.slice_side, res.module_side) == (3, 3) and res.ok
    base = identity_locale_morphism(f.cod.carrier)
    assert locmod.hom_bijection_check(f, base).ok
    g = WS.locale_morphisms["g_M2_to_L2"]
    assert locmod.hom_bijection_check(g, f).ok
    with pytest.raises(InputError):
        locmod.hom_bijection_check(f, WS.locale_morphisms["id_L3"])


def test_etale_test_rejects_non_lpg():
    with pytest.raises(PreconditionError):
        locmod.is_etale_module(induced_module(WS.locale_morphisms["p_L2_to_L3"]))


@settings(max_examples=40, deadline=None)
@given(poset_maps(n_max=2))
def test_random_maps_against_oracle(data):
    # the oracle enumerates every map, so stay at four-element locales
    f = preimage_morphism(*data)
    args = (f.dom.carrier, f.cod.carrier, dict(f.inv.graph))
    assert section_triples(f) == oracle_triples(f)
    assert is_skew_local_homeo(f).value == O.slh_bf(*args)
    assert is_local_homeo(f).value == O.lh_bf(*args)


@settings(max_examples=25, deadline=None)
@given(poset_maps(n_max=3))
def test_random_maps_roundtrip(data):
    # is_local_homeo raises ConsistencyError if its internal cross-checks disagree
    f = preimage_morphism(*data)
    slh, lh = is_skew_local_homeo(f).value, is_local_homeo(f).value
    assert slh or not lh
    if slh:
        g = locmod.module_to_locale_morphism(induced_module(f))
        assert g.inv.graph == f.inv.graph
        assert locmod.lpr_join_dense_check(induced_module(f))


@settings(max_examples=15, deadline=None)
@given(poset_maps(n_max=2))
def test_random_hom_bijection(data):
    f = preimage_morphism(*data)
    if not is_skew_local_homeo(f).value:
        return
    assert locmod.hom_bijection_check(f, f).ok
    assert locmod.hom_bijection_check(f, identity_locale_morphism(f.cod.carrier)).ok
