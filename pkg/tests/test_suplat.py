import pytest
from hypothesis import given, settings, strategies as st

from qwb import suplat
from qwb.suplat import (
    FiniteLattice,
    LatticeError,
    MonotoneMap,
    adjoint_of_monotone,
    heyting_implication,
    is_sup_morphism,
    monotone_maps,
    split_idempotent_sup,
    totally_compact_elements,
)

import oracles as O
from strategies import closure_lattices, downset_locale, posets

NAMED = {f.__name__: f() for f in (suplat.L1, suplat.L2, suplat.L3, suplat.M2, suplat.M3, suplat.N5)}

# Computed once with oracles.compacts_bf / totally_algebraic_bf, then frozen.
PINNED_COMPACTS = {
    "L1": ([], True),
    "L2": (["1"], True),
    "L3": (["e", "1"], True),
    "M2": (["a", "b"], True),
    "M3": ([], False),
    "N5": (["a", "b"], False),
}


@pytest.mark.parametrize("name", sorted(NAMED))
def test_named_lattice_compacts_pinned(name):
    L = NAMED[name]
    comp, ta = PINNED_COMPACTS[name]
    assert totally_compact_elements(L) == comp
    assert suplat.is_totally_algebraic(L) is ta


@pytest.mark.parametrize("name", sorted(NAMED))
def test_pinned_values_match_oracle(name):
    L = NAMED[name]
    assert O.compacts_bf(L) == PINNED_COMPACTS[name][0]
    assert O.totally_algebraic_bf(L) is PINNED_COMPACTS[name][1]


def test_distributivity_of_named_lattices():
    assert {n for n, L in NAMED.items() if not L.is_distributive()} == {"M3", "N5"}


def test_closure_is_applied_to_generating_pairs():
    L = FiniteLattice(["0", "e", "1"], [("0", "e"), ("e", "1")])
    assert L.leq("0", "1")
    assert L.join2("0", "1") == "1" and L.meet2("e", "1") == "e"


def test_non_lattices_are_rejected():
    with pytest.raises(LatticeError):
        FiniteLattice(["a", "b"])  # two incomparable elements, no join
    with pytest.raises(LatticeError):
        FiniteLattice(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(LatticeError):
        FiniteLattice([])


def test_unknown_element_in_order():
    with pytest.raises(LatticeError):
        FiniteLattice(["0"], [("0", "x")])


def test_json_roundtrip():
    for L in NAMED.values():
        assert FiniteLattice.from_json(L.to_json()) == L


def test_heyting_needs_distributive():
    with pytest.raises(LatticeError):
        heyting_implication(suplat.M3(), "a", "b")


def test_split_idempotent_of_constant_bottom_join():
    L = suplat.L3()
    e = MonotoneMap(L, L, {"0": "0", "e": "e", "1": "e"})
    fixed, s, p = split_idempotent_sup(e)
    assert fixed.elements == ("0", "e")
    assert suplat.compose(p, s) == suplat.identity(fixed)
    assert suplat.compose(s, p) == e


def test_soft_limit_warns():
    with pytest.warns(UserWarning):
        suplat.chain(suplat.SOFT_LIMIT + 1)


@settings(max_examples=60, deadline=None)
@given(closure_lattices())
def test_joins_agree_with_brute_force(L):
    for x in L:
        for y in L:
            assert L.join2(x, y) == O.join_bf(L, [x, y])
            assert L.meet2(x, y) == O.meet_bf(L, [x, y])
    assert L.join([]) == O.join_bf(L, [])


@settings(max_examples=60, deadline=None)
@given(closure_lattices())
def test_compacts_agree_with_brute_force(L):
    assert totally_compact_elements(L) == O.compacts_bf(L)
    assert suplat.is_totally_algebraic(L) == O.totally_algebraic_bf(L)


@settings(max_examples=30, deadline=None)
@given(closure_lattices(n_max=3), closure_lattices(n_max=3))
def test_monotone_maps_and_adjoints(L, M):
    maps = list(monotone_maps(L, M))
    brute = [f for f in O.all_maps(L, M) if all(M.leq(f[x], f[y]) for x in L for y in L if L.leq(x, y))]
    assert len(maps) == len(brute)
    for f in maps:
        sup = is_sup_morphism(f)
        assert sup == O.preserves_joins_bf(f.graph, L, M)
        r = adjoint_of_monotone(f, "right")
        assert (r is not None) == sup
        if r is not None:
            assert all(M.leq(f(x), y) == L.leq(x, r(y)) for x in L for y in M)


@settings(max_examples=40, deadline=None)
@given(posets())
def test_downset_locales_are_heyting(P):
    L = downset_locale(P)
    assert L.is_distributive()
    for u in L:
        for v in L:
            h = heyting_implication(L, u, v)
            assert all(L.leq(w, h) == L.leq(L.meet2(w, u), v) for w in L)


@settings(max_examples=40, deadline=None)
@given(closure_lattices(n_max=3), st.data())
def test_split_idempotents(L, data):
    maps = [f for f in monotone_maps(L, L) if is_sup_morphism(f) and suplat.compose(f, f) == f]
    e = data.draw(st.sampled_from(maps))
    fixed, s, p = split_idempotent_sup(e)
    assert suplat.compose(p, s) == suplat.identity(fixed)
    assert suplat.compose(s, p) == e
