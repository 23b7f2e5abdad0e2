"""
Skew open sections of a locale map
==================================

The map f: L3 -> L2 collapsing the middle element has two sections over the
top. One is open, the other only skew open, so f is a skew local homeomorphism
without being a local homeomorphism.
"""

from qwb import locmod, qmod, suplat

L3, L2 = locmod.as_locale(suplat.L3()), locmod.as_locale(suplat.L2())
f = locmod.LocaleMorphism(L3, L2, {"0": "0", "1": "1"}, name="f")

for sd in locmod.all_sections(f):
    print(f"over {sd.u}: s* = {dict(sd.s.inv.graph)}  ({sd.classification})")

s1 = next(sd for sd in locmod.sections(f, "1") if sd.s.inv("e") == "0")
Y = L3.carrier
print("s1_!(1 ∧ s1*(e)) =", s1.shriek(Y.meet2("1", s1.s.inv("e"))))
print("s1_!(1) ∧ e      =", Y.meet2(s1.shriek("1"), "e"))

print("skew local homeomorphism:", locmod.is_skew_local_homeo(f).value)
print("local homeomorphism:     ", locmod.is_local_homeo(f).value)

# on the module side: y ∘ x = y ∧ f*(x)
M = locmod.induced_module(f)
print("induced module lpg:", qmod.is_locally_principally_generated(M))
print("induced module étale:", locmod.is_etale_module(M).value)

# and back again
g = locmod.module_to_locale_morphism(M)
print("recovered f*:", dict(g.inv.graph), "same map:", g == f)
