"""
Finite lattices as modules over the two-element chain
=====================================================

Every finite lattice is a module over the quantale {0 < 1}. Its principal
elements are its non-bottom totally compact elements, and it is generated by
them exactly when it is totally algebraic.
"""

from qwb import qcat, qmod, suplat
from qwb.quantaloid import two_chain

two = two_chain()

# the usual suspects: chains, the square, the diamond and the pentagon
for L in (suplat.L3(), suplat.M2(), suplat.M3(), suplat.N5()):
    F = qmod.lattice_as_2_module(two, L)
    principal = [x for (_, x) in qmod.principal_elements(F)]
    print(f"{L.name}: principal={principal} compact={suplat.totally_compact_elements(L)}")
    print(f"    pg={qmod.is_principally_generated(F)} lpg={qmod.is_locally_principally_generated(F)}"
          f" totally algebraic={suplat.is_totally_algebraic(L)}")

# the same question asked of the enriched category with hom A(y, x) = [y <= x]
C = qmod.module_to_category(qmod.lattice_as_2_module(two, suplat.N5()))
print("N5 as a category: cocomplete", qcat.is_cocomplete(C), "compacts", qcat.totally_compact_objects(C))
