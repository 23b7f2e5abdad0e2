"""
Cauchy completion and the idempotent e of a 3-chain
===================================================

Over the quantale L3 = {0 < e < 1} with meet as composition, the fixpoint
module of e has no principal elements but is locally principally generated.
Splitting idempotents repairs this.
"""

from qwb import qcat, qmod, suplat
from qwb.quantaloid import locale_suspension, rel

q = locale_suspension(suplat.L3())
Fe, sigma, pi = qmod.fixpoint_module(q, q.arrow("*", "*", "e"))
print("fiber of F_e:", Fe.fibers["*"].elements)
print("principal:", qmod.principal_elements(Fe), "pg:", qmod.is_principally_generated(Fe))
print("locally principal:", [(a, e.elt) for ((_, a), e) in qmod.locally_principal_elements(Fe)])

G = qmod.module_si(Fe)
print("over the split-idempotent completion, pg:", qmod.is_principally_generated(G))

# a one-object Rel(2)-category is not Cauchy complete; its completion has
# one object per splitting of an idempotent relation
C = qcat.star(rel(["0", "1"]), "*")
cc = qcat.cauchy_completion(C)
print("star over Rel(2): cauchy complete", qcat.is_cauchy_complete(C), "| completion size", len(cc.objects))
print("completing twice adds nothing:", len(qcat.cauchy_completion(cc).objects) == len(cc.objects))
