"""Hypothesis strategies for small random lattices, locales and locale maps."""

from __future__ import annotations

import itertools

from hypothesis import strategies as st

from qwb.suplat import FiniteLattice


def _name(s) -> str:
    return "{" + ",".join(str(i) for i in sorted(s)) + "}"


def lattice_from_family(family) -> FiniteLattice:
    fam = sorted({frozenset(s) for s in family}, key=lambda s: (len(s), sorted(s)))
    leq = [(_name(a), _name(b)) for a in fam for b in fam if a < b]
    return FiniteLattice([_name(s) for s in fam], leq)


@st.composite
def closure_lattices(draw, n_max: int = 4):
    """Intersection-closed families containing the full set: every one is a complete lattice."""
    n = draw(st.integers(1, n_max))
    full = frozenset(range(n))
    pool = [frozenset(c) for r in range(n) for c in itertools.combinations(range(n), r)]
    picked = draw(st.lists(st.sampled_from(pool), max_size=5)) if pool else []
    fam = {full, *picked}
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(fam), 2):
            if a & b not in fam:
                fam.add(a & b)
                changed = True
    return lattice_from_family(fam)


@st.composite
def posets(draw, n_max: int = 4):
    """A random partial order on ``range(n)`` compatible with the natural order."""
    n = draw(st.integers(0, n_max))
    rel = {(i, i) for i in range(n)}
    for i, j in itertools.combinations(range(n), 2):
        if draw(st.booleans()):
            rel.add((i, j))
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    return n, frozenset(rel)


def downsets(poset):
    n, rel = poset
    out = []
    for r in range(n + 1):
        for c in itertools.combinations(range(n), r):
            s = set(c)
            if all(a in s for (a, b) in rel if b in s):
                out.append(frozenset(s))
    return out


def downset_locale(poset) -> FiniteLattice:
    return lattice_from_family(downsets(poset))


@st.composite
def poset_maps(draw, n_max: int = 3):
    """``(P, Q, g)`` with ``g: P -> Q`` monotone."""
    P = draw(posets(n_max))
    Q = draw(posets(n_max).filter(lambda p: p[0] > 0 or P[0] == 0))
    nP, relP = P
    nQ, relQ = Q
    for _ in range(50):
        g = [draw(st.integers(0, max(nQ - 1, 0))) for _ in range(nP)]
        if all((g[a], g[b]) in relQ for (a, b) in relP):
            return P, Q, tuple(g)
    # the constant map at any point is always monotone
    return P, Q, tuple(0 for _ in range(nP))


def preimage_morphism(P, Q, g):
    """Locale map ``O(P) -> O(Q)`` with inverse image ``S ↦ g^{-1}(S)``."""
    from qwb.locmod import LocaleMorphism

    Y, X = downset_locale(P), downset_locale(Q)
    inv = {}
    for S in downsets(Q):
        inv[_name(S)] = _name({i for i in range(P[0]) if g[i] in S})
    return LocaleMorphism(Y, X, inv)
