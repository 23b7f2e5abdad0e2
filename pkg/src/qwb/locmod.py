"""Locale morphisms viewed as modules on the quantale ``(X, ∧, ⊤)``.

A locale morphism ``f: Y -> X`` is stored by its inverse image ``f*: X -> Y``
(a frame homomorphism); the direct image ``f_*`` is its right adjoint.  The
induced module has the single fiber ``Y`` and action ``y ∘ x = y ∧ f*(x)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import ConsistencyError, InputError, PreconditionError, default_budget
from .quantaloid import QArrow, Quantaloid, locale_suspension
from .suplat import (
    FiniteLattice,
    MonotoneMap,
    adjoint_of_monotone,
    heyting_implication,
    is_inf_morphism,
    is_sup_morphism,
    monotone_maps,
)
from . import qmod

OBJ = "*"


@dataclass(frozen=True, eq=False)
class FiniteLocale:
    carrier: FiniteLattice

    def __post_init__(self):
        if not self.carrier.is_distributive():
            raise InputError(f"{self.carrier!r} is not distributive, so it is not a locale")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteLocale):
            return NotImplemented
        return self.carrier == other.carrier

    def __hash__(self) -> int:
        return hash(self.carrier)

    @property
    def top(self):
        return self.carrier.top

    @property
    def bottom(self):
        return self.carrier.bottom

    def __iter__(self):
        return iter(self.carrier)

    def __len__(self) -> int:
        return len(self.carrier)


def as_locale(X) -> FiniteLocale:
    return X if isinstance(X, FiniteLocale) else FiniteLocale(X)


_SUSPENSIONS: dict = {}


def quantale_of(X: FiniteLocale) -> Quantaloid:
    """The shared ``(X, ∧, ⊤)``; one instance per lattice so modules compare."""
    L = as_locale(X).carrier
    q = _SUSPENSIONS.get(L)
    if q is None:
        q = locale_suspension(L, name=f"Sigma({L.name or '?'})")
        _SUSPENSIONS[L] = q
    return q


class LocaleMorphism:
    """``f: Y -> X`` given by ``inv = f*: X -> Y``."""

    def __init__(self, dom, cod, inv: Mapping | MonotoneMap, name: str | None = None):
        self.dom = as_locale(dom)
        self.cod = as_locale(cod)
        self.name = name
        if not isinstance(inv, MonotoneMap):
            inv = MonotoneMap(self.cod.carrier, self.dom.carrier, dict(inv))
        if not is_sup_morphism(inv):
            raise InputError("inverse image does not preserve joins")
        if not is_inf_morphism(inv):
            raise InputError("inverse image does not preserve finite meets")
        self.inv = inv
        d = adjoint_of_monotone(inv, "right")
        if d is None:
            raise ConsistencyError("a join-preserving map lacks a right adjoint")
        self.dir = d

    def __repr__(self) -> str:
        return f"<LocaleMorphism {self.name or ''} {dict(self.inv.graph)}>"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LocaleMorphism):
            return NotImplemented
        return self.dom == other.dom and self.cod == other.cod and self.inv == other.inv

    __hash__ = None  # type: ignore[assignment]

    def leq(self, other: "LocaleMorphism") -> bool:
        """``f <= g`` iff ``f_* <= g_*``."""
        return self.dir.leq(other.dir)


def identity_locale_morphism(X) -> LocaleMorphism:
    X = as_locale(X)
    return LocaleMorphism(X, X, {x: x for x in X}, name="1")


def compose_locale(g: LocaleMorphism, h: LocaleMorphism) -> LocaleMorphism:
    """``g ∘ h``; inverse images compose the other way round."""
    if h.cod != g.dom:
        raise InputError("locale morphisms do not compose")
    return LocaleMorphism(h.dom, g.cod, {x: h.inv(g.inv(x)) for x in g.cod})


class OpenInclusion(LocaleMorphism):
    """``i: ↓u -> X`` with ``i*(x) = x ∧ u``, ``i_*(v) = u ⇒ v`` and ``i_!(v) = v``."""

    shriek: MonotoneMap
    u: object


def open_sublocale(X, u) -> OpenInclusion:
    X = as_locale(X)
    L = X.carrier
    if u not in L:
        raise InputError(f"{u!r} is not an element of the locale")
    D = L.sublattice(L.down(u), name=f"↓{u}")
    i = OpenInclusion(D, X, {x: L.meet2(x, u) for x in L}, name=f"i_{u}")
    i.u = u
    i.shriek = MonotoneMap(D, L, {v: v for v in D})
    if any(i.dir(v) != heyting_implication(L, u, v) for v in D):
        raise ConsistencyError("direct image of an open inclusion is not u ⇒ -")
    if adjoint_of_monotone(i.inv, "left") != i.shriek:
        raise ConsistencyError("i_! is not left adjoint to i*")
    return i


@dataclass(eq=False)
class SliceMorphism:
    """``h: (Y, f) -> (Z, g)`` over ``X`` with ``g ∘ h = f``."""

    h: LocaleMorphism
    f: LocaleMorphism
    g: LocaleMorphism

    def __post_init__(self):
        if self.h.dom != self.f.dom or self.h.cod != self.g.dom or self.f.cod != self.g.cod:
            raise InputError("slice morphism endpoints do not match")
        for x in self.f.cod:
            if self.h.inv(self.g.inv(x)) != self.f.inv(x):
                raise InputError(f"triangle does not commute at {x!r}")


def shriek(h: LocaleMorphism) -> MonotoneMap | None:
    return adjoint_of_monotone(h.inv, "left")


def is_skew_open(s: SliceMorphism) -> MonotoneMap | None:
    """``h_!`` if ``h_!(y ∧ f*(x)) = h_!(y) ∧ g*(x)`` throughout, else ``None``."""
    hs = shriek(s.h)
    if hs is None:
        return None
    Y, Z = s.h.dom.carrier, s.h.cod.carrier
    for y in Y:
        for x in s.f.cod:
            if hs(Y.meet2(y, s.f.inv(x))) != Z.meet2(hs(y), s.g.inv(x)):
                return None
    return hs


def is_open(s: SliceMorphism) -> MonotoneMap | None:
    """``h_!`` if ``h_!(y ∧ h*(z)) = h_!(y) ∧ z`` throughout, else ``None``."""
    hs = shriek(s.h)
    if hs is None:
        return None
    Y, Z = s.h.dom.carrier, s.h.cod.carrier
    ok = all(hs(Y.meet2(y, s.h.inv(z))) == Z.meet2(hs(y), z) for y in Y for z in Z)
    if not ok:
        return None
    if is_skew_open(s) is None:
        raise ConsistencyError("an open slice morphism failed to be skew open")
    return hs


# -- the module side --------------------------------------------------------


def induced_module(f: LocaleMorphism) -> qmod.QModule:
    q = quantale_of(f.cod)
    Y = f.dom.carrier
    return qmod.QModule(q, {OBJ: Y}, lambda a, y: Y.meet2(y, f.inv(a.elt)), name=f"∘_{f.name or 'f'}")


def slice_to_module_morphism(s: SliceMorphism) -> qmod.QModuleMorphism:
    """``h*: (Z, ∘_g) -> (Y, ∘_f)``; contravariant in ``h``."""
    alpha = qmod.QModuleMorphism(induced_module(s.g), induced_module(s.f), {OBJ: s.h.inv.graph})
    qmod.validate_module_morphism(alpha).raise_if_failed()
    return alpha


# -- sections ---------------------------------------------------------------


@dataclass(eq=False)
class SectionData:
    f: LocaleMorphism
    u: object
    s: LocaleMorphism
    classification: str
    shriek: MonotoneMap | None = field(default=None, repr=False)


def sections(f: LocaleMorphism, u, budget: int | None = None) -> list[SectionData]:
    """All ``s: ↓u -> Y`` with ``f ∘ s = i_u``, searched through inverse images."""
    i = open_sublocale(f.cod, u)
    Y, D = f.dom.carrier, i.dom.carrier
    limit = default_budget() if budget is None else budget
    out = []
    for cand in monotone_maps(Y, D, limit):
        if any(cand(f.inv(x)) != i.inv(x) for x in f.cod):
            continue
        if not (is_sup_morphism(cand) and is_inf_morphism(cand)):
            continue
        s = LocaleMorphism(D, f.dom, cand, name=f"s@{u}")
        sl = SliceMorphism(s, i, f)
        op = is_open(sl)
        sk = is_skew_open(sl)
        kind = "open" if op is not None else "skew_open" if sk is not None else "plain"
        out.append(SectionData(f, u, s, kind, sk))
    return out


def all_sections(f: LocaleMorphism, budget: int | None = None) -> list[SectionData]:
    return [sd for u in f.cod for sd in sections(f, u, budget)]


@dataclass
class CoverResult:
    value: bool
    witness: dict


def is_skew_local_homeo(f: LocaleMorphism) -> CoverResult:
    """``y = ⋁ s_!(s*(y))`` over all skew open sections, checked for each ``y``."""
    Y = f.dom.carrier
    skew = [sd for sd in all_sections(f) if sd.shriek is not None]
    witness, value = {}, True
    for y in Y:
        parts = [(sd.u, sd.shriek(sd.s.inv(y))) for sd in skew]
        witness[y] = sorted({p for p in parts if p[1] != Y.bottom}, key=repr)
        if Y.join(v for _, v in parts) != y:
            value = False
    if value != qmod.is_locally_principally_generated(induced_module(f)):
        raise ConsistencyError("slh and lpg of the induced module disagree")
    return CoverResult(value, witness)


def is_local_homeo(f: LocaleMorphism) -> CoverResult:
    """``⊤ = ⋁ s_!(u)`` over the open sections, cross-checked two ways."""
    Y = f.dom.carrier
    secs = all_sections(f)
    opens = [sd for sd in secs if sd.classification == "open"]
    value = Y.join(sd.shriek(sd.s.dom.top) for sd in opens) == Y.top
    witness = {"open_images": sorted({(sd.u, sd.shriek(sd.s.dom.top)) for sd in opens}, key=repr)}
    slh = is_skew_local_homeo(f).value
    if value and not slh:
        raise ConsistencyError("a local homeomorphism failed to be skew local")
    if slh:
        all_open = all(sd.classification == "open" for sd in secs if sd.shriek is not None)
        if value != all_open:
            raise ConsistencyError("lh disagrees with 'every skew open section is open'")
        if value != is_etale_module(induced_module(f)).value:
            raise ConsistencyError("lh disagrees with the étale test on the induced module")
    return CoverResult(value, witness)


def is_etale_module(M: qmod.QModule) -> CoverResult:
    """Every ``ζ = tau_a ∘ sigma_u`` satisfies ``ζ(v ∧ ζ*(m)) = ζ(v) ∧ m``."""
    if not M.base.one_object or M.base.kind not in ("locale_suspension", "two_chain"):
        raise PreconditionError("étale test needs a module on a locale quantale")
    if not qmod.is_locally_principally_generated(M):
        raise PreconditionError("étale test needs an lpg module")
    (obj,) = M.base.objects
    Mf = M.fibers[obj]
    X = M.base.hom(obj, obj)
    failures = []
    for ((_, a), e) in qmod.locally_principal_elements(M):
        z = qmod.local_tau(M, a, e)
        zs = qmod.morphism_right_adjoint(z)
        dom = z.dom.fibers[obj]
        for v in dom:
            for m in Mf:
                if z(obj, X.meet2(v, zs(obj, m))) != Mf.meet2(z(obj, v), m):
                    failures.append({"a": a, "u": e.elt, "v": v, "m": m})
                    break
    return CoverResult(not failures, {"failures": failures[:5]})


def section_count_check(f: LocaleMorphism) -> dict:
    """Per ``u``: skew open sections against locally principal elements at ``u``."""
    M = induced_module(f)
    lpr = qmod.locally_principal_elements(M)
    out = {}
    for u in f.cod:
        images = sorted(
            (sd.shriek(sd.s.dom.top) for sd in sections(f, u) if sd.shriek is not None), key=repr
        )
        at_u = sorted((a for ((_, a), e) in lpr if e.elt == u), key=repr)
        out[u] = (images, at_u)
    return out


def module_to_locale_morphism(M: qmod.QModule) -> LocaleMorphism:
    """Recover ``f`` from an lpg module with ``f*(x) = ⊤ ∘ x``."""
    if not M.base.one_object or M.base.kind not in ("locale_suspension", "two_chain"):
        raise PreconditionError("needs a module on a locale quantale")
    if not qmod.is_locally_principally_generated(M):
        raise PreconditionError("module is not lpg")
    q = M.base
    (obj,) = q.objects
    X = q.hom(obj, obj)
    Y = M.fibers[obj]
    if not Y.is_distributive():
        raise ConsistencyError("the fiber of an lpg module is not distributive")
    for m in Y:
        for n in Y:
            for x in X:
                a = QArrow(obj, obj, x)
                if M.act(a, Y.meet2(m, n)) != Y.meet2(m, M.act(a, n)):
                    raise ConsistencyError(f"mixed law fails at {(m, n, x)!r}")
    f = LocaleMorphism(Y, X, {x: M.act(QArrow(obj, obj, x), Y.top) for x in X}, name="f_M")
    back = induced_module(f)
    for a in q.arrows():
        for y in Y:
            if back.act(QArrow(obj, obj, a.elt), y) != M.act(a, y):
                raise ConsistencyError("induced module of the recovered map differs")
    if not is_skew_local_homeo(f).value:
        raise ConsistencyError("recovered map is not a skew local homeomorphism")
    return f


def lpr_join_dense_check(M: qmod.QModule) -> bool:
    """``m = ⋁(↓m ∩ lpr)`` and ``p ∘ [p, m]`` is locally principal at ``u ∧ [p, m]``."""
    (obj,) = M.base.objects
    Y, X = M.fibers[obj], M.base.hom(obj, obj)
    lpr = qmod.locally_principal_elements(M)
    pairs = {(a, e.elt) for ((_, a), e) in lpr}
    elts = {a for a, _ in pairs}
    for m in Y:
        if Y.join(p for p in elts if Y.leq(p, m)) != m:
            return False
    for (p, u) in pairs:
        for m in Y:
            r = qmod.module_hom(M, obj, p, obj, m)
            if (M.act(r, p), X.meet2(u, r.elt)) not in pairs:
                return False
    return True


# -- hom-level comparison ---------------------------------------------------


@dataclass
class HomBijection:
    slice_side: int
    module_side: int
    bijective: bool
    order_agrees: bool

    @property
    def ok(self) -> bool:
        return self.bijective and self.order_agrees


def skew_open_slice_morphisms(f: LocaleMorphism, g: LocaleMorphism, budget: int | None = None) -> list:
    """Pairs ``(h, h_!)`` for skew open ``h: (Y, f) -> (Z, g)``."""
    Y, Z = f.dom.carrier, g.dom.carrier
    limit = default_budget() if budget is None else budget
    out = []
    for cand in monotone_maps(Z, Y, limit):
        if any(cand(g.inv(x)) != f.inv(x) for x in f.cod):
            continue
        if not (is_sup_morphism(cand) and is_inf_morphism(cand)):
            continue
        h = LocaleMorphism(f.dom, g.dom, cand)
        hs = is_skew_open(SliceMorphism(h, f, g))
        if hs is not None:
            out.append((h, hs))
    return out


def left_adjoint_module_morphisms(M: qmod.QModule, N: qmod.QModule, budget: int | None = None) -> list:
    """Module morphisms ``M -> N`` with a right adjoint module morphism."""
    (obj,) = M.base.objects
    limit = default_budget() if budget is None else budget
    out = []
    for cand in monotone_maps(M.fibers[obj], N.fibers[obj], limit):
        if not is_sup_morphism(cand):
            continue
        alpha = qmod.QModuleMorphism(M, N, {obj: cand})
        if not qmod.validate_module_morphism(alpha).ok:
            continue
        if qmod.morphism_right_adjoint(alpha) is not None:
            out.append(cand)
    return out


def hom_bijection_check(f: LocaleMorphism, g: LocaleMorphism, budget: int | None = None) -> HomBijection:
    if f.cod != g.cod:
        raise InputError("slice objects must share a base locale")
    left = skew_open_slice_morphisms(f, g, budget)
    right = left_adjoint_module_morphisms(induced_module(f), induced_module(g), budget)
    images = [hs for _, hs in left]
    bij = len(set(images)) == len(images) and set(images) == set(right)
    order = all(h.leq(k) == hs.leq(ks) for h, hs in left for k, ks in left)
    return HomBijection(len(left), len(right), bij, order)
