"""Finite quantaloids.

A quantaloid here is a finite set of objects, a :class:`~qwb.suplat.FiniteLattice`
of arrows for each ordered pair, and a composition that preserves joins in
each variable.  Arrows are :class:`QArrow` triples; ``q.compose(g, f)`` is
``g ∘ f`` (first ``f``, then ``g``).

Composition is either looked up in an explicit table (hand-written or
tabulated quantaloids) or computed by a closure (the constructed families).
Results are memoized per instance either way.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import InputError, PreconditionError, ValidationReport
from .suplat import FiniteLattice, L2, LatticeError


class QArrow(NamedTuple):
    dom: Hashable
    cod: Hashable
    elt: Hashable

    def __repr__(self) -> str:
        return f"{self.elt}:{self.dom}->{self.cod}"


ComposeFn = Callable[[Hashable, Hashable, Hashable, Hashable, Hashable], Hashable]


class Quantaloid:
    """A finite Sup-enriched category.

    ``homs[(A, B)]`` is the lattice of arrows ``A -> B``.  ``compose`` is either
    a mapping ``(A, B, C, g, f) -> h`` or a callable with the same signature,
    where ``f: A -> B`` and ``g: B -> C``.
    """

    def __init__(
        self,
        objects: Sequence[Hashable],
        homs: Mapping[tuple, FiniteLattice],
        compose: ComposeFn | Mapping,
        identities: Mapping[Hashable, Hashable],
        *,
        name: str | None = None,
        kind: str | None = None,
        params: dict | None = None,
    ):
        self.objects = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise InputError("duplicate quantaloid objects")
        self._homs = dict(homs)
        for A in self.objects:
            for B in self.objects:
                if (A, B) not in self._homs:
                    raise InputError(f"missing hom lattice for {A!r} -> {B!r}")
        self._ids = dict(identities)
        for A in self.objects:
            if A not in self._ids:
                raise InputError(f"missing identity on {A!r}")
            if self._ids[A] not in self._homs[(A, A)]:
                raise InputError(f"identity {self._ids[A]!r} is not an arrow {A!r} -> {A!r}")
        if callable(compose):
            self._fn: ComposeFn | None = compose
            self._table: dict = {}
        else:
            self._fn = None
            self._table = dict(compose)
        self._cache: dict = {}
        self._lift: dict = {}
        self._ext: dict = {}
        self.name = name
        self.kind = kind
        self.params = params or {}

    def __repr__(self) -> str:
        label = self.name or self.kind or "Q"
        return f"<Quantaloid {label} objects={list(self.objects)}>"

    # -- structure ----------------------------------------------------------

    @property
    def explicit(self) -> bool:
        return self._fn is None

    @property
    def one_object(self) -> bool:
        return len(self.objects) == 1

    def hom(self, A, B) -> FiniteLattice:
        try:
            return self._homs[(A, B)]
        except KeyError:
            raise InputError(f"no hom lattice for {A!r} -> {B!r}") from None

    def arrow(self, A, B, elt) -> QArrow:
        if elt not in self.hom(A, B):
            raise InputError(f"{elt!r} is not an arrow {A!r} -> {B!r}")
        return QArrow(A, B, elt)

    def arrows(self, A=None, B=None) -> Iterator[QArrow]:
        As = self.objects if A is None else (A,)
        Bs = self.objects if B is None else (B,)
        for X in As:
            for Y in Bs:
                for e in self.hom(X, Y):
                    yield QArrow(X, Y, e)

    def identity(self, A) -> QArrow:
        return QArrow(A, A, self._ids[A])

    def bottom(self, A, B) -> QArrow:
        return QArrow(A, B, self.hom(A, B).bottom)

    def top(self, A, B) -> QArrow:
        return QArrow(A, B, self.hom(A, B).top)

    def _mul(self, A, B, C, g, f):
        key = (A, B, C, g, f)
        try:
            return self._cache[key]
        except KeyError:
            pass
        if self._fn is not None:
            h = self._fn(A, B, C, g, f)
        else:
            try:
                h = self._table[key]
            except KeyError:
                raise InputError(f"composition table lacks {g!r} o {f!r} ({A}->{B}->{C})") from None
        self._cache[key] = h
        return h

    def compose(self, g: QArrow, f: QArrow) -> QArrow:
        """``g ∘ f``."""
        if f.cod != g.dom:
            raise InputError(f"cannot compose {g!r} after {f!r}")
        return QArrow(f.dom, g.cod, self._mul(f.dom, f.cod, g.cod, g.elt, f.elt))

    def compose_all(self, *arrows: QArrow) -> QArrow:
        """``arrows[0] ∘ arrows[1] ∘ ...``."""
        acc = arrows[-1]
        for g in reversed(arrows[:-1]):
            acc = self.compose(g, acc)
        return acc

    def leq(self, f: QArrow, g: QArrow) -> bool:
        if (f.dom, f.cod) != (g.dom, g.cod):
            raise InputError(f"arrows {f!r} and {g!r} are not parallel")
        return self.hom(f.dom, f.cod).leq(f.elt, g.elt)

    def join(self, arrows: Iterable[QArrow], A, B) -> QArrow:
        L = self.hom(A, B)
        elts = []
        for f in arrows:
            if (f.dom, f.cod) != (A, B):
                raise InputError(f"{f!r} is not an arrow {A!r} -> {B!r}")
            elts.append(f.elt)
        return QArrow(A, B, L.join(elts))

    def meet(self, arrows: Iterable[QArrow], A, B) -> QArrow:
        L = self.hom(A, B)
        return QArrow(A, B, L.meet(f.elt for f in arrows))

    # -- residuation --------------------------------------------------------

    def lifting(self, f: QArrow, g: QArrow) -> QArrow:
        """``[f, g] = join{h | f ∘ h <= g}`` for ``f: B -> C`` and ``g: A -> C``."""
        if f.cod != g.cod:
            raise InputError(f"lifting needs a common codomain, got {f!r} and {g!r}")
        key = (f, g)
        hit = self._lift.get(key)
        if hit is not None:
            return hit
        A, B = g.dom, f.dom
        L = self.hom(A, B)
        cand = QArrow(A, B, L.join(h for h in L if self.leq(self.compose(f, QArrow(A, B, h)), g)))
        if not self.leq(self.compose(f, cand), g):
            raise PreconditionError("composition is not join-preserving; lifting does not exist")
        self._lift[key] = cand
        return cand

    def extension(self, f: QArrow, g: QArrow) -> QArrow:
        """``{f, g} = join{h | h ∘ f <= g}`` for ``f: A -> B`` and ``g: A -> C``."""
        if f.dom != g.dom:
            raise InputError(f"extension needs a common domain, got {f!r} and {g!r}")
        key = (f, g)
        hit = self._ext.get(key)
        if hit is not None:
            return hit
        B, C = f.cod, g.cod
        L = self.hom(B, C)
        cand = QArrow(B, C, L.join(h for h in L if self.leq(self.compose(QArrow(B, C, h), f), g)))
        if not self.leq(self.compose(cand, f), g):
            raise PreconditionError("composition is not join-preserving; extension does not exist")
        self._ext[key] = cand
        return cand

    def is_idempotent(self, e: QArrow) -> bool:
        return e.dom == e.cod and self.compose(e, e) == e

    def idempotents(self, A=None) -> list[QArrow]:
        objs = self.objects if A is None else (A,)
        return [e for X in objs for e in self.arrows(X, X) if self.is_idempotent(e)]

    def tabulate(self) -> "Quantaloid":
        """A copy of ``self`` whose composition is an explicit table."""
        table = {}
        for A, B, C in itertools.product(self.objects, repeat=3):
            for f in self.hom(A, B):
                for g in self.hom(B, C):
                    table[(A, B, C, g, f)] = self._mul(A, B, C, g, f)
        return Quantaloid(
            self.objects, self._homs, table, self._ids, name=self.name, kind=None, params=None
        )


def validate_quantaloid(q: Quantaloid) -> ValidationReport:
    """Check associativity, identities and join-bilinearity of composition.

    Join-bilinearity is reduced to the empty join and binary joins in each
    variable, which suffices because every hom lattice is finite.
    """
    rep = ValidationReport(subject=f"quantaloid {q.name or q.kind or ''}".strip())
    objs = q.objects
    try:
        for A, B in itertools.product(objs, repeat=2):
            for f in q.arrows(A, B):
                if q.compose(q.identity(B), f) != f:
                    rep.fail("left identity", f)
                if q.compose(f, q.identity(A)) != f:
                    rep.fail("right identity", f)
        for A, B, C in itertools.product(objs, repeat=3):
            LAB, LBC, LAC = q.hom(A, B), q.hom(B, C), q.hom(A, C)
            for g in LBC:
                gg = QArrow(B, C, g)
                if q.compose(gg, q.bottom(A, B)).elt != LAC.bottom:
                    rep.fail("composition with bottom (right)", gg)
                els = LAB.elements
                for i, f1 in enumerate(els):
                    for f2 in els[i + 1 :]:
                        lhs = q.compose(gg, QArrow(A, B, LAB.join2(f1, f2))).elt
                        rhs = LAC.join2(q._mul(A, B, C, g, f1), q._mul(A, B, C, g, f2))
                        if lhs != rhs:
                            rep.fail("join-preservation in right argument", (g, f1, f2))
            for f in LAB:
                ff = QArrow(A, B, f)
                if q.compose(q.bottom(B, C), ff).elt != LAC.bottom:
                    rep.fail("composition with bottom (left)", ff)
                els = LBC.elements
                for i, g1 in enumerate(els):
                    for g2 in els[i + 1 :]:
                        lhs = q.compose(QArrow(B, C, LBC.join2(g1, g2)), ff).elt
                        rhs = LAC.join2(q._mul(A, B, C, g1, f), q._mul(A, B, C, g2, f))
                        if lhs != rhs:
                            rep.fail("join-preservation in left argument", (g1, g2, f))
        for A, B, C, D in itertools.product(objs, repeat=4):
            for f in q.hom(A, B):
                for g in q.hom(B, C):
                    gf = q._mul(A, B, C, g, f)
                    for h in q.hom(C, D):
                        if q._mul(A, C, D, h, gf) != q._mul(A, B, D, q._mul(B, C, D, h, g), f):
                            rep.fail("associativity", (h, g, f))
    except (InputError, LatticeError) as exc:
        rep.fail("well-formedness", str(exc))
    return rep


def is_adjoint_pair(q: Quantaloid, f: QArrow, g: QArrow) -> bool:
    """``f ⊣ g``: ``1_X <= g ∘ f`` and ``f ∘ g <= 1_Y`` for ``f: X -> Y``."""
    if f.dom != g.cod or f.cod != g.dom:
        raise InputError(f"{f!r} and {g!r} do not form an opposed pair")
    X, Y = f.dom, f.cod
    return q.leq(q.identity(X), q.compose(g, f)) and q.leq(q.compose(f, g), q.identity(Y))


def right_adjoint_arrow(q: Quantaloid, f: QArrow) -> QArrow | None:
    cand = q.lifting(f, q.identity(f.cod))
    return cand if is_adjoint_pair(q, f, cand) else None


def check_residuation(q: Quantaloid) -> ValidationReport:
    """Exhaustive check of both residuation laws on every triple."""
    rep = ValidationReport(subject="residuation")
    objs = q.objects
    for A, B, C in itertools.product(objs, repeat=3):
        for f in q.arrows(B, C):
            for g in q.arrows(A, C):
                lf = q.lifting(f, g)
                for h in q.arrows(A, B):
                    if q.leq(q.compose(f, h), g) != q.leq(h, lf):
                        rep.fail("lifting", (f, g, h))
        for f in q.arrows(A, B):
            for g in q.arrows(A, C):
                ex = q.extension(f, g)
                for h in q.arrows(B, C):
                    if q.leq(q.compose(h, f), g) != q.leq(h, ex):
                        rep.fail("extension", (f, g, h))
    return rep


# -- split-idempotent completion -------------------------------------------


@dataclass(frozen=True)
class Inclusion:
    """The embedding ``j: Q -> Q_si`` sending ``A`` to ``(A, 1_A)``."""

    source: Quantaloid
    target: Quantaloid

    def obj(self, A):
        return (A, self.source.identity(A).elt)

    def arrow(self, f: QArrow) -> QArrow:
        return QArrow(self.obj(f.dom), self.obj(f.cod), f.elt)


def split_idempotent_completion(q: Quantaloid) -> tuple[Quantaloid, Inclusion]:
    """Objects are pairs ``(A, e)`` with ``e`` idempotent on ``A``.

    An arrow ``(A, e) -> (B, f)`` is an arrow ``g: A -> B`` of ``q`` with
    ``g ∘ e = g = f ∘ g``; the identity on ``(A, e)`` is ``e``.
    """
    objs = [(e.dom, e.elt) for e in q.idempotents()]
    homs = {}
    for (A, e), (B, f) in itertools.product(objs, repeat=2):
        L = q.hom(A, B)
        ee, ff = QArrow(A, A, e), QArrow(B, B, f)
        members = [
            g for g in L if q.compose(QArrow(A, B, g), ee).elt == g == q.compose(ff, QArrow(A, B, g)).elt
        ]
        homs[((A, e), (B, f))] = L.sublattice(members)

    def mul(X, Y, Z, g, f):
        return q._mul(X[0], Y[0], Z[0], g, f)

    si = Quantaloid(
        objs,
        homs,
        mul,
        {obj: obj[1] for obj in objs},
        name=f"{q.name or 'Q'}_si",
        kind="split_idempotents",
    )
    si.base = q
    for A in q.objects:
        if (A, q.identity(A).elt) not in si.objects:
            raise PreconditionError(f"identity on {A!r} is not idempotent")
    return si, Inclusion(q, si)


# -- constructed families ---------------------------------------------------


def suspension(
    L: FiniteLattice,
    product: Callable | None = None,
    unit=None,
    name: str | None = None,
    obj: Hashable = "*",
) -> Quantaloid:
    """One-object quantaloid on ``L``; defaults to ``(L, ∧, ⊤)``.

    No validation happens here, so non-examples such as the diamond with
    meets can be built and then rejected by :func:`validate_quantaloid`.
    """
    mul = product or L.meet2
    u = L.top if unit is None else unit
    return Quantaloid(
        [obj],
        {(obj, obj): L},
        lambda A, B, C, g, f: mul(g, f),
        {obj: u},
        name=name or f"Sigma({L.name or '?'})",
        kind="suspension",
        params={"lattice": L},
    )


def subset_name(members: Iterable, order: Sequence) -> str:
    pos = {x: i for i, x in enumerate(order)}
    return "{" + ",".join(str(x) for x in sorted(members, key=pos.__getitem__)) + "}"


def _powerset_lattice(ground: Sequence, namer: Callable) -> tuple[FiniteLattice, dict, dict]:
    subsets = []
    for r in range(len(ground) + 1):
        subsets.extend(frozenset(c) for c in itertools.combinations(ground, r))
    names = {s: namer(s) for s in subsets}
    back = {v: k for k, v in names.items()}
    pairs = [(names[s], names[s | {x}]) for s in subsets for x in ground if x not in s]
    return FiniteLattice([names[s] for s in subsets], pairs), names, back


def free_quantale(elements: Sequence[str], table: Mapping[tuple, str], unit: str, name=None) -> Quantaloid:
    """``(2^N, ·, {1})`` for a finite monoid ``N`` given by its full table."""
    elements = list(elements)
    if unit not in elements:
        raise InputError("monoid unit is not an element")
    for a in elements:
        for b in elements:
            if (a, b) not in table or table[(a, b)] not in elements:
                raise InputError(f"monoid table lacks a valid product {a}*{b}")
    for a in elements:
        if table[(unit, a)] != a or table[(a, unit)] != a:
            raise InputError(f"{unit!r} is not a unit at {a!r}")
        for b in elements:
            for c in elements:
                if table[(table[(a, b)], c)] != table[(a, table[(b, c)])]:
                    raise InputError(f"monoid is not associative at ({a},{b},{c})")
    L, names, back = _powerset_lattice(elements, lambda s: subset_name(s, elements))
    L.name = f"2^{name or 'N'}"

    def mul(A, B, C, g, f):
        return names[frozenset(table[(x, y)] for x in back[g] for y in back[f])]

    return Quantaloid(
        ["*"],
        {("*", "*"): L},
        mul,
        {"*": names[frozenset([unit])]},
        name=name or "free_quantale",
        kind="free_quantale",
        params={"elements": elements, "table": dict(table), "unit": unit},
    )


def pair_name(p) -> str:
    return f"({p[0]},{p[1]})"


def rel(S: Sequence[str], name=None) -> Quantaloid:
    """``Rel(S, S)`` with ``(s, u) ∈ g ∘ f`` iff ``(s, t) ∈ g`` and ``(t, u) ∈ f``.

    This is the matrix product ``g · f``; it makes the entailment order on
    ``A_0 × S`` transitive and matches modules acting on row vectors.
    """
    S = list(S)
    if not S or len(set(S)) != len(S):
        raise InputError("rel needs a nonempty set of distinct points")
    pairs = [(s, t) for s in S for t in S]
    L, names, back = _powerset_lattice(pairs, lambda r: subset_name([pair_name(p) for p in r], [pair_name(p) for p in pairs]))
    L.name = f"Rel({len(S)})"

    def mul(A, B, C, g, f):
        G, F = back[g], back[f]
        return names[frozenset((s, u) for (s, t) in G for (t2, u) in F if t == t2)]

    q = Quantaloid(
        ["*"],
        {("*", "*"): L},
        mul,
        {"*": names[frozenset((s, s) for s in S)]},
        name=name or f"rel{len(S)}",
        kind="rel",
        params={"S": S},
    )
    q.relation_of = back
    q.name_of_relation = names
    return q


def locale_suspension(L: FiniteLattice, name=None) -> Quantaloid:
    if not L.is_distributive():
        raise InputError(f"{L!r} is not distributive, so (L, ∧, ⊤) is not a quantale")
    q = suspension(L, name=name or f"Sigma({L.name or '?'})")
    q.kind = "locale_suspension"
    return q


def two_chain() -> Quantaloid:
    q = locale_suspension(L2(), name="2")
    q.kind = "two_chain"
    return q


def construct_standard(kind: str, data: Mapping | None = None) -> Quantaloid:
    """Build one of the named one-object quantales and validate it."""
    data = dict(data or {})
    name = data.get("name")
    if kind == "two_chain":
        q = two_chain()
    elif kind == "locale_suspension":
        L = data.get("lattice")
        if not isinstance(L, FiniteLattice):
            raise InputError("locale_suspension needs a 'lattice'")
        q = locale_suspension(L, name=name)
    elif kind == "free_quantale":
        m = data.get("monoid", data)
        table = m["table"]
        if not isinstance(table, Mapping):
            table = {(a, b): c for a, b, c in table}
        q = free_quantale(m["elements"], table, m["unit"], name=name)
    elif kind == "rel":
        q = rel(data["S"], name=name)
    else:
        raise InputError(f"unknown quantaloid kind {kind!r}")
    validate_quantaloid(q).raise_if_failed()
    return q
