"""Quantaloid-enriched categories, functors and distributors.

Conventions follow the usual ones for Q-categories: ``A.hom(a2, a)`` is an
arrow ``t(a) -> t(a2)``, the underlying order is ``a <= b`` iff the types agree
and ``1 <= A(a, b)``, and a distributor ``Phi: A -|-> B`` has entries
``Phi(b, a): t(a) -> t(b)``.  A presheaf of type ``X`` on ``A`` gives an arrow
``phi(a): X -> t(a)`` for every object and satisfies ``A(a, a2) ∘ phi(a2) <= phi(a)``.

Everything is computed by exhaustive search.  Objects that are isomorphic are
never identified; where a construction is only determined up to isomorphism
(tensors, joins, colimits) the first qualifying object in declaration order is
returned, and every check downstream compares objects up to isomorphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import (
    Budget,
    ConsistencyError,
    InputError,
    PreconditionError,
    ValidationReport,
)
from .quantaloid import QArrow, Quantaloid


class QCategory:
    """A finite Q-category.

    ``homs`` maps ``(a2, a)`` to an element of ``base.hom(t(a), t(a2))``; it may
    also be a callable, which is how presheaf categories stay lazy.
    """

    def __init__(
        self,
        base: Quantaloid,
        objects: Sequence[Hashable],
        types: Mapping,
        homs: Mapping | Callable,
        *,
        name: str | None = None,
        validate: bool = True,
    ):
        self.base = base
        self.objects = tuple(objects)
        self.index = {a: i for i, a in enumerate(self.objects)}
        if len(self.index) != len(self.objects):
            raise InputError("duplicate objects in Q-category")
        self.types = {a: types[a] for a in self.objects}
        for a, X in self.types.items():
            if X not in base.objects:
                raise InputError(f"object {a!r} has unknown type {X!r}")
        self._fn = homs if callable(homs) else None
        self._homs = {} if callable(homs) else dict(homs)
        self.name = name
        self._cache: dict = {}
        if self._fn is None:
            for a2 in self.objects:
                for a in self.objects:
                    if (a2, a) not in self._homs:
                        raise InputError(f"missing hom entry ({a2!r}, {a!r})")
                    L = base.hom(self.types[a], self.types[a2])
                    if self._homs[(a2, a)] not in L:
                        raise InputError(f"hom ({a2!r}, {a!r}) is not an arrow of the right type")
        if validate:
            validate_category(self).raise_if_failed()

    def __repr__(self) -> str:
        return f"<QCategory {self.name or ''} |{len(self.objects)}| over {self.base.name}>"

    def __len__(self) -> int:
        return len(self.objects)

    def t(self, a) -> Hashable:
        try:
            return self.types[a]
        except KeyError:
            raise InputError(f"unknown object {a!r}") from None

    def hom(self, a2, a) -> QArrow:
        key = (a2, a)
        if self._fn is not None:
            elt = self._homs.get(key)
            if elt is None:
                elt = self._fn(a2, a)
                self._homs[key] = elt
        else:
            try:
                elt = self._homs[key]
            except KeyError:
                raise InputError(f"unknown objects {a2!r}, {a!r}") from None
        return QArrow(self.types[a], self.types[a2], elt)

    def leq(self, a, b) -> bool:
        """Underlying order: ``a <= b`` iff same type and ``1 <= A(a, b)``."""
        X = self.t(a)
        if X != self.t(b):
            return False
        return self.base.leq(self.base.identity(X), self.hom(a, b))

    def iso(self, a, b) -> bool:
        return self.leq(a, b) and self.leq(b, a)

    def fiber(self, X) -> list:
        return [a for a in self.objects if self.types[a] == X]

    def hom_table(self) -> dict:
        return {(a2, a): self.hom(a2, a).elt for a2 in self.objects for a in self.objects}


def validate_category(A: QCategory) -> ValidationReport:
    q = A.base
    rep = ValidationReport(subject=f"category {A.name or ''}".strip())
    for a in A.objects:
        if not q.leq(q.identity(A.t(a)), A.hom(a, a)):
            rep.fail("identity", a)
    for a2, a1, a in itertools.product(A.objects, repeat=3):
        if not q.leq(q.compose(A.hom(a2, a1), A.hom(a1, a)), A.hom(a2, a)):
            rep.fail("composition", (a2, a1, a))
    return rep


def same_category(A: QCategory, B: QCategory) -> bool:
    if A is B:
        return True
    return (
        A.base is B.base
        and A.objects == B.objects
        and A.types == B.types
        and A.hom_table() == B.hom_table()
    )


def full_subcategory(C: QCategory, objs: Iterable, name: str | None = None) -> QCategory:
    objs = [a for a in C.objects if a in set(objs)]
    return QCategory(
        C.base,
        objs,
        {a: C.t(a) for a in objs},
        {(a2, a): C.hom(a2, a).elt for a2 in objs for a in objs},
        name=name,
        validate=False,
    )


def star(q: Quantaloid, X) -> QCategory:
    """The one-object category ``*_X`` with hom ``1_X``."""
    return QCategory(q, ["*"], {"*": X}, {("*", "*"): q.identity(X).elt}, name=f"*_{X}")


def discrete(q: Quantaloid, types: Mapping) -> QCategory:
    """Objects with identity endo-homs and bottom everywhere else."""
    objs = list(types)
    homs = {}
    for a2 in objs:
        for a in objs:
            X, Y = types[a], types[a2]
            homs[(a2, a)] = q.identity(X).elt if a == a2 else q.hom(X, Y).bottom
    return QCategory(q, objs, types, homs, name="discrete")


def skeleton(C: QCategory) -> list:
    """Least-index representative of each isomorphism class."""
    reps = []
    for a in C.objects:
        if not any(C.iso(a, r) for r in reps):
            reps.append(a)
    return reps


def is_skeletal(C: QCategory) -> bool:
    return len(skeleton(C)) == len(C.objects)


# -- functors ---------------------------------------------------------------


@dataclass(eq=False)
class QFunctor:
    dom: QCategory
    cod: QCategory
    graph: dict
    name: str | None = None

    def __post_init__(self):
        self.graph = dict(self.graph)

    def __call__(self, a):
        return self.graph[a]

    def validate(self) -> ValidationReport:
        rep = ValidationReport(subject=f"functor {self.name or ''}".strip())
        A, B, q = self.dom, self.cod, self.dom.base
        for a in A.objects:
            if a not in self.graph:
                rep.fail("totality", a)
                return rep
            b = self.graph[a]
            if b not in B.index:
                rep.fail("codomain", (a, b))
                return rep
            if A.t(a) != B.t(b):
                rep.fail("type preservation", a)
        if rep.ok:
            for a2 in A.objects:
                for a in A.objects:
                    if not q.leq(A.hom(a2, a), B.hom(self(a2), self(a))):
                        rep.fail("hom monotonicity", (a2, a))
        return rep

    def leq(self, other: "QFunctor") -> bool:
        return all(self.cod.leq(self(a), other(a)) for a in self.dom.objects)

    def iso(self, other: "QFunctor") -> bool:
        return all(self.cod.iso(self(a), other(a)) for a in self.dom.objects)


def identity_functor(A: QCategory) -> QFunctor:
    return QFunctor(A, A, {a: a for a in A.objects}, name="id")


def compose_functors(G: QFunctor, F: QFunctor) -> QFunctor:
    return QFunctor(F.dom, G.cod, {a: G(F(a)) for a in F.dom.objects})


def is_fully_faithful(F: QFunctor) -> bool:
    A, B = F.dom, F.cod
    return all(A.hom(a2, a) == B.hom(F(a2), F(a)) for a2 in A.objects for a in A.objects)


def is_essentially_surjective(F: QFunctor) -> bool:
    B = F.cod
    image = set(F.graph.values())
    return all(any(B.iso(b, c) for c in image) for b in B.objects)


def is_equivalence(F: QFunctor) -> bool:
    return is_fully_faithful(F) and is_essentially_surjective(F)


def enumerate_functors(A: QCategory, B: QCategory, budget: int | None = None) -> list[QFunctor]:
    """Every functor ``A -> B`` by backtracking over object assignments."""
    q = A.base
    objs = A.objects
    choices = [B.fiber(A.t(a)) for a in objs]
    bud = Budget(budget, "functor enumeration")
    out: list[QFunctor] = []
    img: list = [None] * len(objs)

    def ok(k: int) -> bool:
        a, b = objs[k], img[k]
        for j in range(k + 1):
            if not q.leq(A.hom(objs[j], a), B.hom(img[j], b)):
                return False
            if not q.leq(A.hom(a, objs[j]), B.hom(b, img[j])):
                return False
        return True

    def rec(k: int) -> None:
        if k == len(objs):
            out.append(QFunctor(A, B, dict(zip(objs, img))))
            return
        for b in choices[k]:
            bud.tick()
            img[k] = b
            if ok(k):
                rec(k + 1)
        img[k] = None

    rec(0)
    return out


def right_adjoint_by_search(G: QFunctor) -> QFunctor | None:
    """A functor ``H`` with ``B(G a, b) = A(a, H b)`` for all ``a``, ``b``, if any."""
    A, B = G.dom, G.cod
    graph = {}
    for b in B.objects:
        found = None
        for a in A.fiber(B.t(b)):
            if all(B.hom(G(x), b) == A.hom(x, a) for x in A.objects):
                found = a
                break
        if found is None:
            return None
        graph[b] = found
    return QFunctor(B, A, graph)


# -- distributors -----------------------------------------------------------


@dataclass(eq=False)
class QDistributor:
    """``Phi: A -|-> B`` with ``matrix[(b, a)]`` an arrow ``t(a) -> t(b)``."""

    dom: QCategory
    cod: QCategory
    matrix: dict
    name: str | None = None

    def __call__(self, b, a) -> QArrow:
        return QArrow(self.dom.t(a), self.cod.t(b), self.matrix[(b, a)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QDistributor):
            return NotImplemented
        return self.matrix == other.matrix

    __hash__ = None  # type: ignore[assignment]

    def leq(self, other: "QDistributor") -> bool:
        q = self.dom.base
        return all(q.leq(self(b, a), other(b, a)) for (b, a) in self.matrix)

    def validate(self) -> ValidationReport:
        A, B, q = self.dom, self.cod, self.dom.base
        rep = ValidationReport(subject=f"distributor {self.name or ''}".strip())
        for b in B.objects:
            for a in A.objects:
                if (b, a) not in self.matrix:
                    rep.fail("missing entry", (b, a))
                    return rep
                if self.matrix[(b, a)] not in q.hom(A.t(a), B.t(b)):
                    rep.fail("entry type", (b, a))
                    return rep
        for b, b2, a in itertools.product(B.objects, B.objects, A.objects):
            if not q.leq(q.compose(B.hom(b, b2), self(b2, a)), self(b, a)):
                rep.fail("left action", (b, b2, a))
        for b, a2, a in itertools.product(B.objects, A.objects, A.objects):
            if not q.leq(q.compose(self(b, a2), A.hom(a2, a)), self(b, a)):
                rep.fail("right action", (b, a2, a))
        return rep


def identity_distributor(A: QCategory) -> QDistributor:
    return QDistributor(A, A, A.hom_table(), name="id")


def bottom_distributor(A: QCategory, B: QCategory) -> QDistributor:
    q = A.base
    return QDistributor(
        A, B, {(b, a): q.hom(A.t(a), B.t(b)).bottom for b in B.objects for a in A.objects}
    )


def _check_same(A: QCategory, B: QCategory, what: str) -> None:
    if not same_category(A, B):
        raise InputError(f"{what}: categories do not match")


def compose_distributors(Psi: QDistributor, Phi: QDistributor) -> QDistributor:
    """``(Psi ⊗ Phi)(c, a) = join_b Psi(c, b) ∘ Phi(b, a)``."""
    _check_same(Psi.dom, Phi.cod, "distributor composition")
    A, B, C, q = Phi.dom, Phi.cod, Psi.cod, Phi.dom.base
    m = {}
    for c in C.objects:
        for a in A.objects:
            m[(c, a)] = q.join(
                (q.compose(Psi(c, b), Phi(b, a)) for b in B.objects), A.t(a), C.t(c)
            ).elt
    return QDistributor(A, C, m)


def dist_lifting(Phi: QDistributor, Xi: QDistributor) -> QDistributor:
    """``[Phi, Xi](b, a) = meet_c [Phi(c, b), Xi(c, a)]`` for ``Phi: B -> C``, ``Xi: A -> C``."""
    _check_same(Phi.cod, Xi.cod, "distributor lifting")
    A, B, C, q = Xi.dom, Phi.dom, Phi.cod, Phi.dom.base
    m = {}
    for b in B.objects:
        for a in A.objects:
            m[(b, a)] = q.meet(
                (q.lifting(Phi(c, b), Xi(c, a)) for c in C.objects), A.t(a), B.t(b)
            ).elt
    return QDistributor(A, B, m)


def dist_extension(Phi: QDistributor, Xi: QDistributor) -> QDistributor:
    """``{Phi, Xi}(c, b) = meet_a {Phi(b, a), Xi(c, a)}`` for ``Phi: A -> B``, ``Xi: A -> C``."""
    _check_same(Phi.dom, Xi.dom, "distributor extension")
    A, B, C, q = Phi.dom, Phi.cod, Xi.cod, Phi.dom.base
    m = {}
    for c in C.objects:
        for b in B.objects:
            m[(c, b)] = q.meet(
                (q.extension(Phi(b, a), Xi(c, a)) for a in A.objects), B.t(b), C.t(c)
            ).elt
    return QDistributor(B, C, m)


def functor_graph(F: QFunctor) -> tuple[QDistributor, QDistributor]:
    """``(B(-, F-), B(F-, -))``."""
    A, B = F.dom, F.cod
    left = QDistributor(A, B, {(b, a): B.hom(b, F(a)).elt for b in B.objects for a in A.objects})
    right = QDistributor(B, A, {(a, b): B.hom(F(a), b).elt for a in A.objects for b in B.objects})
    return left, right


def is_left_adjoint_dist(Phi: QDistributor) -> QDistributor | None:
    """Right adjoint ``[Phi, B]`` of ``Phi: A -|-> B`` when the pair is adjoint."""
    A, B = Phi.dom, Phi.cod
    Psi = dist_lifting(Phi, identity_distributor(B))
    if identity_distributor(A).leq(compose_distributors(Psi, Phi)) and compose_distributors(
        Phi, Psi
    ).leq(identity_distributor(B)):
        return Psi
    return None


# -- presheaves -------------------------------------------------------------


@dataclass(frozen=True)
class Presheaf:
    """``values[i]`` is the arrow ``type -> t(objects[i])`` of the target category."""

    type: Hashable
    values: tuple
    target: QCategory = field(compare=False, hash=False, repr=False)

    def __call__(self, a) -> QArrow:
        C = self.target
        return QArrow(self.type, C.t(a), self.values[C.index[a]])

    def __repr__(self) -> str:
        body = ",".join(str(v) for v in self.values)
        return f"phi[{self.type}]({body})"


def representable(A: QCategory, a) -> Presheaf:
    """``A(-, a)``."""
    return Presheaf(A.t(a), tuple(A.hom(b, a).elt for b in A.objects), A)


def presheaf_as_distributor(phi: Presheaf) -> QDistributor:
    A = phi.target
    S = star(A.base, phi.type)
    return QDistributor(S, A, {(a, "*"): phi(a).elt for a in A.objects})


def is_cauchy(phi: Presheaf) -> bool:
    return is_left_adjoint_dist(presheaf_as_distributor(phi)) is not None


def presheaves(A: QCategory, budget: int | None = None) -> list[Presheaf]:
    """All presheaves of every type, by backtracking with the action law as filter."""
    key = ("presheaves", budget)
    hit = A._cache.get(key)
    if hit is not None:
        return hit
    q = A.base
    objs = A.objects
    n = len(objs)
    bud = Budget(budget, "presheaf enumeration")
    out: list[Presheaf] = []
    for X in q.objects:
        choices = [q.hom(X, A.t(a)).elements for a in objs]
        vals: list = [None] * n

        def value(j):
            return QArrow(X, A.t(objs[j]), vals[j])

        def ok(k: int) -> bool:
            a = objs[k]
            fk = value(k)
            for j in range(k + 1):
                fj = value(j)
                if not q.leq(q.compose(A.hom(a, objs[j]), fj), fk):
                    return False
                if not q.leq(q.compose(A.hom(objs[j], a), fk), fj):
                    return False
            return True

        def rec(k: int) -> None:
            if k == n:
                out.append(Presheaf(X, tuple(vals), A))
                return
            for v in choices[k]:
                bud.tick()
                vals[k] = v
                if ok(k):
                    rec(k + 1)
            vals[k] = None

        rec(0)
    A._cache[key] = out
    return out


def presheaf_hom(psi: Presheaf, phi: Presheaf) -> QArrow:
    """``PA(psi, phi) = meet_a [psi(a), phi(a)]``, an arrow ``t(phi) -> t(psi)``."""
    A = psi.target
    q = A.base
    return q.meet((q.lifting(psi(a), phi(a)) for a in A.objects), phi.type, psi.type)


def presheaf_category(A: QCategory, budget: int | None = None) -> QCategory:
    """``PA`` with its Yoneda embedding attached as ``PA.yoneda``."""
    key = ("PA", budget)
    hit = A._cache.get(key)
    if hit is not None:
        return hit
    objs = presheaves(A, budget)
    PA = QCategory(
        A.base,
        objs,
        {phi: phi.type for phi in objs},
        lambda psi, phi: presheaf_hom(psi, phi).elt,
        name=f"P({A.name or ''})",
        validate=False,
    )
    PA.source = A
    PA.yoneda = QFunctor(A, PA, {a: representable(A, a) for a in A.objects}, name="yoneda")
    A._cache[key] = PA
    return PA


def yoneda(A: QCategory, budget: int | None = None) -> QFunctor:
    return presheaf_category(A, budget).yoneda


def arrows_category(q: Quantaloid, A) -> QCategory:
    """``P(*_A)``: objects are arrows ``f: X -> A`` of type ``X``, homs are liftings."""
    objs = [f for X in q.objects for f in q.arrows(X, A)]
    return QCategory(
        q,
        objs,
        {f: f.dom for f in objs},
        lambda g, f: q.lifting(g, f).elt,
        name=f"P(*_{A})",
        validate=False,
    )


# -- tensors, joins, colimits -----------------------------------------------


def tensor(C: QCategory, c, f: QArrow):
    """An object ``b`` of type ``dom f`` with ``C(b, x) = [f, C(c, x)]`` for all ``x``."""
    if f.cod != C.t(c):
        raise InputError(f"tensor of {c!r} needs an arrow into {C.t(c)!r}, got {f!r}")
    key = ("tensor", c, f)
    if key in C._cache:
        return C._cache[key]
    q = C.base
    target = [q.lifting(f, C.hom(c, x)) for x in C.objects]
    found = None
    for b in C.fiber(f.dom):
        if all(C.hom(b, x) == tx for x, tx in zip(C.objects, target)):
            found = b
            break
    C._cache[key] = found
    return found


def cotensor(C: QCategory, c, f: QArrow):
    """An object ``b`` of type ``cod f`` with ``C(x, b) = {f, C(x, c)}`` for all ``x``."""
    if f.dom != C.t(c):
        raise InputError(f"cotensor of {c!r} needs an arrow out of {C.t(c)!r}, got {f!r}")
    key = ("cotensor", c, f)
    if key in C._cache:
        return C._cache[key]
    q = C.base
    target = [q.extension(f, C.hom(x, c)) for x in C.objects]
    found = None
    for b in C.fiber(f.cod):
        if all(C.hom(x, b) == tx for x, tx in zip(C.objects, target)):
            found = b
            break
    C._cache[key] = found
    return found


def fiber_join(C: QCategory, X, objs: Iterable):
    """Least upper bound in the fiber ``C_X`` (first one in object order)."""
    objs = list(objs)
    for a in objs:
        if C.t(a) != X:
            raise InputError(f"{a!r} is not of type {X!r}")
    fib = C.fiber(X)
    ubs = [u for u in fib if all(C.leq(a, u) for a in objs)]
    for u in ubs:
        if all(C.leq(u, v) for v in ubs):
            return u
    return None


def fiber_meet(C: QCategory, X, objs: Iterable):
    objs = list(objs)
    fib = C.fiber(X)
    lbs = [u for u in fib if all(C.leq(u, a) for a in objs)]
    for u in lbs:
        if all(C.leq(v, u) for v in lbs):
            return u
    return None


def cocompleteness_witness(C: QCategory):
    """``None`` if ``C`` is cocomplete, else a ``(reason, data)`` counterexample.

    Fibers are tested for a bottom and binary joins, which for a finite
    preorder gives all joins.
    """
    key = "cocomplete"
    if key in C._cache:
        return C._cache[key]
    q = C.base
    wit = None
    for X in q.objects:
        fib = C.fiber(X)
        if fiber_join(C, X, []) is None:
            wit = ("fiber has no bottom", X)
            break
        for i, a in enumerate(fib):
            for b in fib[i + 1 :]:
                if fiber_join(C, X, [a, b]) is None:
                    wit = ("missing fiber join", (a, b))
                    break
            if wit:
                break
        if wit:
            break
    if wit is None:
        for c in C.objects:
            for f in q.arrows(None, C.t(c)):
                if tensor(C, c, f) is None:
                    wit = ("missing tensor", (c, f))
                    break
            if wit:
                break
    if wit is None:
        for c in C.objects:
            for f in q.arrows(C.t(c), None):
                if cotensor(C, c, f) is None:
                    wit = ("missing cotensor", (c, f))
                    break
            if wit:
                break
    C._cache[key] = wit
    return wit


def is_cocomplete(C: QCategory) -> bool:
    return cocompleteness_witness(C) is None


def _require_cocomplete(C: QCategory) -> None:
    wit = cocompleteness_witness(C)
    if wit is not None:
        raise PreconditionError(f"category is not cocomplete: {wit[0]} at {wit[1]!r}")


def weighted_colimit(Phi: QDistributor, F: QFunctor) -> QFunctor:
    """``colim(Phi, F)(a) = join_b F(b) ⊗ Phi(b, a)``, checked against its universal property."""
    _check_same(Phi.cod, F.dom, "weighted colimit")
    A, B, C, q = Phi.dom, Phi.cod, F.cod, F.cod.base
    for b in B.objects:
        for a in A.objects:
            if tensor(C, F(b), Phi(b, a)) is None:
                raise PreconditionError(f"tensor {F(b)!r} ⊗ {Phi(b, a)!r} does not exist")
    graph = {}
    for a in A.objects:
        parts = [tensor(C, F(b), Phi(b, a)) for b in B.objects]
        k = fiber_join(C, A.t(a), parts)
        if k is None:
            raise PreconditionError(f"fiber join of {parts!r} does not exist")
        graph[a] = k
    for a in A.objects:
        for x in C.objects:
            want = q.meet(
                (q.lifting(Phi(b, a), C.hom(F(b), x)) for b in B.objects), C.t(x), A.t(a)
            )
            if C.hom(graph[a], x) != want:
                raise ConsistencyError(f"colimit fails its universal property at ({a!r}, {x!r})")
    return QFunctor(A, C, graph, name="colim")


def sup(C: QCategory, phi: Presheaf):
    """``sup(phi) = colim(phi, 1_C)``."""
    key = ("sup", phi)
    if key in C._cache:
        return C._cache[key]
    K = weighted_colimit(presheaf_as_distributor(phi), identity_functor(C))
    s = K("*")
    C._cache[key] = s
    return s


def is_cocontinuous(G: QFunctor) -> bool:
    """Preservation of tensors and of fiber joins (empty and binary), up to iso."""
    A, B, q = G.dom, G.cod, G.dom.base
    for a in A.objects:
        for f in q.arrows(None, A.t(a)):
            t1, t2 = tensor(A, a, f), tensor(B, G(a), f)
            if t1 is None or t2 is None or not B.iso(G(t1), t2):
                return False
    for X in q.objects:
        fib = A.fiber(X)
        bot_a, bot_b = fiber_join(A, X, []), fiber_join(B, X, [])
        if bot_a is None or bot_b is None or not B.iso(G(bot_a), bot_b):
            return False
        for i, a in enumerate(fib):
            for a2 in fib[i + 1 :]:
                j = fiber_join(A, X, [a, a2])
                k = fiber_join(B, X, [G(a), G(a2)])
                if j is None or k is None or not B.iso(G(j), k):
                    return False
    return True


# -- total compactness ------------------------------------------------------


def compactness_criteria(C: QCategory, budget: int | None = None) -> dict[int, list]:
    """The object sets selected by each of the four compactness criteria.

    1. ``1 <= meet_phi {C(a, sup phi), phi(a)}`` (the totally-below formula);
    2. ``phi(a) = C(a, sup phi)`` for every presheaf;
    3. homming with ``a`` preserves presheaf suprema: ``C(a, sup phi) = join_x C(a, x) ∘ phi(x)``;
    4. tensoring with ``a`` is cocontinuous with a cocontinuous right adjoint,
       the adjoint being found by search in ``P(*_A)``.
    """
    _require_cocomplete(C)
    q = C.base
    PC = presheaves(C, budget)
    sups = {phi: sup(C, phi) for phi in PC}
    out: dict[int, list] = {1: [], 2: [], 3: [], 4: []}
    for a in C.objects:
        A = C.t(a)
        one = q.identity(A)
        theta = q.meet((q.extension(C.hom(a, sups[phi]), phi(a)) for phi in PC), A, A)
        if q.leq(one, theta):
            out[1].append(a)
        if all(phi(a) == C.hom(a, sups[phi]) for phi in PC):
            out[2].append(a)
        if all(
            C.hom(a, sups[phi])
            == q.join((q.compose(C.hom(a, x), phi(x)) for x in C.objects), phi.type, A)
            for phi in PC
        ):
            out[3].append(a)
        if _tensoring_criterion(C, a):
            out[4].append(a)
    return out


def tensoring_functor(C: QCategory, a) -> QFunctor:
    PA = arrows_category(C.base, C.t(a))
    return QFunctor(PA, C, {f: tensor(C, a, f) for f in PA.objects}, name=f"T_{a}")


def _tensoring_criterion(C: QCategory, a) -> bool:
    T = tensoring_functor(C, a)
    if not is_cocontinuous(T):
        return False
    H = right_adjoint_by_search(T)
    return H is not None and is_cocontinuous(H)


def totally_compact_objects(C: QCategory, budget: int | None = None) -> list:
    """Objects with ``phi(a) = C(a, sup phi)`` for every presheaf ``phi``.

    The totally-below formula is evaluated alongside and must select the same
    objects.
    """
    key = ("compacts", budget)
    if key in C._cache:
        return C._cache[key]
    _require_cocomplete(C)
    q = C.base
    PC = presheaves(C, budget)
    sups = {phi: sup(C, phi) for phi in PC}
    by_value = [a for a in C.objects if all(phi(a) == C.hom(a, sups[phi]) for phi in PC)]
    by_theta = []
    for a in C.objects:
        A = C.t(a)
        theta = q.meet((q.extension(C.hom(a, sups[phi]), phi(a)) for phi in PC), A, A)
        if q.leq(q.identity(A), theta):
            by_theta.append(a)
    if by_value != by_theta:
        raise ConsistencyError(f"compactness criteria disagree: {by_value!r} vs {by_theta!r}")
    C._cache[key] = by_value
    return by_value


def is_totally_algebraic_cat(C: QCategory, budget: int | None = None) -> bool:
    """Every ``x`` is (isomorphic to) ``join_{a compact} a ⊗ C(a, x)``."""
    comp = totally_compact_objects(C, budget)
    for x in C.objects:
        parts = [tensor(C, a, C.hom(a, x)) for a in comp]
        j = fiber_join(C, C.t(x), parts)
        if j is None or not C.iso(j, x):
            return False
    return True


# -- Cauchy completion ------------------------------------------------------


def cauchy_presheaves(A: QCategory, budget: int | None = None) -> list[Presheaf]:
    return [phi for phi in presheaves(A, budget) if is_cauchy(phi)]


def cauchy_completion(A: QCategory, budget: int | None = None) -> QCategory:
    """Full subcategory of ``PA`` on the Cauchy presheaves.

    The corestricted Yoneda embedding is attached as ``.embedding``.
    """
    PA = presheaf_category(A, budget)
    objs = cauchy_presheaves(A, budget)
    cc = full_subcategory(PA, objs, name=f"cc({A.name or ''})")
    cc.embedding = QFunctor(A, cc, {a: representable(A, a) for a in A.objects}, name="yoneda_c")
    return cc


def is_cauchy_complete(A: QCategory, budget: int | None = None) -> bool:
    """Every Cauchy presheaf is isomorphic to a representable one."""
    PA = presheaf_category(A, budget)
    reps = [representable(A, a) for a in A.objects]
    return all(any(PA.iso(phi, r) for r in reps) for phi in cauchy_presheaves(A, budget))


# -- Rel(S, S)-categories ---------------------------------------------------


@dataclass
class EntailmentReport:
    points: list
    order: set
    x1: bool
    x2: bool
    x3: bool
    witnesses: dict

    def leq(self, p, r) -> bool:
        return (p, r) in self.order


def entailment_order(A: QCategory, exhaustive_limit: int = 12) -> EntailmentReport:
    """``(a, s) <= (b, t)`` iff ``(s, t) ∈ A(a, b)``, with the three conditions checked.

    Condition (x2) quantifies over every subset of objects when there are at
    most ``exhaustive_limit`` of them, and otherwise over the empty subset and
    pairs (iterating binary joins then covers every finite family).
    """
    q = A.base
    if q.kind != "rel":
        raise InputError("entailment order needs a category over rel(S)")
    S = q.params["S"]
    rel_of = q.relation_of
    pts = [(a, s) for a in A.objects for s in S]
    order = set()
    for a in A.objects:
        for b in A.objects:
            R = rel_of[A.hom(a, b).elt]
            for s, t in R:
                order.add(((a, s), (b, t)))

    def le(p, r):
        return (p, r) in order

    def eqv(p, r):
        return le(p, r) and le(r, p)

    wit: dict = {}
    x1 = True
    for a, b in itertools.combinations(A.objects, 2):
        if all(eqv((a, s), (b, s)) for s in S):
            x1 = False
            wit.setdefault("x1", (a, b))
    objs = list(A.objects)
    if len(objs) <= exhaustive_limit:
        families = itertools.chain.from_iterable(
            itertools.combinations(objs, r) for r in range(len(objs) + 1)
        )
    else:
        families = itertools.chain([()], itertools.combinations(objs, 2))
    x2 = True
    for fam in families:
        found = False
        for j in objs:
            if all(
                le((j, s), p) == all(le((ai, s), p) for ai in fam) for s in S for p in pts
            ):
                found = True
                break
        if not found:
            x2 = False
            wit.setdefault("x2", fam)
            break
    x3 = True
    bottoms = {p for p in pts if all(le(p, r) for r in pts)}
    for a in objs:
        for s in S:
            for t in S:
                ok = any(
                    eqv((b, t), (a, s)) and all((b, u) in bottoms for u in S if u != t)
                    for b in objs
                )
                if not ok:
                    x3 = False
                    wit.setdefault("x3", (a, s, t))
    return EntailmentReport(pts, order, x1, x2, x3, wit)


# -- compacts, R_A and the hom map of the biadjunction -----------------------


def compact_subcategory(A: QCategory, budget: int | None = None) -> QCategory:
    comp = totally_compact_objects(A, budget)
    return full_subcategory(A, comp, name=f"{A.name or ''}_c")


def restrict_to_compacts(F: QFunctor, budget: int | None = None) -> QFunctor:
    """``F_c: A_c -> B_c`` for a cocontinuous left adjoint ``F`` with cocontinuous right adjoint."""
    A, B = F.dom, F.cod
    _require_cocomplete(A)
    _require_cocomplete(B)
    if not is_cocontinuous(F):
        raise PreconditionError("functor is not cocontinuous")
    H = right_adjoint_by_search(F)
    if H is None or not is_cocontinuous(H):
        raise PreconditionError("functor has no cocontinuous right adjoint")
    Ac, Bc = compact_subcategory(A, budget), compact_subcategory(B, budget)
    graph = {}
    for a in Ac.objects:
        b = F(a)
        if b not in Bc.index:
            raise ConsistencyError(f"{a!r} is compact but its image {b!r} is not")
        graph[a] = b
    return QFunctor(Ac, Bc, graph, name="restricted")


def R_A(A: QCategory, budget: int | None = None) -> QFunctor:
    """``P(A_c) -> A``, ``phi ↦ colim(phi, i_A) = join_c c ⊗ phi(c)``."""
    _require_cocomplete(A)
    Ac = compact_subcategory(A, budget)
    PAc = presheaf_category(Ac, budget)
    incl = QFunctor(Ac, A, {c: c for c in Ac.objects}, name="i")
    graph = {}
    for phi in PAc.objects:
        K = weighted_colimit(presheaf_as_distributor(phi), incl)
        graph[phi] = K("*")
    R = QFunctor(PAc, A, graph, name="R_A")
    R.compacts = Ac
    return R


def presheaf_functor(F: QFunctor, budget: int | None = None) -> QFunctor:
    """``P(F): PC -> PD``, ``phi ↦ D(-, F-) ⊗ phi``."""
    C, D = F.dom, F.cod
    q = C.base
    PC, PD = presheaf_category(C, budget), presheaf_category(D, budget)
    graph = {}
    for phi in PC.objects:
        vals = tuple(
            q.join((q.compose(D.hom(d, F(c)), phi(c)) for c in C.objects), phi.type, D.t(d)).elt
            for d in D.objects
        )
        psi = Presheaf(phi.type, vals, D)
        if psi not in PD.index:
            raise ConsistencyError(f"P(F) produced a non-presheaf {psi!r}")
        graph[phi] = psi
    return QFunctor(PC, PD, graph, name="P(F)")


@dataclass
class HomMapReport:
    left: list
    right: list
    images: list
    preserves_order: bool
    reflects_order: bool
    essentially_surjective: bool
    images_are_maps: bool

    @property
    def order_isomorphism(self) -> bool:
        return (
            self.preserves_order
            and self.reflects_order
            and self.essentially_surjective
            and self.images_are_maps
        )


def _is_map_in_cocont(G: QFunctor) -> bool:
    if not is_cocontinuous(G):
        return False
    H = right_adjoint_by_search(G)
    return H is not None and is_cocontinuous(H)


def hom_map_check(C: QCategory, A: QCategory, budget: int | None = None) -> HomMapReport:
    """Compare ``Cat(C, A_c)`` with maps ``PC -> A`` under ``F ↦ R_A ∘ P(F)``.

    The right-hand side is enumerated as ``phi ↦ colim(phi, K)`` over every
    functor ``K: C -> A`` (a cocontinuous functor out of ``PC`` is determined
    up to isomorphism by its restriction along Yoneda), keeping those that are
    cocontinuous with a cocontinuous right adjoint found by search.
    """
    _require_cocomplete(A)
    PC = presheaf_category(C, budget)
    R = R_A(A, budget)
    Ac = R.compacts
    left = enumerate_functors(C, Ac, budget)
    images = []
    for F in left:
        PF = presheaf_functor(F, budget)
        images.append(QFunctor(PC, A, {phi: R(PF(phi)) for phi in PC.objects}))
    right = []
    for K in enumerate_functors(C, A, budget):
        G = QFunctor(PC, A, {phi: weighted_colimit(presheaf_as_distributor(phi), K)("*") for phi in PC.objects})
        if G.validate().ok and _is_map_in_cocont(G):
            if not any(G.iso(H) for H in right):
                right.append(G)
    preserves = all(
        images[i].leq(images[j]) for i in range(len(left)) for j in range(len(left)) if left[i].leq(left[j])
    )
    reflects = all(
        left[i].leq(left[j]) for i in range(len(left)) for j in range(len(left)) if images[i].leq(images[j])
    )
    ess = all(any(G.iso(I) for I in images) for G in right)
    maps = all(any(I.iso(G) for G in right) for I in images)
    return HomMapReport(left, right, images, preserves, reflects, ess, maps)
