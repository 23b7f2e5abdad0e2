"""Finite complete lattices and sup-lattice morphisms.

Lattices are stored by an explicit order relation on opaque, hashable element
identifiers (strings in every hand-written lattice; tuples for the product
lattices built by direct sums).  Joins and meets are tabulated on construction
by scanning, which is plenty at desk scale.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import ResourceError

Elt = Hashable

#: Soft limit on lattice size; bigger lattices work but trigger a warning.
SOFT_LIMIT = 64


class LatticeError(ValueError):
    """Raised for malformed order data or unknown element identifiers."""


class FiniteLattice:
    """A finite partial order in which every subset has a join and a meet.

    ``leq`` may be any generating set of pairs; its reflexive-transitive
    closure is taken.  Construction fails unless the closure is antisymmetric
    and complete.
    """

    def __init__(
        self,
        elements: Iterable[Elt],
        leq: Iterable[tuple[Elt, Elt]] = (),
        *,
        name: str | None = None,
    ):
        elements = tuple(elements)
        self.name = name
        self.elements = elements
        self._idx = {x: i for i, x in enumerate(elements)}
        if len(self._idx) != len(elements):
            raise LatticeError("duplicate element identifiers")
        n = len(elements)
        if n == 0:
            raise LatticeError("a lattice needs at least one element")
        if n > SOFT_LIMIT:
            warnings.warn(
                f"lattice with {n} elements exceeds the soft limit of {SOFT_LIMIT}",
                stacklevel=2,
            )
        le = [[i == j for j in range(n)] for i in range(n)]
        for x, y in leq:
            le[self.index(x)][self.index(y)] = True
        # Warshall closure
        for k in range(n):
            rk = le[k]
            for i in range(n):
                if le[i][k]:
                    ri = le[i]
                    for j in range(n):
                        if rk[j]:
                            ri[j] = True
        for i in range(n):
            for j in range(i + 1, n):
                if le[i][j] and le[j][i]:
                    raise LatticeError(
                        f"order is not antisymmetric: {elements[i]!r} ~ {elements[j]!r}"
                    )
        self._le = le
        self._down = [frozenset(i for i in range(n) if le[i][j]) for j in range(n)]
        self._up = [frozenset(j for j in range(n) if le[i][j]) for i in range(n)]
        self._join = [[-1] * n for _ in range(n)]
        self._meet = [[-1] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                jo = self._least(self._up[i] & self._up[j])
                me = self._greatest(self._down[i] & self._down[j])
                if jo is None or me is None:
                    raise LatticeError(
                        f"{elements[i]!r} and {elements[j]!r} lack a join or meet"
                    )
                self._join[i][j] = self._join[j][i] = jo
                self._meet[i][j] = self._meet[j][i] = me
        bot = self._least(frozenset(range(n)))
        top = self._greatest(frozenset(range(n)))
        if bot is None or top is None:
            raise LatticeError("lattice lacks a bottom or top")
        self._bot, self._top = bot, top

    def _least(self, s: frozenset[int]) -> int | None:
        for i in s:
            if s <= self._up[i]:
                return i
        return None

    def _greatest(self, s: frozenset[int]) -> int | None:
        for i in s:
            if s <= self._down[i]:
                return i
        return None

    # -- basic access -----------------------------------------------------

    def index(self, x: Elt) -> int:
        try:
            return self._idx[x]
        except (KeyError, TypeError):
            raise LatticeError(f"unknown element {x!r}") from None

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Elt]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        try:
            return x in self._idx
        except TypeError:
            return False

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteLattice):
            return NotImplemented
        if set(self.elements) != set(other.elements):
            return False
        return all(
            self.leq(x, y) == other.leq(x, y) for x in self.elements for y in self.elements
        )

    def __hash__(self) -> int:
        return hash(frozenset(self.elements))

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<FiniteLattice{label} |{len(self)}|>"

    @property
    def bottom(self) -> Elt:
        return self.elements[self._bot]

    @property
    def top(self) -> Elt:
        return self.elements[self._top]

    def leq(self, x: Elt, y: Elt) -> bool:
        return self._le[self.index(x)][self.index(y)]

    def join2(self, x: Elt, y: Elt) -> Elt:
        return self.elements[self._join[self.index(x)][self.index(y)]]

    def meet2(self, x: Elt, y: Elt) -> Elt:
        return self.elements[self._meet[self.index(x)][self.index(y)]]

    def join(self, xs: Iterable[Elt]) -> Elt:
        acc = self._bot
        tab = self._join
        for x in xs:
            acc = tab[acc][self.index(x)]
        return self.elements[acc]

    def meet(self, xs: Iterable[Elt]) -> Elt:
        acc = self._top
        tab = self._meet
        for x in xs:
            acc = tab[acc][self.index(x)]
        return self.elements[acc]

    def down(self, x: Elt) -> list[Elt]:
        return [self.elements[i] for i in sorted(self._down[self.index(x)])]

    def up(self, x: Elt) -> list[Elt]:
        return [self.elements[i] for i in sorted(self._up[self.index(x)])]

    def covers(self) -> list[tuple[Elt, Elt]]:
        """Hasse diagram edges ``(x, y)`` with ``x < y`` and nothing between."""
        out = []
        for i, j in itertools.permutations(range(len(self)), 2):
            if self._le[i][j] and not any(
                k not in (i, j) and self._le[i][k] and self._le[k][j] for k in range(len(self))
            ):
                out.append((self.elements[i], self.elements[j]))
        return out

    def downsets(self) -> Iterator[frozenset]:
        """Every down-closed subset, the empty one included."""
        n = len(self)
        if n > 20:
            raise LatticeError("down-set enumeration is limited to 20 elements")
        els = self.elements
        for mask in range(1 << n):
            members = [i for i in range(n) if mask >> i & 1]
            if all(self._down[i] <= set(members) for i in members):
                yield frozenset(els[i] for i in members)

    def sublattice(self, members: Iterable[Elt], name: str | None = None) -> "FiniteLattice":
        """The induced sub-order on ``members``; must itself be complete."""
        members = [x for x in self.elements if x in set(members)]
        pairs = [(x, y) for x in members for y in members if self.leq(x, y)]
        return FiniteLattice(members, pairs, name=name)

    def is_distributive(self) -> bool:
        els = self.elements
        return all(
            self.meet2(x, self.join2(y, z)) == self.join2(self.meet2(x, y), self.meet2(x, z))
            for x in els
            for y in els
            for z in els
        )

    def to_json(self) -> dict:
        return {
            "elements": [str(x) for x in self.elements],
            "leq": [[str(x), str(y)] for x, y in self.covers()],
        }

    @classmethod
    def from_json(cls, data: Mapping, name: str | None = None) -> "FiniteLattice":
        return cls(data["elements"], [tuple(p) for p in data.get("leq", [])], name=name)

    @classmethod
    def from_order(
        cls, elements: Sequence[Elt], leq: Callable[[Elt, Elt], bool], name: str | None = None
    ) -> "FiniteLattice":
        return cls(elements, [(x, y) for x in elements for y in elements if leq(x, y)], name=name)


def chain(n: int, names: Sequence[str] | None = None) -> FiniteLattice:
    """The ``n``-element chain; default names are ``"0".."n-1"``."""
    names = list(names) if names is not None else [str(i) for i in range(n)]
    return FiniteLattice(names, list(zip(names, names[1:])), name=f"C{n}")


def product_lattice(lattices: Sequence[FiniteLattice], name: str | None = None) -> FiniteLattice:
    """Cartesian product ordered componentwise; elements are tuples."""
    elements = list(itertools.product(*[L.elements for L in lattices]))
    pairs = []
    for k, L in enumerate(lattices):
        for x, y in L.covers():
            for e in elements:
                if e[k] == x:
                    pairs.append((e, e[:k] + (y,) + e[k + 1 :]))
    return FiniteLattice(elements, pairs, name=name)


def join(L: FiniteLattice, S: Iterable[Elt]) -> Elt:
    return L.join(S)


def meet(L: FiniteLattice, S: Iterable[Elt]) -> Elt:
    return L.meet(S)


def is_locale(L: FiniteLattice) -> bool:
    """Finite distributivity, which for a finite lattice makes it a frame."""
    return L.is_distributive()


@dataclass(frozen=True, eq=False)
class MonotoneMap:
    dom: FiniteLattice
    cod: FiniteLattice
    graph: Mapping[Elt, Elt] = field(repr=False)

    def __post_init__(self):
        g = dict(self.graph)
        if set(g) != set(self.dom.elements):
            raise LatticeError("map is not total on its domain")
        for x in g.values():
            self.cod.index(x)
        for x in self.dom.elements:
            for y in self.dom.up(x):
                if not self.cod.leq(g[x], g[y]):
                    raise LatticeError(f"map is not monotone at {x!r} <= {y!r}")
        object.__setattr__(self, "graph", g)

    def __call__(self, x: Elt) -> Elt:
        return self.graph[x]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MonotoneMap):
            return NotImplemented
        return self.graph == other.graph

    def __hash__(self) -> int:
        return hash(frozenset(self.graph.items()))

    def then(self, g: "MonotoneMap") -> "MonotoneMap":
        """Diagrammatic composite: first ``self``, then ``g``."""
        return MonotoneMap(self.dom, g.cod, {x: g(self(x)) for x in self.dom})

    def leq(self, other: "MonotoneMap") -> bool:
        return all(self.cod.leq(self(x), other(x)) for x in self.dom)


def compose(g: MonotoneMap, f: MonotoneMap) -> MonotoneMap:
    """``g ∘ f``."""
    return f.then(g)


def identity(L: FiniteLattice) -> MonotoneMap:
    return MonotoneMap(L, L, {x: x for x in L})


def constant(dom: FiniteLattice, cod: FiniteLattice, value: Elt) -> MonotoneMap:
    return MonotoneMap(dom, cod, {x: value for x in dom})


def is_sup_morphism(f: MonotoneMap) -> bool:
    """Whether ``f`` preserves all joins.

    For finite lattices it is enough to test the empty join and binary joins:
    every subset is finite, so its join is an iterated binary join starting
    from bottom.
    """
    L, M = f.dom, f.cod
    if f(L.bottom) != M.bottom:
        return False
    els = L.elements
    return all(
        f(L.join2(x, y)) == M.join2(f(x), f(y)) for i, x in enumerate(els) for y in els[i + 1 :]
    )


def is_inf_morphism(f: MonotoneMap) -> bool:
    """Dual of :func:`is_sup_morphism` (empty meet plus binary meets)."""
    L, M = f.dom, f.cod
    if f(L.top) != M.top:
        return False
    els = L.elements
    return all(
        f(L.meet2(x, y)) == M.meet2(f(x), f(y)) for i, x in enumerate(els) for y in els[i + 1 :]
    )


def adjoint_of_monotone(f: MonotoneMap, side: str = "right") -> MonotoneMap | None:
    """The right (or left) Galois adjoint of ``f`` if it has one.

    The candidate ``g(y) = join{x | f(x) <= y}`` (dually a meet) is accepted
    only after checking ``f(x) <= y  <=>  x <= g(y)`` on every pair.
    """
    L, M = f.dom, f.cod
    if side == "right":
        cand = {y: L.join(x for x in L if M.leq(f(x), y)) for y in M}
        ok = all(M.leq(f(x), y) == L.leq(x, cand[y]) for x in L for y in M)
    elif side == "left":
        cand = {y: L.meet(x for x in L if M.leq(y, f(x))) for y in M}
        ok = all(L.leq(cand[y], x) == M.leq(y, f(x)) for x in L for y in M)
    else:
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    if not ok:
        return None
    return MonotoneMap(M, L, cand)


def monotone_maps(
    dom: FiniteLattice, cod: FiniteLattice, limit: int | None = None
) -> Iterator[MonotoneMap]:
    """Every monotone map ``dom -> cod``, by backtracking along a linear extension.

    ``limit`` caps the number of partial assignments explored.
    """
    order = sorted(dom.elements, key=lambda x: len(dom.down(x)))
    below = {x: [y for y in dom.down(x) if y != x] for x in order}
    seen = 0
    graph: dict = {}

    def go(k):
        nonlocal seen
        if k == len(order):
            yield MonotoneMap(dom, cod, dict(graph))
            return
        x = order[k]
        for v in cod.elements:
            seen += 1
            if limit is not None and seen > limit:
                raise ResourceError(f"monotone map search exceeded {limit} candidates")
            if all(cod.leq(graph[y], v) for y in below[x]):
                graph[x] = v
                yield from go(k + 1)
                del graph[x]

    yield from go(0)


def heyting_implication(L: FiniteLattice, u: Elt, v: Elt) -> Elt:
    """``u => v``, the largest ``w`` with ``w ∧ u <= v``."""
    if not L.is_distributive():
        raise LatticeError("Heyting implication needs a distributive lattice")
    return L.join(w for w in L if L.leq(L.meet2(w, u), v))


def totally_compact_elements(L: FiniteLattice) -> list[Elt]:
    """Elements ``c`` such that ``c <= join(D)`` forces ``c ∈ D`` for down-sets ``D``.

    In a finite lattice this is the same as ``c`` being join-prime: ``c`` is
    not bottom (take ``D`` empty) and ``c <= x ∨ y`` implies ``c <= x`` or
    ``c <= y``.  Given join-primeness, ``c <= join(D)`` with ``D`` finite yields
    ``c <= d`` for some ``d ∈ D`` by induction, and then ``c ∈ D`` because
    ``D`` is down-closed; the converse uses ``D = ↓x ∪ ↓y``.
    """
    out = []
    for c in L:
        if c == L.bottom:
            continue
        if all(
            L.leq(c, x) or L.leq(c, y) for x in L for y in L if L.leq(c, L.join2(x, y))
        ):
            out.append(c)
    return out


def is_totally_algebraic(L: FiniteLattice) -> bool:
    comp = totally_compact_elements(L)
    return all(L.join(c for c in comp if L.leq(c, x)) == x for x in L)


def split_idempotent_sup(
    e: MonotoneMap,
) -> tuple[FiniteLattice, MonotoneMap, MonotoneMap]:
    """Split a sup-preserving idempotent through its lattice of fixed points.

    Returns ``(L_e, s, p)`` with ``p ∘ s = id`` and ``s ∘ p = e``.
    """
    if e.dom is not e.cod and e.dom != e.cod:
        raise LatticeError("an idempotent must be an endomap")
    if not is_sup_morphism(e):
        raise LatticeError("idempotent does not preserve joins")
    if compose(e, e) != e:
        raise LatticeError("map is not idempotent")
    L = e.dom
    fixed = L.sublattice([x for x in L if e(x) == x])
    s = MonotoneMap(fixed, L, {x: x for x in fixed})
    p = MonotoneMap(L, fixed, {x: e(x) for x in L})
    return fixed, s, p


# A few named lattices used throughout the corpus and the tests.


def L1() -> FiniteLattice:
    return FiniteLattice(["0"], name="L1")


def L2() -> FiniteLattice:
    return FiniteLattice(["0", "1"], [("0", "1")], name="L2")


def L3() -> FiniteLattice:
    return FiniteLattice(["0", "e", "1"], [("0", "e"), ("e", "1")], name="L3")


def M2() -> FiniteLattice:
    """The four-element Boolean algebra ``{0, a, b, 1}``."""
    return FiniteLattice(
        ["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")], name="M2"
    )


def M3() -> FiniteLattice:
    """The five-element diamond, which is not distributive."""
    return FiniteLattice(
        ["0", "a", "b", "c", "1"],
        [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        name="M3",
    )


def N5() -> FiniteLattice:
    """The pentagon ``0 < a < c < 1``, ``0 < b < 1``."""
    return FiniteLattice(
        ["0", "a", "b", "c", "1"],
        [("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")],
        name="N5",
    )
