"""Weighted decorated marked surfaces and the polygon model of mixed-angulations.

A disc with ``m`` marked points is the convex ``m``-gon with vertices
``0, ..., m-1`` in counterclockwise order.  A dissection is a set of
noncrossing diagonals ``(p, q)`` with ``p < q``; a cell with ``k`` corners
holds one decoration of weight ``k - 2``.  Triangulations are dissections
all of whose cells are triangles.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import (
    DegenerateFlip,
    EnhancementViolated,
    HasPunctures,
    Incompatible,
    InfeasibleWeights,
    InvalidDissection,
    KappaTooSmall,
    NoBoundary,
    NotADiagonal,
    NotARefinement,
    NotSimpleWeights,
    NoWitness,
    SurfaceError,
)
from .qp import QP, Arrow, Potential, Quiver

Diagonal = tuple[int, int]


# --------------------------------------------------------------------------
# weighted DMS bookkeeping


@dataclass(frozen=True)
class WDMS:
    genus: int
    boundaries: tuple[int, ...]
    decorations: tuple[int, ...]
    punctures: int = 0

    @property
    def marked_points(self) -> int:
        return sum(self.boundaries)

    def to_dict(self) -> dict:
        return {"genus": self.genus, "boundaries": list(self.boundaries), "decorations": list(self.decorations)}

    @classmethod
    def from_dict(cls, data: Mapping) -> "WDMS":
        return cls(
            int(data["genus"]),
            tuple(int(b) for b in data["boundaries"]),
            tuple(int(w) for w in data["decorations"]),
            int(data.get("punctures", 0)),
        )


def validate_wdms(s: WDMS) -> None:
    """Check ``sum(w) - (m + 2b) == 4g - 4`` together with the structural restrictions."""
    if not s.boundaries:
        raise NoBoundary("surface needs at least one boundary component")
    if s.punctures:
        raise HasPunctures(f"{s.punctures} punctures given; only unpunctured surfaces are supported",
                           punctures=s.punctures)
    if s.genus < 0 or any(b < 1 for b in s.boundaries) or any(w < 1 for w in s.decorations):
        raise SurfaceError("genus must be >= 0, boundary counts and weights >= 1", **s.to_dict())
    lhs = sum(s.decorations) - (s.marked_points + 2 * len(s.boundaries))
    rhs = 4 * s.genus - 4
    if lhs != rhs:
        raise Incompatible(f"weights incompatible: {lhs} != {rhs}", lhs=lhs, rhs=rhs)


def rank(s: WDMS) -> int:
    validate_wdms(s)
    return 6 * s.genus + 3 * s.punctures + 3 * len(s.boundaries) + s.marked_points - 6


@dataclass(frozen=True)
class CollapseComponent:
    genus: int
    kappas: tuple[int, ...]
    decorations: frozenset[int]


@dataclass(frozen=True)
class CollapseDatum:
    components: tuple[CollapseComponent, ...]

    @classmethod
    def from_dict(cls, data: Mapping) -> "CollapseDatum":
        return cls(tuple(
            CollapseComponent(int(c.get("genus", 0)), tuple(int(k) for k in c["kappas"]),
                              frozenset(int(i) for i in c["decorations"]))
            for c in data["components"]
        ))


def collapse(s: WDMS, datum: CollapseDatum) -> WDMS:
    """Collapse the subsurface described by ``datum``; each boundary curve becomes a weight ``kappa - 2`` point."""
    validate_wdms(s)
    if any(w != 1 for w in s.decorations):
        raise NotSimpleWeights("collapse expects simple weights", decorations=list(s.decorations))
    used: set[int] = set()
    genus = s.genus
    for n, comp in enumerate(datum.components):
        if not comp.kappas:
            raise EnhancementViolated(f"component {n} has no boundary curve", component=n)
        small = [k for k in comp.kappas if k < 3]
        if small:
            raise KappaTooSmall(f"enhancements {small} below 3", component=n, kappas=list(comp.kappas))
        bad = [i for i in comp.decorations if not 0 <= i < len(s.decorations)]
        if bad:
            raise SurfaceError(f"decoration indices {bad} out of range", component=n)
        if used & comp.decorations:
            raise SurfaceError("collapse components share decorations",
                               component=n, shared=sorted(used & comp.decorations))
        used |= comp.decorations
        lhs = -sum(k + 2 for k in comp.kappas) + sum(s.decorations[i] for i in comp.decorations)
        rhs = 4 * comp.genus - 4
        if lhs != rhs:
            raise EnhancementViolated(f"component {n}: {lhs} != {rhs}", component=n, lhs=lhs, rhs=rhs)
        # gluing a component with b boundary curves onto the complement adds b - 1 handles
        genus -= comp.genus + len(comp.kappas) - 1
    if genus < 0:
        raise SurfaceError("collapse data exceed the ambient topology", genus=genus)
    kept = [w for i, w in enumerate(s.decorations) if i not in used]
    new = [k - 2 for comp in datum.components for k in comp.kappas]
    out = WDMS(genus, s.boundaries, tuple(kept + new), s.punctures)
    validate_wdms(out)
    return out


# --------------------------------------------------------------------------
# polygon dissections


def crosses(d: Diagonal, e: Diagonal) -> bool:
    """Strict interior crossing of two chords of a convex polygon."""
    (a, b), (c, x) = d, e
    return a < c < b < x or c < a < x < b


def is_boundary(m: int, p: int, q: int) -> bool:
    return (q - p) % m in (1, m - 1)


def _norm(d: Iterable[int]) -> Diagonal:
    p, q = sorted(int(x) for x in d)
    return (p, q)


@dataclass(frozen=True)
class PolygonDissection:
    m: int
    diagonals: frozenset[Diagonal] = field(default_factory=frozenset)

    def __post_init__(self):
        m = self.m
        if m < 3:
            raise InvalidDissection(f"polygon needs at least 3 vertices, got {m}", m=m)
        diags = frozenset(_norm(d) for d in self.diagonals)
        for p, q in diags:
            if not (0 <= p < q < m) or is_boundary(m, p, q):
                raise InvalidDissection(f"({p},{q}) is not a diagonal of the {m}-gon", diagonal=[p, q])
        for d, e in itertools.combinations(sorted(diags), 2):
            if crosses(d, e):
                raise InvalidDissection(f"diagonals {d} and {e} cross", diagonals=[list(d), list(e)])
        object.__setattr__(self, "diagonals", diags)

    @classmethod
    def of(cls, m: int, diagonals: Iterable[Iterable[int]] = ()) -> "PolygonDissection":
        return cls(m, frozenset(_norm(d) for d in diagonals))

    @cached_property
    def sorted_diagonals(self) -> tuple[Diagonal, ...]:
        return tuple(sorted(self.diagonals))

    @cached_property
    def neighbors(self) -> dict[int, tuple[int, ...]]:
        nb: dict[int, set[int]] = {v: {(v + 1) % self.m, (v - 1) % self.m} for v in range(self.m)}
        for p, q in self.diagonals:
            nb[p].add(q)
            nb[q].add(p)
        return {v: tuple(sorted(s)) for v, s in nb.items()}

    @cached_property
    def cells(self) -> tuple[tuple[int, ...], ...]:
        """Cells as sorted vertex tuples (sorted order is counterclockwise order)."""
        m = self.m
        darts = [(i, (i + 1) % m) for i in range(m)]
        darts += [(p, q) for p, q in self.diagonals] + [(q, p) for p, q in self.diagonals]
        seen: set[tuple[int, int]] = set()
        out = []
        for dart in darts:
            if dart in seen:
                continue
            face = []
            u, v = dart
            while (u, v) not in seen:
                seen.add((u, v))
                face.append(u)
                back = (u - v) % m
                w = max((x for x in self.neighbors[v] if 0 < (x - v) % m < back), key=lambda x: (x - v) % m)
                u, v = v, w
            out.append(tuple(sorted(face)))
        return tuple(sorted(out))

    @property
    def cell_weights(self) -> tuple[int, ...]:
        return tuple(sorted(len(c) - 2 for c in self.cells))

    def is_triangulation(self) -> bool:
        return len(self.diagonals) == self.m - 3

    def rotate(self, r: int = 1) -> "PolygonDissection":
        m = self.m
        return PolygonDissection(m, frozenset(_norm(((p + r) % m, (q + r) % m)) for p, q in self.diagonals))

    def to_dict(self) -> dict:
        return {"m": self.m, "diagonals": [list(d) for d in self.sorted_diagonals]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "PolygonDissection":
        return cls.of(int(data["m"]), data.get("diagonals", []))

    def __str__(self) -> str:
        body = " ".join(f"{p}-{q}" for p, q in self.sorted_diagonals)
        return f"{self.m}:[{body}]"


def all_diagonals(m: int) -> list[Diagonal]:
    return [(p, q) for p in range(m) for q in range(p + 2, m) if not is_boundary(m, p, q)]


def _noncrossing_subsets(m: int, size: int) -> Iterable[tuple[Diagonal, ...]]:
    diags = all_diagonals(m)

    def extend(start: int, chosen: list[Diagonal]):
        if len(chosen) == size:
            yield tuple(chosen)
            return
        for i in range(start, len(diags)):
            d = diags[i]
            if not any(crosses(d, e) for e in chosen):
                chosen.append(d)
                yield from extend(i + 1, chosen)
                chosen.pop()

    yield from extend(0, [])


def kirkman_cayley(m: int, k: int) -> int:
    """Number of dissections of a convex ``m``-gon by ``k`` noncrossing diagonals."""
    return comb(m - 3, k) * comb(m + k - 1, k) // (k + 1)


def diagonal_count(m: int, weights: Sequence[int]) -> int:
    """Diagonals needed for cells of the given weights, or raise :class:`InfeasibleWeights`."""
    if m < 3:
        raise InfeasibleWeights(f"polygon needs at least 3 vertices, got {m}", m=m)
    if not weights or any(w < 1 for w in weights):
        raise InfeasibleWeights("weights must be a nonempty list of positive integers", weights=list(weights))
    corners = sum(w + 2 for w in weights)
    d = len(weights) - 1
    if corners != m + 2 * d:
        raise InfeasibleWeights(
            f"cells of weights {sorted(weights)} have {corners} corners, a {m}-gon with {d} diagonals has {m + 2 * d}",
            m=m, weights=sorted(weights),
        )
    return d


@lru_cache(maxsize=None)
def _enumerate(m: int, weights: tuple[int, ...]) -> tuple[PolygonDissection, ...]:
    d = diagonal_count(m, weights)
    out = []
    for diags in _noncrossing_subsets(m, d):
        a = PolygonDissection(m, frozenset(diags))
        if a.cell_weights == weights:
            out.append(a)
    return tuple(sorted(out, key=lambda a: a.sorted_diagonals))


def enumerate_dissections(m: int, weights: Sequence[int]) -> list[PolygonDissection]:
    """All dissections of the ``m``-gon whose multiset of cell weights is ``weights``, sorted."""
    return list(_enumerate(m, tuple(sorted(weights))))


def triangulations(m: int) -> list[PolygonDissection]:
    if m == 3:
        return [PolygonDissection(3)]
    return enumerate_dissections(m, [1] * (m - 2))


# --------------------------------------------------------------------------
# flips


def _check_arc(a: PolygonDissection, gamma: Iterable[int]) -> Diagonal:
    g = _norm(gamma)
    if g not in a.diagonals:
        raise NotADiagonal(f"{g} is not a diagonal of {a}", diagonal=list(g))
    return g


def forward_arc(a: PolygonDissection, gamma: Iterable[int]) -> Diagonal:
    """The arc replacing ``gamma`` under the forward flip.

    Each endpoint slides counterclockwise along the side of its cell that
    is adjacent to ``gamma`` on the counterclockwise side, i.e. at ``p`` the
    neighbour of ``p`` closest to ``q`` strictly inside the boundary arc
    from ``p`` to ``q``.
    """
    p, q = _check_arc(a, gamma)
    return _slide(a, p, q, forward=True)


def backward_arc(a: PolygonDissection, gamma: Iterable[int]) -> Diagonal:
    p, q = _check_arc(a, gamma)
    return _slide(a, p, q, forward=False)


def _slide(a: PolygonDissection, p: int, q: int, forward: bool) -> Diagonal:
    m = a.m

    def move(x: int, y: int) -> int:
        cand = [r for r in a.neighbors[x] if r != y]
        if forward:
            return min(cand, key=lambda r: (y - r) % m)
        return min(cand, key=lambda r: (r - y) % m)

    new = _norm((move(p, q), move(q, p)))
    if new[0] == new[1] or is_boundary(m, *new) or new in a.diagonals:
        raise DegenerateFlip(f"flip of ({p},{q}) in {a} gives {new}", diagonal=[p, q], result=list(new))
    return new


def flip_forward(a: PolygonDissection, gamma: Iterable[int]) -> PolygonDissection:
    g = _norm(gamma)
    new = forward_arc(a, g)
    return PolygonDissection(a.m, (a.diagonals - {g}) | {new})


def flip_backward(a: PolygonDissection, gamma: Iterable[int]) -> PolygonDissection:
    g = _norm(gamma)
    new = backward_arc(a, g)
    return PolygonDissection(a.m, (a.diagonals - {g}) | {new})


# --------------------------------------------------------------------------
# refinements


def _cell_triangulations(cell: tuple[int, ...]) -> list[frozenset[Diagonal]]:
    k = len(cell)
    if k == 3:
        return [frozenset()]
    return [frozenset(_norm((cell[p], cell[q])) for p, q in t.diagonals) for t in triangulations(k)]


def refinements(a: PolygonDissection) -> list[PolygonDissection]:
    """Triangulations containing ``a``, obtained by triangulating each cell."""
    parts = [_cell_triangulations(c) for c in a.cells]
    out = [PolygonDissection(a.m, a.diagonals.union(*choice)) for choice in itertools.product(*parts)]
    return sorted(out, key=lambda t: t.sorted_diagonals)


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def complementary_arcs(t: PolygonDissection, a: PolygonDissection) -> tuple[Diagonal, ...]:
    if t.m != a.m or not t.is_triangulation() or not a.diagonals <= t.diagonals:
        raise NotARefinement(f"{t} is not a refinement of {a}")
    return tuple(sorted(t.diagonals - a.diagonals))


def refinement_graph_connected(a: PolygonDissection) -> bool:
    """Refinements of ``a`` are connected by flips at complementary arcs."""
    refs = refinements(a)
    todo = [refs[0]]
    seen = {refs[0]}
    while todo:
        t = todo.pop()
        for g in complementary_arcs(t, a):
            s = flip_forward(t, g)
            if s not in seen:
                seen.add(s)
                todo.append(s)
    return seen == set(refs)


def refine_flip_witness(a: PolygonDissection, gamma: Iterable[int]) -> PolygonDissection:
    """A refinement whose flip at ``gamma``, with complementary arcs forgotten, is the flip of ``a``."""
    g = _check_arc(a, gamma)
    target = flip_forward(a, g)
    for t in refinements(a):
        if flip_is_refined(t, a, g, target):
            return t
    raise NoWitness(f"no refinement of {a} refines the flip at {g}", diagonal=list(g))


def flip_is_refined(t: PolygonDissection, a: PolygonDissection, gamma: Diagonal,
                    target: PolygonDissection | None = None) -> bool:
    target = flip_forward(a, gamma) if target is None else target
    comp = t.diagonals - a.diagonals
    return flip_forward(t, gamma).diagonals - comp == target.diagonals


# --------------------------------------------------------------------------
# quivers of triangulations


def default_labels(t: PolygonDissection) -> dict[Diagonal, int]:
    return {d: n + 1 for n, d in enumerate(t.sorted_diagonals)}


def quiver_from_triangulation(t: PolygonDissection, labels: Mapping[Diagonal, int] | None = None) -> QP:
    """One vertex per diagonal; in each triangle an arrow from every diagonal side to the
    next diagonal side in counterclockwise order, and a 3-cycle for interior triangles."""
    if not t.is_triangulation():
        raise NotARefinement(f"{t} is not a triangulation")
    labels = default_labels(t) if labels is None else dict(labels)
    arrows: list[Arrow] = []
    terms = []
    for cell in t.cells:
        x, y, z = cell
        sides = [_norm((x, y)), _norm((y, z)), _norm((z, x))]
        ids = []
        for s, nxt in zip(sides, sides[1:] + sides[:1]):
            if s in t.diagonals and nxt in t.diagonals:
                aid = f"a{len(arrows) + 1}"
                arrows.append(Arrow(aid, labels[s], labels[nxt]))
                ids.append(aid)
        if len(ids) == 3:
            terms.append((1, tuple(ids)))
    quiver = Quiver(tuple(labels[d] for d in t.diagonals), tuple(arrows))
    return QP(quiver, Potential(tuple(terms)))
