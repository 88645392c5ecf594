"""Quotient-heart seeds attached to refinements of polygon dissections.

A dissection ``a`` is refined to a triangulation ``t``; the complementary
arcs of ``t`` span the collapsed index set ``I``.  Class data of the quotient
heart is the block of ``C`` with rows and columns in ``I^c``.  Tilting at
vertices of ``I`` never changes that block, and a forward flip of ``a`` at
``γ`` lifts to a forward tilt at ``γ`` on a refinement with no arrow from
``γ`` to a complementary arc.

Labels are carried along flips: the flipped arc keeps its label, so the label
set of ``I`` never changes and the rows of every projected matrix refer to
the same basis.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping, Sequence

from .errors import BadSubset, KeyCollision, NoAdmissibleRefinement, SupportViolation
from .exchange import ExchangeGraph, build, diagonal_label, polygon_graph, state_key
from .seeds import Matrix, Seed, init_seed, tilt_forward
from .surface import (
    Diagonal,
    PolygonDissection,
    _check_arc,
    complementary_arcs,
    enumerate_dissections,
    flip_forward,
    flip_is_refined,
    forward_arc,
    quiver_from_triangulation,
    refinements,
)


@dataclass(frozen=True)
class QuotientSeed:
    base: Seed
    I: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "I", frozenset(self.I))
        verts = set(self.base.vertices)
        if not self.I <= verts:
            raise BadSubset("collapsed set is not a set of seed vertices", subset=sorted(self.I))
        rows = [n for n, v in enumerate(self.base.vertices) if v not in self.I]
        for i in sorted(self.I):
            col = self.base.column(i)
            bad = [self.base.vertices[r] for r in rows if col[r]]
            if bad:
                raise SupportViolation(f"class of simple {i} leaves the collapsed block", vertex=i, rows=bad)

    @property
    def complement(self) -> tuple[int, ...]:
        return tuple(v for v in self.base.vertices if v not in self.I)

    @cached_property
    def projectedC(self) -> Matrix:
        """Columns ``j`` in ``I^c`` of ``C``, restricted to rows in ``I^c``."""
        rows = [self.base.index(i) for i in self.complement]
        return tuple(tuple(self.base.column(j)[r] for r in rows) for j in self.complement)

    def classes(self) -> dict[int, tuple[int, ...]]:
        return dict(zip(self.complement, self.projectedC))

    def to_dict(self) -> dict:
        return {"I": sorted(self.I), "complement": list(self.complement),
                "projectedC": [list(c) for c in self.projectedC]}


def project(s: Seed, I: Iterable[int]) -> QuotientSeed:
    I = frozenset(I)
    if not I or I >= set(s.vertices) or not I <= set(s.vertices):
        raise BadSubset("collapsed set must be a proper nonempty subset of the vertices", subset=sorted(I))
    return QuotientSeed(s, I)


def quotient_invariance_check(s: Seed, I: Iterable[int], walk: Sequence[tuple[int, str]]) -> bool:
    """Tilt along ``walk`` (all vertices in ``I``) and compare projected classes."""
    from .seeds import tilt

    before = project(s, I)
    outside = [k for k, _ in walk if k not in before.I]
    if outside:
        raise BadSubset("walk leaves the collapsed set", vertices=outside)
    for k, d in walk:
        s = tilt(s, k, d)
    return project(s, I).projectedC == before.projectedC


# --------------------------------------------------------------------------
# induced tilts


def refinement_labels(t: PolygonDissection, a: PolygonDissection) -> dict[Diagonal, int]:
    """Arcs of ``a`` first, then complementary arcs, each block in sorted order."""
    comp = complementary_arcs(t, a)
    return {d: n + 1 for n, d in enumerate(a.sorted_diagonals + comp)}


def admissible(t: PolygonDissection, a: PolygonDissection, gamma: Diagonal,
               labels: Mapping[Diagonal, int] | None = None,
               target: PolygonDissection | None = None) -> bool:
    """``t`` refines the flip of ``a`` at ``gamma`` and has no arrow from ``gamma`` to a complementary arc."""
    if not flip_is_refined(t, a, gamma, target):
        return False
    labels = refinement_labels(t, a) if labels is None else labels
    q = quiver_from_triangulation(t, labels).quiver
    return all(q.count(labels[gamma], labels[c]) == 0 for c in complementary_arcs(t, a))


def admissible_refinements(a: PolygonDissection, gamma: Iterable[int]) -> list[PolygonDissection]:
    g = _check_arc(a, gamma)
    target = flip_forward(a, g)
    return [t for t in refinements(a) if admissible(t, a, g, target=target)]


def _quotient(s: Seed, I: Iterable[int]) -> QuotientSeed:
    # like project, but a triangulation has I empty and that is fine here
    return QuotientSeed(s, frozenset(I))


def induced_tilt(a: PolygonDissection, gamma: Iterable[int],
                 t: PolygonDissection | None = None) -> tuple[QuotientSeed, QuotientSeed]:
    """Quotient seeds before and after the tilt induced by the forward flip of ``a`` at ``gamma``.

    Uses the initial seed of the first admissible refinement (or of ``t``),
    labelled by :func:`refinement_labels`.
    """
    g = _check_arc(a, gamma)
    if t is None:
        found = admissible_refinements(a, g)
        if not found:
            raise NoAdmissibleRefinement(f"no admissible refinement of {a} for {g}", diagonal=list(g))
        t = found[0]
    elif not admissible(t, a, g):
        raise NoAdmissibleRefinement(f"{t} is not admissible for {g}", diagonal=list(g))
    labels = refinement_labels(t, a)
    I = {labels[c] for c in complementary_arcs(t, a)}
    s = init_seed(quiver_from_triangulation(t, labels))
    return _quotient(s, I), _quotient(tilt_forward(s, labels[g]), I)


# --------------------------------------------------------------------------
# quotient-heart exchange graph


@dataclass(frozen=True)
class QuotientState:
    """A dissection with a labelled refinement and the seed carried to it."""

    a: PolygonDissection
    t: PolygonDissection
    labels: tuple[tuple[Diagonal, int], ...]
    seed: Seed

    @property
    def label_of(self) -> dict[Diagonal, int]:
        return dict(self.labels)

    @cached_property
    def quotient(self) -> QuotientSeed:
        lab = self.label_of
        return _quotient(self.seed, {lab[c] for c in complementary_arcs(self.t, self.a)})

    def key_data(self) -> dict:
        """Projected classes with columns named by the arcs carrying them."""
        lab = self.label_of
        cls = self.quotient.classes()
        return {"m": self.a.m, "classes": [[list(d), list(cls[lab[d]])] for d in self.a.sorted_diagonals]}

    def to_dict(self) -> dict:
        return {**self.key_data(), "dissection": str(self.a)}


def quotient_key(s: QuotientState) -> str:
    return state_key(s.key_data())


def _flip_labelled(t: PolygonDissection, labels: dict[Diagonal, int], g: Diagonal):
    new = forward_arc(t, g)
    lab = {d: n for d, n in labels.items() if d != g}
    lab[new] = labels[g]
    return flip_forward(t, g), lab


def lift(s: QuotientState, gamma: Iterable[int]) -> QuotientState:
    """Carry ``s`` through I-flips to an admissible refinement, then tilt forward at ``gamma``."""
    a = s.a
    g = _check_arc(a, gamma)
    target = flip_forward(a, g)
    todo = deque([(s.t, s.label_of, s.seed)])
    seen = {s.t}
    while todo:
        t, lab, seed = todo.popleft()
        if admissible(t, a, g, lab, target):
            t2, lab2 = _flip_labelled(t, lab, g)
            return QuotientState(target, t2, tuple(sorted(lab2.items())), tilt_forward(seed, lab[g]))
        for c in complementary_arcs(t, a):
            t2, lab2 = _flip_labelled(t, lab, c)
            if t2 not in seen:
                seen.add(t2)
                todo.append((t2, lab2, tilt_forward(seed, lab[c])))
    raise NoAdmissibleRefinement(f"no admissible refinement of {a} for {g}", diagonal=list(g))


def initial_state(a: PolygonDissection) -> QuotientState:
    t = refinements(a)[0]
    labels = refinement_labels(t, a)
    return QuotientState(a, t, tuple(sorted(labels.items())), init_seed(quiver_from_triangulation(t, labels)))


def quotient_moves(s: QuotientState) -> list[tuple[str, QuotientState]]:
    return [(diagonal_label(g), lift(s, g)) for g in s.a.sorted_diagonals]


@dataclass
class IsoReport:
    vertices_left: int
    vertices_right: int
    bijection_ok: bool
    edge_commute_ok: bool
    collisions: list[dict]
    diagnostics: dict[str, Any] = field(default_factory=dict)
    left: ExchangeGraph | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "vertices_left": self.vertices_left,
            "vertices_right": self.vertices_right,
            "bijection_ok": self.bijection_ok,
            "edge_commute_ok": self.edge_commute_ok,
            "collisions": self.collisions,
            "diagnostics": self.diagnostics,
        }


def quotient_graph(m: int, weights: Iterable[int], limit: int | None = None,
                   jobs: int = 1) -> tuple[ExchangeGraph, IsoReport]:
    """Quotient-heart graph of a polygon system, compared with its flip graph.

    The right-hand graph is grown from the quotient state of the first
    dissection by induced tilts and keyed by projected classes named by arcs.
    Its size is capped at ``limit`` (default ``8 *`` the number of
    dissections) since class data need not close up over the flip graph.
    """
    weights = sorted(weights)
    left = polygon_graph(m, weights, jobs=jobs)
    n_left = len(left.vertices)
    limit = 8 * n_left if limit is None else limit
    start = enumerate_dissections(m, weights)[0]
    right = build(initial_state(start), quotient_moves, key=quotient_key, limit=limit, jobs=jobs,
                  description=f"quotient hearts m={m} weights={','.join(map(str, weights))}")
    right.metadata.update({"m": m, "weights": weights})

    # vertex map: right key -> dissection key
    over = {k: state_key(s.a) for k, s in right.vertices.items()}
    sheets = Counter(over.values())
    collisions = []
    by_key: dict[str, set[str]] = {}
    for k, dk in over.items():
        by_key.setdefault(k, set()).add(dk)
    for k, dks in sorted(by_key.items()):
        if len(dks) > 1:
            collisions.append({"key": k, "dissections": sorted(dks)})

    # first quotient state reached over each dissection, in BFS-layer order
    first: dict[str, str] = {}
    depth = _bfs_order(right, quotient_key(initial_state(start)))
    for k in depth:
        first.setdefault(over[k], k)

    # every flip edge, lifted from the chosen quotient state of its source
    mismatches = []
    for s_key, t_key, label in left.sorted_edges():
        if s_key not in first:
            mismatches.append({"edge": [s_key, t_key, label], "reason": "source not reached"})
            continue
        q = right.vertices[first[s_key]]
        landed = quotient_key(lift(q, tuple(int(x) for x in label.split("-"))))
        if landed != first.get(t_key):
            mismatches.append({"edge": [s_key, t_key, label], "reason": "lands on another sheet"})

    covering = all(
        sorted((label, over[t]) for s, t, label in right.edges if s == k)
        == sorted((label, t) for s, t, label in left.edges if s == over[k])
        for k in right.vertices
    ) if not right.truncated else None

    bijection = (not right.truncated and not collisions and set(sheets) == set(left.vertices)
                 and all(v == 1 for v in sheets.values()))
    report = IsoReport(
        vertices_left=n_left,
        vertices_right=len(right.vertices),
        bijection_ok=bijection,
        edge_commute_ok=not mismatches,
        collisions=collisions,
        diagnostics={
            "right_truncated": right.truncated,
            "limit": limit,
            "sheets_per_dissection": dict(sorted(Counter(sheets.values()).items())),
            "edges_left": len(left.edges),
            "edges_right": len(right.edges),
            "edge_mismatches": len(mismatches),
            "mismatched_edges": mismatches,
            "covering_ok": covering,
            "fallback_to_dissection_keys": bool(collisions),
        },
        left=left,
    )
    if collisions:
        # keys fail to separate dissections: report by dissection instead
        right = _rekey_by_dissection(right, over)
    return right, report


def _bfs_order(g: ExchangeGraph, start: str) -> list[str]:
    adj: dict[str, list[str]] = {}
    for s, t, _ in g.sorted_edges():
        adj.setdefault(s, []).append(t)
    order, seen, todo = [start], {start}, deque([start])
    while todo:
        x = todo.popleft()
        for y in adj.get(x, []):
            if y not in seen:
                seen.add(y)
                order.append(y)
                todo.append(y)
    return order


def _rekey_by_dissection(g: ExchangeGraph, over: Mapping[str, str]) -> ExchangeGraph:
    h = ExchangeGraph(metadata={**g.metadata, "keyed_by": "dissection"})
    for k, s in g.vertices.items():
        h.vertices.setdefault(over[k], s.a)
    h.edges = {(over[s], over[t], label) for s, t, label in g.edges}
    h.vertices = dict(sorted(h.vertices.items()))
    return h


def check_key_collisions(report: IsoReport) -> None:
    if report.collisions:
        raise KeyCollision("distinct dissections share a quotient key", collisions=report.collisions)
