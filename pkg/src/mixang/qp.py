"""Quivers with potential.

Paths and cycles are tuples of arrow ids written in traversal order: for
``a: i -> j`` and ``b: j -> k`` the path "a then b" is ``("a", "b")``.
Potentials are finite integer combinations of cycles, stored in a canonical
form (each cycle rotated to its lexicographically smallest rotation, terms
sorted, equal cycles merged, zero coefficients dropped), so equality of
:class:`Potential` objects is equality up to cyclic equivalence.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Mapping

from .errors import (
    BadSubset,
    DuplicateArrowId,
    LoopArrow,
    NonComposableCycle,
    TwoCycleArrows,
    UnknownArrowInPotential,
    UnknownVertex,
    UnsupportedReduction,
)

Path = tuple[str, ...]
PathSum = dict[Path, int]


@dataclass(frozen=True, order=True)
class Arrow:
    id: str
    src: int
    tgt: int


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[int, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(set(self.vertices))))
        object.__setattr__(self, "arrows", tuple(sorted(self.arrows)))

    @classmethod
    def from_edges(cls, vertices: Iterable[int], arrows: Iterable[tuple[str, int, int]]) -> "Quiver":
        return cls(tuple(vertices), tuple(Arrow(a, s, t) for a, s, t in arrows))

    @cached_property
    def by_id(self) -> dict[str, Arrow]:
        return {a.id: a for a in self.arrows}

    @cached_property
    def arrow_counts(self) -> Counter:
        """Multiset of ``(source, target)`` pairs."""
        return Counter((a.src, a.tgt) for a in self.arrows)

    def count(self, i: int, j: int) -> int:
        """Number of arrows ``i -> j``."""
        return self.arrow_counts.get((i, j), 0)

    def same_arrows(self, other: "Quiver") -> bool:
        return self.vertices == other.vertices and self.arrow_counts == other.arrow_counts

    def two_cycles(self) -> list[tuple[Arrow, Arrow]]:
        out = []
        for a in self.arrows:
            for b in self.arrows:
                if a.id < b.id and a.src == b.tgt and a.tgt == b.src:
                    out.append((a, b))
        return out


def canonical_cycle(cycle: Iterable[str]) -> Path:
    """Lexicographically smallest rotation of ``cycle``."""
    c = tuple(cycle)
    return min(c[i:] + c[:i] for i in range(len(c)))


def canonical_terms(terms: Iterable[tuple[int, Iterable[str]]]) -> tuple[tuple[int, Path], ...]:
    acc: dict[Path, int] = defaultdict(int)
    for coef, cycle in terms:
        cycle = tuple(cycle)
        if not cycle:
            raise ValueError("potential terms must be nonempty cycles")
        acc[canonical_cycle(cycle)] += int(coef)
    return tuple((c, cyc) for cyc, c in sorted(acc.items()) if c != 0)


@dataclass(frozen=True)
class Potential:
    terms: tuple[tuple[int, Path], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", canonical_terms(self.terms))

    def __add__(self, other: "Potential") -> "Potential":
        return Potential(self.terms + other.terms)

    def __neg__(self) -> "Potential":
        return Potential(tuple((-c, cyc) for c, cyc in self.terms))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def arrows(self) -> set[str]:
        return {a for _, cyc in self.terms for a in cyc}


@dataclass(frozen=True)
class QP:
    quiver: Quiver
    potential: Potential = field(default_factory=Potential)

    @property
    def vertices(self) -> tuple[int, ...]:
        return self.quiver.vertices

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.quiver.vertices),
            "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt} for a in self.quiver.arrows],
            "potential": [{"coef": c, "cycle": list(cyc)} for c, cyc in self.potential.terms],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "QP":
        quiver = Quiver(
            tuple(int(v) for v in data["vertices"]),
            tuple(Arrow(str(a["id"]), int(a["src"]), int(a["tgt"])) for a in data.get("arrows", [])),
        )
        pot = Potential(tuple((int(t["coef"]), tuple(t["cycle"])) for t in data.get("potential", [])))
        return cls(quiver, pot)

    def relabel(self, prefix: str = "a") -> "QP":
        """Rename arrows to ``prefix0, prefix1, ...`` in (source, target, id) order."""
        order = sorted(self.quiver.arrows, key=lambda a: (a.src, a.tgt, a.id))
        names = {a.id: f"{prefix}{n}" for n, a in enumerate(order)}
        quiver = Quiver(self.vertices, tuple(Arrow(names[a.id], a.src, a.tgt) for a in order))
        pot = Potential(tuple((c, tuple(names[x] for x in cyc)) for c, cyc in self.potential.terms))
        return QP(quiver, pot)


def validate_qp(qp: QP) -> None:
    """Raise if ``qp`` has loops, 2-cycles, bad arrow ids or a non-closed potential term."""
    q = qp.quiver
    seen: set[str] = set()
    verts = set(q.vertices)
    for a in q.arrows:
        if a.id in seen:
            raise DuplicateArrowId(f"arrow id {a.id!r} used twice", arrow=a.id)
        seen.add(a.id)
        if a.src not in verts or a.tgt not in verts:
            raise UnknownVertex(f"arrow {a.id!r} has an endpoint outside the vertex set", arrow=a.id)
        if a.src == a.tgt:
            raise LoopArrow(f"arrow {a.id!r} is a loop at {a.src}", arrow=a.id)
    cycles = q.two_cycles()
    if cycles:
        a, b = cycles[0]
        raise TwoCycleArrows(f"arrows {a.id!r} and {b.id!r} form a 2-cycle", arrows=[a.id, b.id])
    check_potential(qp)


def check_potential(qp: QP) -> None:
    by_id = qp.quiver.by_id
    for _, cyc in qp.potential.terms:
        for x in cyc:
            if x not in by_id:
                raise UnknownArrowInPotential(f"potential uses unknown arrow {x!r}", arrow=x)
        for x, y in zip(cyc, cyc[1:] + cyc[:1]):
            if by_id[x].tgt != by_id[y].src:
                raise NonComposableCycle(
                    f"cycle {list(cyc)} is not composable at {x!r}->{y!r}", cycle=list(cyc), arrows=[x, y]
                )


def cyclic_derivative(w: Potential, a: str) -> PathSum:
    """Rotate every occurrence of ``a`` to the front and delete it."""
    out: PathSum = defaultdict(int)
    for coef, cyc in w.terms:
        for i, x in enumerate(cyc):
            if x == a:
                out[cyc[i + 1:] + cyc[:i]] += coef
    return {p: c for p, c in out.items() if c}


def star(arrow_id: str) -> str:
    """Name of the reversed arrow; reversing twice gives the original name back."""
    return arrow_id[:-1] if arrow_id.endswith("*") else arrow_id + "*"


def _fresh(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def premutate(qp: QP, k: int) -> QP:
    """Composite arrows through ``k``, reversal at ``k`` and the new potential; 2-cycles are kept."""
    q = qp.quiver
    if k not in q.vertices:
        raise UnknownVertex(f"vertex {k} not in quiver", vertex=k)
    incoming = [a for a in q.arrows if a.tgt == k]
    outgoing = [b for b in q.arrows if b.src == k]

    taken: set[str] = set()
    rename: dict[str, str] = {}
    arrows: list[Arrow] = []
    for a in q.arrows:
        if a.src != k and a.tgt != k:
            rename[a.id] = _fresh(a.id, taken)
            arrows.append(Arrow(rename[a.id], a.src, a.tgt))
    for a in q.arrows:
        if a.src == k or a.tgt == k:
            rename[a.id] = _fresh(star(a.id), taken)
            arrows.append(Arrow(rename[a.id], a.tgt, a.src))
    composite: dict[tuple[str, str], str] = {}
    for a in incoming:
        for b in outgoing:
            composite[a.id, b.id] = _fresh(f"[{a.id}{b.id}]", taken)
            arrows.append(Arrow(composite[a.id, b.id], a.src, b.tgt))

    terms = []
    for coef, cyc in qp.potential.terms:
        n = len(cyc)
        # a cycle through k is a cyclic word of pairs (into k, out of k)
        starts = [i for i in range(n) if q.by_id[cyc[i]].tgt == k]
        if not starts:
            terms.append((coef, cyc))
            continue
        rot = cyc[starts[0]:] + cyc[:starts[0]]
        word: list[str] = []
        i = 0
        while i < n:
            x = rot[i]
            if q.by_id[x].tgt == k:
                word.append(composite[x, rot[(i + 1) % n]])
                i += 2
            else:
                word.append(x)
                i += 1
        terms.append((coef, tuple(word)))
    for a in incoming:
        for b in outgoing:
            terms.append((1, (composite[a.id, b.id], rename[b.id], rename[a.id])))
    return QP(Quiver(q.vertices, tuple(arrows)), Potential(tuple(terms)))


def _rotate_to(cyc: Path, x: str) -> Path:
    i = cyc.index(x)
    return cyc[i:] + cyc[:i]


def reduce(qp: QP) -> QP:
    r"""Cancel 2-cycle terms ``eps*u*v`` of the potential.

    With ``W = eps*uv + alpha*uA + beta*Bv + C`` the substitution
    ``u -> u + eps*beta*B``, ``v -> v + eps*alpha*A`` turns ``W`` into
    ``eps*u'v' + C - eps*alpha*beta*BA``; the trivial summand is dropped with
    the arrows ``u`` and ``v``.  Only the case where ``u`` and ``v`` each occur
    in at most one further term (and never together) is supported.
    """
    quiver, pot = qp.quiver, qp.potential
    while True:
        quads = [(c, cyc) for c, cyc in pot.terms if len(cyc) == 2]
        if not quads:
            break
        eps, (u, v) = quads[0]
        if eps not in (1, -1):
            raise UnsupportedReduction(f"2-cycle term {u}{v} has coefficient {eps}", arrows=[u, v])
        rest = [(c, cyc) for c, cyc in pot.terms if cyc != (u, v)]
        with_u = [(c, cyc) for c, cyc in rest if u in cyc]
        with_v = [(c, cyc) for c, cyc in rest if v in cyc]
        if len(with_u) > 1 or len(with_v) > 1:
            raise UnsupportedReduction(
                f"arrow of 2-cycle {u}{v} occurs in several other terms", arrows=[u, v]
            )
        for c, cyc in with_u + with_v:
            if cyc.count(u) + cyc.count(v) > 1:
                raise UnsupportedReduction(f"term {list(cyc)} meets the 2-cycle {u}{v} twice", arrows=[u, v])
        terms = [(c, cyc) for c, cyc in rest if u not in cyc and v not in cyc]
        if with_u and with_v:
            (alpha, cu), (beta, cv) = with_u[0], with_v[0]
            A = _rotate_to(cu, u)[1:]
            B = _rotate_to(cv, v)[1:]  # v, then B; as a cycle this is B.v
            terms.append((-eps * alpha * beta, B + A))
        pot = Potential(tuple(terms))
        quiver = Quiver(quiver.vertices, tuple(a for a in quiver.arrows if a.id not in (u, v)))
    left = quiver.two_cycles()
    if left:
        a, b = left[0]
        raise UnsupportedReduction(
            f"2-cycle {a.id}/{b.id} has no cancelling potential term (degenerate QP)", arrows=[a.id, b.id]
        )
    return QP(quiver, pot)


@lru_cache(maxsize=1 << 16)
def mutate(qp: QP, k: int) -> QP:
    """DWZ mutation: :func:`premutate` followed by :func:`reduce`."""
    return reduce(premutate(qp, k))


def restrict(qp: QP, subset: Iterable[int]) -> QP:
    """Full sub-QP on ``subset``."""
    keep = set(subset)
    verts = set(qp.vertices)
    if not keep or not keep < verts:
        raise BadSubset(f"subset {sorted(keep)} must be a proper nonempty subset of {sorted(verts)}",
                        subset=sorted(keep))
    arrows = tuple(a for a in qp.quiver.arrows if a.src in keep and a.tgt in keep)
    ids = {a.id for a in arrows}
    terms = tuple((c, cyc) for c, cyc in qp.potential.terms if all(x in ids for x in cyc))
    return QP(Quiver(tuple(keep), arrows), Potential(terms))


@dataclass(frozen=True)
class MuResReport:
    quiver_equal: bool
    potential_equal: bool

    def to_dict(self) -> dict:
        return {"quiver_equal": self.quiver_equal, "potential_equal": self.potential_equal}


def mures_check(qp: QP, subset: Iterable[int], i: int) -> MuResReport:
    """Compare restriction of the mutation with mutation of the restriction."""
    subset = set(subset)
    if i not in subset:
        raise BadSubset(f"mutation vertex {i} must lie in the subset", subset=sorted(subset), vertex=i)
    left = restrict(mutate(qp, i), subset)
    right = mutate(restrict(qp, subset), i)
    return MuResReport(left.quiver.same_arrows(right.quiver), left.potential == right.potential)


@dataclass(frozen=True)
class GradedArrow:
    id: str
    src: int
    tgt: int
    degree: int


@dataclass
class GinzburgPresentation:
    vertices: tuple[int, ...]
    arrows: list[GradedArrow]
    differential: dict[str, PathSum]

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt, "degree": a.degree} for a in self.arrows],
            "differential": {
                g: [{"coef": c, "path": list(p)} for p, c in sorted(ps.items())]
                for g, ps in self.differential.items()
            },
        }


def ginzburg(qp: QP) -> GinzburgPresentation:
    """Graded quiver and differential on generators.

    ``d(a) = 0``, ``d(a*) = cyclic_derivative(W, a)`` and
    ``d(e_i) = sum over arrows of e_i (a* a - a a*) e_i`` in traversal order,
    i.e. ``+(a*, a)`` at the target of ``a`` and ``-(a, a*)`` at its source.
    """
    validate_qp(qp)
    q = qp.quiver
    taken = {a.id for a in q.arrows}
    graded = [GradedArrow(a.id, a.src, a.tgt, 0) for a in q.arrows]
    dual = {a.id: _fresh(a.id + "*", taken) for a in q.arrows}
    graded += [GradedArrow(dual[a.id], a.tgt, a.src, -1) for a in q.arrows]
    loop = {i: _fresh(f"e{i}", taken) for i in q.vertices}
    graded += [GradedArrow(loop[i], i, i, -2) for i in q.vertices]

    d: dict[str, PathSum] = {a.id: {} for a in q.arrows}
    for a in q.arrows:
        d[dual[a.id]] = cyclic_derivative(qp.potential, a.id)
    for i in q.vertices:
        ps: PathSum = defaultdict(int)
        for a in q.arrows:
            if a.tgt == i:
                ps[(dual[a.id], a.id)] += 1
            if a.src == i:
                ps[(a.id, dual[a.id])] -= 1
        d[loop[i]] = {p: c for p, c in ps.items() if c}
    return GinzburgPresentation(q.vertices, graded, d)
