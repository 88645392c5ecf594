"""Exchange graphs over arbitrary state spaces.

States are anything with a canonical JSON serialization (``to_dict`` or a
plain JSON value).  Vertex keys are short SHA-256 digests of that
serialization, so graphs built from the same inputs export byte-identically.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Mapping

from .errors import ExchangeError, OperatorFailure, Truncated, WorkbenchError
from .surface import PolygonDissection, _norm

Moves = Callable[[Any], Iterable[tuple[str, Any]]]


def serialize(state: Any) -> Any:
    return state.to_dict() if hasattr(state, "to_dict") else state


def state_key(state: Any) -> str:
    blob = json.dumps(serialize(state), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class ExchangeGraph:
    vertices: dict[str, Any] = field(default_factory=dict)
    edges: set[tuple[str, str, str]] = field(default_factory=set)
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def truncated(self) -> bool:
        return bool(self.metadata.get("truncated", False))

    def sorted_edges(self) -> list[tuple[str, str, str]]:
        return sorted(self.edges)

    def out_degree(self) -> Counter:
        deg = Counter({k: 0 for k in self.vertices})
        deg.update(s for s, _, _ in self.edges)
        return deg

    def in_degree(self) -> Counter:
        deg = Counter({k: 0 for k in self.vertices})
        deg.update(t for _, t, _ in self.edges)
        return deg

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExchangeGraph):
            return NotImplemented
        return (
            {k: serialize(v) for k, v in self.vertices.items()}
            == {k: serialize(v) for k, v in other.vertices.items()}
            and self.edges == other.edges
            and self.metadata == other.metadata
        )


def build(
    start: Any,
    moves: Moves,
    key: Callable[[Any], str] = state_key,
    limit: int | None = None,
    description: str = "",
    jobs: int = 1,
) -> ExchangeGraph:
    """Breadth-first closure of ``start`` under ``moves``.

    ``moves(state)`` yields ``(label, next_state)`` pairs.  Each BFS layer is
    sorted by key before expansion, so the result does not depend on ``jobs``.
    """
    g = ExchangeGraph(metadata={"generator": description, "truncated": False})
    k0 = key(start)
    g.vertices[k0] = start
    if limit is not None and limit <= 1:
        g.metadata["truncated"] = True
        return g
    frontier = [k0]

    def expand(k: str):
        try:
            return k, list(moves(g.vertices[k]))
        except WorkbenchError as exc:
            raise OperatorFailure(f"operator failed at {k}: {exc}", key=k, cause=exc.to_dict()) from exc

    pool = ThreadPoolExecutor(jobs) if jobs > 1 else None
    try:
        while frontier:
            results = pool.map(expand, frontier) if pool else map(expand, frontier)
            found: dict[str, Any] = {}
            for k, out in results:
                for label, nxt in out:
                    nk = key(nxt)
                    g.edges.add((k, nk, str(label)))
                    if nk not in g.vertices:
                        found.setdefault(nk, nxt)
            frontier = []
            for nk in sorted(found):
                if limit is not None and len(g.vertices) >= limit:
                    g.metadata["truncated"] = True
                    break
                g.vertices[nk] = found[nk]
                frontier.append(nk)
            if g.truncated:
                break
    finally:
        if pool:
            pool.shutdown()
    if g.truncated:
        g.edges = {e for e in g.edges if e[0] in g.vertices and e[1] in g.vertices}
    g.vertices = dict(sorted(g.vertices.items()))
    return g


def components(g: ExchangeGraph) -> list[list[str]]:
    """Weakly connected components, each sorted, ordered by smallest key."""
    if g.truncated:
        raise Truncated("components of a truncated graph are meaningless")
    adj: dict[str, set[str]] = defaultdict(set)
    for s, t, _ in g.edges:
        adj[s].add(t)
        adj[t].add(s)
    seen: set[str] = set()
    out = []
    for k in sorted(g.vertices):
        if k in seen:
            continue
        comp, todo = [], [k]
        seen.add(k)
        while todo:
            x = todo.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        out.append(sorted(comp))
    return out


def regularity(g: ExchangeGraph, m: int) -> bool:
    """Every vertex has out-degree and in-degree ``m``."""
    if g.truncated:
        raise Truncated("regularity of a truncated graph is meaningless")
    return all(d == m for d in g.out_degree().values()) and all(d == m for d in g.in_degree().values())


# --------------------------------------------------------------------------
# polygon flip systems


def diagonal_label(d: tuple[int, int]) -> str:
    return f"{d[0]}-{d[1]}"


def polygon_moves(a: PolygonDissection) -> list[tuple[str, PolygonDissection]]:
    from .surface import flip_forward

    return [(diagonal_label(d), flip_forward(a, d)) for d in a.sorted_diagonals]


def polygon_graph(m: int, weights: Iterable[int], limit: int | None = None, jobs: int = 1) -> ExchangeGraph:
    """Forward-flip graph of the ``weights``-dissections of the ``m``-gon, from the first enumerated state."""
    from .surface import enumerate_dissections

    weights = sorted(weights)
    start = enumerate_dissections(m, weights)[0]
    g = build(start, polygon_moves, limit=limit, jobs=jobs,
              description=f"polygon m={m} weights={','.join(map(str, weights))}")
    g.metadata.update({"m": m, "weights": weights})
    return g


def _rotate_label(label: str, r: int, m: int) -> str:
    p, q = (int(x) for x in label.split("-"))
    return diagonal_label(_norm(((p + r) % m, (q + r) % m)))


def rotation_quotient(g: ExchangeGraph, m: int) -> ExchangeGraph:
    """Identify dissection states under ``i -> i + 1 mod m``.

    Each quotient edge is a rotation orbit of upstairs edges; its orbit size
    is stored in ``metadata["edge_orbit_sizes"]``.
    """
    def rep(a: PolygonDissection) -> tuple[PolygonDissection, list[int]]:
        rots = [(a.rotate(r).sorted_diagonals, r) for r in range(m)]
        best = min(d for d, _ in rots)
        return PolygonDissection(m, frozenset(best)), [r for d, r in rots if d == best]

    reps: dict[str, tuple[str, list[int]]] = {}
    q = ExchangeGraph(metadata={**g.metadata, "quotient": f"Z/{m}", "truncated": g.truncated})
    sizes: Counter = Counter()
    for k, a in g.vertices.items():
        r_state, shifts = rep(a)
        rk = state_key(r_state)
        q.vertices[rk] = r_state
        reps[k] = (rk, shifts)
        sizes[rk] += 1
    edge_orbits: dict[tuple[str, str, str], set[tuple[str, str, str]]] = defaultdict(set)
    for s, t, label in g.edges:
        rk, shifts = reps[s]
        images = []
        for r in shifts:
            tgt = g.vertices[t].rotate(r)
            images.append((rk, reps[state_key(tgt)][0], _rotate_label(label, r, m)))
        edge_orbits[min(images)].add((s, t, label))
    q.edges = set(edge_orbits)
    q.vertices = dict(sorted(q.vertices.items()))
    q.metadata["orbit_sizes"] = dict(sorted(sizes.items()))
    q.metadata["edge_orbit_sizes"] = {
        "|".join(e): len(v) for e, v in sorted(edge_orbits.items())
    }
    return q


# --------------------------------------------------------------------------
# export


def export_dot(g: ExchangeGraph, name: str = "") -> str:
    lines = [f"digraph {name + ' ' if name else ''}{{"]
    for k in sorted(g.vertices):
        lines.append(f'  "{k}";')
    for s, t, label in g.sorted_edges():
        lines.append(f'  "{s}" -> "{t}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_json(g: ExchangeGraph) -> str:
    payload = {
        "vertices": [{"key": k, "state": serialize(v)} for k, v in sorted(g.vertices.items())],
        "edges": [{"src": s, "tgt": t, "label": label} for s, t, label in g.sorted_edges()],
        "metadata": g.metadata,
    }
    return json.dumps(payload, indent=1, sort_keys=True) + "\n"


def parse_json(text: str, decode: Callable[[Any], Any] | None = None) -> ExchangeGraph:
    """Inverse of :func:`export_json`; ``decode`` rebuilds state objects from their dicts."""
    data = json.loads(text)
    decode = decode or (lambda x: x)
    g = ExchangeGraph(metadata=data.get("metadata", {}))
    for v in data["vertices"]:
        g.vertices[v["key"]] = decode(v["state"])
    for e in data["edges"]:
        if e["src"] not in g.vertices or e["tgt"] not in g.vertices:
            raise ExchangeError("edge endpoint missing", edge=e)
        g.edges.add((e["src"], e["tgt"], e["label"]))
    return g


def to_networkx(g: ExchangeGraph):
    import networkx as nx

    h = nx.MultiDiGraph()
    h.add_nodes_from(sorted(g.vertices))
    for s, t, label in g.sorted_edges():
        h.add_edge(s, t, label=label)
    return h
