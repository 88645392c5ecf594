"""Acceptance gate: one PASS/FAIL line per criterion.

Run with pytest (lines are printed in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.  Tolerances are exact equality
throughout; runtime bounds are in seconds.
"""

import itertools
import random
import sys
import time
from collections import Counter
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from make_golden import golden_graphs  # noqa: E402
from mixang.errors import Incompatible, KappaTooSmall  # noqa: E402
from mixang.exchange import components, export_dot, export_json, regularity  # noqa: E402
from mixang.qp import mures_check, mutate  # noqa: E402
from mixang.quotient import (  # noqa: E402
    project,
    quotient_graph,
    refinement_labels,
)
from mixang.seeds import duality_check, init_seed, same_seed, tilt  # noqa: E402
from mixang.surface import (  # noqa: E402
    WDMS,
    CollapseDatum,
    collapse,
    complementary_arcs,
    default_labels,
    enumerate_dissections,
    flip_backward,
    flip_forward,
    forward_arc,
    kirkman_cayley,
    quiver_from_triangulation,
    rank,
    refine_flip_witness,
    refinement_graph_connected,
    refinements,
    triangulations,
    validate_wdms,
)
from mixang.torus import FLIPS, TorusState, bfs_states, flip, invariant, random_unimodular  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"

# runtime bounds, seconds
BOUNDS = {1: 5.0, 2: 1.0, 3: 30.0, 4: 30.0, 5: 10.0, 7: 10.0, 8: 5.0, 9: 10.0}
TORUS_STARTS, TORUS_STEPS, TORUS_DEPTH = 100, 100, 12
WALK_SEEDS, WALK_STEPS, MAX_N = 10, 1000, 6
I_WALKS, I_WALK_LENGTH = 500, 10

RESULTS: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str, elapsed: float | None = None) -> bool:
    if elapsed is not None:
        bound = BOUNDS.get(n)
        detail += f"; {elapsed:.2f}s"
        if bound is not None:
            detail += f" (< {bound:g}s)"
            ok = ok and elapsed < bound
    RESULTS[n] = (ok, detail)
    return ok


def summary_lines() -> list[str]:
    return [f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}" for n, (ok, detail) in sorted(RESULTS.items())]


# --------------------------------------------------------------------------


def test_c01_torus_invariant():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    violations = flips = 0
    names = sorted(FLIPS)
    for _ in range(TORUS_STARTS):
        s = random_unimodular(rng)
        inv = invariant(s)
        for _ in range(TORUS_STEPS):
            for name in names:
                violations += invariant(flip(s, name)) != inv
            s = flip(s, rng.choice(names))
            flips += 1
    a, b = TorusState((1, 0), (0, 1)), TorusState((1, 1), (0, 1))
    inv_a, inv_b = invariant(a), invariant(b)
    sa, sb = bfs_states(a, TORUS_DEPTH), bfs_states(b, TORUS_DEPTH)
    disjoint = not sa & sb
    ok = violations == 0 and inv_a == (1, 1) and inv_b == (1, 2) and disjoint
    ok = record(1, ok, f"{flips} flips, {violations} violations; invariants {inv_a} vs {inv_b}; "
                       f"depth-{TORUS_DEPTH} BFS {len(sa)}/{len(sb)} states, disjoint={disjoint}",
                time.perf_counter() - t0)
    assert ok, RESULTS[1]


def test_c02_hexagon_graph():
    t0 = time.perf_counter()
    states = enumerate_dissections(6, [1, 1, 2])
    brute = oracles.dissections(6, [1, 1, 2])
    graphs = golden_graphs()
    g, q = graphs["hexagon_112"], graphs["hexagon_112_z6"]
    comps = len(components(g))
    golden_ok = all(
        export_json(graphs[n]) == (GOLDEN / f"{n}.json").read_text()
        and export_dot(graphs[n], n) == (GOLDEN / f"{n}.dot").read_text()
        for n in ("hexagon_112", "hexagon_112_z6")
    )
    orbits = sorted(q.metadata["orbit_sizes"].values())
    ok = (len(states) == 21 and {a.diagonals for a in states} == brute and kirkman_cayley(6, 2) == 21
          and len(g.vertices) == 21 and len(g.edges) == 42 and regularity(g, 2) and golden_ok)
    ok = record(2, ok, f"{len(states)} dissections (oracle {len(brute)}, D(6,2)={kirkman_cayley(6, 2)}); "
                       f"{len(g.edges)} edges, (2,2)-regular={regularity(g, 2)}; {comps} component(s); "
                       f"Z6 quotient {len(q.vertices)} orbits {orbits}, {len(q.edges)} edges; golden match={golden_ok}",
                time.perf_counter() - t0)
    assert ok, RESULTS[2]


def flip_relabel(t, labels, g):
    new = forward_arc(t, g)
    lab = {d: n for d, n in labels.items() if d != g}
    lab[new] = labels[g]
    return flip_forward(t, g), lab


def test_c03_flip_mutation():
    t0 = time.perf_counter()
    cases = bad = 0
    for m in range(4, 10):
        for t in triangulations(m):
            labels = default_labels(t)
            qp = quiver_from_triangulation(t, labels)
            for g in t.sorted_diagonals:
                t2, lab2 = flip_relabel(t, labels, g)
                cases += 1
                bad += not quiver_from_triangulation(t2, lab2).quiver.same_arrows(mutate(qp, labels[g]).quiver)
    ok = record(3, bad == 0, f"{cases} (triangulation, diagonal) pairs for 4 <= m <= 9, {bad} mismatches",
                time.perf_counter() - t0)
    assert ok, RESULTS[3]


def test_c04_mures():
    t0 = time.perf_counter()
    cases = quiver_ok = pot_ok = 0
    for m in range(4, 9):
        for t in triangulations(m):
            qp = quiver_from_triangulation(t)
            verts = qp.vertices
            for r in range(1, len(verts)):
                for I in itertools.combinations(verts, r):
                    for i in I:
                        rep = mures_check(qp, I, i)
                        cases += 1
                        quiver_ok += rep.quiver_equal
                        pot_ok += rep.potential_equal
    rate = pot_ok / cases if cases else 1.0
    ok = record(4, cases > 0 and quiver_ok == cases,
                f"{cases} (QP, I, i) cases for m <= 8, quiver-level equal {quiver_ok}/{cases}; "
                f"potential-level diagnostic rate {rate:.4f}",
                time.perf_counter() - t0)
    assert ok, RESULTS[4]


def walk_starts():
    """Ten disc seeds per vertex count, spread evenly over the triangulations."""
    for n in range(1, MAX_N + 1):
        ts = triangulations(n + 3)
        for j in range(WALK_SEEDS):
            yield n, j, ts[(j * len(ts)) // WALK_SEEDS]


def walk(n, j, t):
    rng = random.Random(1000 * n + j)
    s = init_seed(quiver_from_triangulation(t))
    verts = list(s.vertices)
    for _ in range(WALK_STEPS):
        k, d = rng.choice(verts), rng.choice("+-")
        nxt = tilt(s, k, d)
        yield s, k, d, nxt
        s = nxt


def test_c05_duality():
    t0 = time.perf_counter()
    steps = bad = 0
    for n, j, t in walk_starts():
        for _, _, _, s in walk(n, j, t):
            steps += 1
            bad += not duality_check(s)
    ok = record(5, bad == 0 and steps == MAX_N * WALK_SEEDS * WALK_STEPS,
                f"{steps} tilt steps on {MAX_N * WALK_SEEDS} disc seeds (n <= {MAX_N}), {bad} pairing failures",
                time.perf_counter() - t0)
    assert ok, RESULTS[5]


def test_c06_round_trips():
    t0 = time.perf_counter()
    tilt_cases = tilt_bad = 0
    for n, j, t in walk_starts():
        for s, k, d, nxt in walk(n, j, t):
            tilt_cases += 1
            tilt_bad += not same_seed(tilt(nxt, k, "-" if d == "+" else "+"), s)
    flip_cases = flip_bad = 0
    for m, w in ((6, [1, 1, 2]), (5, [1, 2])):
        for a in enumerate_dissections(m, w):
            for g in a.sorted_diagonals:
                flip_cases += 1
                flip_bad += flip_backward(flip_forward(a, g), forward_arc(a, g)) != a
    mut_cases = mut_bad = 0
    for m in range(4, 10):
        for t in triangulations(m):
            qp = quiver_from_triangulation(t)
            for k in qp.vertices:
                mut_cases += 1
                mut_bad += not mutate(mutate(qp, k), k).quiver.same_arrows(qp.quiver)
    ok = record(6, tilt_bad == flip_bad == mut_bad == 0,
                f"tilt inverses {tilt_cases - tilt_bad}/{tilt_cases}, flip inverses {flip_cases - flip_bad}/{flip_cases}, "
                f"double mutations {mut_cases - mut_bad}/{mut_cases}",
                time.perf_counter() - t0)
    assert ok, RESULTS[6]


@pytest.mark.xfail(strict=True, reason="class data has monodromy over the flip graph; see the decisions ledger")
def test_c07_eg_isomorphism():
    t0 = time.perf_counter()
    parts, ok = [], True
    for m, w in ((6, [1, 1, 2]), (5, [1, 2])):
        _, rep = quotient_graph(m, w)
        d = rep.diagnostics
        ok = ok and rep.bijection_ok and rep.edge_commute_ok and not rep.collisions
        right = f"{rep.vertices_right}{'+ (truncated)' if d['right_truncated'] else ''}"
        parts.append(f"{m}-gon {w}: left {rep.vertices_left}, right {right}, bijection={rep.bijection_ok}, "
                     f"edges commute={rep.edge_commute_ok} ({d['edge_mismatches']}/{d['edges_left']} lift elsewhere), "
                     f"collisions={len(rep.collisions)}")
    ok = record(7, ok, "; ".join(parts), time.perf_counter() - t0)
    assert ok, RESULTS[7]


def test_c08_refinements():
    t0 = time.perf_counter()
    pairs = witnesses = states = connected = 0
    for m, w in ((6, [1, 1, 2]), (5, [1, 2])):
        for a in enumerate_dissections(m, w):
            states += 1
            connected += refinement_graph_connected(a)
            for g in a.sorted_diagonals:
                pairs += 1
                t = refine_flip_witness(a, g)
                comp = t.diagonals - a.diagonals
                witnesses += flip_forward(t, g).diagonals - comp == flip_forward(a, g).diagonals
    ok = record(8, witnesses == pairs and connected == states,
                f"witnesses {witnesses}/{pairs} (state, arc) pairs; refinement graphs connected {connected}/{states}",
                time.perf_counter() - t0)
    assert ok, RESULTS[8]


def test_c09_quotient_invariance():
    t0 = time.perf_counter()
    rng = random.Random(9)
    refs = walks = bad = 0
    for a in enumerate_dissections(6, [1, 1, 2]):
        for t in refinements(a):
            refs += 1
            labels = refinement_labels(t, a)
            I = sorted(labels[c] for c in complementary_arcs(t, a))
            s0 = init_seed(quiver_from_triangulation(t, labels))
            base = project(s0, I).projectedC
            for _ in range(I_WALKS):
                s = s0
                for _ in range(I_WALK_LENGTH):
                    s = tilt(s, rng.choice(I), rng.choice("+-"))
                walks += 1
                bad += project(s, I).projectedC != base
    ok = record(9, bad == 0, f"{walks} walks of length {I_WALK_LENGTH} over {refs} hexagon refinements, "
                             f"{bad} changes of projected classes", time.perf_counter() - t0)
    assert ok, RESULTS[9]


def test_c10_validation_formulas():
    checks = []
    for s, good in ((WDMS(0, (6,), (1, 1, 2)), True), (WDMS(0, (5,), (1, 2)), True),
                    (WDMS(0, (6,), (1, 1, 1)), False), (WDMS(1, (1,), (3,)), True)):
        try:
            validate_wdms(s)
            checks.append(good)
        except Incompatible:
            checks.append(not good)
    checks += [rank(WDMS(0, (6,), (1, 1, 2))) == 3, rank(WDMS(0, (5,), (1, 2))) == 2,
               rank(WDMS(1, (1,), (3,))) == 4]
    simple = WDMS(0, (6,), (1, 1, 1, 1))
    out = collapse(simple, CollapseDatum.from_dict({"components": [{"kappas": [5], "decorations": [0, 1, 2]}]}))
    checks.append(Counter(out.decorations) == Counter({1: 1, 3: 1}))
    try:
        collapse(simple, CollapseDatum.from_dict({"components": [{"kappas": [2], "decorations": [0]}]}))
        checks.append(False)
    except KappaTooSmall:
        checks.append(True)
    ok = record(10, all(checks), f"{sum(checks)}/{len(checks)} worked examples (compatibility, rank, kappa=5 -> weight 3)")
    assert ok, RESULTS[10]


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_c")]
    for fn in tests:
        try:
            fn()
        except AssertionError:
            pass
    print("\n".join(summary_lines()))
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
