"""Command-line front end.

Exit status is 0 on success, 1 for domain errors and 2 for usage errors; in
both failure cases a JSON error object is written to stderr.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Any, Sequence

from . import exchange, qp, quotient, seeds, surface, torus
from .errors import UsageError, WorkbenchError


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message, usage=self.format_usage().strip())


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _load(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}", path=path) from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc.msg}", path=path, line=exc.lineno) from None


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=1, sort_keys=True)


def _graph_out(g: exchange.ExchangeGraph, fmt: str, name: str) -> str:
    return exchange.export_dot(g, name) if fmt == "dot" else exchange.export_json(g)


# --------------------------------------------------------------------------
# handlers; each returns the stdout payload


def _qp(args) -> str:
    q = qp.QP.from_dict(_load(args.qp))
    qp.validate_qp(q)
    if args.action == "mutate":
        return _dump(qp.mutate(q, args.vertex).to_dict())
    if args.action == "restrict":
        return _dump(qp.restrict(q, args.subset).to_dict())
    if args.action == "ginzburg":
        return _dump(qp.ginzburg(q).to_dict())
    return _dump(qp.mures_check(q, args.subset, args.vertex).to_dict())


def _surface(args) -> str:
    s = surface.WDMS.from_dict(_load(args.wdms))
    if args.action == "validate":
        surface.validate_wdms(s)
        return _dump({"valid": True, **s.to_dict()})
    if args.action == "rank":
        return str(surface.rank(s))
    if not args.datum:
        raise UsageError("surface collapse needs --datum")
    return _dump(surface.collapse(s, surface.CollapseDatum.from_dict(_load(args.datum))).to_dict())


def _eg_polygon(args) -> str:
    g = exchange.polygon_graph(args.m, args.weights, limit=args.limit, jobs=args.jobs)
    if args.quotient_rotation:
        g = exchange.rotation_quotient(g, args.m)
    return _graph_out(g, args.format, "polygon")


def _eg_torus(args) -> str:
    if len(args.start) != 4:
        raise UsageError("--start takes four integers h1,h2,v1,v2", start=args.start)
    start = torus.normal_form(torus.TorusState(tuple(args.start[:2]), tuple(args.start[2:]), args.bubble))
    if args.invariant:
        return ",".join(map(str, torus.invariant(start)))
    if args.walk is not None:
        if args.seed is None:
            raise UsageError("--walk needs an explicit --seed")
        rng = random.Random(args.seed)
        steps = [{"flip": name, **s.to_dict()} for name, s in torus.random_walk(start, args.walk, rng)]
        return _dump({"start": start.to_dict(), "steps": steps})
    if args.bfs_depth is not None:
        states = sorted(torus.bfs_states(start, args.bfs_depth))
        invs = sorted({((a + c) % 3, (b + d) % 3) for a, b, c, d in states})
        return _dump({"start": start.to_dict(), "depth": args.bfs_depth, "count": len(states),
                      "invariants": [list(x) for x in invs]})
    return _dump(start.to_dict())


def _seed(args) -> str:
    s = seeds.init_seed(qp.QP.from_dict(_load(args.qp)))
    steps = seeds.parse_script(args.script)
    trail = seeds.run_script(s, steps)
    out: dict[str, Any] = {"steps": len(steps), "final": trail[-1].to_dict()}
    if args.check_duality:
        out["duality"] = [seeds.duality_check(x) for x in trail]
        out["duality_ok"] = all(out["duality"])
    return _dump(out)


def _quotient(args) -> str:
    g, report = quotient.quotient_graph(args.m, args.weights, limit=args.limit, jobs=args.jobs)
    if args.report:
        return _dump(report.to_dict())
    return _graph_out(g, args.format, "quotient")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mixang", description="Mixed-angulation and quotient-heart workbench.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("qp", help="quivers with potential")
    q.add_argument("action", choices=["mutate", "restrict", "ginzburg", "mures"])
    q.add_argument("--qp", required=True, help="QP JSON file, - for stdin")
    q.add_argument("--vertex", type=int)
    q.add_argument("--subset", type=_ints)
    q.set_defaults(func=_qp)

    s = sub.add_parser("surface", help="weighted decorated marked surfaces")
    s.add_argument("action", choices=["validate", "rank", "collapse"])
    s.add_argument("--wdms", required=True, help="surface JSON file, - for stdin")
    s.add_argument("--datum", help="collapse datum JSON file")
    s.set_defaults(func=_surface)

    eg = sub.add_parser("eg", help="exchange graphs")
    egs = eg.add_subparsers(dest="system", required=True, parser_class=_Parser)
    poly = egs.add_parser("polygon")
    poly.add_argument("--m", type=int, required=True)
    poly.add_argument("--weights", type=_ints, required=True)
    poly.add_argument("--quotient-rotation", action="store_true")
    poly.add_argument("--format", choices=["dot", "json"], default="json")
    poly.add_argument("--limit", type=int)
    poly.add_argument("--jobs", type=int, default=1)
    poly.set_defaults(func=_eg_polygon)
    tor = egs.add_parser("torus")
    tor.add_argument("--start", type=_ints, required=True, help="h1,h2,v1,v2")
    tor.add_argument("--bubble", choices=list(torus.CORNERS), default="BL")
    mode = tor.add_mutually_exclusive_group()
    mode.add_argument("--walk", type=int)
    mode.add_argument("--invariant", action="store_true")
    mode.add_argument("--bfs-depth", type=int)
    tor.add_argument("--seed", type=int)
    tor.set_defaults(func=_eg_torus)

    sd = sub.add_parser("seed", help="class-level tilt walks")
    sds = sd.add_subparsers(dest="action", required=True, parser_class=_Parser)
    walk = sds.add_parser("walk")
    walk.add_argument("--qp", required=True)
    walk.add_argument("--script", required=True, help='e.g. "1+,2-"')
    walk.add_argument("--check-duality", action="store_true")
    walk.set_defaults(func=_seed)

    qu = sub.add_parser("quotient", help="quotient-heart exchange graphs")
    qus = qu.add_subparsers(dest="action", required=True, parser_class=_Parser)
    qg = qus.add_parser("graph")
    qg.add_argument("--m", type=int, required=True)
    qg.add_argument("--weights", type=_ints, required=True)
    qg.add_argument("--report", action="store_true")
    qg.add_argument("--format", choices=["dot", "json"], default="json")
    qg.add_argument("--limit", type=int)
    qg.add_argument("--jobs", type=int, default=1)
    qg.set_defaults(func=_quotient)
    return p


def _check_args(args) -> None:
    if args.command == "qp":
        if args.action in ("mutate", "mures") and args.vertex is None:
            raise UsageError(f"qp {args.action} needs --vertex")
        if args.action in ("restrict", "mures") and args.subset is None:
            raise UsageError(f"qp {args.action} needs --subset")
    if getattr(args, "jobs", 1) < 1:
        raise UsageError("--jobs must be positive", jobs=args.jobs)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _check_args(args)
        payload = args.func(args)
    except UsageError as exc:
        print(json.dumps(exc.to_dict(), sort_keys=True), file=sys.stderr)
        return 2
    except WorkbenchError as exc:
        print(json.dumps(exc.to_dict(), sort_keys=True), file=sys.stderr)
        return 1
    except (KeyError, TypeError, ValueError) as exc:
        # malformed JSON documents that parse but do not match a schema
        err = {"error": "MalformedInput", "message": f"{type(exc).__name__}: {exc}"}
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return 1
    sys.stdout.write(payload if payload.endswith("\n") else payload + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
