"""Regenerate the golden exports: ``python3 tests/make_golden.py``."""

from pathlib import Path

from mixang.exchange import export_dot, export_json, polygon_graph, rotation_quotient

HERE = Path(__file__).parent / "golden"


def golden_graphs():
    hexagon = polygon_graph(6, [1, 1, 2])
    return {
        "hexagon_112": hexagon,
        "hexagon_112_z6": rotation_quotient(hexagon, 6),
        "pentagon_12": polygon_graph(5, [1, 2]),
    }


def main():
    HERE.mkdir(exist_ok=True)
    for name, g in golden_graphs().items():
        (HERE / f"{name}.json").write_text(export_json(g))
        (HERE / f"{name}.dot").write_text(export_dot(g, name))


if __name__ == "__main__":
    main()
