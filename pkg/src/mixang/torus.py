"""Coarse matrix model of mixed-angulations of the once-bordered torus with one weight-3 point.

A state is the pair of homology rows ``h`` (horizontal arc) and ``v``
(vertical arc) together with the corner of the fundamental square that
carries the boundary bubble.  The normal form has the bubble bottom-left.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import NonNormalForm, NonUnimodular, TorusError

CORNERS = ("BL", "TL", "TR", "BR")

Matrix = tuple[tuple[int, int], tuple[int, int]]

# left multiplication matrices of the four flips
FLIPS: dict[str, Matrix] = {
    "H_fwd": ((0, -1), (1, 2)),
    "H_fwd_inverse_arc": ((-1, 1), (-1, 0)),
    "V_fwd": ((2, 1), (-1, 0)),
    "V_fwd_inverse_arc": ((0, -1), (1, -1)),
}


def _mul(a: Matrix, b: Matrix) -> Matrix:
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def det(m: Matrix) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


@dataclass(frozen=True, order=True)
class TorusState:
    h: tuple[int, int]
    v: tuple[int, int]
    bubble: str = "BL"

    def __post_init__(self):
        if self.bubble not in CORNERS:
            raise TorusError(f"unknown bubble corner {self.bubble!r}", bubble=self.bubble)
        object.__setattr__(self, "h", tuple(int(x) for x in self.h))
        object.__setattr__(self, "v", tuple(int(x) for x in self.v))

    @property
    def matrix(self) -> Matrix:
        return (self.h, self.v)

    @classmethod
    def from_matrix(cls, m: Matrix, bubble: str = "BL") -> "TorusState":
        return cls(tuple(m[0]), tuple(m[1]), bubble)

    def to_dict(self) -> dict:
        return {"h": list(self.h), "v": list(self.v), "bubble": self.bubble}

    @classmethod
    def from_dict(cls, data: Mapping) -> "TorusState":
        return cls(tuple(data["h"]), tuple(data["v"]), data.get("bubble", "BL"))


def _step_to_bl(s: TorusState) -> TorusState:
    """One link of the equivalence chain, moving the bubble one corner towards BL."""
    (a, b), (c, d) = s.matrix
    if s.bubble == "TL":  # ((r,s),(-p,-q)) ~ ((p,q),(r,s))
        return TorusState((-c, -d), (a, b), "BL")
    if s.bubble == "TR":  # ((-p,-q),(-r,-s)) ~ ((r,s),(-p,-q)) with bubble TL
        return TorusState((-c, -d), (a, b), "TL")
    if s.bubble == "BR":  # ((-r,-s),(p,q)) ~ ((-p,-q),(-r,-s)) with bubble TR
        return TorusState((-c, -d), (a, b), "TR")
    return s


def normal_form(s: TorusState) -> TorusState:
    if abs(det(s.matrix)) != 1:
        raise NonUnimodular(f"det {det(s.matrix)} is not +-1", h=list(s.h), v=list(s.v))
    while s.bubble != "BL":
        s = _step_to_bl(s)
    return s


def flip(s: TorusState, which: str) -> TorusState:
    if s.bubble != "BL":
        raise NonNormalForm("flips act on normal forms", bubble=s.bubble)
    if which not in FLIPS:
        raise TorusError(f"unknown flip {which!r}", flip=which)
    return normal_form(TorusState.from_matrix(_mul(FLIPS[which], s.matrix)))


def invariant(s: TorusState) -> tuple[int, int]:
    """``(h + v) mod 3``."""
    if s.bubble != "BL":
        raise NonNormalForm("invariant is read off the normal form", bubble=s.bubble)
    return ((s.h[0] + s.v[0]) % 3, (s.h[1] + s.v[1]) % 3)


def moves(s: TorusState) -> list[tuple[str, TorusState]]:
    return [(name, flip(s, name)) for name in FLIPS]


def random_unimodular(rng: random.Random, steps: int = 8) -> TorusState:
    """A random matrix of determinant +-1 built from elementary moves."""
    m: Matrix = ((1, 0), (0, 1))
    elementary = [((1, 1), (0, 1)), ((1, -1), (0, 1)), ((1, 0), (1, 1)), ((1, 0), (-1, 1)), ((0, 1), (1, 0))]
    for _ in range(steps):
        m = _mul(rng.choice(elementary), m)
    return TorusState.from_matrix(m)


def random_walk(start: TorusState, steps: int, rng: random.Random) -> Iterable[tuple[str, TorusState]]:
    s = normal_form(start)
    names = sorted(FLIPS)
    for _ in range(steps):
        name = rng.choice(names)
        s = flip(s, name)
        yield name, s


def bfs_states(start: TorusState, depth: int) -> set[tuple[int, int, int, int]]:
    """Normal-form states within ``depth`` flips of ``start``, as ``(h1, h2, v1, v2)`` tuples.

    Left multiplication by any flip matrix keeps the bubble bottom-left, so the
    search runs directly on matrix entries.
    """
    s = normal_form(start)
    ops = [(a, b, c, d) for (a, b), (c, d) in FLIPS.values()]
    frontier = {s.h + s.v}
    seen = set(frontier)
    for _ in range(depth):
        nxt = set()
        for p, q, r, t in frontier:
            for a, b, c, d in ops:
                x = (a * p + b * r, a * q + b * t, c * p + d * r, c * q + d * t)
                if x not in seen:
                    seen.add(x)
                    nxt.add(x)
        frontier = nxt
    return seen
