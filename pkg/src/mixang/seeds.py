"""Class-level heart seeds and their paired silting data.

A seed stores a quiver with potential and two integer matrices, both
column-major: column ``j`` of ``C`` is the class of the ``j``-th simple, column
``j`` of ``G`` the class of the ``j``-th silting summand, in the basis of the
initial simples.  Columns are indexed by the sorted vertex list of the QP.

The Ext-quiver convention is ``dim Ext^1(S_i, S_j) = #arrows(j -> i)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from operator import mul
from typing import Iterable, Mapping, Sequence

from .errors import SeedError, UnknownVertex
from .qp import QP, mutate, validate_qp

Matrix = tuple[tuple[int, ...], ...]  # tuple of columns


@lru_cache(maxsize=None)
def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for i in range(n)) for j in range(n))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def pairing(g: Matrix, c: Matrix) -> Matrix:
    """``G^T C`` as a row-major matrix; entry ``(i, j)`` is ``<g_i, c_j>``."""
    return tuple(tuple(sum(map(mul, gi, cj)) for cj in c) for gi in g)


def determinant(m: Matrix) -> int:
    """Exact integer determinant by fraction-free elimination (Bareiss)."""
    a = [list(row) for row in transpose(m)]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class Seed:
    qp: QP
    C: Matrix
    G: Matrix

    @property
    def vertices(self) -> tuple[int, ...]:
        return self.qp.vertices

    def index(self, k: int) -> int:
        try:
            return self.vertices.index(k)
        except ValueError:
            raise UnknownVertex(f"vertex {k} not in seed", vertex=k) from None

    def column(self, k: int) -> tuple[int, ...]:
        return self.C[self.index(k)]

    def to_dict(self) -> dict:
        return {**self.qp.to_dict(), "C": [list(c) for c in self.C], "G": [list(g) for g in self.G]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "Seed":
        return cls(QP.from_dict(data), tuple(tuple(c) for c in data["C"]), tuple(tuple(g) for g in data["G"]))


def init_seed(qp: QP) -> Seed:
    validate_qp(qp)
    n = len(qp.vertices)
    return Seed(qp, identity(n), identity(n))


def _axpy(x: Sequence[int], a: int, y: Sequence[int]) -> tuple[int, ...]:
    return tuple(xi + a * yi for xi, yi in zip(x, y))


def _neg(x: Sequence[int]) -> tuple[int, ...]:
    return tuple(-v for v in x)


def _tilt(s: Seed, k: int, forward: bool, relabel: bool) -> Seed:
    kk = s.index(k)
    verts = s.vertices
    q = s.qp.quiver
    # forward: ext[j] = dim Ext^1(S_j, S_k) = #arrows(k -> j); backward uses arrows j -> k
    ext = [q.count(k, j) if forward else q.count(j, k) for j in verts]
    ck, gk = s.C[kk], s.G[kk]
    C = tuple(_neg(ck) if j == kk else _axpy(c, ext[j], ck) for j, c in enumerate(s.C))
    new_g = _neg(gk)
    for i, g in enumerate(s.G):
        if i != kk and ext[i]:
            new_g = _axpy(new_g, ext[i], g)
    G = tuple(new_g if i == kk else g for i, g in enumerate(s.G))
    return Seed(_mutate_relabelled(s.qp, k) if relabel else mutate(s.qp, k), C, G)


@lru_cache(maxsize=1 << 16)
def _mutate_relabelled(qp: QP, k: int) -> QP:
    return mutate(qp, k).relabel()


def tilt_forward(s: Seed, k: int, relabel: bool = True) -> Seed:
    """Forward simple tilt at ``k`` and the matching silting mutation.

    ``relabel`` renames arrows after mutation so arrow ids stay short along long walks.
    """
    return _tilt(s, k, True, relabel)


def tilt_backward(s: Seed, k: int, relabel: bool = True) -> Seed:
    return _tilt(s, k, False, relabel)


def tilt(s: Seed, k: int, direction: str) -> Seed:
    if direction in ("+", "fwd", "forward"):
        return tilt_forward(s, k)
    if direction in ("-", "−", "bwd", "backward"):
        return tilt_backward(s, k)
    raise SeedError(f"unknown tilt direction {direction!r}", direction=direction)


def duality_check(s: Seed) -> bool:
    """``G^T C`` is the identity."""
    return pairing(s.G, s.C) == identity(len(s.C))


def sign_coherent(s: Seed) -> bool:
    return all(all(x >= 0 for x in c) or all(x <= 0 for x in c) for c in s.C)


def same_seed(a: Seed, b: Seed) -> bool:
    """Equal class data and equal arrow multisets (arrow names ignored)."""
    return a.C == b.C and a.G == b.G and a.qp.quiver.same_arrows(b.qp.quiver)


def parse_script(script: str) -> list[tuple[int, str]]:
    """``"1+,2-"`` -> ``[(1, "+"), (2, "-")]``."""
    steps = []
    for tok in script.replace(" ", "").split(","):
        if not tok:
            continue
        tok = tok.replace("−", "-")
        if tok[-1] not in "+-":
            raise SeedError(f"tilt step {tok!r} must end in + or -", step=tok)
        try:
            steps.append((int(tok[:-1]), tok[-1]))
        except ValueError:
            raise SeedError(f"bad vertex in tilt step {tok!r}", step=tok) from None
    return steps


def run_script(s: Seed, steps: Iterable[tuple[int, str]]) -> list[Seed]:
    out = [s]
    for k, d in steps:
        s = tilt(s, k, d)
        out.append(s)
    return out


def random_walk(s: Seed, steps: int, rng: random.Random) -> Iterable[tuple[int, str, Seed]]:
    verts = list(s.vertices)
    for _ in range(steps):
        k = rng.choice(verts)
        d = rng.choice("+-")
        s = tilt(s, k, d)
        yield k, d, s
