"""Circulant incidence matrices of PG(2, q) and conic incidence vectors.

Points and lines are labelled by exponents of a primitive element alpha of
GF(q^3), taken modulo L = q^2 + q + 1.  A point i lies on line 0 iff the
trace of alpha^i vanishes; line j is line 0 shifted down by j.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .galois import FieldCtx, field_for_q


def plane_size(q: int) -> int:
    return q * q + q + 1


def shift_down(v: np.ndarray, t: int) -> np.ndarray:
    """Cyclic downward shift: out[(i + t) % L] = v[i]."""
    return np.roll(np.asarray(v), t)


def circulant(first_col: np.ndarray) -> np.ndarray:
    """Matrix whose column j is first_col shifted down by j."""
    first_col = np.asarray(first_col)
    L = len(first_col)
    return np.stack([shift_down(first_col, j) for j in range(L)], axis=1)


@dataclass(frozen=True)
class IncidenceMatrix:
    q: int
    first_col: tuple[int, ...]

    @property
    def L(self) -> int:
        return len(self.first_col)

    @property
    def matrix(self) -> np.ndarray:
        return circulant(np.array(self.first_col, dtype=np.int64))

    def column(self, j: int) -> np.ndarray:
        return shift_down(np.array(self.first_col, dtype=np.int64), j)

    def support(self) -> list[int]:
        """Sorted difference set: the points on line 0."""
        return [i for i, b in enumerate(self.first_col) if b]

    def line_points(self, j: int) -> list[int]:
        """Points of line j, ordered by their offset from j (i.e. the difference set order)."""
        return [(d + j) % self.L for d in self.support()]


@dataclass(frozen=True)
class QuadricVector:
    q: int
    bits: tuple[int, ...]
    r: int

    @property
    def L(self) -> int:
        return len(self.bits)

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.bits, dtype=np.int64)

    def points(self) -> list[int]:
        return [i for i, b in enumerate(self.bits) if b]


def _ctx(ctx_or_q) -> FieldCtx:
    return ctx_or_q if isinstance(ctx_or_q, FieldCtx) else field_for_q(int(ctx_or_q))


def trace_table(ctx: FieldCtx, count: int | None = None) -> list[int]:
    """Tr(alpha^i) for 0 <= i < count as integers mod p (prime q only)."""
    if ctx.r != 1:
        raise ValueError("integer trace values need a basis of GF(q); only prime q is supported")
    if count is None:
        count = plane_size(ctx.q)
    return [ctx.trace(g).coeffs[0] for g in ctx.powers(count)]


def singer_first_column(ctx) -> np.ndarray:
    ctx = _ctx(ctx)
    L = plane_size(ctx.q)
    return np.array([0 if ctx.trace(g) else 1 for g in ctx.powers(L)], dtype=np.int64)


def incidence_matrix(ctx) -> IncidenceMatrix:
    ctx = _ctx(ctx)
    col = singer_first_column(ctx)
    return IncidenceMatrix(ctx.q, tuple(int(b) for b in col))


def quadric_multiplier(q: int) -> int:
    """r with r^-1 = q + 1 (q even) or 2 (q odd), modulo L."""
    L = plane_size(q)
    return pow(q + 1 if q % 2 == 0 else 2, -1, L)


def quadric_vector(ctx_or_im) -> QuadricVector:
    """Conic incidence vector: bits[r*i mod L] = first_col[i]."""
    im = ctx_or_im if isinstance(ctx_or_im, IncidenceMatrix) else incidence_matrix(ctx_or_im)
    L, q = im.L, im.q
    r = quadric_multiplier(q)
    bits = [0] * L
    for i, b in enumerate(im.first_col):
        bits[(r * i) % L] = b
    return QuadricVector(q, tuple(bits), r)


def intersection_distribution(im: IncidenceMatrix, gq: QuadricVector) -> tuple[int, int, int]:
    """(#lines missing Q, #tangent lines, #secant lines)."""
    if im.q != gq.q or im.L != gq.L:
        raise ValueError(f"dimension mismatch: incidence q={im.q}, quadric q={gq.q}")
    dots = gq.vector @ im.matrix
    if not set(np.unique(dots).tolist()) <= {0, 1, 2}:
        raise ValueError(f"quadric meets a line in {dots.max()} points")
    return int((dots == 0).sum()), int((dots == 1).sum()), int((dots == 2).sum())


def expected_intersections(q: int) -> tuple[int, int, int]:
    return (q * q - q) // 2, q + 1, (q * q + q) // 2
