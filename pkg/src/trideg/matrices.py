"""Matrices over a path algebra: morphisms between sums of projectives.

A :class:`HomMatrix` from ``P_{c_1} + ... + P_{c_m}`` to ``P_{r_1} + ... + P_{r_n}``
stores, for every entry ``(i, j)``, a coefficient vector over the path basis
supported on ``e_{r_i} A e_{c_j}``.  Composition is matrix multiplication
with algebra products.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import exactla
from .algebra import AlgebraElement, PathAlgebra


def hom_mask(alg: PathAlgebra, rows: Sequence[str], cols: Sequence[str]) -> np.ndarray:
    """Boolean array ``(len(rows), len(cols), dim A)`` of admissible coefficients."""
    mask = np.zeros((len(rows), len(cols), alg.dim), dtype=bool)
    for i, w in enumerate(rows):
        for j, v in enumerate(cols):
            mask[i, j] = alg.hom_mask(v, w)
    return mask


class HomMatrix:
    __slots__ = ("algebra", "rows", "cols", "data")

    def __init__(self, algebra: PathAlgebra, rows: Sequence[str], cols: Sequence[str],
                 data: np.ndarray | None = None, check: bool = True):
        rows, cols = tuple(rows), tuple(cols)
        shape = (len(rows), len(cols), algebra.dim)
        if data is None:
            arr = np.zeros(shape, dtype=np.int64)
        else:
            arr = np.asarray(data, dtype=np.int64).reshape(shape) % algebra.field
        if check and arr.size and (arr[~hom_mask(algebra, rows, cols)] != 0).any():
            raise ValueError("matrix entry outside its hom space e_target A e_source")
        arr.setflags(write=False)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("HomMatrix is immutable")

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, alg: PathAlgebra, rows: Sequence[str], cols: Sequence[str]) -> HomMatrix:
        return cls(alg, rows, cols, check=False)

    @classmethod
    def identity(cls, alg: PathAlgebra, verts: Sequence[str]) -> HomMatrix:
        verts = tuple(verts)
        data = np.zeros((len(verts), len(verts), alg.dim), dtype=np.int64)
        for i, v in enumerate(verts):
            data[i, i, alg.path_index(f"e_{v}")] = 1
        return cls(alg, verts, verts, data, check=False)

    @classmethod
    def from_entries(cls, alg: PathAlgebra, rows: Sequence[str], cols: Sequence[str],
                     entries) -> HomMatrix:
        """Build from a nested list of algebra elements or ``{path: coeff}`` dicts."""
        data = np.zeros((len(rows), len(cols), alg.dim), dtype=np.int64)
        entries = list(entries)
        if len(entries) != len(rows):
            raise ValueError(f"expected {len(rows)} rows, got {len(entries)}")
        for i, row in enumerate(entries):
            row = list(row)
            if len(row) != len(cols):
                raise ValueError(f"row {i}: expected {len(cols)} entries, got {len(row)}")
            for j, x in enumerate(row):
                if isinstance(x, AlgebraElement):
                    data[i, j] = x.vector
                elif x:
                    data[i, j] = alg.element(x).vector
        return cls(alg, rows, cols, data)

    @classmethod
    def block(cls, alg: PathAlgebra, row_blocks: Sequence[Sequence[str]],
              col_blocks: Sequence[Sequence[str]], blocks) -> HomMatrix:
        """Assemble from a grid of sub-matrices; ``None`` stands for zero."""
        rows = tuple(v for b in row_blocks for v in b)
        cols = tuple(v for b in col_blocks for v in b)
        data = np.zeros((len(rows), len(cols), alg.dim), dtype=np.int64)
        r0 = 0
        for bi, rb in enumerate(row_blocks):
            c0 = 0
            for bj, cb in enumerate(col_blocks):
                m = blocks[bi][bj]
                if m is not None:
                    if m.rows != tuple(rb) or m.cols != tuple(cb):
                        raise ValueError("block shape mismatch")
                    data[r0:r0 + len(rb), c0:c0 + len(cb)] = m.data
                c0 += len(cb)
            r0 += len(rb)
        return cls(alg, rows, cols, data, check=False)

    # -- arithmetic -------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def _same_shape(self, other: HomMatrix):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def __add__(self, other: HomMatrix) -> HomMatrix:
        self._same_shape(other)
        return HomMatrix(self.algebra, self.rows, self.cols, self.data + other.data, check=False)

    def __sub__(self, other: HomMatrix) -> HomMatrix:
        self._same_shape(other)
        return HomMatrix(self.algebra, self.rows, self.cols, self.data - other.data, check=False)

    def __neg__(self) -> HomMatrix:
        return HomMatrix(self.algebra, self.rows, self.cols, -self.data, check=False)

    def scale(self, c: int) -> HomMatrix:
        return HomMatrix(self.algebra, self.rows, self.cols, self.data * (int(c) % self.algebra.field),
                         check=False)

    def __matmul__(self, other: HomMatrix) -> HomMatrix:
        """Composite ``self o other``."""
        if self.cols != other.rows:
            raise ValueError(f"cannot compose: {self.cols} vs {other.rows}")
        alg, p, d = self.algebra, self.algebra.field, self.algebra.dim
        r, k = len(self.rows), len(other.cols)
        c = len(self.cols)
        if r == 0 or k == 0 or c == 0:
            return HomMatrix.zero(alg, self.rows, other.cols)
        # (i, x, j) x (j, k, y) -> (i, x, k, y), then contract (x, y) with the structure constants
        left = self.data.transpose(0, 2, 1).reshape(r * d, c)
        right = other.data.reshape(c, k * d)
        pairs = exactla.matmul(left, right, p).reshape(r, d, k, d).transpose(0, 2, 1, 3)
        out = exactla.matmul(pairs.reshape(r * k, d * d), alg.mult.reshape(d * d, d), p)
        return HomMatrix(alg, self.rows, other.cols, out.reshape(r, k, d), check=False)

    def is_zero(self) -> bool:
        return not self.data.any()

    def __eq__(self, other):
        if not isinstance(other, HomMatrix):
            return NotImplemented
        return (self.rows == other.rows and self.cols == other.cols
                and self.algebra == other.algebra and np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.rows, self.cols, self.data.tobytes()))

    def entry(self, i: int, j: int) -> AlgebraElement:
        return AlgebraElement(self.algebra, self.data[i, j])

    def entries(self) -> list[list[AlgebraElement]]:
        return [[self.entry(i, j) for j in range(len(self.cols))] for i in range(len(self.rows))]

    def submatrix(self, rows: slice, cols: slice) -> HomMatrix:
        return HomMatrix(self.algebra, self.rows[rows], self.cols[cols], self.data[rows, cols],
                         check=False)

    def respects_homs(self) -> bool:
        if not self.data.size:
            return True
        return not (self.data[~hom_mask(self.algebra, self.rows, self.cols)] != 0).any()

    def klinear(self, end: str | None = None) -> np.ndarray:
        """Matrix of the underlying k-linear map ``(+ P_{c_j}) e -> (+ P_{r_i}) e``.

        Bases are the path bases of the projectives in order, restricted to
        paths ending at ``end`` when given.
        """
        alg = self.algebra
        row_idx = [alg.projective_basis(w, end) for w in self.rows]
        col_idx = [alg.projective_basis(v, end) for v in self.cols]
        out = np.zeros((sum(len(x) for x in row_idx), sum(len(x) for x in col_idx)), dtype=np.int64)
        r0 = 0
        for i, ri in enumerate(row_idx):
            c0 = 0
            for j, cj in enumerate(col_idx):
                if len(ri) and len(cj) and self.data[i, j].any():
                    # coefficient of path q in x * p is sum_a x_a mult[a, p, q]
                    d = alg.dim
                    act = exactla.matmul(self.data[i, j].reshape(1, d), alg.mult.reshape(d, d * d),
                                         alg.field).reshape(d, d)
                    out[r0:r0 + len(ri), c0:c0 + len(cj)] = act[np.ix_(cj, ri)].T
                c0 += len(cj)
            r0 += len(ri)
        return out

    def __repr__(self):
        return f"HomMatrix({len(self.rows)}x{len(self.cols)}, rows={self.rows}, cols={self.cols})"


def hstack(alg: PathAlgebra, mats: Iterable[HomMatrix], rows: Sequence[str]) -> HomMatrix:
    mats = list(mats)
    return HomMatrix.block(alg, [rows], [m.cols for m in mats], [mats])


def vstack(alg: PathAlgebra, mats: Iterable[HomMatrix], cols: Sequence[str]) -> HomMatrix:
    mats = list(mats)
    return HomMatrix.block(alg, [m.rows for m in mats], [cols], [[m] for m in mats])
