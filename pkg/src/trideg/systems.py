"""Linear systems whose unknowns are graded maps between complexes.

Every "does a map/homotopy exist" question in the homotopy category becomes
one system over GF(p): unknown maps are expanded in the path bases of their
hom spaces, and each equation ``sum_i c_i L_i U_i R_i = B`` is flattened
degree by degree into rows indexed by (row, column, path).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import exactla
from .algebra import PathAlgebra
from .complexes import ChainMap, Complex, GradedMap, Homotopy
from .matrices import HomMatrix, hom_mask


@dataclass(frozen=True, eq=False)
class Unknown:
    source: Complex
    target: Complex
    degree: int
    # degree n -> (offset into the variable vector, flat indices into (r, c, dim A))
    slots: dict = field(repr=False)
    name: str = ""


@dataclass(frozen=True)
class Term:
    unknown: Unknown
    left: GradedMap | None = None
    right: GradedMap | None = None
    coeff: int = 1


def _left_right_operator(alg: PathAlgebra, L: HomMatrix | None, R: HomMatrix | None,
                         u_rows: tuple, u_cols: tuple, var_flat: np.ndarray,
                         out_rows: tuple, out_cols: tuple, row_flat: np.ndarray) -> np.ndarray:
    """Matrix of ``U -> L U R`` from the admissible entries of ``U`` to those of the product."""
    p, d = alg.field, alg.dim
    m = alg.mult
    if L is None:
        L = HomMatrix.identity(alg, u_rows)
    if R is None:
        R = HomMatrix.identity(alg, u_cols)
    rl, r = len(L.rows), len(L.cols)
    c, cr = len(R.rows), len(R.cols)
    # T[i', i, y, z] = sum_x L[i', i, x] m[x, y, z];  S[j, k, z, w] = sum_t R[j, k, t] m[z, t, w]
    T = exactla.matmul(L.data.reshape(rl * r, d), m.reshape(d, d * d), p).reshape(rl, r, d, d)
    mz = m.transpose(1, 0, 2).reshape(d, d * d)
    S = exactla.matmul(R.data.reshape(c * cr, d), mz, p).reshape(c, cr, d, d)
    vi, vj, vy = np.unravel_index(var_flat, (r, c, d))
    oi, ok, ow = np.unravel_index(row_flat, (rl, cr, d))
    # op[row, var] = sum_z T[oi, vi, vy, z] * S[vj, ok, z, ow]
    A = T[oi[:, None], vi[None, :], vy[None, :], :]
    B = S[vj[None, :], ok[:, None], :, ow[:, None]]
    if d * (p - 1) ** 2 < 2**62:
        return (A * B).sum(axis=-1) % p
    return ((A.astype(object) * B.astype(object)).sum(axis=-1) % p).astype(np.int64)


class MapSystem:
    """Collects unknown graded maps and linear equations between them."""

    def __init__(self, algebra: PathAlgebra):
        self.algebra = algebra
        self.unknowns: list[Unknown] = []
        self.nvars = 0
        self._blocks: list[tuple[np.ndarray, np.ndarray]] = []

    def unknown(self, source: Complex, target: Complex, degree: int = 0, name: str = "") -> Unknown:
        slots = {}
        for n in source.terms:
            rows, cols = target.term(n + degree), source.term(n)
            if not rows:
                continue
            flat = np.flatnonzero(hom_mask(self.algebra, rows, cols).reshape(-1))
            if flat.size:
                slots[n] = (self.nvars, flat)
                self.nvars += flat.size
        u = Unknown(source, target, degree, slots, name)
        self.unknowns.append(u)
        return u

    def equation(self, terms: Sequence[Term], rhs: GradedMap | None = None,
                 source: Complex | None = None, target: Complex | None = None, degree: int | None = None):
        """Add ``sum c_i L_i U_i R_i == rhs`` (all terms must share source, target, degree)."""
        shapes = []
        for t in terms:
            src = t.right.source if t.right is not None else t.unknown.source
            tgt = t.left.target if t.left is not None else t.unknown.target
            deg = t.unknown.degree + (t.left.degree if t.left is not None else 0) + \
                (t.right.degree if t.right is not None else 0)
            shapes.append((src, tgt, deg))
        if rhs is not None:
            shapes.append((rhs.source, rhs.target, rhs.degree))
        if source is not None:
            shapes.append((source, target, degree))
        if not shapes:
            return
        src, tgt, deg = shapes[0]
        for s in shapes[1:]:
            if s[2] != deg or s[0] != src or s[1] != tgt:
                raise ValueError("equation terms have inconsistent shapes")
        alg, p = self.algebra, self.algebra.field
        for n in src.terms:
            out_rows, out_cols = tgt.term(n + deg), src.term(n)
            if not out_rows:
                continue
            row_flat = np.flatnonzero(hom_mask(alg, out_rows, out_cols).reshape(-1))
            if not row_flat.size:
                continue
            block = np.zeros((row_flat.size, self.nvars), dtype=np.int64)
            for t in terms:
                u = t.unknown
                m = n + (t.right.degree if t.right is not None else 0)
                slot = u.slots.get(m)
                if slot is None:
                    continue
                off, var_flat = slot
                L = t.left[m + u.degree] if t.left is not None else None
                R = t.right[n] if t.right is not None else None
                if (L is not None and L.is_zero()) or (R is not None and R.is_zero()):
                    continue
                op = _left_right_operator(alg, L, R, u.target.term(m + u.degree), u.source.term(m),
                                          var_flat, out_rows, out_cols, row_flat)
                block[:, off:off + var_flat.size] = (block[:, off:off + var_flat.size]
                                                     + t.coeff * op) % p
            b = np.zeros(row_flat.size, dtype=np.int64)
            if rhs is not None:
                b = rhs[n].data.reshape(-1)[row_flat] % p
            self._blocks.append((block, b))

    def chain_condition(self, u: Unknown):
        """``d U - (-1)^deg U d == 0`` (for degree 0 this says U is a chain map)."""
        from .complexes import differential
        sign = -1 if u.degree % 2 == 0 else 1
        self.equation([Term(u, left=differential(u.target)),
                       Term(u, right=differential(u.source), coeff=sign)])

    def matrix(self, prune: bool = True) -> tuple[np.ndarray, np.ndarray]:
        """Stacked coefficient matrix and right-hand side of all equations so far."""
        width = self.nvars
        # blocks were created with the variable count at their time; pad to full width
        mats = [np.pad(m, ((0, 0), (0, width - m.shape[1]))) for m, _ in self._blocks]
        if not mats:
            return np.zeros((0, width), np.int64), np.zeros(0, np.int64)
        A = np.concatenate(mats, axis=0)
        b = np.concatenate([b for _, b in self._blocks])
        if prune:
            keep = A.any(axis=1) | (b != 0)
            A, b = A[keep], b[keep]
        return A, b

    def solve(self) -> Solution | None:
        A, b = self.matrix()
        x0, K = exactla.solve_affine(A, b, self.algebra.field)
        if x0 is None:
            return None
        return Solution(self, x0, K)


@dataclass(frozen=True, eq=False)
class Solution:
    system: MapSystem
    particular: np.ndarray
    kernel: np.ndarray

    @property
    def dimension(self) -> int:
        return self.kernel.shape[1]

    def vector(self, coeffs: np.ndarray | None = None) -> np.ndarray:
        p = self.system.algebra.field
        if coeffs is None or self.kernel.shape[1] == 0:
            return self.particular
        return (self.particular + exactla.matmul(self.kernel, np.asarray(coeffs).reshape(-1, 1), p)[:, 0]) % p

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        p = self.system.algebra.field
        return self.vector(rng.integers(0, p, size=self.kernel.shape[1]))

    def value(self, u: Unknown, vec: np.ndarray | None = None) -> GradedMap:
        return value_of(self.system.algebra, u, self.particular if vec is None else vec)


def value_of(alg: PathAlgebra, u: Unknown, vec: np.ndarray) -> GradedMap:
    comps = {}
    for n, (off, flat) in u.slots.items():
        rows, cols = u.target.term(n + u.degree), u.source.term(n)
        data = np.zeros(len(rows) * len(cols) * alg.dim, dtype=np.int64)
        data[flat] = vec[off:off + flat.size]
        comps[n] = HomMatrix(alg, rows, cols, data.reshape(len(rows), len(cols), alg.dim), check=False)
    if u.degree == 0:
        return GradedMap(u.source, u.target, comps, 0, check=False)
    if u.degree == -1:
        return Homotopy(u.source, u.target, comps, check=False)
    return GradedMap(u.source, u.target, comps, u.degree, check=False)


def as_chain_map(g: GradedMap) -> ChainMap:
    return ChainMap(g.source, g.target, g.components, check=False)
