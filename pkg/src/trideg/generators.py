"""Small algebras and seeded random complexes, maps and endomorphisms."""

from __future__ import annotations

import numpy as np

from . import exactla, homotopy
from .algebra import PathAlgebra
from .complexes import ChainMap, Complex, GradedMap, direct_sum
from .matrices import HomMatrix, hom_mask
from .systems import _left_right_operator


def a2(field: int = 2) -> PathAlgebra:
    """``1 -a-> 2``."""
    return PathAlgebra.from_quiver(["1", "2"], [("a", "1", "2")], [], field)


def a3(field: int = 2) -> PathAlgebra:
    """``1 -a-> 2 -b-> 3`` with the composite ``a*b`` set to zero."""
    return PathAlgebra.from_quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")], [["a", "b"]], field)


def a3_free(field: int = 2) -> PathAlgebra:
    """``1 -a-> 2 -b-> 3`` without relations."""
    return PathAlgebra.from_quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")], [], field)


def loop(field: int = 2) -> PathAlgebra:
    """``k[x]/(x^2)``: one vertex with a loop squaring to zero."""
    return PathAlgebra.from_quiver(["1"], [("x", "1", "1")], [["x", "x"]], field, nilpotency_bound=2)


def standard_algebras(field: int = 2) -> list[PathAlgebra]:
    return [a2(field), a3(field), loop(field)]


def _random_in_kernel(alg: PathAlgebra, rows, cols, prev: HomMatrix | None,
                      rng: np.random.Generator, density: float) -> HomMatrix:
    """Random ``D: cols -> rows`` with ``D prev = 0`` (hom constraints respected)."""
    p, d = alg.field, alg.dim
    var_flat = np.flatnonzero(hom_mask(alg, rows, cols).reshape(-1))
    data = np.zeros(len(rows) * len(cols) * d, dtype=np.int64)
    if var_flat.size == 0:
        return HomMatrix(alg, rows, cols, data.reshape(len(rows), len(cols), d), check=False)
    if prev is None or prev.is_zero():
        vec = rng.integers(0, p, size=var_flat.size)
        vec[rng.random(var_flat.size) > density] = 0
    else:
        row_flat = np.flatnonzero(hom_mask(alg, rows, prev.cols).reshape(-1))
        op = _left_right_operator(alg, None, prev, rows, cols, var_flat, rows, prev.cols, row_flat)
        K = exactla.kernel_basis(op, p)
        if K.shape[1] == 0:
            vec = np.zeros(var_flat.size, dtype=np.int64)
        else:
            vec = exactla.matmul(K, rng.integers(0, p, size=(K.shape[1], 1)), p)[:, 0]
    data[var_flat] = vec
    return HomMatrix(alg, rows, cols, data.reshape(len(rows), len(cols), d), check=False)


def random_complex(alg: PathAlgebra, rng: np.random.Generator, max_rank: int = 6, max_amplitude: int = 3,
                   low: int | None = None, density: float = 0.7) -> Complex:
    """Random bounded complex of projectives with total rank at most ``max_rank``."""
    amp = int(rng.integers(1, max_amplitude + 1))
    start = int(rng.integers(-2, 2)) if low is None else low
    rank = int(rng.integers(1, max_rank + 1))
    # spread the rank over the degrees, each degree non-empty when possible
    counts = np.ones(amp, dtype=int) if rank >= amp else np.zeros(amp, dtype=int)
    if rank < amp:
        counts[rng.choice(amp, size=rank, replace=False)] = 1
    for _ in range(rank - counts.sum()):
        counts[rng.integers(0, amp)] += 1
    verts = list(alg.vertices)
    terms = {start + i: tuple(verts[j] for j in rng.integers(0, len(verts), size=c))
             for i, c in enumerate(counts) if c}
    diffs = {}
    degs = sorted(terms)
    for n in degs:
        if n + 1 not in terms:
            continue
        prev = diffs.get(n - 1)
        diffs[n] = _random_in_kernel(alg, terms[n + 1], terms[n], prev, rng, density)
    x = Complex(alg, terms, diffs)
    return x


def random_stalk(alg: PathAlgebra, rng: np.random.Generator, max_rank: int = 2, degree: int = 0) -> Complex:
    k = int(rng.integers(1, max_rank + 1))
    return Complex.stalk(alg, [alg.vertices[i] for i in rng.integers(0, len(alg.vertices), size=k)], degree)


def random_chain_map(x: Complex, y: Complex, rng: np.random.Generator) -> ChainMap:
    return homotopy.random_chain_map(x, y, rng)


def square_zero_endo(z1: Complex, z2: Complex, rng: np.random.Generator) -> tuple[Complex, ChainMap]:
    """``Z = Z1 + Z2`` with ``v = inj2 g proj1`` for a random ``g``; ``v^2 = 0`` strictly."""
    ds = direct_sum(z1, z2)
    g = random_chain_map(z1, z2, rng)
    return ds.obj, ChainMap.of(ds.inj[1] @ g @ ds.proj[0])


def random_endo(z: Complex, rng: np.random.Generator, kind: str = "any") -> ChainMap:
    """An endomorphism of ``z``: ``zero``, ``identity``, ``nilpotent`` or ``any``."""
    if kind == "zero":
        return ChainMap.zero(z, z)
    if kind == "identity":
        return ChainMap.identity(z)
    f = random_chain_map(z, z, rng)
    if kind == "nilpotent":
        # the radical part of a random endomorphism: kill the identity-like component
        return nilpotent_part(f)
    return f


def nilpotent_part(f: ChainMap) -> ChainMap:
    """``f`` with all trivial-path coefficients removed.

    What remains has entries in the radical of ``A``, so some power vanishes
    strictly.  Returns zero when the truncation is not a chain map.
    """
    alg = f.algebra
    trivial = [alg.path_index(f"e_{v}") for v in alg.vertices]
    comps = {}
    for n, m in f.components.items():
        data = m.data.copy()
        data[:, :, trivial] = 0
        comps[n] = HomMatrix(alg, m.rows, m.cols, data, check=False)
    g = GradedMap(f.source, f.target, comps, 0, check=False)
    if g.is_chain_map():
        return ChainMap(f.source, f.target, comps, check=False)
    return ChainMap.zero(f.source, f.target)


def loop_x(alg: PathAlgebra, z: Complex) -> ChainMap:
    """Multiplication by the loop ``x`` on every summand (loop algebra only)."""
    comps = {}
    for n, vs in z.terms.items():
        data = np.zeros((len(vs), len(vs), alg.dim), dtype=np.int64)
        for i in range(len(vs)):
            data[i, i, alg.path_index("x")] = 1
        comps[n] = HomMatrix(alg, vs, vs, data, check=False)
    return ChainMap.of(GradedMap(z, z, comps, 0, check=False))
