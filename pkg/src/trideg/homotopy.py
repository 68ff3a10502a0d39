"""Deciding equalities in the homotopy category ``K^b(proj A)``.

Morphisms are chain maps modulo null-homotopic ones, so each question here
is a single linear system over the base field (see :mod:`trideg.systems`).
"""

from __future__ import annotations

from dataclasses import dataclass
import itertools
from typing import Iterable, Iterator

import numpy as np

from . import exactla
from .complexes import ChainMap, Complex, GradedMap, Homotopy, cone, differential, identity_between
from .systems import MapSystem, Term, value_of

DEFAULT_BUDGET = 256


def is_nullhomotopic(f: GradedMap) -> Homotopy | None:
    """A homotopy ``h`` with ``f = d h + h d``, or ``None`` if ``f`` is not null-homotopic."""
    if f.degree != 0:
        raise ValueError("expected a degree-0 map")
    x, y = f.source, f.target
    if f.is_zero():
        return Homotopy.zero(x, y)
    sys = MapSystem(f.algebra)
    h = sys.unknown(x, y, -1, "h")
    sys.equation([Term(h, left=differential(y)), Term(h, right=differential(x))], rhs=f)
    sol = sys.solve()
    if sol is None:
        return None
    out = sol.value(h)
    return Homotopy(x, y, out.components, check=False)


def homotopic(f: GradedMap, g: GradedMap) -> Homotopy | None:
    """A homotopy witnessing ``f ~ g``."""
    return is_nullhomotopic(f - g)


def is_contractible(x: Complex) -> Homotopy | None:
    """A contraction ``h`` with ``id = d h + h d``, or ``None``."""
    if x.is_zero_object():
        return Homotopy.zero(x, x)
    return is_nullhomotopic(ChainMap.identity(x))


@dataclass(frozen=True, eq=False)
class IsoCheck:
    """Outcome of :func:`is_iso`; truthy exactly when the map is an isomorphism in K^b."""

    map: ChainMap
    cone: Complex | None
    contraction: Homotopy | None

    def __bool__(self):
        return self.contraction is not None

    def verify(self) -> bool:
        if self.contraction is None or self.cone is None:
            return False
        c, _ = cone(self.map)
        return c == self.cone and self.contraction.witnesses(ChainMap.identity(c))


def is_iso(f: GradedMap) -> IsoCheck:
    """Isomorphism in K^b, decided by contractibility of the cone."""
    if homology_dims(f.source, nonzero_only=True) != homology_dims(f.target, nonzero_only=True):
        return IsoCheck(f, None, None)
    c, _ = cone(f)
    return IsoCheck(f, c, is_contractible(c))


def homology_dims(x: Complex, nonzero_only: bool = False) -> dict[int, tuple[int, ...]]:
    """Dimension vectors of ``H^n(x) e_v`` for every degree of the support."""
    alg, p = x.algebra, x.algebra.field
    out = {}
    for n in x.terms:
        dims = []
        for v in alg.vertices:
            size = sum(len(alg.projective_basis(w, v)) for w in x.term(n))
            rk_out = exactla.rank(x.d(n).klinear(v), p) if x.term(n + 1) and size else 0
            rk_in = exactla.rank(x.d(n - 1).klinear(v), p) if x.term(n - 1) and size else 0
            dims.append(size - rk_out - rk_in)
        out[n] = tuple(dims)
    if nonzero_only:
        out = {n: v for n, v in out.items() if any(v)}
    return out


def homology_concentrated_in(x: Complex, degree: int = 0) -> bool:
    return all(n == degree for n in homology_dims(x, nonzero_only=True))


def chain_map_space(x: Complex, y: Complex) -> tuple[MapSystem, object, np.ndarray]:
    """All chain maps ``x -> y`` as ``(system, unknown, basis columns)``."""
    sys = MapSystem(x.algebra)
    u = sys.unknown(x, y, 0, "f")
    sys.chain_condition(u)
    A, _ = sys.matrix()
    return sys, u, exactla.kernel_basis(A, x.algebra.field)


def homotopy_image(x: Complex, y: Complex) -> np.ndarray:
    """Columns spanning ``{d h + h d}`` in the coordinates of :func:`chain_map_space`."""
    sys = MapSystem(x.algebra)
    h = sys.unknown(x, y, -1, "h")
    sys.equation([Term(h, left=differential(y)), Term(h, right=differential(x))],
                 source=x, target=y, degree=0)
    A, _ = sys.matrix(prune=False)
    return A


def class_representatives(directions: np.ndarray, x: Complex, y: Complex) -> list[int]:
    """Indices of ``directions`` (columns over chain-map coordinates, possibly
    followed by extra rows) that are independent modulo null-homotopic maps."""
    B = homotopy_image(x, y)
    n = B.shape[0]
    if directions.shape[1] == 0:
        return []
    stacked = np.concatenate([B, directions[:n]], axis=1) % x.algebra.field
    _, pivots, _ = exactla.rref(stacked, x.algebra.field)
    return [c - B.shape[1] for c in pivots if c >= B.shape[1]]


def coefficient_sequence(r: int, p: int, budget: int, rng: np.random.Generator,
                         include_zero: bool = True) -> Iterator[tuple[np.ndarray, bool]]:
    """Coefficient vectors to try for an ``r``-dimensional family over GF(p).

    Yields ``(coeffs, exhaustive)``; when ``p**r`` fits in the budget every
    vector is produced (zero and unit vectors first) and ``exhaustive`` is true.
    """
    exhaustive = p ** r <= budget
    seen = set()

    def emit(c):
        key = c.tobytes()
        if key in seen:
            return None
        seen.add(key)
        return c

    first = [np.zeros(r, dtype=np.int64)] if include_zero else []
    first += [np.eye(r, dtype=np.int64)[i] for i in range(r)]
    for c in first:
        c = emit(c)
        if c is not None:
            yield c, exhaustive
    if exhaustive:
        for combo in itertools.product(range(p), repeat=r):
            c = emit(np.array(combo, dtype=np.int64))
            if c is not None and (include_zero or c.any()):
                yield c, exhaustive
        return
    while True:
        c = rng.integers(0, p, size=r)
        if c.any() or include_zero:
            yield c, exhaustive


def hom_basis(x: Complex, y: Complex) -> list[ChainMap]:
    """Chain maps representing a basis of ``Hom_K(x, y)`` (maps modulo homotopy)."""
    sys, u, Z = chain_map_space(x, y)
    B = homotopy_image(x, y)
    if B.shape[0] != sys.nvars:
        B = np.zeros((sys.nvars, 0), dtype=np.int64)
    reps = exactla.complement_basis(Z, B, x.algebra.field)
    return [ChainMap(x, y, value_of(x.algebra, u, reps[:, i]).components, check=False)
            for i in range(reps.shape[1])]


def hom_dimension(x: Complex, y: Complex) -> int:
    return len(hom_basis(x, y))


def random_chain_map(x: Complex, y: Complex, rng: np.random.Generator) -> ChainMap:
    """A uniformly random chain map ``x -> y`` (not reduced modulo homotopy)."""
    sys, u, Z = chain_map_space(x, y)
    p = x.algebra.field
    vec = exactla.matmul(Z, rng.integers(0, p, size=(Z.shape[1], 1)), p)[:, 0] if Z.shape[1] else \
        np.zeros(sys.nvars, dtype=np.int64)
    return ChainMap(x, y, value_of(x.algebra, u, vec).components, check=False)


@dataclass(frozen=True, eq=False)
class IsoWitness:
    """A chain map together with a contraction of its cone."""

    map: ChainMap
    contraction: Homotopy
    attempts: int = 1

    @property
    def source(self) -> Complex:
        return self.map.source

    @property
    def target(self) -> Complex:
        return self.map.target

    def verify(self) -> bool:
        c, _ = cone(self.map)
        return (self.map.is_chain_map() and self.contraction.source == c
                and self.contraction.witnesses(ChainMap.identity(c)))


def _try(f: ChainMap) -> Homotopy | None:
    c, _ = cone(f)
    return is_contractible(c)


def find_iso(x: Complex, y: Complex, budget: int = DEFAULT_BUDGET,
             candidates: Iterable[GradedMap] = (), rng: np.random.Generator | None = None) -> IsoWitness | None:
    """Search ``Hom_K(x, y)`` for an isomorphism.

    Tries the given candidates, then the basis of ``Hom_K(x, y)``, then random
    combinations, up to ``budget`` attempts in total.  ``None`` means "not
    found", not "not isomorphic".
    """
    attempts = 0
    candidates = list(candidates)
    if x == y:
        candidates.append(identity_between(x, y))
    for cand in candidates:
        if attempts >= budget:
            return None
        if cand.source != x or cand.target != y or not cand.is_chain_map():
            continue
        attempts += 1
        h = _try(cand)
        if h is not None:
            return IsoWitness(ChainMap(x, y, cand.components, check=False), h, attempts)
    if homology_dims(x, nonzero_only=True) != homology_dims(y, nonzero_only=True):
        return None
    basis = hom_basis(x, y)
    rng = rng if rng is not None else np.random.default_rng(0)
    p = x.algebra.field
    for coeffs, _ in coefficient_sequence(len(basis), p, budget - attempts, rng, include_zero=not basis):
        if attempts >= budget:
            return None
        f = ChainMap.zero(x, y)
        for c, g in zip(coeffs, basis):
            if c:
                f = f + g.scale(int(c))
        attempts += 1
        h = _try(f)
        if h is not None:
            return IsoWitness(ChainMap(x, y, f.components, check=False), h, attempts)
    return None


def homotopy_inverse(f: GradedMap) -> ChainMap | None:
    """A chain map ``g`` with ``f g ~ id``; for an isomorphism this is its inverse in K^b."""
    x, y = f.source, f.target
    sys = MapSystem(f.algebra)
    g = sys.unknown(y, x, 0, "g")
    k = sys.unknown(y, y, -1, "k")
    sys.chain_condition(g)
    p = f.algebra.field
    sys.equation([Term(g, left=f), Term(k, left=differential(y), coeff=p - 1),
                  Term(k, right=differential(y), coeff=p - 1)], rhs=ChainMap.identity(y))
    sol = sys.solve()
    if sol is None:
        return None
    return ChainMap(y, x, sol.value(g).components, check=False)
