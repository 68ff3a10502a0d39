"""Finite-dimensional path algebras ``kQ/I`` with monomial relations.

Conventions
-----------
Paths are written in travel order: the path ``a*b`` follows arrow ``a`` and
then arrow ``b``.  The product of two basis paths is their concatenation
``p * q`` when ``p`` ends where ``q`` starts, and zero otherwise (or when the
concatenation contains a relation).  Hence ``e_s * a == a == a * e_t`` for an
arrow ``a: s -> t``.

Modules are right modules.  ``P_v = e_v A`` is spanned by the paths starting
at ``v``, and ``Hom(P_v, P_w) = e_w A e_v`` is spanned by the paths from ``w``
to ``v``, acting by left multiplication.  Composing morphisms is then algebra
multiplication in matrix order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from . import exactla


class InfiniteDimensionError(ValueError):
    """The presented algebra has an infinite path basis."""


class Arrow(NamedTuple):
    name: str
    source: str
    target: str


class Path(NamedTuple):
    start: str
    end: str
    arrows: tuple[str, ...]

    def __len__(self):  # type: ignore[override]
        return len(self.arrows)

    @property
    def length(self) -> int:
        return len(self.arrows)

    def __str__(self):
        if not self.arrows:
            return f"e_{self.start}"
        return "*".join(self.arrows)


@dataclass(frozen=True)
class QuiverPresentation:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    relations: tuple[tuple[str, ...], ...] = ()
    nilpotency_bound: int | None = None
    field: int = 2

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "arrows", tuple(Arrow(*map(str, a)) for a in self.arrows))
        object.__setattr__(self, "relations", tuple(tuple(map(str, r)) for r in self.relations))
        object.__setattr__(self, "field", exactla.check_modulus(self.field))
        verts = set(self.vertices)
        if len(verts) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("duplicate arrow names")
        for a in self.arrows:
            if a.source not in verts or a.target not in verts:
                raise ValueError(f"arrow {a.name} has an unknown endpoint")
            if "*" in a.name or a.name.startswith("e_"):
                raise ValueError(f"arrow name {a.name!r} clashes with path notation")
        by_name = {a.name: a for a in self.arrows}
        for rel in self.relations:
            if not rel:
                raise ValueError("empty relation")
            for x in rel:
                if x not in by_name:
                    raise ValueError(f"relation {rel} uses unknown arrow {x}")
            for x, y in zip(rel, rel[1:]):
                if by_name[x].target != by_name[y].source:
                    raise ValueError(f"relation {'*'.join(rel)} is not composable")
        if self.nilpotency_bound is not None and int(self.nilpotency_bound) < 1:
            raise ValueError("nilpotency_bound must be positive")

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(name)

    def is_acyclic(self) -> bool:
        out: dict[str, list[str]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            out[a.source].append(a.target)
        state = {v: 0 for v in self.vertices}

        def visit(v) -> bool:
            state[v] = 1
            for w in out[v]:
                if state[w] == 1 or (state[w] == 0 and not visit(w)):
                    return False
            state[v] = 2
            return True

        return all(state[v] == 2 or visit(v) for v in self.vertices)


@dataclass(frozen=True)
class PathBasis:
    paths: tuple[Path, ...]
    index: Mapping[Path, int] = field(repr=False)

    def __len__(self):
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)


def _contains_relation(arrows: tuple[str, ...], relations) -> bool:
    for rel in relations:
        k = len(rel)
        for i in range(len(arrows) - k + 1):
            if arrows[i:i + k] == rel:
                return True
    return False


def build_basis(q: QuiverPresentation) -> PathBasis:
    """Enumerate the nonzero paths of ``kQ/I`` ordered by (length, arrow order)."""
    order = {a.name: i for i, a in enumerate(q.arrows)}
    leaving: dict[str, list[Arrow]] = {v: [] for v in q.vertices}
    for a in q.arrows:
        leaving[a.source].append(a)

    if q.nilpotency_bound is not None:
        cap = int(q.nilpotency_bound)
    elif q.is_acyclic():
        cap = len(q.vertices)
    else:
        # words avoiding the relations; a repeated state of the last L-1 arrows
        # beyond this length means an infinite family of surviving paths
        longest = max((len(r) for r in q.relations), default=1)
        cap = len(q.arrows) ** max(longest - 1, 1) + longest + 1

    paths = [Path(v, v, ()) for v in q.vertices]
    frontier = [p for p in paths]
    length = 0
    while frontier:
        length += 1
        nxt = []
        for p in frontier:
            for a in leaving[p.end]:
                arrows = p.arrows + (a.name,)
                if _contains_relation(arrows[-max((len(r) for r in q.relations), default=1):], q.relations):
                    continue
                nxt.append(Path(p.start, a.target, arrows))
        if nxt and length >= cap:
            if q.nilpotency_bound is not None:
                raise InfiniteDimensionError(
                    f"path {nxt[0]} of length {length} survives the declared "
                    f"nilpotency bound {q.nilpotency_bound}")
            raise InfiniteDimensionError("cycle without relations killing it: algebra is infinite-dimensional")
        paths.extend(nxt)
        frontier = nxt

    paths.sort(key=lambda p: (p.length, [order[x] for x in p.arrows],
                              q.vertices.index(p.start)))
    return PathBasis(tuple(paths), {p: i for i, p in enumerate(paths)})


class PathAlgebra:
    """``A = kQ/I`` together with its path basis and structure constants."""

    def __init__(self, presentation: QuiverPresentation):
        self.presentation = presentation
        self.field = presentation.field
        self.vertices = presentation.vertices
        self.basis = build_basis(presentation)
        self.paths = self.basis.paths
        self.dim = len(self.paths)
        self._vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self._rels = presentation.relations
        self._max_rel = max((len(r) for r in self._rels), default=1)
        self.mult = self._structure_constants()
        self.mult.setflags(write=False)
        self._hom_cache: dict[tuple[str, str], np.ndarray] = {}
        self._start = np.array([self._vertex_index[p.start] for p in self.paths], dtype=np.int64)
        self._end = np.array([self._vertex_index[p.end] for p in self.paths], dtype=np.int64)

    @classmethod
    def from_quiver(cls, vertices: Sequence[str], arrows: Iterable[Sequence[str]],
                    relations: Iterable[Sequence[str]] = (), field: int = 2,
                    nilpotency_bound: int | None = None) -> PathAlgebra:
        return cls(QuiverPresentation(tuple(vertices), tuple(Arrow(*a) for a in arrows),
                                      tuple(tuple(r) for r in relations),
                                      nilpotency_bound, field))

    def _concat(self, p: Path, q: Path) -> Path | None:
        if p.end != q.start:
            return None
        arrows = p.arrows + q.arrows
        if p.arrows and q.arrows:
            # only windows straddling the junction can be new relation hits
            lo = max(0, len(p.arrows) - self._max_rel + 1)
            if _contains_relation(arrows[lo:len(p.arrows) + self._max_rel - 1], self._rels):
                return None
        r = Path(p.start, q.end, arrows)
        return r if r in self.basis.index else None

    def _structure_constants(self) -> np.ndarray:
        n = self.dim
        m = np.zeros((n, n, n), dtype=np.int64)
        for i, p in enumerate(self.paths):
            for j, q in enumerate(self.paths):
                r = self._concat(p, q)
                if r is not None:
                    m[i, j, self.basis.index[r]] = 1
        return m

    # -- elements -------------------------------------------------------

    def vertex_index(self, v: str) -> int:
        return self._vertex_index[v]

    def path_index(self, path: Path | str) -> int:
        if isinstance(path, str):
            path = self.parse_path(path)
        return self.basis.index[path]

    def parse_path(self, text: str) -> Path:
        text = text.strip()
        if text.startswith("e_") and text[2:] in self._vertex_index:
            return Path(text[2:], text[2:], ())
        names = tuple(text.split("*"))
        arrows = [self.presentation.arrow(x) for x in names]
        for a, b in zip(arrows, arrows[1:]):
            if a.target != b.source:
                raise ValueError(f"path {text!r} is not composable")
        path = Path(arrows[0].source, arrows[-1].target, names)
        if path not in self.basis.index:
            raise ValueError(f"path {text!r} is zero in the algebra")
        return path

    def element(self, coeffs: Mapping[Path | str, int] | None = None) -> AlgebraElement:
        vec = np.zeros(self.dim, dtype=np.int64)
        for k, c in (coeffs or {}).items():
            vec[self.path_index(k)] += int(c)
        return AlgebraElement(self, vec % self.field)

    def idempotent(self, v: str) -> AlgebraElement:
        return self.element({Path(v, v, ()): 1})

    def one(self) -> AlgebraElement:
        return self.element({Path(v, v, ()): 1 for v in self.vertices})

    def multiply(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        if a.algebra is not self or b.algebra is not self:
            raise ValueError("elements of different algebras")
        return AlgebraElement(self, self.product(a.vector, b.vector))

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        outer = np.outer(x, y).reshape(1, -1) % self.field
        return exactla.matmul(outer, self.mult.reshape(self.dim * self.dim, self.dim), self.field)[0]

    # -- hom spaces between indecomposable projectives ---------------------

    def hom_basis(self, v: str, w: str) -> list[AlgebraElement]:
        """Basis of ``Hom(P_v, P_w) = e_w A e_v``."""
        return [self.element({self.paths[i]: 1}) for i in np.flatnonzero(self.hom_mask(v, w))]

    def hom_mask(self, v: str, w: str) -> np.ndarray:
        """Boolean mask over the path basis selecting ``e_w A e_v``."""
        key = (v, w)
        if key not in self._hom_cache:
            mask = (self._start == self._vertex_index[w]) & (self._end == self._vertex_index[v])
            mask.setflags(write=False)
            self._hom_cache[key] = mask
        return self._hom_cache[key]

    def projective_basis(self, v: str, end: str | None = None) -> np.ndarray:
        """Indices of the paths spanning ``P_v = e_v A`` (optionally ``e_v A e_end``)."""
        mask = self._start == self._vertex_index[v]
        if end is not None:
            mask &= self._end == self._vertex_index[end]
        return np.flatnonzero(mask)

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, PathAlgebra) and self.presentation == other.presentation

    def __hash__(self):
        return hash(self.presentation)

    def __repr__(self):
        q = self.presentation
        return (f"PathAlgebra(vertices={list(q.vertices)}, arrows={[a.name for a in q.arrows]}, "
                f"relations={['*'.join(r) for r in q.relations]}, GF({self.field}), dim={self.dim})")


class AlgebraElement:
    """An element of a path algebra as a coefficient vector over the path basis."""

    __slots__ = ("algebra", "vector")

    def __init__(self, algebra: PathAlgebra, vector: np.ndarray):
        vec = np.asarray(vector, dtype=np.int64) % algebra.field
        vec.setflags(write=False)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "vector", vec)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    @property
    def coefficients(self) -> dict[Path, int]:
        return {self.algebra.paths[i]: int(self.vector[i]) for i in np.flatnonzero(self.vector)}

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.algebra.multiply(self, other)
        return AlgebraElement(self.algebra, self.vector * int(other))

    def __rmul__(self, other):
        return AlgebraElement(self.algebra, self.vector * int(other))

    def __add__(self, other: AlgebraElement):
        return AlgebraElement(self.algebra, self.vector + other.vector)

    def __sub__(self, other: AlgebraElement):
        return AlgebraElement(self.algebra, self.vector - other.vector)

    def __neg__(self):
        return AlgebraElement(self.algebra, -self.vector)

    def is_zero(self) -> bool:
        return not self.vector.any()

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra == other.algebra and np.array_equal(self.vector, other.vector)

    def __hash__(self):
        return hash(self.vector.tobytes())

    def __repr__(self):
        terms = [f"{c}*{p}" if c != 1 else str(p) for p, c in self.coefficients.items()]
        return " + ".join(terms) if terms else "0"
