"""Classes in K0, zero-class shift sums, and towers of cones.

K0(K^b(proj A)) is free on the indecomposable projectives, so a class is an
integer vector indexed by the vertices.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import homotopy
from .algebra import PathAlgebra
from .complexes import ChainMap, Complex, GradedMap, cone, cone_parts, direct_sum, shift, shift_map
from .degeneration import DegenerationWitness, left_witness, nilpotency_certificate
from .homotopy import DEFAULT_BUDGET, IsoWitness
from .systems import as_chain_map


@dataclass(frozen=True)
class K0Class:
    vertices: tuple[str, ...]
    coefficients: tuple[int, ...]

    def __add__(self, other: K0Class) -> K0Class:
        self._check(other)
        return K0Class(self.vertices, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: K0Class) -> K0Class:
        return self + (-other)

    def __neg__(self) -> K0Class:
        return K0Class(self.vertices, tuple(-a for a in self.coefficients))

    def scale(self, c: int) -> K0Class:
        return K0Class(self.vertices, tuple(c * a for a in self.coefficients))

    def _check(self, other: K0Class):
        if self.vertices != other.vertices:
            raise ValueError("classes over different algebras")

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.vertices, self.coefficients))

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coefficients) + ")"


def k0_class(x: Complex) -> K0Class:
    """``sum_n (-1)^n [X^n]`` in the basis of indecomposable projectives."""
    verts = tuple(x.algebra.vertices)
    counts = dict.fromkeys(verts, 0)
    for n, vs in x.terms.items():
        sign = -1 if n % 2 else 1
        for v in vs:
            counts[v] += sign
    return K0Class(verts, tuple(counts[v] for v in verts))


# -- shift sums ----------------------------------------------------------------


class NonZeroClassError(ValueError):
    def __init__(self, generator: str, alternating_sum: int):
        super().__init__(f"generator {generator!r} has nonzero alternating multiplicity {alternating_sum}")
        self.generator = generator
        self.alternating_sum = alternating_sum


class ShiftTerm(NamedTuple):
    gen: str
    shift: int
    mult: int


@dataclass(frozen=True)
class ShiftSum:
    """``X = (+) S[k]^m`` over generators ``S``."""

    terms: tuple[ShiftTerm, ...]

    def __post_init__(self):
        seen = set()
        for t in self.terms:
            if t.mult < 1:
                raise ValueError(f"multiplicity of {t.gen}[{t.shift}] must be positive")
            if (t.gen, t.shift) in seen:
                raise ValueError(f"duplicate summand {t.gen}[{t.shift}]")
            seen.add((t.gen, t.shift))

    @classmethod
    def of(cls, items: Iterable[Sequence]) -> ShiftSum:
        return cls(tuple(ShiftTerm(str(g), int(k), int(m)) for g, k, m in items))

    def generators(self) -> list[str]:
        return sorted({t.gen for t in self.terms})

    def alternating_sum(self, gen: str) -> int:
        return sum(t.mult * (-1 if t.shift % 2 else 1) for t in self.terms if t.gen == gen)

    def is_zero_class(self) -> bool:
        """Zero class, assuming the generators' classes are linearly independent."""
        return all(self.alternating_sum(g) == 0 for g in self.generators())

    def multiset(self) -> Counter:
        return Counter({(t.gen, t.shift): t.mult for t in self.terms})

    def realize(self, generators: dict[str, Complex]) -> Complex:
        parts = [shift(generators[t.gen], t.shift) for t in self.terms for _ in range(t.mult)]
        if not parts:
            raise ValueError("empty shift sum")
        return direct_sum(*parts).obj


def m_value(x: ShiftSum) -> int:
    """Total multiplicity of the even shifts (equal to that of the odd ones for zero classes)."""
    return sum(t.mult for t in x.terms if t.shift % 2 == 0)


class Pair(NamedTuple):
    """``(S + S[odd - even])[even]`` with multiplicity ``mult``."""

    gen: str
    even: int
    odd: int
    mult: int


def pair_decompose(x: ShiftSum) -> list[Pair]:
    """Split a zero-class shift sum into pairs ``S[k] + S[l]`` with ``k`` even and ``l`` odd.

    Per generator: with ``q`` the smallest multiplicity present, peel ``q``
    copies of (smallest even shift, largest odd shift) and repeat.
    """
    for g in x.generators():
        s = x.alternating_sum(g)
        if s:
            raise NonZeroClassError(g, s)
    out: list[Pair] = []
    for g in x.generators():
        mult = {t.shift: t.mult for t in x.terms if t.gen == g}
        while mult:
            q = min(mult.values())
            k = min(s for s in mult if s % 2 == 0)
            l_ = max(s for s in mult if s % 2)
            out.append(Pair(g, k, l_, q))
            for s in (k, l_):
                mult[s] -= q
                if mult[s] == 0:
                    del mult[s]
    return out


def expand_pairs(pairs: Iterable[Pair]) -> Counter:
    out: Counter = Counter()
    for p in pairs:
        out[(p.gen, p.even)] += p.mult
        out[(p.gen, p.odd)] += p.mult
    return out


# -- towers ------------------------------------------------------------------------


class TowerError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Tower:
    """``0 = M_0 -f_1-> M_1 -> ... -f_n-> M_n`` with ``cone(f_k) ~ S_k[r_k]``.

    ``certificates[k-1]`` is an isomorphism ``cone(f_k) -> S_k[r_k]``.
    """

    algebra: PathAlgebra
    generators: dict[str, Complex]
    objects: tuple[Complex, ...]
    maps: tuple[ChainMap, ...]
    tags: tuple[tuple[str, int], ...]
    certificates: tuple[IsoWitness | None, ...] = field(default=())

    @property
    def length(self) -> int:
        return len(self.maps)

    @property
    def top(self) -> Complex:
        return self.objects[-1]

    def cone_term(self, k: int) -> Complex:
        """``C_k = S_k[r_k]`` for ``1 <= k <= n``."""
        gen, r = self.tags[k - 1]
        return shift(self.generators[gen], r)

    def shape_ok(self) -> bool:
        n = self.length
        if len(self.objects) != n + 1 or len(self.tags) != n or not self.objects[0].is_zero_object():
            return False
        for k, f in enumerate(self.maps, start=1):
            if f.source != self.objects[k - 1] or f.target != self.objects[k] or not f.is_chain_map():
                return False
        return all(g in self.generators for g, _ in self.tags)

    def verify(self) -> bool:
        if not self.shape_ok() or len(self.certificates) != self.length:
            return False
        for k, cert in enumerate(self.certificates, start=1):
            if cert is None:
                return False
            c, _ = cone(self.maps[k - 1])
            if cert.source != c or cert.target != self.cone_term(k) or not cert.verify():
                return False
        return True

    def certify(self, budget: int = DEFAULT_BUDGET, rng: np.random.Generator | None = None) -> Tower:
        """Fill in missing cone certificates by searching for isomorphisms."""
        if not self.shape_ok():
            raise TowerError("malformed tower")
        certs = list(self.certificates) + [None] * (self.length - len(self.certificates))
        for k in range(1, self.length + 1):
            if certs[k - 1] is not None:
                continue
            c, _ = cone(self.maps[k - 1])
            w = homotopy.find_iso(c, self.cone_term(k), budget=budget, rng=rng)
            if w is None:
                raise TowerError(f"step {k}: isomorphism cone(f_{k}) -> {self.tags[k - 1]} not found within budget")
            certs[k - 1] = w
        return Tower(self.algebra, self.generators, self.objects, self.maps, self.tags, tuple(certs))


def empty_tower(alg: PathAlgebra, generators: dict[str, Complex]) -> Tower:
    return Tower(alg, dict(generators), (Complex.zero(alg),), (), (), ())


def extend(t: Tower, gen: str, r: int, e: GradedMap) -> Tower:
    """Append ``M_k := cone(e)`` for ``e: S[r][-1] -> M_{k-1}``; ``f_k`` is the cone inclusion.

    The certificate ``cone(f_k) -> S[r]`` is the composite of the projection
    onto ``M_k`` with the projection of ``M_k = cone(e)`` onto ``S[r]``.
    """
    c = shift(t.generators[gen], r)
    if e.source != shift(c, -1) or e.target != t.top:
        raise TowerError("e must map S[r][-1] to the current top object")
    pe = cone_parts(e)
    m_new, f = pe.cone, pe.in_target
    pf = cone_parts(f)
    phi = ChainMap.of(GradedMap(pf.cone, c, (pe.out_shift @ pf.out_target).components, 0, check=False))
    chk = homotopy.is_iso(phi)
    if not chk:
        raise TowerError("cone certificate failed")
    cert = IsoWitness(phi, chk.contraction)
    return Tower(t.algebra, t.generators, t.objects + (m_new,), t.maps + (f,), t.tags + ((gen, r),),
                 tuple(t.certificates) + (cert,))


def _require(t: Tower):
    if not t.verify():
        raise TowerError("tower certificate broken")


def _sum(parts: Sequence[Complex], alg: PathAlgebra) -> Complex:
    if not parts:
        return Complex.zero(alg)
    if len(parts) == 1:
        return parts[0]
    return direct_sum(*parts).obj


class ChainStep(NamedTuple):
    witness: DegenerationWitness
    target: Complex
    iso: IsoWitness


def tower_nil_chain(t: Tower, budget: int = DEFAULT_BUDGET) -> list[ChainStep]:
    """``M_n <= ... <= M_{k-1} + C_k + ... + C_n <= ... <= C_1 + ... + C_n``.

    Step ``k`` (from ``n`` down to 1) is the left witness with ``Z = M_{k-1}``,
    ``v = 0`` and ``u = inj o f_k : M_{k-1} -> M_k + R_k`` where
    ``R_k = C_{k+1} + ... + C_n``; its ``N`` is identified with
    ``M_{k-1} + (C_k + R_k)``.
    """
    _require(t)
    alg = t.algebra
    steps: list[ChainStep] = []
    r_obj: Complex | None = None
    for k in range(t.length, 0, -1):
        z, mk, fk = t.objects[k - 1], t.objects[k], t.maps[k - 1]
        if r_obj is None:
            m, u = mk, fk
            proj_m = None
        else:
            ds = direct_sum(mk, r_obj)
            m, u = ds.obj, as_chain_map(ds.inj[0] @ fk)
            proj_m = ds.proj
        w = left_witness(z, ChainMap.zero(z, z), u)
        ck = t.cone_term(k)
        new_rest = [ck] + ([r_obj] if r_obj is not None else [])
        r_new = _sum(new_rest, alg)
        target_ds = direct_sum(z, r_new)
        # N = Z[1] + Z + M_k (+ R_k): the middle Z splits off, cone(f_k) goes to C_k via the certificate
        pn = cone_parts(w.triangle.f)
        mid = direct_sum(z, m)
        pk = cone_parts(fk)
        to_mk = mid.proj[1] @ pn.out_target if proj_m is None else proj_m[0] @ mid.proj[1] @ pn.out_target
        to_cone = pk.in_shift @ pn.out_shift + pk.in_target @ to_mk
        comp_c = t.certificates[k - 1].map @ to_cone
        if r_obj is None:
            to_rest = comp_c
        else:
            rd = direct_sum(ck, r_obj)
            to_rest = rd.inj[0] @ comp_c + rd.inj[1] @ proj_m[1] @ mid.proj[1] @ pn.out_target
        cand = target_ds.inj[0] @ mid.proj[0] @ pn.out_target + target_ds.inj[1] @ to_rest
        cand = GradedMap(w.N, target_ds.obj, cand.components, 0, check=False)
        iso = homotopy.find_iso(w.N, target_ds.obj, budget=budget, candidates=[cand])
        if iso is None:
            raise TowerError(f"step {k}: isomorphism N -> M_{k-1} + C_k + ... not found within budget")
        steps.append(ChainStep(w, target_ds.obj, iso))
        r_obj = r_new
    return steps


def tower_delta_witness(t: Tower, budget: int = DEFAULT_BUDGET) -> tuple[DegenerationWitness, Complex, IsoWitness]:
    """One triangle ``(+)M_k -> M (+) (+)M_k -> (+)C_k`` for ``1 <= k <= n - 1``.

    ``v`` is the subdiagonal built from ``f_2, ..., f_{n-1}`` (so ``v^{n-1} = 0``)
    and ``u = f_n`` on the last summand.
    """
    _require(t)
    alg, n = t.algebra, t.length
    m = t.top
    zs = [t.objects[k] for k in range(1, n)]
    if zs:
        zsum = direct_sum(*zs) if len(zs) > 1 else None
        z = zsum.obj if zsum else zs[0]
        inj = zsum.inj if zsum else (ChainMap.identity(z),)
        proj = zsum.proj if zsum else (ChainMap.identity(z),)
        v = ChainMap.zero(z, z)
        for k in range(1, n - 1):
            v = v + inj[k] @ t.maps[k] @ proj[k - 1]
        u = as_chain_map(t.maps[n - 1] @ proj[n - 2])
    else:
        z = Complex.zero(alg)
        inj = proj = ()
        v = ChainMap.zero(z, z)
        u = ChainMap.zero(z, m)
    w = left_witness(z, as_chain_map(v), u, certify_nil=False)
    nil = nilpotency_certificate(w.v, bound=max(n, 1))
    w = DegenerationWitness(w.side, w.M, w.N, w.Z, w.v, w.u, w.triangle, nil, w.layout)
    cs = [t.cone_term(k) for k in range(1, n + 1)]
    target = direct_sum(*cs)
    pn = cone_parts(w.triangle.f)
    mid = direct_sum(z, m)
    cand = None
    for k in range(1, n + 1):
        pk = cone_parts(t.maps[k - 1])
        # M_k sits in Z + M at slot k (Z part for k < n, M for k = n)
        if k < n:
            to_mk = proj[k - 1] @ mid.proj[0] @ pn.out_target
        else:
            to_mk = mid.proj[1] @ pn.out_target
        part = pk.in_target @ to_mk
        if k > 1:
            # M_{k-1}[1] sits in Z[1] at slot k - 1
            part = part + pk.in_shift @ shift_map(proj[k - 2], 1) @ pn.out_shift
        term = target.inj[k - 1] @ t.certificates[k - 1].map @ part
        cand = term if cand is None else cand + term
    cand = GradedMap(w.N, target.obj, cand.components, 0, check=False)
    iso = homotopy.find_iso(w.N, target.obj, budget=budget, candidates=[cand])
    if iso is None:
        raise TowerError("isomorphism N -> C_1 + ... + C_n not found within budget")
    return w, target.obj, iso


def shift_sum_from_counter(c: Counter) -> ShiftSum:
    return ShiftSum(tuple(ShiftTerm(g, k, m) for (g, k), m in sorted(c.items()) if m))
