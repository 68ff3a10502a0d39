"""Triangle degenerations: witnesses, nilpotency, homotopy pullbacks and pushouts.

A left witness is a distinguished triangle ``Z -(v;u)-> Z + M -> N -> Z[1]``,
a right witness one of the form ``N -> M + Z -(u, v)-> Z -> N[1]``.  The
``layout`` field records in which order the two summands of the middle object
appear.  When ``nil`` is present it certifies that ``v`` is nilpotent in K^b.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import homotopy
from .complexes import (ChainMap, Complex, GradedMap, Homotopy, Triangle, column, cone, cone_parts,
                        differential, direct_sum, induced_cone_map, row, shift, shift_map, sum_of_maps)
from .homotopy import DEFAULT_BUDGET, IsoWitness
from .systems import MapSystem, Term, as_chain_map
from .triangles import CertificateError, Constraint, search_iso, transport


class CompletionError(RuntimeError):
    """A triangle-morphism completion system turned out to be inconsistent."""


class ShapeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class NilpotencyCertificate:
    v: ChainMap
    exponent: int
    homotopy: Homotopy

    def verify(self) -> bool:
        power = self.v
        for _ in range(self.exponent - 1):
            power = power @ self.v
        return self.exponent >= 1 and self.homotopy.witnesses(power)


def nilpotency_certificate(v: GradedMap, bound: int | None = None) -> NilpotencyCertificate | None:
    """First ``n <= bound`` with ``v^n ~ 0``; ``None`` if there is none."""
    if v.source != v.target:
        raise ShapeError("v must be an endomorphism")
    v = as_chain_map(v)
    if bound is None:
        bound = 1 + homotopy.hom_dimension(v.source, v.source)
    power = v
    for n in range(1, bound + 1):
        h = homotopy.is_nullhomotopic(power)
        if h is not None:
            return NilpotencyCertificate(v, n, h)
        power = power @ v
    return None


def _middle(layout: tuple[str, str], z: Complex, m: Complex):
    return direct_sum(z, m) if layout == ("Z", "M") else direct_sum(m, z)


@dataclass(frozen=True, eq=False)
class DegenerationWitness:
    side: str
    M: Complex
    N: Complex
    Z: Complex
    v: ChainMap
    u: ChainMap
    triangle: Triangle
    nil: NilpotencyCertificate | None = None
    layout: tuple[str, str] = ("Z", "M")
    extras: dict = field(default_factory=dict, repr=False)

    @property
    def nilpotent(self) -> bool:
        return self.nil is not None

    def verify(self) -> bool:
        tri = self.triangle
        mid = _middle(self.layout, self.Z, self.M)
        iz, im = (0, 1) if self.layout == ("Z", "M") else (1, 0)
        if self.side == "left":
            if tri.X != self.Z or tri.Y != mid.obj or tri.Z != self.N:
                return False
            if self.u.source != self.Z or self.u.target != self.M:
                return False
            expected = mid.inj[iz] @ self.v + mid.inj[im] @ self.u
        elif self.side == "right":
            if tri.X != self.N or tri.Y != mid.obj or tri.Z != self.Z:
                return False
            if self.u.source != self.M or self.u.target != self.Z:
                return False
            expected = self.v @ mid.proj[iz] + self.u @ mid.proj[im]
        else:
            return False
        first = tri.f if self.side == "left" else tri.g
        if first != expected:
            return False
        if self.nil is not None and (self.nil.v != self.v or not self.nil.verify()):
            return False
        return tri.verify()


def _nil(v: GradedMap, certify: bool, bound: int | None = None) -> NilpotencyCertificate | None:
    return nilpotency_certificate(v, bound) if certify else None


def left_witness(z: Complex, v: GradedMap, u: GradedMap, certify_nil: bool = True) -> DegenerationWitness:
    """``N := cone((v; u): Z -> Z + M)`` with its standard triangle."""
    if v.source != z or v.target != z or u.source != z:
        raise ShapeError("expected v: Z -> Z and u: Z -> M")
    m = u.target
    f, _ = column([v, u])
    n, tri = cone(f)
    return DegenerationWitness("left", m, n, z, as_chain_map(v), as_chain_map(u), tri,
                               _nil(v, certify_nil), ("Z", "M"))


class PullbackResult(NamedTuple):
    n: Complex
    r: ChainMap
    s: ChainMap
    witness: DegenerationWitness


def deg_pullback(u: GradedMap, v: GradedMap, certify_nil: bool = True,
                 budget: int = DEFAULT_BUDGET) -> PullbackResult:
    """Homotopy pullback ``Deg(u, v)`` of ``M -u-> Z <-v- Z``.

    ``N := cone(a)[-1]`` for ``a = (u, -v): M + Z -> Z``; ``s`` and ``r`` are the
    projections of ``N`` onto ``M`` and ``Z``.  The witness triangle is
    ``N -(s; r)-> M + Z -a-> Z -> N[1]``.
    """
    z = v.source
    if v.target != z or u.target != z:
        raise ShapeError("expected u: M -> Z and v: Z -> Z")
    a, src = row([u, -v])
    parts = cone_parts(a)
    n = shift(parts.cone, -1)
    back = shift_map(parts.out_shift, -1)
    s = as_chain_map(src.proj[0] @ back)
    r = as_chain_map(src.proj[1] @ back)
    sr, _ = column([s, r])
    third = ChainMap(z, shift(n, 1), parts.triangle.g.scale(-1).components, check=False)
    tri = transport(sr, a, third, budget=budget)
    wv = as_chain_map(-v)
    w = DegenerationWitness("right", u.source, n, z, wv, as_chain_map(u), tri,
                            _nil(wv, certify_nil), ("M", "Z"), {"r": r, "s": s})
    return PullbackResult(n, r, s, w)


def ged_pushout(u_prime: GradedMap, v: GradedMap, certify_nil: bool = True) -> PullbackResult:
    """Homotopy pushout ``Ged(u', v)``: ``N := cone((u'; -v): Z -> M + Z)``.

    ``s: M -> N`` and ``r: Z -> N`` are the canonical maps into the cone.
    """
    z = v.source
    if v.target != z or u_prime.source != z:
        raise ShapeError("expected u': Z -> M and v: Z -> Z")
    f, mid = column([u_prime, -v])
    n, tri = cone(f)
    s = as_chain_map(tri.g @ mid.inj[0])
    r = as_chain_map(tri.g @ mid.inj[1])
    wv = as_chain_map(-v)
    w = DegenerationWitness("left", u_prime.target, n, z, wv, as_chain_map(u_prime), tri,
                            _nil(wv, certify_nil), ("M", "Z"), {"r": r, "s": s})
    return PullbackResult(n, r, s, w)


def right_witness(s: GradedMap, t: GradedMap, u: GradedMap, v: GradedMap, certify_nil: bool = True,
                  budget: int = DEFAULT_BUDGET, rng: np.random.Generator | None = None) -> DegenerationWitness:
    """Certify ``N -(s; t)-> M + Z -(u, v)-> Z -> N[1]`` as a right witness."""
    f, _ = column([s, t])
    g, _ = row([u, v])
    tri = transport(f, g, budget=budget, rng=rng)
    return DegenerationWitness("right", u.source, s.source, v.source, as_chain_map(v), as_chain_map(u), tri,
                               _nil(v, certify_nil), ("M", "Z"), {"s": as_chain_map(s), "t": as_chain_map(t)})




# -- the cone comparison theorem -----------------------------------------------


class ConeComparison(NamedTuple):
    cone_pi: Complex
    cone_v: Complex
    alpha: ChainMap
    verdict: bool
    iso: IsoWitness | None


def _left_parts(w: DegenerationWitness):
    tri = w.triangle
    mid = _middle(w.layout, w.Z, w.M)
    iz, im = (0, 1) if w.layout == ("Z", "M") else (1, 0)
    pi = as_chain_map(tri.g @ mid.inj[im])
    tau = as_chain_map(tri.g @ mid.inj[iz])
    return pi, tau


def theorem_cone_comparison(w: DegenerationWitness, budget: int = DEFAULT_BUDGET,
                            rng: np.random.Generator | None = None) -> ConeComparison:
    """Compare ``cone(pi)`` with ``cone(v)`` for a left witness.

    ``pi: M -> N`` and ``tau: Z -> N`` are the components of the triangle's
    second map.  Since ``pi u ~ -tau v`` the square with vertical maps
    ``u`` and ``-tau`` induces ``alpha: cone(v) -> cone(pi)``; among all
    completions we look for an isomorphism.
    """
    if w.side != "left":
        raise ShapeError("theorem_cone_comparison needs a left witness")
    pi, tau = _left_parts(w)
    v, u = w.v, w.u
    cone_v, _ = cone(v)
    cone_pi, _ = cone(pi)
    ntau = -tau
    k = homotopy.homotopic(ntau @ v, pi @ u)
    if k is None:
        raise CompletionError("the square pi u ~ -tau v does not commute up to homotopy")
    candidates = [induced_cone_map(v, pi, u, ntau, k)]
    for cand in candidates:
        chk = homotopy.is_iso(cand)
        if chk:
            return ConeComparison(cone_pi, cone_v, cand, True, IsoWitness(cand, chk.contraction))

    # every completion: alpha g_v ~ g_pi (-tau), h_pi alpha ~ u[1] h_v
    _, tv = cone(v)
    _, tp = cone(pi)
    p = v.algebra.field
    sys = MapSystem(v.algebra)
    al = sys.unknown(cone_v, cone_pi, 0, "alpha")
    sys.chain_condition(al)
    k1 = sys.unknown(w.Z, cone_pi, -1)
    sys.equation([Term(al, right=tv.g), Term(k1, left=differential(cone_pi), coeff=p - 1),
                  Term(k1, right=differential(w.Z), coeff=p - 1)], rhs=tp.g @ ntau)
    ms = shift(w.M, 1)
    k2 = sys.unknown(cone_v, ms, -1)
    sys.equation([Term(al, left=tp.h), Term(k2, left=differential(ms), coeff=p - 1),
                  Term(k2, right=differential(cone_v), coeff=p - 1)], rhs=shift_map(u, 1) @ tv.h)
    sol = sys.solve()
    if sol is None:
        raise CompletionError("completion system for alpha is inconsistent")
    rng = rng if rng is not None else np.random.default_rng(0)
    alpha = as_chain_map(sol.value(al))
    for i in range(budget):
        vec = sol.particular if i == 0 else sol.sample(rng)
        cand = as_chain_map(sol.value(al, vec))
        chk = homotopy.is_iso(cand)
        if chk:
            return ConeComparison(cone_pi, cone_v, cand, True, IsoWitness(cand, chk.contraction, i + 2))
        if sol.dimension == 0:
            break
    return ConeComparison(cone_pi, cone_v, alpha, False, None)


# -- factorization --------------------------------------------------------------


class FactorizationResult(NamedTuple):
    g2: Complex
    g12: Complex
    f: ChainMap
    verdict: bool
    triangle: Triangle | None
    message: str


def factorization_chain(w: GradedMap, nu1: GradedMap, nu2: GradedMap,
                        budget: int = DEFAULT_BUDGET) -> FactorizationResult:
    """``Ged(w, nu2) -> Ged(w, nu1 nu2)`` and its homotopy-cartesian square.

    On cone terms ``Z[1] + M + Z`` the comparison is ``diag(1, 1, nu1)``; the
    square is certified through the triangle
    ``Z -(-nu1; r2)-> Z + G2 -(r12, f)-> G12``.
    """
    g2 = ged_pushout(w, nu2, certify_nil=False)
    g12 = ged_pushout(w, nu1 @ nu2, certify_nil=False)
    p2, p12 = cone_parts(g2.witness.triangle.f), cone_parts(g12.witness.triangle.f)
    diag = sum_of_maps(ChainMap.identity(w.target), nu1)
    f = ChainMap.of(p12.in_shift @ p2.out_shift + p12.in_target @ diag @ p2.out_target)
    first, _ = column([-nu1, g2.r])
    second, _ = row([g12.r, f])
    try:
        tri = transport(first, second, budget=budget)
    except CertificateError as exc:
        return FactorizationResult(g2.n, g12.n, f, False, None, str(exc))
    return FactorizationResult(g2.n, g12.n, f, True, tri, "square certified")


def deg_factorization(u: GradedMap, nu1: GradedMap, nu2: GradedMap,
                      budget: int = DEFAULT_BUDGET) -> FactorizationResult:
    """Dual statement: ``Deg(u, nu1 nu2)`` is the homotopy pullback of ``r1`` and ``nu2``.

    ``f: Deg(u, nu1 nu2) -> Deg(u, nu1)`` is ``diag(1, nu2, 1)`` on the terms of
    ``cone(a)``; the certifying triangle is
    ``Deg12 -(f; r12)-> Deg1 + Z -(r1, -nu2)-> Z``.
    """
    d1 = deg_pullback(u, nu1, certify_nil=False, budget=budget)
    d12 = deg_pullback(u, nu1 @ nu2, certify_nil=False, budget=budget)
    a1, _ = row([u, -nu1])
    a12, _ = row([u, -(nu1 @ nu2)])
    q1, q12 = cone_parts(a1), cone_parts(a12)
    diag = sum_of_maps(ChainMap.identity(u.source), nu2)
    f_cone = q1.in_shift @ shift_map(diag, 1) @ q12.out_shift + q1.in_target @ q12.out_target
    f = ChainMap.of(shift_map(ChainMap.of(f_cone), -1))
    first, _ = column([f, d12.r])
    second, _ = row([d1.r, -nu2])
    try:
        tri = transport(first, second, budget=budget)
    except CertificateError as exc:
        return FactorizationResult(d1.n, d12.n, f, False, None, str(exc))
    return FactorizationResult(d1.n, d12.n, f, True, tri, "square certified")


# -- two pushouts -----------------------------------------------------------------


class TwoPushoutResult(NamedTuple):
    x: Complex
    y: Complex
    d: ChainMap
    verdict: bool
    witness: DegenerationWitness | None
    checks: dict


def _right_parts(w: DegenerationWitness):
    """``(s, t, u, v)`` with ``u s ~ v t`` from a right witness."""
    mid = _middle(w.layout, w.Z, w.M)
    iz, im = (0, 1) if w.layout == ("Z", "M") else (1, 0)
    f = w.triangle.f
    s = as_chain_map(mid.proj[im] @ f)
    t = as_chain_map(mid.proj[iz] @ f)
    return s, t, w.u, as_chain_map(-w.v)


def two_pushout_theorem(w1: DegenerationWitness, w2: DegenerationWitness,
                        budget: int = DEFAULT_BUDGET) -> TwoPushoutResult:
    """Pushouts ``X`` along ``(t, t')`` and ``Y`` along ``(u, u')``, and ``X <=_left Y``."""
    if w1.side != "right" or w2.side != "right":
        raise ShapeError("two_pushout_theorem needs right witnesses")
    if w1.M != w2.M or w1.N != w2.N:
        raise ShapeError("witnesses must share M and N")
    s, t, u, v = _right_parts(w1)
    s2, t2, u2, v2 = _right_parts(w2)
    if s != s2:
        raise ShapeError("witnesses must share the map s: N -> M")
    f1, zz = column([t, -t2])
    f2, _ = column([u, -u2])
    x, tx = cone(f1)
    y, ty = cone(f2)
    b = sum_of_maps(v, v2)
    k = homotopy.homotopic(b @ f1, f2 @ s)
    if k is None:
        raise CompletionError("universal-property square is not homotopy commutative")
    d = induced_cone_map(f1, f2, s, b, k)
    yy = as_chain_map(tx.g @ zz.inj[0])
    yy2 = as_chain_map(tx.g @ zz.inj[1])
    ww = as_chain_map(ty.g @ zz.inj[0])
    ww2 = as_chain_map(ty.g @ zz.inj[1])
    checks = {
        "d y ~ w v": homotopy.homotopic(d @ yy, ww @ v) is not None,
        "d y' ~ w' v'": homotopy.homotopic(d @ yy2, ww2 @ v2) is not None,
        "w v t ~ w u s": homotopy.homotopic(ww @ v @ t, ww @ u @ s) is not None,
        "w u s ~ w' u' s": homotopy.homotopic(ww @ u @ s, ww2 @ u2 @ s) is not None,
        "w' u' s ~ w' v' t'": homotopy.homotopic(ww2 @ u2 @ s, ww2 @ v2 @ t2) is not None,
    }
    first, _ = column([-v2, yy2])
    tri, stage = _two_pushout_triangle(first, ww2, d, budget)
    checks["stage"] = stage
    if tri is None:
        return TwoPushoutResult(x, y, d, False, None, checks)
    nv = as_chain_map(-v2)
    wit = DegenerationWitness("left", x, y, w2.Z, nv, yy2, tri, None, ("Z", "M"))
    verdict = all(val is True for key, val in checks.items() if key != "stage") and wit.verify()
    return TwoPushoutResult(x, y, d, verdict, wit, checks)


def _two_pushout_triangle(first: ChainMap, w2: ChainMap, d: ChainMap, budget: int):
    """Complete ``Z' -(-v'; y')-> Z' + X`` to a triangle ending in ``Y``.

    The canonical ``(w', d)`` is tried first.  The argument only determines ``d``
    (and ``w``) up to substitution, so we then allow ``d`` to vary with ``w'``
    fixed, and finally let the comparison isomorphism choose both.
    """
    y = d.target
    c, std = cone(first)
    mid = direct_sum(w2.source, d.source)
    second, _ = row([w2, d])
    try:
        return transport(first, second, budget=budget), "canonical"
    except CertificateError:
        pass
    for stage, constraints in (("substitute-d", [Constraint(None, std.g @ mid.inj[0], w2)]),
                               ("substitute-d-w", [])):
        try:
            phi, _, _ = search_iso(c, y, constraints, budget)
        except CertificateError:
            continue
        g = as_chain_map(phi @ std.g)
        try:
            return transport(first, g, budget=budget, candidates=[phi]), stage
        except CertificateError:
            continue
    return None, "failed"
