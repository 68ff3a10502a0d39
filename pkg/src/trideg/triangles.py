"""Distinguished triangles that are not literally cone triangles.

A triangle ``X -f-> Y -g-> Z -h-> X[1]`` is certified by a comparison
``phi: cone(f) -> Z`` whose cone is contractible, together with homotopies
for ``phi g0 ~ g`` and ``h phi ~ h0`` where ``(g0, h0)`` are the standard maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import exactla, homotopy
from .complexes import ChainMap, Complex, GradedMap, Homotopy, Triangle, cone, differential, shift
from .systems import MapSystem, Term, as_chain_map


class CertificateError(RuntimeError):
    """A triangle certificate could not be produced within the search budget."""


@dataclass(frozen=True, eq=False)
class TransportedCertificate:
    phi: ChainMap
    contraction: Homotopy
    square_g: Homotopy
    square_h: Homotopy

    kind = "transported"

    def verify(self, tri: Triangle) -> bool:
        c, std = cone(tri.f)
        phi = self.phi
        if phi.source != c or phi.target != tri.Z or not phi.is_chain_map():
            return False
        cc, _ = cone(phi)
        if self.contraction.source != cc or not self.contraction.witnesses(ChainMap.identity(cc)):
            return False
        return (self.square_g.witnesses(phi @ std.g, tri.g)
                and self.square_h.witnesses(tri.h @ phi, std.h))


def _finish(x, y, z, f, g, h, std, phi, contraction, kg, kh) -> Triangle:
    phi = as_chain_map(phi)
    if h is None:
        psi = homotopy.homotopy_inverse(phi)
        if psi is None:
            raise CertificateError("comparison map has no homotopy inverse")
        h = std.h @ psi
        kh = homotopy.homotopic(h @ phi, std.h)
        if kh is None:
            raise CertificateError("derived third map does not commute")
    cert = TransportedCertificate(phi, contraction, kg, kh)
    return Triangle(x, y, z, as_chain_map(f), as_chain_map(g), as_chain_map(h), cert)


class Constraint(NamedTuple):
    """``left o phi o right ~ rhs`` (``None`` for an identity factor)."""

    left: GradedMap | None
    right: GradedMap | None
    rhs: GradedMap


def search_iso(c: Complex, z: Complex, constraints: Sequence[Constraint] = (),
               budget: int = homotopy.DEFAULT_BUDGET, candidates: Iterable[GradedMap] = (),
               rng: np.random.Generator | None = None) -> tuple[ChainMap, Homotopy, list[Homotopy]]:
    """An isomorphism ``phi: c -> z`` in K^b satisfying the constraints up to homotopy.

    Returns ``(phi, contraction of cone(phi), homotopies)`` with one homotopy
    per constraint; raises :class:`CertificateError` otherwise.
    """
    def check(phi):
        hs = []
        for con in constraints:
            lhs = phi if con.right is None else phi @ con.right
            lhs = lhs if con.left is None else con.left @ lhs
            k = homotopy.homotopic(lhs, con.rhs)
            if k is None:
                return None
            hs.append(k)
        return hs

    attempts = 0
    for phi in candidates:
        if attempts >= budget:
            break
        if phi.source != c or phi.target != z or not phi.is_chain_map():
            continue
        attempts += 1
        hs = check(phi)
        if hs is None:
            continue
        contraction = homotopy.is_iso(phi).contraction
        if contraction is not None:
            return as_chain_map(phi), contraction, hs
    if homotopy.homology_dims(c, nonzero_only=True) != homotopy.homology_dims(z, nonzero_only=True):
        raise CertificateError("the two objects have different homology")

    p = c.algebra.field
    sys = MapSystem(c.algebra)
    phi_u = sys.unknown(c, z, 0, "phi")
    sys.chain_condition(phi_u)
    ks = []
    for con in constraints:
        src, tgt = con.rhs.source, con.rhs.target
        k = sys.unknown(src, tgt, -1)
        ks.append(k)
        sys.equation([Term(phi_u, left=con.left, right=con.right),
                      Term(k, left=differential(tgt), coeff=p - 1),
                      Term(k, right=differential(src), coeff=p - 1)], rhs=con.rhs)
    sol = sys.solve()
    if sol is None:
        raise CertificateError("the constraints on the comparison map are inconsistent")
    rng = rng if rng is not None else np.random.default_rng(0)
    # only the homotopy class of phi matters for being an isomorphism
    reps = sol.kernel[:, homotopy.class_representatives(sol.kernel, c, z)]
    exhaustive = False
    for coeffs, exhaustive in homotopy.coefficient_sequence(reps.shape[1], p, budget - attempts, rng):
        if attempts >= budget:
            break
        attempts += 1
        vec = sol.particular
        if coeffs.any():
            vec = (vec + exactla.matmul(reps, coeffs.reshape(-1, 1), p)[:, 0]) % p
        phi = as_chain_map(sol.value(phi_u, vec))
        contraction = homotopy.is_iso(phi).contraction
        if contraction is not None:
            hs = [Homotopy(k.source, k.target, sol.value(k, vec).components, check=False) for k in ks]
            return phi, contraction, hs
    else:
        if exhaustive:
            raise CertificateError("no solution of the constraints is an isomorphism (exhaustive search)")
    raise CertificateError(f"comparison isomorphism not found within budget ({budget} attempts)")


def transport(f: GradedMap, g: GradedMap, h: GradedMap | None = None, budget: int = homotopy.DEFAULT_BUDGET,
              candidates: Iterable[GradedMap] = (), rng: np.random.Generator | None = None) -> Triangle:
    """Certify ``X -f-> Y -g-> Z (-h-> X[1])`` as distinguished.

    When ``h`` is omitted it is derived from the comparison map.  Raises
    :class:`CertificateError` when no certificate is found within ``budget``.
    """
    x, y, z = f.source, f.target, g.target
    if g.source != y or (h is not None and (h.source != z or h.target != shift(x, 1))):
        raise ValueError("triangle maps do not compose")
    c, std = cone(f)
    constraints = [Constraint(None, std.g, g)]
    if h is not None:
        constraints.append(Constraint(h, None, std.h))
    phi, contraction, hs = search_iso(c, z, constraints, budget, candidates, rng)
    return _finish(x, y, z, f, g, h, std, phi, contraction, hs[0], hs[1] if h is not None else None)


def triangle_kind(tri: Triangle) -> str:
    return tri.certificate.kind
