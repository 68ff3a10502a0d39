"""Homology certificates that an object is not a triangle degeneration of zero.

Suppose ``0 <=_Delta M`` through ``Z -(v;u)-> Z -> M -> Z[1]``.  If ``H^n(M)``
is nonzero while ``H^{n-1}(M)`` and ``H^{n+1}(M)`` vanish, the long exact
homology sequence makes ``H^n(v)`` and ``H^{n+1}(v)`` injective resp.
surjective at the flanks; over finite-dimensional homology these are
isomorphisms, which forces ``H^n(M) = 0``.  So such a degree certifies
``0 </=_Delta M``.  No certificate means "unknown", never "degenerates".
"""

from __future__ import annotations

from dataclasses import dataclass

from . import homotopy
from .complexes import ChainMap, Complex, direct_sum, shift
from .degeneration import DegenerationWitness, left_witness
from .homotopy import IsoWitness


@dataclass(frozen=True)
class ObstructionCertificate:
    degree: int
    homology: dict[int, tuple[int, ...]]
    method: str = "LES-certificate"

    kind = "isolated-homology"

    def as_json(self) -> dict:
        return {"kind": self.kind, "degree": self.degree, "method": self.method,
                "homology": {str(n): list(v) for n, v in sorted(self.homology.items())}}

    def verify(self, m: Complex) -> bool:
        h = homotopy.homology_dims(m, nonzero_only=True)
        n = self.degree
        zero = tuple(0 for _ in m.algebra.vertices)
        return (n in h and n - 1 not in h and n + 1 not in h
                and all(h.get(k, zero) == tuple(self.homology[k]) for k in (n - 1, n, n + 1) if k in self.homology))


def isolated_homology_obstruction(m: Complex) -> ObstructionCertificate | None:
    """A degree with nonzero homology whose neighbours have zero homology.

    Among several such degrees the one closest to 0 is reported (ties go to
    the higher degree).
    """
    h = homotopy.homology_dims(m, nonzero_only=True)
    isolated = [n for n in h if n - 1 not in h and n + 1 not in h]
    if not isolated:
        return None
    n = min(isolated, key=lambda d: (abs(d), -d))
    zero = tuple(0 for _ in m.algebra.vertices)
    consumed = {k: h.get(k, zero) for k in (n - 1, n, n + 1)}
    return ObstructionCertificate(n, consumed)


@dataclass(frozen=True, eq=False)
class ZeroDegeneration:
    witness: DegenerationWitness
    target: Complex
    iso: IsoWitness


def zero_degenerates_witness(s: Complex) -> ZeroDegeneration:
    """``0 <=_{Delta+nil} S[1] + S`` through ``S -(0; 0)-> S + 0 -> cone -> S[1]``.

    The cone of the zero map is literally ``S[1] + S``; the identity is
    recorded as the isomorphism certificate.
    """
    zero = Complex.zero(s.algebra)
    w = left_witness(s, ChainMap.zero(s, s), ChainMap.zero(s, zero))
    target = direct_sum(shift(s, 1), s).obj
    iso = homotopy.find_iso(w.N, target, budget=1)
    if iso is None:
        raise RuntimeError("cone of the zero map is not identified with S[1] + S")
    return ZeroDegeneration(w, target, iso)
