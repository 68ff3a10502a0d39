"""Seeded random instances and the randomized property suite."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import generators as gen
from . import homotopy
from .algebra import PathAlgebra
from .complexes import ChainMap, Complex, column, cone, direct_sum, shift, sum_of_maps
from .degeneration import (DegenerationWitness, deg_pullback, ged_pushout, left_witness, right_witness,
                           theorem_cone_comparison, _right_parts)
from .grothendieck import (NonZeroClassError, ShiftSum, Tower, empty_tower, expand_pairs, extend, k0_class,
                           m_value, pair_decompose)
from .obstruction import isolated_homology_obstruction, zero_degenerates_witness

ENDO_KINDS = ("zero", "nilpotent", "identity", "any")


def algebras(fields=(2, 3)) -> list[PathAlgebra]:
    return [a for p in fields for a in gen.standard_algebras(p)]


def pick_algebra(rng: np.random.Generator, fields=(2, 3)) -> PathAlgebra:
    algs = algebras(fields)
    return algs[int(rng.integers(0, len(algs)))]


def small_complex(alg: PathAlgebra, rng: np.random.Generator, max_rank: int = 4, max_amplitude: int = 3) -> Complex:
    """Mix of random complexes and near-module shapes (amplitude 1 or 2 ending in degree 0)."""
    if rng.random() < 0.3:
        return gen.random_complex(alg, rng, max_rank=min(max_rank, 3), max_amplitude=2, low=-1)
    return gen.random_complex(alg, rng, max_rank=max_rank, max_amplitude=max_amplitude)


def random_left_witness(alg: PathAlgebra, rng: np.random.Generator, kind: str | None = None) -> DegenerationWitness:
    z = small_complex(alg, rng)
    m = small_complex(alg, rng)
    kind = kind or ENDO_KINDS[int(rng.integers(0, len(ENDO_KINDS)))]
    v = gen.random_endo(z, rng, kind)
    u = gen.random_chain_map(z, m, rng)
    return left_witness(z, v, u)


def random_deg(alg: PathAlgebra, rng: np.random.Generator, kind: str | None = None,
               budget: int = homotopy.DEFAULT_BUDGET):
    z = small_complex(alg, rng)
    m = small_complex(alg, rng)
    kind = kind or ENDO_KINDS[int(rng.integers(0, len(ENDO_KINDS)))]
    v = gen.random_endo(z, rng, kind)
    u = gen.random_chain_map(m, z, rng)
    return deg_pullback(u, v, budget=budget)


def random_ged(alg: PathAlgebra, rng: np.random.Generator, kind: str | None = None):
    z = small_complex(alg, rng)
    m = small_complex(alg, rng)
    kind = kind or ENDO_KINDS[int(rng.integers(0, len(ENDO_KINDS)))]
    v = gen.random_endo(z, rng, kind)
    u = gen.random_chain_map(z, m, rng)
    return ged_pushout(u, v)


def random_shiftsum(rng: np.random.Generator, max_m: int = 8, generators=("S", "T")) -> ShiftSum:
    """A zero-class shift sum with ``m(X) <= max_m``, built from random even/odd pairs."""
    items: Counter = Counter()
    for g in generators[: int(rng.integers(1, len(generators) + 1))]:
        m = int(rng.integers(1, max_m // len(generators) + 1))
        for _ in range(m):
            even = 2 * int(rng.integers(-3, 4))
            odd = 2 * int(rng.integers(-3, 3)) + 1
            items[(g, even)] += 1
            items[(g, odd)] += 1
    return ShiftSum.of((g, s, c) for (g, s), c in sorted(items.items()))


def random_tower(alg: PathAlgebra, rng: np.random.Generator, max_length: int = 4) -> Tower:
    gens = {f"P{v}": Complex.stalk(alg, v) for v in alg.vertices}
    gens["R"] = gen.random_complex(alg, rng, max_rank=2, max_amplitude=2)
    t = empty_tower(alg, gens)
    names = list(gens)
    for _ in range(int(rng.integers(1, max_length + 1))):
        g = names[int(rng.integers(0, len(names)))]
        r = int(rng.integers(-1, 2))
        c = shift(gens[g], r)
        e = gen.random_chain_map(shift(c, -1), t.top, rng)
        t = extend(t, g, r, e)
    return t


def stabilized_pair(alg: PathAlgebra, rng: np.random.Generator, budget: int = homotopy.DEFAULT_BUDGET,
                    twist: bool = True) -> tuple[DegenerationWitness, DegenerationWitness]:
    """Two right witnesses sharing ``N`` and ``s``.

    The first is a homotopy pullback ``Deg(u, v)``.  The second completes the
    same ``s: N -> M`` with ``Z' = Z + W``: ``u' = (u; g)``, ``t' = (t; g s)``
    and ``v' = v + id_W``, optionally conjugated by an automorphism of ``Z'``.
    """
    w1 = random_deg(alg, rng, budget=budget).witness
    s, t, u, v = _right_parts(w1)
    m, z = w1.M, w1.Z
    w = small_complex(alg, rng, max_rank=2, max_amplitude=2)
    g = gen.random_chain_map(m, w, rng)
    u2, zw = column([u, g])
    t2, _ = column([t, g @ s])
    v2 = sum_of_maps(v, ChainMap.identity(w))
    if twist:
        # theta = [[1, 0], [c, 1]] on Z + W, an automorphism for any chain map c: Z -> W
        c = gen.random_chain_map(z, w, rng)
        theta = ChainMap.identity(zw.obj) + zw.inj[1] @ c @ zw.proj[0]
        u2, t2, v2 = theta @ u2, theta @ t2, theta @ v2 @ (ChainMap.identity(zw.obj) - zw.inj[1] @ c @ zw.proj[0])
    w2 = right_witness(s, t2, u2, -v2, budget=budget, rng=rng)
    return w1, w2


# -- the randomized property suite ----------------------------------------------


@dataclass
class SuiteReport:
    seed: int
    cases: int
    checks: Counter = field(default_factory=Counter)
    failures: list = field(default_factory=list)

    def record(self, name: str, ok: bool, case: int, detail: str = ""):
        self.checks[name] += 1
        if not ok:
            self.failures.append({"case": case, "check": name, "detail": detail})

    @property
    def verdict(self) -> bool:
        return not self.failures

    def as_json(self) -> dict:
        return {"seed": self.seed, "cases": self.cases, "checks": dict(sorted(self.checks.items())),
                "failures": self.failures, "verdict": self.verdict}


def stalk_preservation_holds(w: DegenerationWitness) -> bool | None:
    """``None`` when the hypothesis (certified nilpotent v, N stalk-like) fails."""
    if w.nil is None or not homotopy.homology_concentrated_in(w.N, 0):
        return None
    return homotopy.homology_concentrated_in(w.M, 0)


def run_case(i: int, seed: int, budget: int, report: SuiteReport):
    rng = np.random.default_rng([seed, i])
    alg = pick_algebra(rng)
    builders = [("left_witness", lambda: random_left_witness(alg, rng)),
                ("deg_pullback", lambda: random_deg(alg, rng, budget=budget).witness),
                ("ged_pushout", lambda: random_ged(alg, rng).witness)]
    for name, build in builders:
        try:
            w = build()
        except Exception as exc:  # a failure to certify is a suite failure, not a crash
            report.record(f"{name}: construction", False, i, f"{type(exc).__name__}: {exc}")
            continue
        report.record(f"{name}: verify", w.verify(), i)
        report.record(f"{name}: k0(M) = k0(N)", k0_class(w.M) == k0_class(w.N), i)
        report.record(f"{name}: d o d = 0", w.N.is_valid(), i)
        sp = stalk_preservation_holds(w)
        if sp is not None:
            report.record("stalk preservation", sp, i)
        if w.side == "left" and i % 3 == 0:
            cc = theorem_cone_comparison(w, budget=budget, rng=rng)
            report.record("cone(pi) ~ cone(v)", cc.verdict and cc.iso is not None and cc.iso.verify(), i)
    z = small_complex(alg, rng)
    c, _ = cone(ChainMap.zero(z, z))
    iso = homotopy.find_iso(c, direct_sum(shift(z, 1), z).obj, budget=budget)
    report.record("cone(0) ~ Z[1] + Z at attempt 1", iso is not None and iso.attempts == 1, i)
    zd = zero_degenerates_witness(z)
    report.record("zero degeneration verifies", zd.witness.verify() and k0_class(zd.witness.N).is_zero(), i)
    report.record("no obstruction on S[1] + S", isolated_homology_obstruction(zd.witness.N) is None, i)
    x = random_shiftsum(rng)
    try:
        pairs = pair_decompose(x)
        ok = (expand_pairs(pairs) == x.multiset() and all(p.even % 2 == 0 and p.odd % 2 == 1 for p in pairs)
              and sum(p.mult for p in pairs) == m_value(x))
    except NonZeroClassError as exc:
        ok = False
        report.record("pair decomposition", ok, i, str(exc))
    else:
        report.record("pair decomposition", ok, i)


def run_suite(seed: int = 0, cases: int = 100, budget: int = homotopy.DEFAULT_BUDGET) -> SuiteReport:
    report = SuiteReport(seed, cases)
    for i in range(cases):
        run_case(i, seed, budget, report)
    return report
