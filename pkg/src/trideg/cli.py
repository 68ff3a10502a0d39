"""Command-line front end.

Exit status: 0 when every verdict holds, 1 when a verification failed or a
certificate search ran out of budget, 2 on malformed or inconsistent input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__, demos, homotopy
from . import serialize as ser
from .degeneration import (CompletionError, deg_pullback, ged_pushout, left_witness, nilpotency_certificate,
                           theorem_cone_comparison, two_pushout_theorem)
from .complexes import cone
from .grothendieck import NonZeroClassError, TowerError, k0_class, m_value, pair_decompose, tower_delta_witness, \
    tower_nil_chain
from .obstruction import isolated_homology_obstruction, zero_degenerates_witness
from .suite import run_suite
from .triangles import CertificateError

UNKNOWN = ("unknown: no isolated-homology certificate. This does not show that the complex "
           "is a triangle degeneration of zero.")


class Result:
    """Verdict plus a machine-readable report and the human-readable lines."""

    def __init__(self, command: str):
        self.command = command
        self.checks: dict[str, bool] = {}
        self.report: dict = {"command": command}
        self.lines: list[str] = []

    def check(self, name: str, ok: bool) -> bool:
        self.checks[name] = bool(ok)
        self.lines.append(f"[{'ok' if ok else 'FAIL'}] {name}")
        return bool(ok)

    def say(self, text: str):
        self.lines.append(text)

    @property
    def verdict(self) -> bool:
        return all(self.checks.values())

    def as_json(self) -> dict:
        return {**self.report, "checks": self.checks, "verdict": self.verdict}


def _ctx() -> ser.Context:
    return ser.Context(Path("."))


def _map(path: str):
    return ser.map_from_json(path, _ctx(), path)


def _complex(path: str):
    return ser.complex_from_json(path, _ctx(), path)


def _iso(w: homotopy.IsoWitness | None, named=None) -> dict | None:
    return None if w is None else {**ser.iso_to_json(w, named), "attempts": w.attempts}


def _witness_checks(res: Result, w):
    res.check("triangle certificate verifies", w.verify())
    km, kn = k0_class(w.M), k0_class(w.N)
    res.say(f"k0(M) = {km}, k0(N) = {kn}")
    res.check("k0(M) = k0(N)", km == kn)
    if w.nil is not None:
        res.say(f"v is nilpotent: v^{w.nil.exponent} ~ 0 (homotopy recorded)")
    else:
        res.say("v: no nilpotency certificate")
    res.report["witness"] = ser.witness_to_json(w)


# -- commands -------------------------------------------------------------------


def cmd_cone(args) -> Result:
    res = Result("cone")
    f = _map(args.map)
    c, tri = cone(f)
    res.say(f"cone(f) = {c!r}")
    res.check("d o d = 0", c.is_valid())
    res.check("standard triangle verifies", tri.verify())
    res.report["cone"] = ser.complex_to_json(c)
    res.report["triangle"] = ser.Writer({"cone": c}).triangle(tri)
    return res


def cmd_deg(args) -> Result:
    res = Result("deg")
    u, v = _map(args.u), _map(args.v)
    pb = deg_pullback(u, v, budget=args.budget)
    res.say(f"N = Deg(u, v) = {pb.n!r}")
    _witness_checks(res, pb.witness)
    return res


def cmd_ged(args) -> Result:
    res = Result("ged")
    u, v = _map(args.u), _map(args.v)
    po = ged_pushout(u, v)
    res.say(f"N = Ged(u', v) = {po.n!r}")
    _witness_checks(res, po.witness)
    return res


def cmd_left_witness(args) -> Result:
    res = Result("left-witness")
    z, v, u = _complex(args.z), _map(args.v), _map(args.u)
    w = left_witness(z, v, u)
    res.say(f"N = cone((v; u)) = {w.N!r}")
    _witness_checks(res, w)
    return res


def cmd_nilpotent(args) -> Result:
    res = Result("nilpotent")
    v = _map(args.v)
    nil = nilpotency_certificate(v)
    if nil is not None:
        res.say(f"v^{nil.exponent} is null-homotopic")
        res.report["nil"] = ser.Writer().nil(nil)
    res.check("v is nilpotent in K^b", nil is not None)
    return res


def cmd_k0(args) -> Result:
    res = Result("k0")
    x = _complex(args.complex)
    k = k0_class(x)
    res.say(f"[X] = {k}")
    res.report["k0"] = k.as_dict()
    res.report["zero"] = k.is_zero()
    return res


def cmd_pair_decompose(args) -> Result:
    res = Result("pair-decompose")
    x = ser.shiftsum_from_json(ser.read_json(args.shiftsum))
    try:
        pairs = pair_decompose(x)
    except NonZeroClassError as exc:
        raise ser.InputError(str(exc)) from exc
    res.say(f"m(X) = {m_value(x)}")
    for p in pairs:
        res.say(f"{p.mult} x ({p.gen}[{p.even}] + {p.gen}[{p.odd}])")
    res.report["m"] = m_value(x)
    res.report["pairs"] = [p._asdict() for p in pairs]
    return res


def cmd_tower_deg(args) -> Result:
    res = Result("tower-deg")
    t = ser.tower_from_json(ser.read_json(args.tower), ser.Context(Path(args.tower).parent))
    if not t.shape_ok():
        raise ser.InputError(f"{args.tower}: malformed tower")
    if any(c is None for c in t.certificates) or len(t.certificates) < t.length:
        t = t.certify(budget=args.budget, rng=np.random.default_rng(args.seed))
    if not res.check("tower certificates verify", t.verify()):
        return res
    k0 = k0_class(t.top)
    res.say(f"length {t.length}, k0(M_n) = {k0}")
    cones = {f"C{k}": t.cone_term(k) for k in range(1, t.length + 1)}
    if not args.single:
        steps = tower_nil_chain(t, budget=args.budget)
        out = []
        for i, st in enumerate(steps):
            ok = st.witness.verify() and st.iso.verify() and k0_class(st.witness.N) == k0
            res.check(f"nil-chain step {i + 1}: witness, N ~ target, k0", ok)
            out.append({"witness": ser.witness_to_json(st.witness), "target": ser.complex_to_json(st.target),
                        "iso": _iso(st.iso)})
        res.report["nil_chain"] = out
    if not args.nil_chain:
        w, target, iso = tower_delta_witness(t, budget=args.budget)
        res.check("single witness verifies", w.verify())
        res.check("N ~ C_1 + ... + C_n (certified)", iso.verify())
        res.check("k0(N) = k0(M_n)", k0_class(target) == k0)
        res.report["single"] = {"witness": ser.witness_to_json(w), "target": ser.complex_to_json(target),
                                "iso": _iso(iso, cones)}
    return res


def cmd_obstruct(args) -> Result:
    res = Result("obstruct")
    x = _complex(args.complex)
    cert = isolated_homology_obstruction(x)
    res.report["k0"] = k0_class(x).as_dict()
    if cert is None:
        res.say(UNKNOWN)
        res.report["obstruction"] = None
        res.report["status"] = "unknown"
    else:
        res.say(f"isolated nonzero homology in degree {cert.degree}: not a triangle degeneration of zero "
                f"({cert.method})")
        res.check("certificate re-checks", cert.verify(x))
        res.report["obstruction"] = cert.as_json()
        res.report["status"] = "obstructed"
    return res


def cmd_zero_deg(args) -> Result:
    res = Result("zero-deg")
    s = _complex(args.complex)
    zd = zero_degenerates_witness(s)
    res.say("0 <=_{Delta+nil} S[1] + S with v = 0")
    res.check("witness verifies", zd.witness.verify())
    res.check("N ~ S[1] + S (certified)", zd.iso.verify())
    res.check("k0(N) = 0", k0_class(zd.witness.N).is_zero())
    res.report["witness"] = ser.witness_to_json(zd.witness)
    res.report["iso"] = _iso(zd.iso)
    return res


def cmd_compare_cones(args) -> Result:
    res = Result("compare-cones")
    w = ser.witness_from_json(args.witness, _ctx())
    res.check("input witness verifies", w.verify())
    cc = theorem_cone_comparison(w, budget=args.budget, rng=np.random.default_rng(args.seed))
    if cc.iso is None:
        res.say("alpha: cone(v) -> cone(pi) isomorphism not found within budget")
    res.check("cone(v) ~ cone(pi) (certified)", cc.verdict and cc.iso is not None and cc.iso.verify())
    res.report["iso"] = _iso(cc.iso)
    return res


def cmd_two_pushout(args) -> Result:
    res = Result("two-pushout")
    w1 = ser.witness_from_json(args.w1, _ctx())
    w2 = ser.witness_from_json(args.w2, _ctx())
    res.check("input witnesses verify", w1.verify() and w2.verify())
    tp = two_pushout_theorem(w1, w2, budget=args.budget)
    for name, ok in tp.checks.items():
        if name != "stage":
            res.check(name, ok)
    res.say(f"triangle stage: {tp.checks['stage']}")
    if tp.witness is None:
        res.say("left witness X -> Y: certificate not found within budget")
    res.check("X <=_left Y (transported certificate)", tp.verdict)
    res.report["X"] = ser.complex_to_json(tp.x)
    res.report["Y"] = ser.complex_to_json(tp.y)
    res.report["d"] = ser.map_to_json(tp.d)
    res.report["witness"] = None if tp.witness is None else ser.witness_to_json(tp.witness)
    return res


def cmd_demo(args) -> Result:
    res = Result(f"demo {args.name}")
    if args.name == "zwara":
        r = demos.zwara(args.field, budget=args.budget)
        res.say(f"A2 over GF({args.field}); M = P1, N1 = P2, N2 = resolution of the simple top of P1")
        res.check("left witness Z -> M + Z -> N2 + N1 verifies", r["witness"].verify())
        res.check("N ~ N of the standard construction (certified)", r["standard_iso"] is not None)
        res.check("cone(pi) ~ cone(v) (certified)", r["comparison"].verdict)
        res.check("cone(pi) ~ N1[1] + N1 (certified)", r["cone_pi_iso"] is not None)
        res.report["witness"] = ser.witness_to_json(r["witness"])
        res.report["standard_iso"] = _iso(r["standard_iso"])
        res.report["comparison_iso"] = _iso(r["comparison"].iso)
        res.report["cone_pi_iso"] = _iso(r["cone_pi_iso"])
    elif args.name == "lemma-counterexample":
        r = demos.lemma_counterexample(args.field)
        cert = r["certificate"]
        res.say("S = simple top of P1 over A2, as the complex P2 -> P1")
        res.check(f"S + S[3]: isolated homology in degree {cert.degree if cert else '?'}", cert is not None)
        res.check("S + S[3]: k0 = 0", r["k0_bad"].is_zero())
        res.say("S + S[3] is not a triangle degeneration of zero, although its class vanishes")
        res.check("S + S[1]: no certificate (unknown)", r["good_certificate"] is None)
        res.check("S + S[1]: zero degeneration witness verifies", r["zero_witness"].witness.verify())
        res.check("S[1] + S ~ S + S[1] (certified)", r["swap"] is not None)
        res.report["certificate"] = cert.as_json() if cert else None
        res.report["k0"] = r["k0_bad"].as_dict()
        res.report["zero_witness"] = ser.witness_to_json(r["zero_witness"].witness)
        res.report["zero_witness_iso"] = _iso(r["zero_witness"].iso)
        res.report["swap_iso"] = _iso(r["swap"])
    else:
        r = demos.cone_zero(args.field, args.seed, budget=args.budget)
        res.say(f"Z = {r['Z']!r}")
        iso = r["iso"]
        res.check("cone(0_Z) ~ Z[1] + Z (certified)", iso is not None and iso.verify())
        if iso is not None:
            res.say(f"found at attempt {iso.attempts}")
        res.check("zero degeneration witness with nilpotent v verifies",
                  r["zero_witness"].witness.verify() and r["zero_witness"].witness.nil is not None)
        res.report["iso"] = _iso(iso)
        res.report["zero_witness"] = ser.witness_to_json(r["zero_witness"].witness)
    return res


def cmd_prop_suite(args) -> Result:
    res = Result("prop-suite")
    rep = run_suite(args.seed, args.cases, args.budget)
    for name, n in sorted(rep.checks.items()):
        bad = sum(1 for f in rep.failures if f["check"] == name)
        res.check(f"{name}: {n - bad}/{n}", bad == 0)
    res.report["suite"] = rep.as_json()
    return res


# -- argument parsing -------------------------------------------------------------


def _common(suppress: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="random seed (default 0)")
    p.add_argument("--cases", type=int, default=d(100), help="prop-suite cases (default 100)")
    p.add_argument("--budget", type=int, default=d(homotopy.DEFAULT_BUDGET),
                   help="iso-search attempts (default 256)")
    p.add_argument("--field", type=int, default=d(2), help="prime field for demos (default 2)")
    p.add_argument("--json", action="store_true", default=d(False), help="print the JSON report")
    p.add_argument("--out", default=d(None), help="also write the JSON report to this file")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trideg", parents=[_common(False)],
                                     description="Triangle degenerations in K^b(proj A) with certificates.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True
    common = [_common(True)]

    def add(name, func, help, *positional):
        p = sub.add_parser(name, parents=common, help=help)
        for arg, text in positional:
            p.add_argument(arg, help=text)
        p.set_defaults(func=func)
        return p

    add("cone", cmd_cone, "mapping cone of a chain map", ("map", "map JSON"))
    add("deg", cmd_deg, "homotopy pullback Deg(u, v)", ("u", "u: M -> Z"), ("v", "v: Z -> Z"))
    add("ged", cmd_ged, "homotopy pushout Ged(u', v)", ("u", "u': Z -> M"), ("v", "v: Z -> Z"))
    add("left-witness", cmd_left_witness, "N = cone((v; u)) with its triangle",
        ("z", "Z complex"), ("v", "v: Z -> Z"), ("u", "u: Z -> M"))
    add("nilpotent", cmd_nilpotent, "nilpotency certificate for an endomorphism", ("v", "v: Z -> Z"))
    add("k0", cmd_k0, "class in the Grothendieck group", ("complex", "complex JSON"))
    add("pair-decompose", cmd_pair_decompose, "even/odd pairing of a zero-class shift sum",
        ("shiftsum", "shift-sum JSON"))
    p = add("tower-deg", cmd_tower_deg, "degenerations from a tower of cones", ("tower", "tower JSON"))
    g = p.add_mutually_exclusive_group()
    g.add_argument("--nil-chain", action="store_true", help="only the chain of nilpotent witnesses")
    g.add_argument("--single", action="store_true", help="only the single triangle witness")
    add("obstruct", cmd_obstruct, "isolated-homology obstruction to degenerating from zero",
        ("complex", "complex JSON"))
    add("zero-deg", cmd_zero_deg, "0 degenerates to S[1] + S", ("complex", "complex JSON"))
    add("compare-cones", cmd_compare_cones, "cone(pi) ~ cone(v) for a left witness", ("witness", "witness JSON"))
    add("two-pushout", cmd_two_pushout, "pushouts of two right witnesses sharing s",
        ("w1", "first right witness"), ("w2", "second right witness"))
    p = add("demo", cmd_demo, "built-in worked examples")
    p.add_argument("name", choices=["zwara", "lemma-counterexample", "cone-zero"])
    add("prop-suite", cmd_prop_suite, "randomized property suite")
    return parser


def _emit(args, payload: dict, lines: list[str]):
    if args.out:
        Path(args.out).write_text(ser.dumps(payload) + "\n")
    if args.json:
        print(ser.dumps(payload))
    else:
        print("\n".join(lines))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.budget < 1 or args.cases < 0:
        parser.error("--budget must be positive and --cases non-negative")
    try:
        res = args.func(args)
    except (CertificateError, CompletionError, TowerError) as exc:
        msg = str(exc)
        payload = {"command": args.command, "verdict": False, "error": msg}
        _emit(args, payload, [f"verification failed: {msg}"])
        return 1
    except (ser.InputError, ValueError, KeyError, TypeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    _emit(args, res.as_json(), res.lines + [f"verdict: {'true' if res.verdict else 'false'}"])
    return 0 if res.verdict else 1


if __name__ == "__main__":
    sys.exit(main())
