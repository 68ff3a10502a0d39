"""JSON formats for algebras, complexes, maps, witnesses, shift sums and towers.

Wherever a complex or algebra is expected, a JSON object is read inline and a
string is a reference: ``"#name"`` names an object of the enclosing bundle,
anything else is a file path relative to the referring file.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .algebra import PathAlgebra
from .complexes import ChainMap, Complex, GradedMap, Homotopy, StandardCertificate, Triangle
from .degeneration import DegenerationWitness, NilpotencyCertificate
from .grothendieck import ShiftSum, Tower
from .homotopy import IsoWitness
from .matrices import HomMatrix
from .triangles import TransportedCertificate


class InputError(ValueError):
    """Malformed or inconsistent input; the CLI maps this to exit status 2."""


def read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


class Context:
    """Resolves references while loading."""

    def __init__(self, base: Path | None = None, objects: dict | None = None, algebra: PathAlgebra | None = None):
        self.base = base or Path(".")
        self.objects = dict(objects or {})
        self.algebra = algebra
        self._files: dict[Path, Any] = {}

    def child(self, base: Path) -> Context:
        ctx = Context(base, {}, self.algebra)
        ctx._files = self._files
        return ctx

    def load_file(self, ref: str) -> tuple[Any, Context]:
        path = (self.base / ref).resolve()
        if path not in self._files:
            self._files[path] = read_json(path)
        return self._files[path], self.child(path.parent)


# -- algebras ----------------------------------------------------------------------


def algebra_to_json(alg: PathAlgebra) -> dict:
    q = alg.presentation
    out = {"field": q.field, "vertices": list(q.vertices),
           "arrows": [{"name": a.name, "source": a.source, "target": a.target} for a in q.arrows],
           "relations": [list(r) for r in q.relations]}
    if q.nilpotency_bound is not None:
        out["nilpotency_bound"] = q.nilpotency_bound
    return out


def algebra_from_json(obj: Any, ctx: Context | None = None) -> PathAlgebra:
    ctx = ctx or Context()
    if isinstance(obj, str):
        if obj.startswith("#"):
            found = ctx.objects.get(obj[1:])
            if isinstance(found, PathAlgebra):
                return found
            if obj == "#algebra" and ctx.algebra is not None:
                return ctx.algebra
            raise InputError(f"unknown algebra reference {obj!r}")
        data, sub = ctx.load_file(obj)
        return algebra_from_json(data, sub)
    if not isinstance(obj, dict):
        raise InputError("algebra must be an object or a reference")
    try:
        arrows = [(a["name"], str(a["source"]), str(a["target"])) for a in obj["arrows"]]
        rels = [r.split("*") if isinstance(r, str) else r for r in obj.get("relations", [])]
        return PathAlgebra.from_quiver([str(v) for v in obj["vertices"]], arrows, rels, int(obj["field"]),
                                       obj.get("nilpotency_bound"))
    except KeyError as exc:
        raise InputError(f"algebra is missing the key {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        raise InputError(f"invalid algebra: {exc}") from exc


# -- matrices, complexes, maps ---------------------------------------------------------


def matrix_to_json(m: HomMatrix) -> list:
    alg = m.algebra
    return [[{str(alg.paths[i]): int(c) for i, c in enumerate(m.data[r, c_]) if c}
             for c_ in range(len(m.cols))] for r in range(len(m.rows))]


def matrix_from_json(alg: PathAlgebra, rows, cols, obj: Any, where: str) -> HomMatrix:
    try:
        return HomMatrix.from_entries(alg, rows, cols, [[entry or {} for entry in row] for row in obj])
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"{where}: {exc}") from exc


class Writer:
    """Serializes objects, replacing known complexes by ``#name`` references."""

    def __init__(self, named: dict[str, Complex] | None = None, algebra_ref: str | None = None):
        self.named = dict(named or {})
        self.algebra_ref = algebra_ref

    def complex_ref(self, x: Complex) -> Any:
        for name, y in self.named.items():
            if y is x or y == x:
                return "#" + name
        return self.complex(x)

    def complex(self, x: Complex) -> dict:
        return {"algebra": self.algebra_ref or algebra_to_json(x.algebra),
                "terms": {str(n): list(vs) for n, vs in sorted(x.terms.items())},
                "differentials": {str(n): matrix_to_json(d) for n, d in sorted(x.differentials.items())
                                  if not d.is_zero()}}

    def map(self, f: GradedMap) -> dict:
        out = {"source": self.complex_ref(f.source), "target": self.complex_ref(f.target),
               "components": {str(n): matrix_to_json(m) for n, m in sorted(f.components.items())
                              if not m.is_zero()}}
        if f.degree != 0:
            out["degree"] = f.degree
        return out

    def iso(self, w: IsoWitness) -> dict:
        return {"map": self.map(w.map), "contraction": self.map(w.contraction)}

    def triangle(self, tri: Triangle) -> dict:
        out = {"X": self.complex_ref(tri.X), "Y": self.complex_ref(tri.Y), "Z": self.complex_ref(tri.Z),
               "f": self.map(tri.f), "g": self.map(tri.g), "h": self.map(tri.h)}
        cert = tri.certificate
        if isinstance(cert, TransportedCertificate):
            out["certificate"] = {"kind": "transported", "phi": self.map(cert.phi),
                                  "contraction": self.map(cert.contraction),
                                  "square_g": self.map(cert.square_g), "square_h": self.map(cert.square_h)}
        else:
            out["certificate"] = {"kind": "standard"}
        return out

    def nil(self, n: NilpotencyCertificate | None) -> dict | None:
        if n is None:
            return None
        return {"exponent": n.exponent, "homotopy": self.map(n.homotopy)}


def complex_to_json(x: Complex) -> dict:
    return Writer().complex(x)


def complex_from_json(obj: Any, ctx: Context | None = None, where: str = "complex") -> Complex:
    ctx = ctx or Context()
    if isinstance(obj, str):
        if obj.startswith("#"):
            found = ctx.objects.get(obj[1:])
            if not isinstance(found, Complex):
                raise InputError(f"{where}: unknown reference {obj!r}")
            return found
        data, sub = ctx.load_file(obj)
        return complex_from_json(data, sub, obj)
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object or a reference")
    if "algebra" in obj:
        alg = algebra_from_json(obj["algebra"], ctx)
    elif ctx.algebra is not None:
        alg = ctx.algebra
    else:
        raise InputError(f"{where}: no algebra given")
    try:
        terms = {int(n): tuple(str(v) for v in vs) for n, vs in obj.get("terms", {}).items()}
    except (TypeError, ValueError) as exc:
        raise InputError(f"{where}: degrees must be decimal strings") from exc
    for n, vs in terms.items():
        for v in vs:
            if v not in alg.vertices:
                raise InputError(f"{where}: unknown vertex {v!r} in degree {n}")
    diffs = {}
    for key, m in obj.get("differentials", {}).items():
        n = int(key)
        diffs[n] = matrix_from_json(alg, terms.get(n + 1, ()), terms.get(n, ()), m, f"{where}: d^{n}")
    try:
        return Complex(alg, terms, diffs)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from exc


def map_to_json(f: GradedMap) -> dict:
    return Writer().map(f)


def map_from_json(obj: Any, ctx: Context | None = None, where: str = "map", kind: type | None = None) -> GradedMap:
    ctx = ctx or Context()
    if isinstance(obj, str):
        data, sub = ctx.load_file(obj)
        return map_from_json(data, sub, obj, kind)
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object")
    for key in ("source", "target"):
        if key not in obj:
            raise InputError(f"{where}: missing {key!r}")
    src = complex_from_json(obj["source"], ctx, f"{where}.source")
    tgt = complex_from_json(obj["target"], ctx, f"{where}.target")
    deg = int(obj.get("degree", 0))
    comps = {}
    for key, m in obj.get("components", {}).items():
        n = int(key)
        comps[n] = matrix_from_json(src.algebra, tgt.term(n + deg), src.term(n), m, f"{where}[{n}]")
    try:
        if kind is Homotopy or (kind is None and deg == -1):
            return Homotopy(src, tgt, comps)
        if deg == 0:
            return ChainMap(src, tgt, comps)
        return GradedMap(src, tgt, comps, deg)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from exc


# -- witnesses -----------------------------------------------------------------------


def witness_to_json(w: DegenerationWitness) -> dict:
    wr = Writer({"M": w.M, "N": w.N, "Z": w.Z}, algebra_ref="#algebra")
    return {"side": w.side, "algebra": algebra_to_json(w.M.algebra),
            "M": wr.complex(w.M), "N": wr.complex(w.N), "Z": wr.complex(w.Z),
            "v": wr.map(w.v), "u": wr.map(w.u), "layout": list(w.layout),
            "triangle": wr.triangle(w.triangle), "nil": wr.nil(w.nil)}


def _triangle_from_json(obj: dict, ctx: Context) -> Triangle:
    try:
        x = complex_from_json(obj["X"], ctx, "triangle.X")
        y = complex_from_json(obj["Y"], ctx, "triangle.Y")
        z = complex_from_json(obj["Z"], ctx, "triangle.Z")
        f = map_from_json(obj["f"], ctx, "triangle.f")
        g = map_from_json(obj["g"], ctx, "triangle.g")
        h = map_from_json(obj["h"], ctx, "triangle.h")
        cert = obj.get("certificate", {"kind": "standard"})
        if cert.get("kind") == "transported":
            c = TransportedCertificate(map_from_json(cert["phi"], ctx, "certificate.phi"),
                                       map_from_json(cert["contraction"], ctx, "certificate.contraction", Homotopy),
                                       map_from_json(cert["square_g"], ctx, "certificate.square_g", Homotopy),
                                       map_from_json(cert["square_h"], ctx, "certificate.square_h", Homotopy))
        elif cert.get("kind") == "standard":
            c = StandardCertificate()
        else:
            raise InputError(f"unknown certificate kind {cert.get('kind')!r}")
    except KeyError as exc:
        raise InputError(f"triangle is missing the key {exc.args[0]!r}") from exc
    return Triangle(x, y, z, f, g, h, c)


def witness_from_json(obj: Any, ctx: Context | None = None) -> DegenerationWitness:
    ctx = ctx or Context()
    if isinstance(obj, str):
        data, sub = ctx.load_file(obj)
        return witness_from_json(data, sub)
    try:
        alg = algebra_from_json(obj["algebra"], ctx) if "algebra" in obj else ctx.algebra
        sub = Context(ctx.base, {"algebra": alg}, alg)
        sub._files = ctx._files
        for key in ("M", "N", "Z"):
            sub.objects[key] = complex_from_json(obj[key], sub, key)
        v = map_from_json(obj["v"], sub, "v")
        u = map_from_json(obj["u"], sub, "u")
        tri = _triangle_from_json(obj["triangle"], sub)
        nil = None
        if obj.get("nil"):
            nil = NilpotencyCertificate(v, int(obj["nil"]["exponent"]),
                                        map_from_json(obj["nil"]["homotopy"], sub, "nil.homotopy", Homotopy))
        side = obj["side"]
        layout = tuple(obj.get("layout", ["Z", "M"] if side == "left" else ["M", "Z"]))
    except KeyError as exc:
        raise InputError(f"witness is missing the key {exc.args[0]!r}") from exc
    if side not in ("left", "right") or set(layout) != {"Z", "M"}:
        raise InputError("witness side must be left/right and layout a permutation of Z, M")
    return DegenerationWitness(side, sub.objects["M"], sub.objects["N"], sub.objects["Z"],
                               v, u, tri, nil, layout)


# -- shift sums, towers, certificates --------------------------------------------------


def shiftsum_from_json(obj: Any) -> ShiftSum:
    if not isinstance(obj, list):
        raise InputError("shift sum must be a list of {gen, shift, mult}")
    try:
        return ShiftSum.of((item["gen"], item["shift"], item["mult"]) for item in obj)
    except KeyError as exc:
        raise InputError(f"shift-sum entry is missing the key {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        raise InputError(f"invalid shift sum: {exc}") from exc


def shiftsum_to_json(x: ShiftSum) -> list:
    return [{"gen": t.gen, "shift": t.shift, "mult": t.mult} for t in x.terms]


def tower_to_json(t: Tower) -> dict:
    named = {f"gen:{g}": c for g, c in t.generators.items()}
    named.update({f"M{k}": m for k, m in enumerate(t.objects)})
    wr = Writer(named, algebra_ref="#algebra")
    return {"algebra": algebra_to_json(t.algebra),
            "generators": {g: wr.complex(c) for g, c in t.generators.items()},
            "objects": [wr.complex(m) for m in t.objects],
            "maps": [wr.map(f) for f in t.maps],
            "tags": [{"gen": g, "shift": r} for g, r in t.tags],
            "certificates": [wr.iso(c) if c is not None else None for c in t.certificates]}


def tower_from_json(obj: Any, ctx: Context | None = None) -> Tower:
    ctx = ctx or Context()
    try:
        alg = algebra_from_json(obj["algebra"], ctx)
        sub = Context(ctx.base, {"algebra": alg}, alg)
        sub._files = ctx._files
        gens = {}
        for g, c in obj["generators"].items():
            gens[g] = complex_from_json(c, sub, f"generator {g}")
            sub.objects[f"gen:{g}"] = gens[g]
        objects = []
        for k, c in enumerate(obj["objects"]):
            objects.append(complex_from_json(c, sub, f"objects[{k}]"))
            sub.objects[f"M{k}"] = objects[-1]
        maps = tuple(map_from_json(f, sub, f"maps[{k}]") for k, f in enumerate(obj["maps"]))
        tags = tuple((str(t["gen"]), int(t["shift"])) for t in obj["tags"])
        certs = []
        for k, c in enumerate(obj.get("certificates") or []):
            if c is None:
                certs.append(None)
                continue
            m = map_from_json(c["map"], sub, f"certificates[{k}].map")
            h = map_from_json(c["contraction"], sub, f"certificates[{k}].contraction", Homotopy)
            certs.append(IsoWitness(m, h))
    except KeyError as exc:
        raise InputError(f"tower is missing the key {exc.args[0]!r}") from exc
    return Tower(alg, gens, tuple(objects), maps, tags, tuple(certs))


def iso_to_json(w: IsoWitness, named: dict[str, Complex] | None = None) -> dict:
    return Writer(named).iso(w)


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, default=_default)


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")
