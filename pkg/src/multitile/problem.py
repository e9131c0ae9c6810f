"""Problem-file parsing, scalar JSON encoding, and report serialization.

Scalars travel as "p/q" strings, or as {"rat": "p/q", "irr": {"sqrt:2":
"1/2", "sym:alpha": "3"}} objects whose irrational keys must reference
generators declared in the file header.  Lattice bases are lists of basis
column vectors.
"""

from __future__ import annotations

import importlib.resources
import json
from dataclasses import dataclass
from fractions import Fraction

import jsonschema

from .errors import InputError
from .lattice import Coset, Lattice, QuasiPeriodicSet, WindowMultiset
from .polytope import Polytope, ProbeDirection, from_vertices
from .scalar import (
    Generator,
    QuadraticSurd,
    Scalar,
    SymbolicGenerator,
    scalar_sqrt,
    to_scalar,
)

SCHEMA_VERSION = "1"


def _schema():
    ref = importlib.resources.files("multitile") / "schemas" / "problem.schema.json"
    return json.loads(ref.read_text())


def validate_problem_dict(data: dict):
    try:
        jsonschema.validate(data, _schema())
    except jsonschema.ValidationError as exc:
        raise InputError(f"problem file rejected by schema: {exc.message}") from exc


# -- scalars -------------------------------------------------------------------


def parse_generators(items) -> dict[str, Generator]:
    gens: dict[str, Generator] = {}
    for item in items or ():
        if item["kind"] == "sqrt":
            g = QuadraticSurd(item["radicand"])
        else:
            lo, hi = (Fraction(x) for x in item["interval"])
            g = SymbolicGenerator(item["name"], lo, hi)
        key = g.key()
        if key in gens:
            raise InputError(f"generator {key} declared twice")
        gens[key] = g
    return gens


def parse_scalar(obj, gens: dict[str, Generator]) -> Scalar:
    if isinstance(obj, int):
        return to_scalar(obj)
    if isinstance(obj, str):
        return to_scalar(Fraction(obj))
    if isinstance(obj, dict):
        out = to_scalar(Fraction(obj.get("rat", 0)))
        for key, coeff in (obj.get("irr") or {}).items():
            if key not in gens:
                raise InputError(f"scalar references undeclared generator {key!r}")
            g = gens[key]
            coeff = Fraction(coeff)
            if isinstance(g, QuadraticSurd):
                out = out + scalar_sqrt(g.radicand, coeff)
            else:
                out = out + Scalar(0, {g: coeff})
        return out
    raise InputError(f"cannot parse scalar from {obj!r}")


def scalar_to_json(s: Scalar):
    if s.is_rational:
        return _frac_str(s.rat)
    return {
        "rat": _frac_str(s.rat),
        "irr": {g.key(): _frac_str(c) for g, c in
                sorted(s.coeffs.items(), key=lambda item: item[0].sort_key())},
    }


def _frac_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def vector_to_json(v):
    return [scalar_to_json(x) for x in v]


def parse_vector(obj, gens) -> tuple:
    return tuple(parse_scalar(x, gens) for x in obj)


def parse_scalar_literal(text: str) -> Scalar:
    """CLI shorthand: "p/q", "sqrt:m", "sqrt:m/q", or "p/q*sqrt:m[/q2]"."""
    text = text.strip()
    factor = Fraction(1)
    if "*" in text:
        head, text = text.split("*", 1)
        factor = Fraction(head.strip())
    if text.startswith("sqrt:"):
        body = text[len("sqrt:"):]
        if "/" in body:
            rad, div = body.split("/", 1)
            return scalar_sqrt(int(rad), factor / int(div))
        return scalar_sqrt(int(body), factor)
    return to_scalar(factor * Fraction(text))


# -- problems -----------------------------------------------------------------


@dataclass
class Problem:
    generators: dict[str, Generator]
    polytope: Polytope | None
    probe: ProbeDirection | None
    translations: QuasiPeriodicSet | WindowMultiset | None
    family: dict | None
    split: dict | None
    refinement: dict | None
    weyl: dict | None
    render: dict | None
    raw: dict


def parse_problem(data: dict) -> Problem:
    validate_problem_dict(data)
    gens = parse_generators(data.get("generators"))
    polytope = None
    if "polytope" in data:
        spec = data["polytope"]
        if "vertices" in spec:
            polytope = from_vertices([parse_vector(v, gens) for v in spec["vertices"]])
        elif "facets" in spec:
            facets = [
                (parse_vector(f["normal"], gens), parse_scalar(f["offset"], gens))
                for f in spec["facets"]
            ]
            polytope = Polytope(facets)
        else:
            raise InputError("polytope needs vertices or facets")
    probe = None
    if "probe" in data:
        probe = ProbeDirection(data["probe"], polytope)
    translations = None
    if "translations" in data:
        spec = data["translations"]
        if "cosets" in spec:
            translations = QuasiPeriodicSet(tuple(
                Coset(_parse_lattice(c["basis"], gens),
                      parse_vector(c["translation"], gens),
                      c.get("weight", 1))
                for c in spec["cosets"]
            ))
        elif "window" in spec:
            translations = WindowMultiset(tuple(
                (parse_vector(p["point"], gens), p.get("multiplicity", 1))
                for p in spec["window"]
            ))
        else:
            raise InputError("translations need cosets or a window")
    family = None
    if "family" in data:
        family = {
            "lattice": _parse_lattice(data["family"]["basis"], gens),
            "offsets": [parse_vector(o, gens) for o in data["family"]["offsets"]],
        }
    refinement = None
    if "refinement" in data:
        r = data["refinement"]
        refinement = {
            "lattice": _parse_lattice(r["basis"], gens),
            "t1": parse_vector(r["t1"], gens),
            "t2": parse_vector(r["t2"], gens),
            "weights": tuple(r.get("weights", (1, 1))),
        }
    weyl = None
    if "weyl" in data:
        w = data["weyl"]
        weyl = {
            "a": parse_vector(w["a"], gens),
            "eps": Fraction(w["eps"]),
            "j_max": w.get("j_max", 1000),
            "frequency": tuple(w.get("frequency", ())),
            "M": w.get("M", 10000),
        }
    render = None
    if "render" in data:
        r = data["render"]
        render = {
            "window": (parse_vector(r["window"][0], gens),
                       parse_vector(r["window"][1], gens)),
            "palette": r.get("palette"),
            "show_points": r.get("show_points", True),
        }
    return Problem(gens, polytope, probe, translations, family,
                   data.get("split"), refinement, weyl, render, data)


def _parse_lattice(basis, gens) -> Lattice:
    return Lattice([parse_vector(col, gens) for col in basis])


def load_problem(path) -> Problem:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON in {path}: {exc}") from exc
    return parse_problem(data)


def serialize_problem(p: Problem) -> dict:
    """Canonical dict form; parse(serialize(p)) reproduces the problem."""
    out: dict = {"schema_version": SCHEMA_VERSION}
    if p.generators:
        gen_items = []
        for g in sorted(p.generators.values(), key=lambda g: g.sort_key()):
            if isinstance(g, QuadraticSurd):
                gen_items.append({"kind": "sqrt", "radicand": g.radicand})
            else:
                gen_items.append({
                    "kind": "symbolic", "name": g.name,
                    "interval": [_frac_str(g._lo), _frac_str(g._hi)],
                })
        out["generators"] = gen_items
    if p.polytope is not None:
        if p.polytope.vertices is not None:
            out["polytope"] = {
                "vertices": [vector_to_json(v) for v in p.polytope.vertices]
            }
        else:
            out["polytope"] = {
                "facets": [
                    {"normal": vector_to_json(n), "offset": scalar_to_json(c)}
                    for n, c in p.polytope.facets
                ]
            }
    if p.probe is not None:
        out["probe"] = list(p.probe.h)
    if p.translations is not None:
        if isinstance(p.translations, QuasiPeriodicSet):
            out["translations"] = {"cosets": [
                {
                    "basis": [vector_to_json(col) for col in c.lattice.cols],
                    "translation": vector_to_json(c.translation),
                    "weight": c.weight,
                }
                for c in p.translations.cosets
            ]}
        else:
            out["translations"] = {"window": [
                {"point": vector_to_json(pt), "multiplicity": m}
                for pt, m in p.translations.points
            ]}
    if p.family is not None:
        out["family"] = {
            "basis": [vector_to_json(col) for col in p.family["lattice"].cols],
            "offsets": [vector_to_json(o) for o in p.family["offsets"]],
        }
    if p.split is not None:
        out["split"] = {"s1": list(p.split["s1"]), "s2": list(p.split["s2"])}
    if p.refinement is not None:
        out["refinement"] = {
            "basis": [vector_to_json(col) for col in p.refinement["lattice"].cols],
            "t1": vector_to_json(p.refinement["t1"]),
            "t2": vector_to_json(p.refinement["t2"]),
            "weights": list(p.refinement["weights"]),
        }
    if p.weyl is not None:
        out["weyl"] = {
            "a": vector_to_json(p.weyl["a"]),
            "eps": _frac_str(p.weyl["eps"]),
            "j_max": p.weyl["j_max"],
            "M": p.weyl["M"],
        }
        if p.weyl["frequency"]:
            out["weyl"]["frequency"] = list(p.weyl["frequency"])
    if p.render is not None:
        out["render"] = {
            "window": [vector_to_json(p.render["window"][0]),
                       vector_to_json(p.render["window"][1])],
            "show_points": p.render["show_points"],
        }
        if p.render["palette"]:
            out["render"]["palette"] = list(p.render["palette"])
    return out


# -- report serialization -------------------------------------------------------


def point_to_json(v):
    return [scalar_to_json(x) for x in v]


def report_json(payload: dict) -> str:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    return json.dumps(payload, sort_keys=True, indent=2)
