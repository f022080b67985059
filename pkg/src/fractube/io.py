"""JSON and CSV serialization.

Doubles are written with 17 significant digits so that every value
round-trips exactly.
"""

from __future__ import annotations

import csv
import json
from typing import IO, Iterable

import numpy as np

from .geometry2d import ConvexPolygon
from .ifs import GeneratorSpec, SelfSimilarSystem
from .steiner import MONOPHASE, SteinerRep


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def polygon_to_json(p: ConvexPolygon) -> list:
    return [[float(x), float(y)] for x, y in p.vertices]


def polygon_from_json(data) -> ConvexPolygon:
    return ConvexPolygon(np.asarray(data, dtype=float))


def steiner_to_json(rep: SteinerRep) -> dict:
    out = {"d": rep.d, "g": rep.g, "kind": rep.kind, "volume": rep.volume}
    if rep.is_monophase:
        out["kappa"] = list(rep.kappa)
    else:
        out["breakpoints"] = list(rep.breakpoints)
        out["pieces"] = [list(row) for row in rep.pieces]
    if rep.label:
        out["label"] = rep.label
    return out


def steiner_from_json(data: dict) -> SteinerRep:
    kind = data.get("kind", MONOPHASE)
    return SteinerRep(int(data["d"]), float(data["g"]), float(data["volume"]), kind,
                      kappa=tuple(data.get("kappa", ())), breakpoints=tuple(data.get("breakpoints", ())),
                      pieces=tuple(tuple(r) for r in data.get("pieces", ())), label=data.get("label", ""))


def _generator_to_json(gen: GeneratorSpec) -> dict:
    if gen.polygon is not None:
        out = {"polygon": polygon_to_json(gen.polygon)}
    elif gen.interval_length is not None:
        out = {"interval_length": gen.interval_length}
    else:
        out = {"steiner": steiner_to_json(gen.steiner)}
    out["label"] = gen.label
    return out


def _generator_from_json(data: dict) -> GeneratorSpec:
    label = data.get("label", "")
    if "polygon" in data:
        return GeneratorSpec(polygon=polygon_from_json(data["polygon"]), label=label)
    if "interval_length" in data:
        return GeneratorSpec(interval_length=float(data["interval_length"]), label=label)
    if "steiner" in data:
        return GeneratorSpec(steiner=steiner_from_json(data["steiner"]), label=label)
    raise ValueError("generator needs one of polygon, interval_length, steiner")


def system_to_json(sys: SelfSimilarSystem) -> dict:
    out = {"ratios": list(sys.ratios), "dimension": sys.dimension,
           "generators": [_generator_to_json(g) for g in sys.generators]}
    if sys.hull_volume is not None:
        out["hull_volume"] = sys.hull_volume
    if sys.name:
        out["name"] = sys.name
    return out


def system_from_json(data: dict) -> SelfSimilarSystem:
    missing = {"ratios", "dimension", "generators"} - set(data)
    if missing:
        raise ValueError(f"system JSON is missing {sorted(missing)}")
    return SelfSimilarSystem(tuple(data["ratios"]), int(data["dimension"]),
                             tuple(_generator_from_json(g) for g in data["generators"]),
                             hull_volume=data.get("hull_volume"), name=data.get("name", ""))


def load_system(path) -> SelfSimilarSystem:
    with open(path) as fh:
        return system_from_json(json.load(fh))


def dump_system(sys: SelfSimilarSystem, path) -> None:
    with open(path, "w") as fh:
        json.dump(system_to_json(sys), fh, indent=2)


def _write(out: IO, header, rows: Iterable) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, (str, int)) else fmt(v) for v in row])


def write_dimensions_csv(dims, out: IO) -> None:
    rows = []
    for c in dims:
        res = complex(np.nan, np.nan) if c.residue is None else complex(c.residue)
        rows.append((c.omega.real, c.omega.imag, c.multiplicity, res.real, res.imag))
    _write(out, ("re", "im", "multiplicity", "residue_re", "residue_im"), rows)


def write_expansion_csv(exp, out: IO) -> None:
    rows = [(w.real, w.imag, c.real, c.imag, "scaling") for w, c in exp.scaling_terms]
    rows += [(float(k), 0.0, float(np.real(c)), float(np.imag(c)), "integer") for k, c in exp.integer_terms]
    _write(out, ("omega_re", "omega_im", "c_re", "c_im", "kind"), rows)


def write_curve_csv(eps, formula, oracle, out: IO) -> None:
    eps, formula, oracle = (np.asarray(a, dtype=float) for a in (eps, formula, oracle))
    err = np.abs(formula - oracle)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(oracle != 0, err / np.abs(oracle), np.nan)
    _write(out, ("epsilon", "v_formula", "v_oracle", "abs_err", "rel_err"), zip(eps, formula, oracle, err, rel))


def write_montecarlo_csv(eps, estimate, std_error, reference, published, out: IO) -> None:
    _write(out, ("epsilon", "v_montecarlo", "std_error", "v_reference", "v_published"),
           zip(*(np.asarray(a, dtype=float) for a in (eps, estimate, std_error, reference, published))))
