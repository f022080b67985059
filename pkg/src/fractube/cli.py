"""Command-line front end: ``fractube {dims,tube,coeffs,report}``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import catalog
from .errors import BudgetExceeded, FractubeError
from .geometry2d import equilateral_triangle, montecarlo_tube_area, square
from .ifs import GeneratorSpec, SelfSimilarSystem
from .io import (load_system, write_curve_csv, write_dimensions_csv,
                 write_expansion_csv, write_montecarlo_csv)
from .tube import (TilingModel, measurability_report, tube_expansion,
                   tube_volume_formula, tube_volume_oracle)
from .zeta import ScalingZeta, complex_dimensions, default_window


def thread_cap() -> int:
    env = os.environ.get("FRACTUBE_THREADS")
    n = os.cpu_count() or 1
    if env:
        n = min(n, max(1, int(env)))
    return n


def parse_eps(spec: str) -> np.ndarray:
    """``x`` or ``min:max:count[:log|linear]`` (log spacing by default)."""
    parts = spec.split(":")
    if len(parts) == 1:
        vals = np.array([float(parts[0])])
    elif len(parts) in (3, 4):
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        mode = parts[3] if len(parts) == 4 else "log"
        if n < 1:
            raise ValueError("eps count must be at least 1")
        if lo <= 0 or hi < lo:
            raise ValueError("need 0 < eps min <= eps max")
        if mode == "log":
            vals = np.geomspace(lo, hi, n)
        elif mode == "linear":
            vals = np.linspace(lo, hi, n)
        else:
            raise ValueError(f"unknown spacing {mode!r}")
    else:
        raise ValueError(f"cannot parse eps grid {spec!r}")
    if np.any(vals <= 0):
        raise ValueError("eps must be positive")
    return vals


def parse_generator(spec: str) -> GeneratorSpec:
    kind, _, arg = spec.partition(":")
    size = float(arg) if arg else 1.0
    if kind == "square":
        return GeneratorSpec(polygon=square(size), label=spec)
    if kind == "triangle-eq":
        return GeneratorSpec(polygon=equilateral_triangle(size), label=spec)
    if kind == "interval":
        return GeneratorSpec(interval_length=size, label=spec)
    raise ValueError(f"unknown generator {spec!r}; use square:<side>, triangle-eq:<side> or interval:<len>")


def resolve_model(source: str, generator: str | None):
    """Return ``(zeta, model-or-None, catalog entry-or-None)``."""
    if source.startswith("ratios:"):
        ratios = sorted((float(x) for x in source[7:].split(",") if x), reverse=True)
        z = ScalingZeta(ratios)
        if generator is None:
            return z, None, None
        gen = parse_generator(generator)
        system = SelfSimilarSystem(tuple(ratios), gen.dimension, (gen,), name=source)
        return z, TilingModel.from_system(system), None
    if source.endswith(".json") or Path(source).is_file():
        system = load_system(source)
        model = TilingModel.from_system(system)
        return model.zeta, model, None
    entry = catalog.get(source)
    if entry.model is None:
        return None, None, entry
    return entry.model.zeta, entry.model, entry


def _need_model(model, source):
    if model is None:
        raise ValueError(f"model {source!r} needs a generator (pass --generator) or is not a tiling")
    return model


def cmd_dims(args, out):
    z, _, _ = resolve_model(args.model, args.generator)
    if z is None:
        raise ValueError(f"{args.model!r} has no scaling zeta function")
    dims = complex_dimensions(z, default_window(z, args.im_max))
    write_dimensions_csv(dims, out)


def cmd_tube(args, out):
    if args.mode == "montecarlo":
        return _tube_montecarlo(args, out)
    _, model, _ = resolve_model(args.model, args.generator or "square:1")
    model = _need_model(model, args.model)
    eps = parse_eps(args.eps) if args.eps else _default_eps(model)
    formula = tube_volume_formula(model, eps, args.im_max, args.avg)
    try:
        with ThreadPoolExecutor(thread_cap()) as ex:
            oracle = np.array(list(ex.map(lambda e: tube_volume_oracle(model, e), eps)))
    except BudgetExceeded as err:
        raise BudgetExceeded(f"{err}; raise the smallest eps or use fewer distinct ratios") from err
    write_curve_csv(eps, formula, oracle, out)


def _default_eps(model):
    g = max(r.g for r in model.reps)
    return np.geomspace(g / 100, g, 20)


def _tube_montecarlo(args, out):
    entry = catalog.get(args.model)
    if "sampler" not in entry.extras:
        raise ValueError("montecarlo mode needs a shape builtin such as pluriphase-square")
    if not args.eps:
        raise ValueError("montecarlo mode needs --eps")
    eps = parse_eps(args.eps)
    est = montecarlo_tube_area(entry.extras["sampler"], eps, args.samples, args.seed, workers=thread_cap())
    ref = entry.extras["rep"].tube(eps)
    pub = entry.extras["published"](eps)
    write_montecarlo_csv(eps, [e.estimate for e in est], [e.std_error for e in est], ref, pub, out)


def cmd_coeffs(args, out):
    _, model, _ = resolve_model(args.model, args.generator or "square:1")
    write_expansion_csv(tube_expansion(_need_model(model, args.model), args.im_max), out)


def cmd_report(args, out):
    _, model, _ = resolve_model(args.model, args.generator or "square:1")
    rep = measurability_report(_need_model(model, args.model), args.im_max)
    json.dump(rep.to_dict(), out, indent=2)
    out.write("\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fractube", description="Tube formulas for self-similar tilings.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, im_default):
        sp.add_argument("--model", required=True,
                        help="builtin name, ratios:<r1,r2,...>, or a system JSON file")
        sp.add_argument("--generator", help="square:<side> | triangle-eq:<side> | interval:<len>")
        sp.add_argument("--im-max", type=float, default=im_default)
        sp.add_argument("--output", default="-", help="output file, '-' for stdout")

    common(sub.add_parser("dims", help="list complex dimensions"), 40.0)
    t = sub.add_parser("tube", help="tube volume curve, formula against oracle")
    common(t, 400.0)
    t.add_argument("--eps", help="x or min:max:count[:log|linear]")
    t.add_argument("--avg", choices=("none", "cesaro"), default="cesaro")
    t.add_argument("--mode", choices=("formula", "montecarlo"), default="formula")
    t.add_argument("--samples", type=int, default=10 ** 6)
    t.add_argument("--seed", type=int, default=0)
    common(sub.add_parser("coeffs", help="tube formula coefficients"), 40.0)
    common(sub.add_parser("report", help="measurability report as JSON"), 1.0)
    return p


COMMANDS = {"dims": cmd_dims, "tube": cmd_tube, "coeffs": cmd_coeffs, "report": cmd_report}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.output == "-":
            COMMANDS[args.command](args, sys.stdout)
        else:
            with open(args.output, "w", newline="") as fh:
                COMMANDS[args.command](args, fh)
    except (FractubeError, ValueError, KeyError, OSError) as err:
        print(f"fractube: error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
