"""Built-in tilings with their published constants.

Each entry bundles the self-similar system, the tiling model and a table of
golden values.  Every golden value records where it comes from in plain
words so that a failing comparison points back at the source.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .geometry2d import ConvexPolygon, RoundedCornerSquare, equilateral_triangle, regular_polygon
from .ifs import GeneratorSpec, SelfSimilarSystem
from .steiner import PLURIPHASE, SteinerRep, tangential_rep
from .tube import TilingModel

PHI = (1 + math.sqrt(5)) / 2
SQRT3 = math.sqrt(3)


@dataclass(frozen=True)
class Golden:
    value: float
    source: str
    tol: float = 1e-12


@dataclass
class CatalogEntry:
    name: str
    system: Optional[SelfSimilarSystem]
    model: Optional[TilingModel]
    golden: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)


def _entry(name, system, golden, **extras) -> CatalogEntry:
    return CatalogEntry(name, system, TilingModel.from_system(system), golden, extras)


def cantor() -> CatalogEntry:
    """Middle-thirds Cantor tiling of ``[0, 1]``; the gap ``(1/3, 2/3)`` generates."""
    sys = SelfSimilarSystem((1 / 3, 1 / 3), 1, (GeneratorSpec(interval_length=1 / 3, label="(1/3, 2/3)"),),
                            hull_volume=1.0, name="cantor")
    src = "Cantor tiling tube formula"
    golden = {
        "D": Golden(math.log(2) / math.log(3), src + ": D = log_3 2"),
        "p": Golden(2 * math.pi / math.log(3), src + ": p = 2 pi / log 3"),
        "g": Golden(1 / 6, src + ": generator inradius"),
        "c1": Golden(-2.0, src + ": linear term -2 eps"),
        "zeta0": Golden(-1.0, src + ": zeta_s(0) = -1"),
        "zeta1": Golden(3.0, "derived: 1/(1 - 2/3)"),
        "prefactor": Golden(1 / (3 * math.log(3)), src + ": prefactor 1/(3 log 3) in powers of eps/g"),
        "total_volume": Golden(1.0, "geometric series of gap lengths"),
    }
    return _entry("cantor", sys, golden)


def koch() -> CatalogEntry:
    """Koch tiling under the curve on ``[0, 1]``; generated by one triangle of side 1/3."""
    r = 3 ** -0.5
    tri = _koch_generator(complex(0.5, SQRT3 / 6))
    sys = SelfSimilarSystem((r, r), 2, (GeneratorSpec(polygon=tri, label="triangle, side 1/3"),),
                            hull_volume=SQRT3 / 12, name="koch")
    src = "Koch tiling tube formula"
    golden = {
        "D": Golden(math.log(4) / math.log(3), src + ": D = log_3 4"),
        "p": Golden(4 * math.pi / math.log(3), src + ": p = 4 pi / log 3"),
        "g": Golden(SQRT3 / 18, src + ": generator inradius"),
        "c0": Golden(3 * SQRT3, src + ": eps^2 term 3^(3/2)"),
        "c1": Golden(1 / (1 - 2 / SQRT3), src + ": eps term 1/(1 - 2 * 3^(-1/2))"),
        "zeta0": Golden(-1.0, "derived: 1/(1 - 2)"),
        "zeta1": Golden(1 / (1 - 2 / SQRT3), src + ": zeta_s(1) in the eps term"),
        "prefactor": Golden(SQRT3 / 18 / math.log(3), src + ": oscillatory prefactor g/log 3"),
        "total_volume": Golden(SQRT3 / 12, "area under the Koch curve"),
    }
    return _entry("koch", sys, golden)


def _koch_generator(xi: complex) -> ConvexPolygon:
    a, b = abs(xi), abs(1 - xi)
    return ConvexPolygon([(a * a, 0.0), (1 - b * b, 0.0), (xi.real, xi.imag)])


def koch_nonlattice(xi: complex = complex(0.4, 0.3)) -> CatalogEntry:
    """Koch-type tiling with maps ``z -> xi z`` and ``z -> (1 - xi) zbar + xi``.

    Lattice or not depending on ``log|xi| / log|1 - xi|``; generic ``xi``
    give nonlattice tilings.  Needs ``Im xi > 0`` and
    ``|xi|**2 + |1 - xi|**2 < 1``.
    """
    xi = complex(xi)
    a, b = abs(xi), abs(1 - xi)
    if not (xi.imag > 0 and a * a + b * b < 1):
        raise ValueError("need Im xi > 0 and |xi|^2 + |1-xi|^2 < 1")
    sys = SelfSimilarSystem(tuple(sorted((a, b), reverse=True)), 2,
                            (GeneratorSpec(polygon=_koch_generator(xi), label="middle triangle"),),
                            hull_volume=xi.imag / 2, name=f"koch-nonlattice:{xi.real!r},{xi.imag!r}")
    golden = {"total_volume": Golden(xi.imag / 2, "area of the hull triangle (0, 1, xi)", 1e-9)}
    return _entry(sys.name, sys, golden, xi=xi)


def sierpinski() -> CatalogEntry:
    """Sierpinski gasket tiling of the unit triangle; one inverted triangle of side 1/2."""
    h = SQRT3 / 4
    tri = ConvexPolygon([(0.25, h), (0.5, 0.0), (0.75, h)])
    sys = SelfSimilarSystem((0.5, 0.5, 0.5), 2, (GeneratorSpec(polygon=tri, label="triangle, side 1/2"),),
                            hull_volume=SQRT3 / 4, name="sierpinski")
    src = "Sierpinski tiling tube formula"
    golden = {
        "D": Golden(math.log(3) / math.log(2), src + ": D = log_2 3"),
        "p": Golden(2 * math.pi / math.log(2), src + ": p = 2 pi / log 2"),
        "g": Golden(1 / (4 * SQRT3), src + ": generator inradius"),
        "c0": Golden(3 * SQRT3 / 2, src + ": eps^2 term 3^(3/2)/2"),
        "c1": Golden(-3.0, src + ": eps term -3"),
        "zeta0": Golden(-0.5, "derived: 1/(1 - 3)"),
        "zeta1": Golden(-2.0, "derived: 1/(1 - 3/2)"),
        "prefactor": Golden(SQRT3 / (16 * math.log(2)), src + ": oscillatory prefactor sqrt(3)/(16 log 2)"),
        "total_volume": Golden(SQRT3 / 4, "area of the unit triangle"),
    }
    return _entry("sierpinski", sys, golden)


PENTA_R = PHI ** -2
ALPHA_P = 5 / math.tan(0.3 * math.pi)
ALPHA_T = (1 / math.tan(math.pi / 5)) / (1 - math.tan(math.pi / 5) ** 2)
G_P = PHI ** 2 / 2 * math.tan(0.3 * math.pi)
G_T = PHI ** 3 / 2 * math.tan(math.pi / 5)


def pentagasket() -> CatalogEntry:
    """Pentagasket tiling: five maps of ratio phi^-2, a pentagon and five triangles.

    The generators are entered through their published tangential constants
    ``(alpha, g)``; see ``pentagon_generator`` for a geometric cross-check.
    """
    gens = [GeneratorSpec(steiner=tangential_rep(ALPHA_P, G_P, label="pentagon"), label="pentagon")]
    tri = tangential_rep(ALPHA_T, G_T, label="triangle")
    gens += [GeneratorSpec(steiner=tri, label=f"triangle {i + 1}") for i in range(5)]
    sys = SelfSimilarSystem((PENTA_R,) * 5, 2, tuple(gens), name="pentagasket")
    src = "pentagasket tube formula"
    golden = {
        "D": Golden(math.log(5) / math.log(PHI ** 2), src + ": D = log_(phi^2) 5"),
        "p": Golden(2 * math.pi / (2 * math.log(PHI)), src + ": p = 2 pi / log(1/r)"),
        "zeta0": Golden(-0.25, "derived: 1/(1 - 5)"),
        "zeta1": Golden(1 / (1 - 5 * PENTA_R), "derived: 1/(1 - 5r)", 1e-9),
        "c0": Golden(ALPHA_P / 4 + 5 * ALPHA_T / 4, src + ": eps^2 term alpha_p/4 + 5 alpha_t/4", 1e-9),
        # our own zeta_s(1) * sum kappa_1; the printed linear term is garbled
        "c1": Golden((2 * ALPHA_P * G_P + 10 * ALPHA_T * G_T) / (1 - 5 * PENTA_R),
                     "derived: zeta_s(1) * (2 alpha_p g_p + 10 alpha_t g_t)", 1e-9),
    }
    return _entry("pentagasket", sys, golden, alpha_p=ALPHA_P, alpha_t=ALPHA_T, g_p=G_P, g_t=G_T)


def pentagon_generator() -> ConvexPolygon:
    """Regular pentagon with the published pentagon inradius."""
    return regular_polygon(5, inradius=G_P)


# corrected first branch; the published one is (8 + pi/4) eps - (5 + pi/4) eps^2
PLURIPHASE_PIECES = (
    (-(3 + math.pi / 4), 7 + math.pi / 4, 0.0),
    (-4.0, 8.0, (math.pi - 4) / 16),
)


def published_pluriphase_tube(eps):
    """Tube function of the rounded square exactly as printed (three branches)."""
    e = np.asarray(eps, dtype=float)
    out = np.where(
        e <= 0.5, (8 + math.pi / 4) * e - (5 + math.pi / 4) * e ** 2,
        np.where(e <= 1.0, (math.pi - 4) / 16 + 8 * e - 4 * e ** 2, (math.pi - 4) / 16 + 4))
    return out[()] if out.ndim == 0 else out


def pluriphase_square() -> CatalogEntry:
    """2x2 square with the corner at (2, 2) rounded by a quarter circle of radius 1/2.

    Not monophase: the tube changes form at ``eps = 1/2`` when the
    erosion front passes the arc's centre.
    """
    shape = RoundedCornerSquare(2.0, 0.5)
    rep = SteinerRep(2, 1.0, shape.area(), PLURIPHASE, breakpoints=(0.0, 0.5, 1.0),
                     pieces=PLURIPHASE_PIECES, label="rounded square")
    src = "pluriphase generator example"
    golden = {
        "saturated": Golden((math.pi - 4) / 16 + 4, src + ": third branch (pi - 4)/16 + 4"),
        "breakpoints": Golden(0.5, src + ": breakpoints 0, 1/2, 1"),
    }
    return CatalogEntry("pluriphase-square", None, None, golden,
                        {"sampler": shape, "rep": rep, "published": published_pluriphase_tube})


BUILTINS: dict[str, Callable[[], CatalogEntry]] = {
    "cantor": cantor,
    "koch": koch,
    "sierpinski": sierpinski,
    "pentagasket": pentagasket,
    "pluriphase-square": pluriphase_square,
    "koch-nonlattice": koch_nonlattice,
}


def get(name: str) -> CatalogEntry:
    """Look up a builtin; ``koch-nonlattice:<re>,<im>`` selects ``xi``."""
    base, _, arg = name.partition(":")
    if base not in BUILTINS:
        raise KeyError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}")
    if arg:
        if base != "koch-nonlattice":
            raise KeyError(f"builtin {base!r} takes no parameters")
        re_s, _, im_s = arg.partition(",")
        return koch_nonlattice(complex(float(re_s), float(im_s)))
    return BUILTINS[base]()
