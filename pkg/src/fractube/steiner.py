"""Steiner-like representations of generators.

A representation stores the inner tube volume ``V(G, eps)`` of a generator
as polynomial(s) in ``eps`` up to the inradius ``g``, beyond which the tube
is the whole generator.  Coefficients follow the curvature indexing: the
coefficient ``kappa[k]`` multiplies ``eps**(d - k)``.  The top coefficient
``kappa_d`` equals minus the volume; it is stored as the positive
``volume`` and the sign is applied where it is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotMonophase
from .geometry2d import (ConvexPolygon, exact_tube_area, first_erosion_event,
                         polygon_area, polygon_inradius)

MONOPHASE = "monophase"
PLURIPHASE = "pluriphase"
_CONT_TOL = 1e-9


@dataclass(frozen=True)
class SteinerRep:
    """Tube-volume representation of one generator.

    Monophase: ``kappa`` holds ``kappa_0 .. kappa_{d-1}``.
    Pluriphase: ``breakpoints`` ``0 = e_0 < ... < e_m = g`` and one row of
    ``d + 1`` coefficients per interval (``row[k]`` multiplies
    ``eps**(d-k)``; ``row[d]`` is a constant term).
    """

    d: int
    g: float
    volume: float
    kind: str = MONOPHASE
    kappa: tuple = ()
    breakpoints: tuple = ()
    pieces: tuple = ()
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kappa", tuple(float(k) for k in self.kappa))
        object.__setattr__(self, "breakpoints", tuple(float(b) for b in self.breakpoints))
        object.__setattr__(self, "pieces", tuple(tuple(float(c) for c in row) for row in self.pieces))
        if self.d < 1:
            raise ValueError("dimension must be positive")
        if not (self.g > 0 and self.volume > 0):
            raise ValueError("inradius and volume must be positive")
        if self.kind == MONOPHASE:
            if len(self.kappa) != self.d:
                raise ValueError(f"monophase rep needs {self.d} coefficients kappa_0..kappa_{self.d - 1}")
            sat = sum(k * self.g ** (self.d - i) for i, k in enumerate(self.kappa))
            if abs(sat - self.volume) > _CONT_TOL * self.volume:
                raise ValueError(f"tube polynomial reaches {sat!r} at eps=g, expected volume {self.volume!r}")
        elif self.kind == PLURIPHASE:
            bp = self.breakpoints
            if len(bp) < 2 or bp[0] != 0.0 or any(b1 <= b0 for b0, b1 in zip(bp, bp[1:])):
                raise ValueError("breakpoints must increase from 0")
            if abs(bp[-1] - self.g) > _CONT_TOL * self.g:
                raise ValueError("last breakpoint must equal the inradius")
            if len(self.pieces) != len(bp) - 1 or any(len(r) != self.d + 1 for r in self.pieces):
                raise ValueError("need one row of d+1 coefficients per interval")
            for i in range(1, len(bp)):
                left = _poly(self.pieces[i - 1], self.d, bp[i])
                right = _poly(self.pieces[i], self.d, bp[i]) if i < len(self.pieces) else self.volume
                if abs(left - right) > _CONT_TOL * self.volume:
                    raise ValueError(f"tube function is discontinuous at eps={bp[i]!r}")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")

    @property
    def is_monophase(self) -> bool:
        return self.kind == MONOPHASE

    def kappa_full(self) -> tuple:
        """``kappa_0 .. kappa_d`` including ``kappa_d = -volume``."""
        if not self.is_monophase:
            raise NotMonophase(self.breakpoints[1])
        return self.kappa + (-self.volume,)

    def tube(self, eps):
        return gamma_tube(self, 1.0, eps)


def _poly(row, d, eps):
    return sum(c * eps ** (d - k) for k, c in enumerate(row))


def gamma_tube(rep: SteinerRep, x, eps):
    """Inner tube volume of the tile ``(1/x) G`` at width ``eps``.

    Broadcasts over ``x`` and ``eps``.
    """
    x = np.asarray(x, dtype=float)
    eps = np.asarray(eps, dtype=float)
    d = rep.d
    u = x * eps  # eps measured in units of the unscaled generator
    saturated = rep.volume * x ** (-d)
    if rep.is_monophase:
        below = sum(k * x ** (-i) * eps ** (d - i) for i, k in enumerate(rep.kappa))
    else:
        idx = np.clip(np.searchsorted(rep.breakpoints, u, side="right") - 1, 0, len(rep.pieces) - 1)
        coeffs = np.asarray(rep.pieces)[idx]
        below = sum(coeffs[..., k] * x ** (-k) * eps ** (d - k) for k in range(d + 1))
    out = np.where(u <= rep.g, below, saturated)
    return out[()] if out.ndim == 0 else out


def scale_rep(rep: SteinerRep, lam: float) -> SteinerRep:
    """Representation of the homothetic copy ``lam * G``."""
    if not lam > 0:
        raise ValueError("scale must be positive")
    d = rep.d
    if rep.is_monophase:
        return SteinerRep(d, rep.g * lam, rep.volume * lam ** d, MONOPHASE,
                          kappa=tuple(k * lam ** i for i, k in enumerate(rep.kappa)), label=rep.label)
    return SteinerRep(d, rep.g * lam, rep.volume * lam ** d, PLURIPHASE,
                      breakpoints=tuple(b * lam for b in rep.breakpoints),
                      pieces=tuple(tuple(c * lam ** k for k, c in enumerate(row)) for row in rep.pieces),
                      label=rep.label)


def interval_rep(length: float, label: str = "") -> SteinerRep:
    """An open interval: tube ``2 eps`` until it saturates at half its length."""
    if not length > 0:
        raise ValueError("length must be positive")
    return SteinerRep(1, length / 2, length, MONOPHASE, kappa=(2.0,), label=label)


def tangential_rep(alpha: float, g: float, label: str = "") -> SteinerRep:
    """Planar generator with tube ``alpha (2 g eps - eps**2)``.

    Holds for every polygon whose edges all touch the incircle, where
    ``alpha = area / g**2 = sum cot(theta_i / 2)``.
    """
    return SteinerRep(2, g, alpha * g * g, MONOPHASE, kappa=(-alpha, 2 * alpha * g), label=label)


def monophase_from_polygon(p: ConvexPolygon, n_check: int = 1000, label: str = "") -> SteinerRep:
    """Monophase representation of a convex polygon, or raise NotMonophase.

    Below the first erosion event the tube area is ``P eps - c eps**2``
    with ``P`` the perimeter and ``c = sum cot(theta_i/2)``.  The candidate
    is accepted only if it reproduces the exact erosion on ``n_check``
    points of ``(0, g)`` to within ``1e-10 * area``.
    """
    area = polygon_area(p)
    g = polygon_inradius(p)
    perim = p.perimeter()
    c = float(np.sum(1.0 / np.tan(0.5 * p.interior_angles())))
    eps = np.linspace(0.0, g, n_check + 2)[1:-1]
    exact = np.array([exact_tube_area(p, e) for e in eps])
    cand = perim * eps - c * eps ** 2
    dev = np.max(np.abs(exact - cand))
    if dev > 1e-10 * area or abs(perim * g - c * g * g - area) > 1e-10 * area:
        raise NotMonophase(first_erosion_event(p))
    # the candidate's saturation value is area to 1e-10; pin it exactly
    return SteinerRep(2, g, perim * g - c * g * g, MONOPHASE, kappa=(-c, perim), label=label)


def eval_pieces_at(rep: SteinerRep, eps: float, piece: int) -> float:
    """Evaluate one pluriphase piece at ``eps`` (used for continuity checks)."""
    return _poly(rep.pieces[piece], rep.d, eps)


def regular_polygon_alpha(n: int) -> float:
    return n * math.tan(math.pi / n)
