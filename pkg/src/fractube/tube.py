"""Tube formulas for self-similar tilings and fractal sprays.

Two independent routes to ``V(T, eps)``, the volume of the inner
eps-neighbourhood of all tiles:

* the residue sum over the complex dimensions of the tubular zeta function
  ``zeta_T(eps, s) = eps**(d-s) zeta_s(s) sum_k g**(s-k) kappa_k / (s-k)``,
  truncated at ``|Im s| <= im_max``;
* the word-sum oracle, which adds the tube of every tile explicitly down to
  the depth where all remaining tiles are saturated and closes the rest
  with a geometric series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import NearPole, NotMonophase, NotSimplePole, PoleClusterError
from .ifs import SelfSimilarSystem, ratio_classes
from .steiner import SteinerRep, gamma_tube, interval_rep
from .zeta import (ComplexDimension, ScalingZeta, Window, complex_dimensions,
                   contour_residue, default_window, residue_zeta_s)

INTEGER_TOL = 1e-9
CONTOUR_NODES = 128


class TilingModel:
    """A scaling zeta function paired with the generators it scales.

    Every tile is ``lam * r_w * G_q`` for a numerator scale ``lam`` of the
    zeta function, a word ``w`` and a generator ``q``.
    """

    def __init__(self, zeta: ScalingZeta, reps: Sequence[SteinerRep], name: str = ""):
        reps = tuple(reps)
        if not reps:
            raise ValueError("a model needs at least one generator")
        d = reps[0].d
        if any(r.d != d for r in reps):
            raise ValueError("all generators must share one ambient dimension")
        if not zeta.finite and sum(r ** d for r in zeta.ratios) >= 1:
            raise ValueError("sum of r_j^d must be < 1")
        self.zeta = zeta
        self.reps = reps
        self.d = d
        self.name = name
        self._expansions = {}

    def __repr__(self):
        return f"TilingModel({self.name or self.zeta!r}, d={self.d}, generators={len(self.reps)})"

    @classmethod
    def from_system(cls, sys: SelfSimilarSystem) -> "TilingModel":
        return cls(ScalingZeta(sys.ratios), sys.reps(), name=sys.name)

    @property
    def monophase(self) -> bool:
        return all(r.is_monophase for r in self.reps)

    def _require_monophase(self):
        for r in self.reps:
            if not r.is_monophase:
                raise NotMonophase(r.breakpoints[1], "residue machinery needs monophase generators")

    def total_volume(self) -> float:
        vol = sum(r.volume for r in self.reps) * sum(lam ** self.d for lam in self.zeta.scales)
        if self.zeta.finite:
            return vol
        return vol / (1.0 - sum(r ** self.d for r in self.zeta.ratios))

    def geometric_factor(self, s):
        """``sum_q sum_{k=0}^d g_q**(s-k) kappa_qk / (s-k)``."""
        self._require_monophase()
        s = np.asarray(s, dtype=complex)
        out = np.zeros(s.shape, dtype=complex)
        for rep in self.reps:
            for k, kap in enumerate(rep.kappa_full()):
                out = out + np.exp((s - k) * math.log(rep.g)) * kap / (s - k)
        return out

    def integer_coefficient(self, k: int) -> complex:
        """``zeta_s(k) * sum_q kappa_qk``: the coefficient of ``eps**(d-k)``."""
        return complex(self.zeta(k)) * sum(rep.kappa[k] for rep in self.reps)


def finite_spray(reps, scales: Sequence[float]) -> TilingModel:
    """Finitely many copies ``lam * G`` of each generator; no scaling poles."""
    if isinstance(reps, SteinerRep):
        reps = [reps]
    return TilingModel(ScalingZeta((), scales), reps, name="finite spray")


def string_adapter(ratios: Sequence[float] = (), gaps: Optional[Sequence[float]] = None,
                   lengths: Optional[Sequence[float]] = None) -> TilingModel:
    """Fractal string as a one-dimensional spray on the interval ``(0, 2)``.

    Either self-similar (``ratios`` plus first-level ``gaps``, default the
    single gap ``1 - sum ratios``) or an explicit finite list of
    ``lengths``.  Each length ``l`` contributes the scale ``l / 2``, so
    ``zeta_s(s) = 2**-s zeta_L(s)``.
    """
    gen = interval_rep(2.0, label="(0, 2)")
    if lengths is not None:
        return TilingModel(ScalingZeta((), [l / 2 for l in lengths]), [gen], name="string")
    ratios = sorted(ratios, reverse=True)
    if gaps is None:
        gaps = (1.0 - sum(ratios),)
    return TilingModel(ScalingZeta(ratios, [l / 2 for l in gaps]), [gen], name="string")


def _integer_near(s: complex, d: int) -> Optional[int]:
    k = round(s.real)
    if 0 <= k <= d and abs(s - k) <= INTEGER_TOL:
        return k
    return None


def tubular_zeta_eval(m: TilingModel, eps: float, s):
    s_arr = np.asarray(s, dtype=complex)
    ks = np.arange(m.d + 1)
    if np.any(np.abs(s_arr[..., None] - ks) < 1e-10):
        raise NearPole("tubular zeta evaluated at an integer dimension")
    if not eps > 0:
        raise ValueError("eps must be positive")
    out = np.exp((m.d - s_arr) * math.log(eps)) * m.zeta(s_arr) * m.geometric_factor(s_arr)
    return out[()] if out.ndim == 0 else out


def _nearby_poles(m: TilingModel, omega: complex, radius: float):
    pts = [complex(k) for k in range(m.d + 1)]
    if not m.zeta.finite:
        win = Window(omega.real - radius, omega.real + radius, omega.imag + radius, omega.imag - radius)
        pts += [c.omega for c in complex_dimensions(m.zeta, win)]
    return [p for p in pts if abs(p - omega) > 1e-12]


def contour_tubular_residue(m: TilingModel, omega: complex, eps: float) -> complex:
    others = _nearby_poles(m, omega, 2e-3)
    dist = min((abs(p - omega) for p in others), default=np.inf)
    if dist < 1e-9:
        raise PoleClusterError(f"poles within {dist:.3g} of {omega}")
    radius = min(1e-3, dist / 2)
    return contour_residue(lambda s: tubular_zeta_eval(m, eps, s), omega, radius, CONTOUR_NODES)


def residue_tubular(m: TilingModel, omega, eps: float) -> complex:
    """Residue of ``zeta_T(eps, .)`` at a scaling pole or integer dimension.

    Closed forms for simple scaling poles off the integers and for integers
    that are not scaling poles; a contour integral otherwise.
    """
    m._require_monophase()
    if isinstance(omega, ComplexDimension):
        dim = omega
        omega = dim.omega
    else:
        omega = complex(omega)
        dim = None
    k = _integer_near(omega, m.d)
    is_scaling_pole = (not m.zeta.finite) and abs(complex(m.zeta.denominator(omega))) <= 1e-10
    if k is not None and not is_scaling_pole:
        if k == m.d:
            return 0j  # no pole at s = d is counted among the dimensions
        return m.integer_coefficient(k) * eps ** (m.d - k)
    if not is_scaling_pole:
        raise ValueError(f"{omega} is not a complex dimension of the model")
    simple = dim.multiplicity == 1 if dim is not None else True
    if k is None and simple:
        try:
            res = dim.residue if dim is not None and dim.residue is not None else residue_zeta_s(m.zeta, omega)
        except NotSimplePole:
            return contour_tubular_residue(m, omega, eps)
        return complex(res * np.exp((m.d - omega) * math.log(eps)) * m.geometric_factor(omega))
    return contour_tubular_residue(m, omega, eps)


@dataclass(frozen=True)
class TubeExpansion:
    """Coefficients of ``V(T, eps) = sum c_w eps**(d-w) + sum c_k eps**(d-k)``.

    ``special`` lists poles with no closed coefficient (multiple poles or
    scaling poles on an integer); they are evaluated by contour residues
    per eps, and ``closed`` is False when any are present.
    """

    d: int
    scaling_terms: tuple
    integer_terms: tuple
    truncation_im: float
    cesaro_span: float
    special: tuple = ()
    model: Optional[TilingModel] = field(default=None, compare=False, repr=False)

    @property
    def closed(self) -> bool:
        return not self.special

    def weights(self, imag, averaging: str):
        imag = np.abs(np.asarray(imag, dtype=float))
        if averaging == "none":
            return np.ones_like(imag)
        if averaging == "cesaro":
            return np.clip(1.0 - imag / self.cesaro_span, 0.0, None)
        raise ValueError(f"unknown averaging {averaging!r}")

    def evaluate(self, eps, averaging: str = "none"):
        """Complex truncated residue sum; the imaginary part is a diagnostic."""
        eps = np.asarray(eps, dtype=float)
        logeps = np.log(eps)[..., None]
        out = np.zeros(eps.shape, dtype=complex)
        if self.scaling_terms:
            om = np.array([w for w, _ in self.scaling_terms])
            c = np.array([c for _, c in self.scaling_terms]) * self.weights(om.imag, averaging)
            out = out + (c * np.exp((self.d - om) * logeps)).sum(axis=-1)
        for k, c in self.integer_terms:
            out = out + c * eps ** (self.d - k)
        if self.special:
            w = self.weights([p.omega.imag for p in self.special], averaging)
            flat = []
            for e in np.atleast_1d(eps).ravel():
                flat.append(sum(wi * residue_tubular(self.model, p, float(e)) for wi, p in zip(w, self.special)))
            out = out + np.asarray(flat).reshape(eps.shape)
        return out[()] if out.ndim == 0 else out


def tube_expansion(m: TilingModel, im_max: float) -> TubeExpansion:
    cached = m._expansions.get(im_max)
    if cached is not None:
        return cached
    m._require_monophase()
    d = m.d
    scaling, special = [], []
    poles = [] if m.zeta.finite else complex_dimensions(m.zeta, default_window(m.zeta, im_max))
    pole_ints = set()
    for dim in poles:
        k = _integer_near(dim.omega, d)
        if k is not None:
            pole_ints.add(k)
        if dim.multiplicity == 1 and k is None:
            c = dim.residue * complex(m.geometric_factor(dim.omega))
            scaling.append((dim.omega, complex(c)))
        else:
            special.append(dim)
    # conjugate closure: c(conj w) = conj c(w); enforce to roundoff
    scaling = _conjugate_close(scaling)
    integer = [(k, m.integer_coefficient(k).real) for k in range(d) if k not in pole_ints]
    if m.zeta.finite or m.zeta.lattice is None:
        span = float(im_max)
    else:
        p = m.zeta.lattice.period
        span = (math.floor(im_max / p) + 1) * p
    exp = TubeExpansion(d, tuple(scaling), tuple(integer), float(im_max), span, tuple(special), m)
    m._expansions[im_max] = exp
    return exp


def _conjugate_close(terms):
    upper = [(w, c) for w, c in terms if w.imag > 1e-12]
    real = [(complex(w.real, 0.0), complex(c.real, 0.0)) for w, c in terms if abs(w.imag) <= 1e-12]
    out = real + upper + [(w.conjugate(), c.conjugate()) for w, c in upper]
    return sorted(out, key=lambda t: (t[0].imag, t[0].real))


def truncated_residue_sum(m: TilingModel, eps, im_max: float, averaging: str = "none"):
    if np.any(np.asarray(eps) <= 0):
        raise ValueError("eps must be positive")
    return tube_expansion(m, im_max).evaluate(eps, averaging)


def tube_volume_formula(m: TilingModel, eps, im_max: float = 400.0, averaging: str = "none"):
    """``V(T, eps)`` from the truncated residue sum (real part)."""
    val = truncated_residue_sum(m, eps, im_max, averaging)
    return np.real(val)[()] if np.ndim(val) == 0 else np.real(val)


def oracle_depth(m: TilingModel, eps: float) -> int:
    """Smallest ``N`` with every tile of word length ``> N`` saturated at eps."""
    big = max(r.g for r in m.reps) * max(m.zeta.scales)
    r1 = max(m.zeta.ratios)
    n = max(0, math.ceil(math.log(eps / big) / math.log(r1)) - 1) if eps < big else 0
    while big * r1 ** (n + 1) > eps:
        n += 1
    while n > 0 and big * r1 ** n <= eps:
        n -= 1
    return n


def tube_volume_oracle(m: TilingModel, eps, depth: Optional[int] = None):
    """Exact ``V(T, eps)`` by summing tile tubes.

    Words up to length ``N`` are enumerated (grouped by ratio); all deeper
    tiles are saturated and contribute ``vol * S**(N+1) / (1 - S)`` with
    ``S = sum r_j**d``.
    """
    if np.ndim(eps) > 0:
        return np.array([tube_volume_oracle(m, float(e), depth) for e in np.asarray(eps, dtype=float).ravel()]
                        ).reshape(np.shape(eps))
    eps = float(eps)
    if not eps > 0:
        raise ValueError("eps must be positive")
    lams = np.asarray(m.zeta.scales)
    if m.zeta.finite:
        return float(sum(gamma_tube(rep, 1.0 / lams, eps).sum() for rep in m.reps))
    n_min = oracle_depth(m, eps)
    n = n_min if depth is None else depth
    if n < n_min:
        raise ValueError(f"depth {n} leaves unsaturated tiles at eps={eps}; need at least {n_min}")
    d = m.d
    total = 0.0
    for rat, mult in ratio_classes(m.zeta.ratios, n):
        scale = np.multiply.outer(rat, lams)
        for rep in m.reps:
            total += float(np.sum(mult[:, None] * gamma_tube(rep, 1.0 / scale, eps)))
    s = sum(r ** d for r in m.zeta.ratios)
    vol = sum(rep.volume for rep in m.reps) * float(np.sum(lams ** d))
    return total + vol * s ** (n + 1) / (1.0 - s)


@dataclass(frozen=True)
class TubeCurve:
    epsilons: np.ndarray
    values: np.ndarray
    source: str


def tube_curve(m: TilingModel, epsilons, source: str = "oracle", im_max: float = 400.0,
               averaging: str = "none") -> TubeCurve:
    eps = np.asarray(epsilons, dtype=float)
    if source == "oracle":
        vals = tube_volume_oracle(m, eps)
    elif source == "formula":
        vals = tube_volume_formula(m, eps, im_max, averaging)
    else:
        raise ValueError(f"unknown source {source!r}")
    return TubeCurve(eps, np.asarray(vals, dtype=float), source)


def error_slope(epsilons, formula, oracle) -> float:
    """Least-squares slope of ``log|formula - oracle|`` against ``log eps``."""
    err = np.abs(np.asarray(formula) - np.asarray(oracle))
    ok = err > 0
    if ok.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(np.asarray(epsilons)[ok]), np.log(err[ok]), 1)[0])


@dataclass(frozen=True)
class MeasurabilityReport:
    classification: str
    measurable: bool
    content_or_average: float
    nondegeneracy: float
    dimension: float
    degenerate: bool
    dimension_condition: bool
    content_label: str

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "measurable": self.measurable,
            "content_or_average": self.content_or_average,
            "content_label": self.content_label,
            "nondegeneracy": self.nondegeneracy,
            "nondegeneracy_flagged": self.degenerate or not self.dimension_condition,
            "dimension": self.dimension,
            "dimension_above_d_minus_1": self.dimension_condition,
        }


def measurability_report(m: TilingModel, im_max: float = 1.0) -> MeasurabilityReport:
    """Lattice/nonlattice classification, the coefficient of ``eps**(d-D)``
    and the nondegeneracy sum ``sum_k g**(D-k) (d-k) kappa_k / (D-k)``.

    For lattice systems the ``D`` coefficient is the mean of an oscillating
    factor and is reported as an average-content proxy.
    """
    if m.zeta.finite:
        raise ValueError("a finite spray has no similarity dimension")
    D = m.zeta.D
    if not D < m.d:
        raise ValueError("need D < d")
    exp = tube_expansion(m, im_max)
    real_terms = [(w, c) for w, c in exp.scaling_terms if w.imag == 0.0 and abs(w.real - D) < 1e-8]
    if not real_terms:
        raise NotSimplePole(f"no simple pole at D={D}")
    c_d = real_terms[0][1].real
    nondeg = 0.0
    for rep in m.reps:
        for k, kap in enumerate(rep.kappa):
            nondeg += rep.g ** (D - k) * (m.d - k) * kap / (D - k)
    nondeg = abs(nondeg)
    lattice = m.zeta.lattice is not None
    return MeasurabilityReport(
        classification="lattice" if lattice else "nonlattice",
        measurable=not lattice,
        content_or_average=c_d,
        nondegeneracy=nondeg,
        dimension=D,
        degenerate=nondeg <= 1e-12,
        dimension_condition=D > m.d - 1,
        content_label=_content_label(lattice, D > m.d - 1),
    )


def _content_label(lattice: bool, above: bool) -> str:
    if not above:
        return "D coefficient (subdominant: D <= d-1)"
    return "average content proxy (D coefficient)" if lattice else "Minkowski content"
