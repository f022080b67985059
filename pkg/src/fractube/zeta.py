"""Scaling zeta functions and their poles (the scaling complex dimensions).

For a self-similar system with ratios ``r_j`` the scaling zeta function is

    zeta_s(s) = N(s) / (1 - sum_j r_j**s),    N(s) = sum_k lam_k**s,

where the numerator ``N`` is ``1`` for a tiling whose generators are the
reference shapes and a general Dirichlet polynomial for shifted or finite
sprays.  Poles are the zeros of the denominator.  In the lattice case they
lie on finitely many vertical lines and are found from a polynomial; in the
nonlattice case they are found by Newton's method from a seed grid and the
count is certified by the argument principle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import quad_vec

from .errors import IncompleteRootSet, NearPole, NotSimplePole, NumericalFailure

NEAR_POLE = 1e-12
ROOT_RESIDUAL = 1e-10
DEDUP_RADIUS = 1e-8
NEWTON_TOL = 1e-12
CLUSTER_RADIUS = 1e-6


@dataclass(frozen=True)
class LatticeStructure:
    """Ratios ``r_j = base**exponents[j]`` with coprime integer exponents."""

    base: float
    exponents: tuple

    @property
    def period(self) -> float:
        return 2 * math.pi / math.log(1 / self.base)


@dataclass(frozen=True)
class Window:
    """Closed rectangle ``[re_min, re_max] x [im_min, im_max]``.

    ``im_min`` defaults to ``-im_max`` (a band symmetric about the real axis).
    """

    re_min: float
    re_max: float
    im_max: float
    im_min: Optional[float] = None

    def __post_init__(self):
        if self.im_min is None:
            object.__setattr__(self, "im_min", -self.im_max)
        if not self.re_min < self.re_max:
            raise ValueError("re_min must be below re_max")
        if not self.im_min < self.im_max:
            raise ValueError("empty imaginary range")

    @property
    def symmetric(self) -> bool:
        return self.im_min == -self.im_max

    def contains(self, s, pad: float = 0.0) -> bool:
        return (self.re_min - pad <= s.real <= self.re_max + pad
                and self.im_min - pad <= s.imag <= self.im_max + pad)


@dataclass(frozen=True)
class ComplexDimension:
    omega: complex
    multiplicity: int = 1
    residue: Optional[complex] = None

    def conjugate(self) -> "ComplexDimension":
        res = None if self.residue is None else self.residue.conjugate()
        return ComplexDimension(self.omega.conjugate(), self.multiplicity, res)


def similarity_dimension(ratios: Sequence[float]) -> float:
    """Unique real ``D`` with ``sum r_j**D = 1`` (bisection, then Newton)."""
    r = np.asarray(ratios, dtype=float)
    if len(r) < 2 or np.any((r <= 0) | (r >= 1)):
        raise ValueError("need at least two ratios in (0, 1)")
    logs = np.log(r)

    def f(s):
        return float(np.sum(np.exp(s * logs))) - 1.0

    lo, hi = 0.0, 1.0
    while f(hi) > 0:
        hi *= 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-14 * max(1.0, hi):
            break
    s = 0.5 * (lo + hi)
    for _ in range(4):
        fp = float(np.sum(logs * np.exp(s * logs)))
        s -= f(s) / fp
    return s


def detect_lattice(ratios: Sequence[float], tol: float = 1e-12,
                   max_denominator: int = 10 ** 6) -> Optional[LatticeStructure]:
    """Return the lattice structure of ``ratios`` or ``None`` if nonlattice.

    Each ``log r_j / log r_min`` is matched to a rational by continued
    fractions.  A match must be within ``tol`` and also much closer than a
    generic irrational admits at that denominator (``err * q**2 <= 1e-3``);
    without the second test every real number passes at a 1e6 bound.
    """
    r = np.asarray(ratios, dtype=float)
    if len(r) == 0:
        return None
    r_min = float(r.min())
    t = np.log(r) / math.log(r_min)
    fracs = []
    for tj in t:
        fr = Fraction(float(tj)).limit_denominator(max_denominator)
        err = abs(float(tj) - fr.numerator / fr.denominator)
        if err > tol or err * fr.denominator ** 2 > 1e-3 or fr.numerator <= 0:
            return None
        fracs.append(fr)
    common = reduce(math.lcm, (f.denominator for f in fracs))
    ks = [f.numerator * common // f.denominator for f in fracs]
    g = reduce(math.gcd, ks)
    ks = tuple(k // g for k in ks)
    k_min = max(ks)
    base = r_min ** (1.0 / k_min)
    if max(abs(rj - base ** k) for rj, k in zip(r, ks)) > tol:
        return None
    return LatticeStructure(base=base, exponents=ks)


class ScalingZeta:
    """``zeta_s(s) = sum_k lam_k**s / (1 - sum_j r_j**s)``.

    With no ratios the function is the finite Dirichlet polynomial of
    ``scales`` and has no poles.
    """

    def __init__(self, ratios: Sequence[float], scales: Sequence[float] = (1.0,)):
        self.ratios = tuple(float(x) for x in ratios)
        self.scales = tuple(float(x) for x in scales)
        if any(not 0 < x < 1 for x in self.ratios):
            raise ValueError("ratios must lie in (0, 1)")
        if len(self.ratios) == 1:
            raise ValueError("a self-similar zeta function needs at least two ratios")
        if not self.scales or any(x <= 0 for x in self.scales):
            raise ValueError("scales must be positive")
        self._logr = np.log(np.asarray(self.ratios)) if self.ratios else np.zeros(0)
        self._logl = np.log(np.asarray(self.scales))
        if self.ratios:
            self.D = similarity_dimension(self.ratios)
            self.lattice = detect_lattice(self.ratios)
        else:
            self.D = None
            self.lattice = None

    def __repr__(self):
        return f"ScalingZeta(ratios={self.ratios!r}, scales={self.scales!r})"

    @property
    def finite(self) -> bool:
        return not self.ratios

    # pieces, vectorized over s
    def numerator(self, s):
        s = np.asarray(s, dtype=complex)
        return np.exp(np.multiply.outer(s, self._logl)).sum(axis=-1)

    def denominator(self, s):
        s = np.asarray(s, dtype=complex)
        return 1.0 - np.exp(np.multiply.outer(s, self._logr)).sum(axis=-1)

    def denominator_derivative(self, s, order: int = 1):
        s = np.asarray(s, dtype=complex)
        return -(self._logr ** order * np.exp(np.multiply.outer(s, self._logr))).sum(axis=-1)

    def __call__(self, s):
        return zeta_s_eval(self, s)

    def strip_lower_bound(self) -> float:
        """Real ``sigma`` with every pole satisfying ``Re s >= sigma``.

        From ``m r_J**s = 1 - sum_{others} r_j**s`` one gets
        ``m <= r_J**-sigma + sum (r_j/r_J)**sigma``, whose right side
        increases in ``sigma``.
        """
        if self.finite:
            raise ValueError("finite sprays have no poles")
        r = np.asarray(self.ratios)
        r_min = r.min()
        small = np.abs(r - r_min) <= 1e-14
        m = small.sum()
        others = r[~small] / r_min

        def h(sig):
            return (1 / r_min) ** sig + np.sum(others ** sig) - m

        lo, hi = -1.0, self.D
        while h(lo) > 0:
            lo *= 2
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if h(mid) > 0:
                hi = mid
            else:
                lo = mid
        return lo


def zeta_s_eval(z: ScalingZeta, s):
    den = z.denominator(s)
    if np.any(np.abs(den) < NEAR_POLE):
        raise NearPole(f"zeta_s evaluated within {NEAR_POLE} of a pole")
    out = z.numerator(s) / den
    return out[()] if np.ndim(out) == 0 else out


def residue_zeta_s(z: ScalingZeta, omega: complex) -> complex:
    """Residue at a simple pole: ``N(omega) / sum_j r_j**omega log(1/r_j)``."""
    omega = complex(omega)
    if abs(complex(z.denominator(omega))) > ROOT_RESIDUAL:
        raise ValueError(f"{omega} is not a pole of zeta_s")
    dprime = complex(z.denominator_derivative(omega))
    if abs(dprime) < 1e-8:
        raise NotSimplePole(f"pole at {omega} is not simple")
    return complex(z.numerator(omega)) / dprime


def pole_multiplicity(z: ScalingZeta, omega: complex, tol: float = 1e-6, max_order: int = 8) -> int:
    for m in range(1, max_order + 1):
        if abs(complex(z.denominator_derivative(omega, m))) > tol:
            return m
    raise NumericalFailure(f"could not determine multiplicity at {omega}")


def contour_residue(func: Callable, center: complex, radius: float, nodes: int = 64) -> complex:
    """``(1/2 pi i)`` times the integral of ``func`` around a circle.

    Trapezoid rule, which converges geometrically for analytic periodic
    integrands.
    """
    theta = 2 * np.pi * np.arange(nodes) / nodes
    w = radius * np.exp(1j * theta)
    vals = np.asarray([func(center + wi) for wi in w], dtype=complex)
    return complex(np.sum(vals * w) / nodes)


def _newton_polish(z: ScalingZeta, s: complex, steps: int = 6) -> complex:
    for _ in range(steps):
        f = complex(z.denominator(s))
        fp = complex(z.denominator_derivative(s))
        if fp == 0:
            break
        step = f / fp
        s -= step
        if abs(step) < 1e-15 * max(1.0, abs(s)):
            break
    return s


def _make_dimension(z: ScalingZeta, omega: complex, multiplicity: int) -> ComplexDimension:
    res = residue_zeta_s(z, omega) if multiplicity == 1 else None
    return ComplexDimension(complex(omega), multiplicity, res)


def _cluster(values: np.ndarray, radius: float):
    """Group nearby complex numbers; returns ``[(mean, size), ...]``."""
    left = list(values)
    out = []
    while left:
        v = left.pop(0)
        group = [v]
        rest = []
        for u in left:
            (group if abs(u - v) <= radius * max(1.0, abs(v)) else rest).append(u)
        left = rest
        out.append((complex(np.mean(group)), len(group)))
    return out


def lattice_polynomial_roots(exponents: Sequence[int]):
    """Distinct roots ``u`` of ``sum_j u**k_j = 1`` with multiplicities."""
    deg = max(exponents)
    coeffs = np.zeros(deg + 1)
    for k in exponents:
        coeffs[deg - k] += 1.0
    coeffs[deg] -= 1.0
    roots = np.roots(coeffs)
    if not np.all(np.isfinite(roots)):
        raise NumericalFailure("companion-matrix eigenvalues did not converge")
    clusters = _cluster(roots, CLUSTER_RADIUS)
    poly = np.poly1d(coeffs)
    dpoly = poly.deriv()
    out = []
    for u, m in clusters:
        if m == 1:
            for _ in range(4):
                du = dpoly(u)
                if du == 0:
                    break
                u = u - poly(u) / du
        out.append((complex(u), m))
    return out


def complex_dimensions_lattice(z: ScalingZeta, lat: LatticeStructure, win: Window) -> list:
    """All poles in ``win`` for a lattice system, sorted by imaginary part."""
    log_base = math.log(lat.base)
    p = lat.period
    dims = []
    for u, m in lattice_polynomial_roots(lat.exponents):
        s0 = np.log(u) / log_base
        if not (win.re_min <= s0.real <= win.re_max):
            continue
        n_lo = math.ceil((win.im_min - s0.imag) / p - 1e-12)
        n_hi = math.floor((win.im_max - s0.imag) / p + 1e-12)
        for n in range(n_lo, n_hi + 1):
            omega = complex(s0.real, s0.imag + n * p)
            if m == 1:
                omega = _newton_polish(z, omega, steps=2)
            if abs(complex(z.denominator(omega))) > ROOT_RESIDUAL:
                raise NumericalFailure(f"lattice pole {omega} has residual above {ROOT_RESIDUAL}")
            dims.append(_make_dimension(z, omega, m))
    if win.symmetric:
        dims = _mirror_upper(dims)
    return _sorted(dims)


def _mirror_upper(dims):
    """Rebuild a conjugate-symmetric list from its upper half."""
    out = []
    for d in dims:
        if abs(d.omega.imag) <= 1e-12:
            res = None if d.residue is None else complex(d.residue.real, 0.0)
            out.append(ComplexDimension(complex(d.omega.real, 0.0), d.multiplicity, res))
        elif d.omega.imag > 0:
            out.extend([d, d.conjugate()])
    return out


def _sorted(dims):
    return sorted(dims, key=lambda c: (round(c.omega.imag, 9), -c.omega.real))


def _newton_grid(z: ScalingZeta, re_min, re_max, im_min, im_max, step, iters=80):
    xs = np.arange(re_min, re_max + step / 2, step)
    ys = np.arange(im_min, im_max + step / 2, step)
    s = (xs[None, :] + 1j * ys[:, None]).ravel()
    active = np.ones(s.shape, dtype=bool)
    with np.errstate(all="ignore"):
        for _ in range(iters):
            f = z.denominator(s[active])
            fp = z.denominator_derivative(s[active])
            step_ = f / fp
            s[active] = s[active] - step_
            done = ~np.isfinite(s[active]) | (np.abs(step_) < NEWTON_TOL * np.maximum(1.0, np.abs(s[active])))
            idx = np.flatnonzero(active)
            active[idx[done]] = False
            if not active.any():
                break
        ok = np.isfinite(s)
        s = s[ok]
        ok = np.abs(z.denominator(s)) < ROOT_RESIDUAL
    return s[ok]


def argument_principle_count(z: ScalingZeta, win: Window, pad: float = 1e-6) -> float:
    """``(1/2 pi i) * contour integral of f'/f`` around the padded window,
    with ``f = 1 - sum r_j**s``.  Returned unrounded."""
    a = complex(win.re_min - pad, win.im_min - pad)
    b = complex(win.re_max + pad, win.im_min - pad)
    c = complex(win.re_max + pad, win.im_max + pad)
    d = complex(win.re_min - pad, win.im_max + pad)
    total = 0j
    for p0, p1 in ((a, b), (b, c), (c, d), (d, a)):
        dz = p1 - p0

        def integrand(t, p0=p0, dz=dz):
            s = p0 + t * dz
            v = complex(z.denominator_derivative(s)) / complex(z.denominator(s)) * dz
            return np.array([v.real, v.imag])

        length = abs(dz)
        val, _ = quad_vec(integrand, 0.0, 1.0, epsabs=1e-11, epsrel=1e-11, limit=20000,
                          points=None if length < 1 else list(np.linspace(0, 1, int(length) + 1)[1:-1]))
        total += complex(val[0], val[1])
    return (total / (2j * math.pi)).real


def complex_dimensions_nonlattice(z: ScalingZeta, win: Window, grid_step: float = 0.25,
                                  pad: float = 1e-6, refinements: int = 3) -> list:
    """Poles in ``win`` by seeded Newton, certified by the argument principle.

    The seed grid is halved up to ``refinements`` times while the count
    disagrees; after that :class:`IncompleteRootSet` is raised.
    """
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    expected = argument_principle_count(z, win, pad)
    expected_int = round(expected)
    if abs(expected - expected_int) > 1e-3:
        raise NumericalFailure(f"argument-principle integral {expected} is not near an integer")
    step = grid_step
    for _ in range(refinements + 1):
        dims = _search(z, win, step, pad)
        found = sum(d.multiplicity for d in dims)
        if found == expected_int:
            return dims
        step /= 2
    raise IncompleteRootSet(found, expected_int)


def _search(z, win, step, pad):
    if win.symmetric:
        raw = _newton_grid(z, win.re_min - pad, win.re_max + pad, -pad, win.im_max + pad, step)
    else:
        raw = _newton_grid(z, win.re_min - pad, win.re_max + pad, win.im_min - pad, win.im_max + pad, step)
    roots = []
    for r in sorted(raw, key=lambda x: (x.imag, x.real)):
        if not win.contains(r, pad):
            continue
        if win.symmetric and r.imag < -pad:
            continue
        if any(abs(r - q) <= DEDUP_RADIUS * max(1.0, abs(q)) for q in roots):
            continue
        roots.append(r)
    dims = []
    for r in roots:
        m = pole_multiplicity(z, r)
        if m == 1:
            r = _newton_polish(z, r)
        if abs(r.imag) <= 1e-12:
            r = complex(r.real, 0.0)
        d = _make_dimension(z, r, m)
        dims.append(d)
        if win.symmetric and r.imag > 0:
            dims.append(d.conjugate())
    return _sorted(dims)


def complex_dimensions(z: ScalingZeta, win: Window, grid_step: float = 0.25) -> list:
    """Poles of ``z`` in ``win``, by whichever method fits the system."""
    if z.finite:
        return []
    if z.lattice is not None:
        return complex_dimensions_lattice(z, z.lattice, win)
    return complex_dimensions_nonlattice(z, win, grid_step)


def default_window(z: ScalingZeta, im_max: float, margin: float = 0.5) -> Window:
    """Window covering the whole critical strip up to height ``im_max``."""
    return Window(z.strip_lower_bound() - margin, z.D + margin, im_max)
