import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fractube import catalog
from fractube.errors import NearPole, NotMonophase, PoleClusterError
from fractube.geometry2d import square
from fractube.ifs import GeneratorSpec, SelfSimilarSystem, total_tiling_volume
from fractube.steiner import gamma_tube, interval_rep, monophase_from_polygon, scale_rep
from fractube.tube import (TilingModel, error_slope, finite_spray, measurability_report,
                           oracle_depth, residue_tubular, string_adapter, truncated_residue_sum,
                           tube_curve, tube_expansion, tube_volume_formula, tube_volume_oracle,
                           tubular_zeta_eval)
from fractube.zeta import ScalingZeta, complex_dimensions, contour_residue, default_window

LN3 = math.log(3)
S3 = math.sqrt(3)
CANTOR = catalog.cantor().model
KOCH = catalog.koch().model
SIERP = catalog.sierpinski().model
PENTA = catalog.pentagasket().model
STRING = string_adapter((1 / 3, 1 / 3))
D_C = math.log(2) / LN3
P_C = 2 * math.pi / LN3


def zeta_L(s):
    return 3 ** -s / (1 - 2 * 3 ** -s)


def mixed_model():
    sys = SelfSimilarSystem((0.5, 1 / 3), 2, (GeneratorSpec(polygon=square(1.0)),))
    return TilingModel.from_system(sys)


# --- tubular zeta -------------------------------------------------------------

def test_string_inner_product_identity():
    rng = np.random.default_rng(4)
    for _ in range(20):
        eps = rng.uniform(0.001, 0.3)
        s = complex(rng.uniform(-2, 3), rng.uniform(-30, 30))
        lhs = tubular_zeta_eval(STRING, eps, s)
        rhs = zeta_L(s) * (2 * eps) ** (1 - s) / (s * (1 - s))
        assert abs(lhs - rhs) <= 1e-12 * abs(rhs)
    assert tubular_zeta_eval(CANTOR, 0.05, 0.5) == pytest.approx(
        zeta_L(0.5) * 0.1 ** 0.5 / 0.25, rel=1e-12)


def test_tubular_zeta_decays_and_is_real():
    g = SIERP.reps[0].g
    # the factor (g/eps)**s decays along the reals only once eps exceeds g
    assert abs(tubular_zeta_eval(SIERP, 3 * g, 50.0)) < 1e-20
    assert abs(tubular_zeta_eval(SIERP, g / 3, 50.0)) > 1e10
    rng = np.random.default_rng(5)
    s = rng.uniform(-1, 2, 20) + 1j * rng.uniform(-20, 20, 20)
    for m in (KOCH, PENTA, mixed_model()):
        a = tubular_zeta_eval(m, 0.01, np.conj(s))
        assert np.allclose(a, np.conj(tubular_zeta_eval(m, 0.01, s)), rtol=1e-12)


def test_tubular_zeta_rejects_integers():
    with pytest.raises(NearPole):
        tubular_zeta_eval(KOCH, 0.01, 1.0)
    with pytest.raises(ValueError):
        tubular_zeta_eval(KOCH, -0.01, 0.5)


# --- residues -----------------------------------------------------------------

def test_integer_residues():
    for eps in (0.001, 0.02):
        assert residue_tubular(KOCH, 0, eps) == pytest.approx(3 * S3 * eps ** 2, rel=1e-12)
        assert residue_tubular(SIERP, 1, eps) == pytest.approx(-3 * eps, rel=1e-12)
        assert residue_tubular(CANTOR, 0, eps) == pytest.approx(-2 * eps, rel=1e-12)
        assert residue_tubular(KOCH, 2, eps) == 0


def test_contour_matches_closed_form_on_cantor_poles():
    eps = 0.03
    for c in complex_dimensions(CANTOR.zeta, default_window(CANTOR.zeta, 3.5 * P_C)):
        closed = residue_tubular(CANTOR, c, eps)
        num = contour_residue(lambda s: tubular_zeta_eval(CANTOR, eps, s), c.omega, 1e-3, 128)
        assert abs(num - closed) <= 1e-9 * abs(closed)


def test_residue_rejects_non_dimensions():
    with pytest.raises(ValueError):
        residue_tubular(KOCH, 0.3 + 1j, 0.01)


# --- coefficients -------------------------------------------------------------

def test_cantor_leading_coefficient():
    exp = tube_expansion(CANTOR, 0.1)
    (w, c), = exp.scaling_terms
    g = 1 / 6
    expected = (1 / (3 * LN3)) * (1 / D_C - 1 / (D_C - 1)) * g ** (D_C - 1)
    assert w == pytest.approx(D_C)
    assert c == pytest.approx(expected, rel=1e-12)


def test_cantor_terms_match_string_closed_form():
    exp = tube_expansion(CANTOR, 40)
    for w, c in exp.scaling_terms:
        ref = 1 / (2 * LN3) * 2 ** (1 - w) / (w * (1 - w))
        assert c == pytest.approx(ref, rel=1e-11)


def test_integer_coefficients():
    assert dict(tube_expansion(KOCH, 0.1).integer_terms) == pytest.approx(
        {0: 3 * S3, 1: 1 / (1 - 2 / S3)}, rel=1e-12)
    assert dict(tube_expansion(SIERP, 0.1).integer_terms) == pytest.approx({0: 1.5 * S3, 1: -3.0}, rel=1e-12)
    assert dict(tube_expansion(CANTOR, 0.1).integer_terms) == pytest.approx({0: -2.0})
    e = catalog.pentagasket().extras
    assert dict(tube_expansion(PENTA, 0.1).integer_terms)[0] == pytest.approx(
        e["alpha_p"] / 4 + 5 * e["alpha_t"] / 4, rel=1e-10)


def test_terms_conjugate_closed():
    for m in (CANTOR, SIERP, mixed_model()):
        terms = dict(tube_expansion(m, 60).scaling_terms)
        for w, c in terms.items():
            assert terms[w.conjugate()] == c.conjugate()


def test_expansion_is_cached():
    assert tube_expansion(SIERP, 77.0) is tube_expansion(SIERP, 77.0)


def test_scaling_term_homogeneity():
    exp = tube_expansion(SIERP, 30)
    for lam in (0.5, 3.0):
        for w, c in exp.scaling_terms:
            a = abs(c * 0.01 ** (2 - w))
            b = abs(c * (lam * 0.01) ** (2 - w))
            assert b == pytest.approx(lam ** (2 - w.real) * a, rel=1e-12)


# --- formula vs oracle --------------------------------------------------------

def _grid(m, n=20):
    g = max(r.g for r in m.reps)
    return np.geomspace(g / 100, g, n)


@pytest.mark.parametrize("m", [CANTOR, SIERP, KOCH, PENTA], ids=["cantor", "sierpinski", "koch", "pentagasket"])
def test_formula_converges_to_oracle(m):
    eps = _grid(m)
    oracle = tube_volume_oracle(m, eps)
    errs = [np.max(np.abs(tube_volume_formula(m, eps, T, "cesaro") - oracle) / oracle) for T in (50, 100, 200, 400)]
    assert all(b <= a for a, b in zip(errs, errs[1:]))
    assert errs[-1] <= 0.01


def test_nonlattice_formula_matches_oracle():
    m = catalog.koch_nonlattice().model
    eps = _grid(m, 10)
    f = tube_volume_formula(m, eps, 200, "cesaro")
    assert np.max(np.abs(f - tube_volume_oracle(m, eps)) / f) < 1e-3


def test_sierpinski_at_inradius():
    g = SIERP.reps[0].g
    assert tube_volume_formula(SIERP, g, 400, "cesaro") == pytest.approx(tube_volume_oracle(SIERP, g), rel=1e-3)


def test_cantor_saturated_value():
    # every tile is saturated at eps = g, so the tube is the whole unit interval
    assert tube_volume_oracle(CANTOR, 1 / 6) == pytest.approx(1.0, abs=1e-14)
    assert tube_volume_formula(CANTOR, 1 / 6, 300) == pytest.approx(1.0, abs=1e-3)


def test_reality_of_truncated_sum():
    for name in ("cantor", "koch", "sierpinski", "pentagasket", "koch-nonlattice"):
        m = catalog.get(name).model
        vals = truncated_residue_sum(m, _grid(m), 100)
        assert np.max(np.abs(vals.imag)) <= 1e-10


def test_double_pole_on_integer():
    # ratios 1/2, 1/2 in the plane: D = 1 collides with the integer dimension 1
    sys = SelfSimilarSystem((0.5, 0.5), 2, (GeneratorSpec(polygon=square(1.0)),))
    m = TilingModel.from_system(sys)
    exp = tube_expansion(m, 40)
    assert not exp.closed
    assert [d.omega for d in exp.special] == [pytest.approx(1.0)]
    assert [k for k, _ in exp.integer_terms] == [0]
    eps = np.geomspace(0.005, 0.5, 8)
    vals = truncated_residue_sum(m, eps, 40, "cesaro")
    assert np.max(np.abs(vals.imag)) <= 1e-10
    assert np.max(np.abs(vals.real - tube_volume_oracle(m, eps)) / vals.real) < 2e-3


def test_pole_cluster_error():
    D = 1 + 5e-10
    r = 2 ** (-1 / D)
    sys = SelfSimilarSystem((r, r), 2, (GeneratorSpec(polygon=square(1.0)),))
    m = TilingModel.from_system(sys)
    with pytest.raises(PoleClusterError):
        residue_tubular(m, D, 0.01)


def test_pluriphase_generators_are_refused():
    rep = catalog.pluriphase_square().extras["rep"]
    m = TilingModel(ScalingZeta((0.3, 0.3)), [rep])
    with pytest.raises(NotMonophase):
        tube_expansion(m, 10)
    # the oracle handles pluriphase tiles directly
    v = tube_volume_oracle(m, 0.25)
    assert v > rep.tube(0.25)


# --- oracle -------------------------------------------------------------------

def test_oracle_saturation_values():
    for eps in (1 / 6, 0.2, 1.0):
        assert tube_volume_oracle(CANTOR, eps) == pytest.approx(1.0, abs=1e-14)
    g = SIERP.reps[0].g
    assert tube_volume_oracle(SIERP, g) == pytest.approx(S3 / 4, rel=1e-14)
    assert tube_volume_oracle(SIERP, 2 * g) == pytest.approx(S3 / 4, rel=1e-14)


def test_oracle_koch_boundary_case():
    rep = KOCH.reps[0]
    g, r = rep.g, 3 ** -0.5
    eps = g * r
    s = 2 * r * r
    manual = rep.tube(eps) + 2 * r * r * rep.volume + rep.volume * s ** 2 / (1 - s)
    assert oracle_depth(KOCH, eps) == 0
    assert tube_volume_oracle(KOCH, eps) == pytest.approx(manual, rel=1e-14)
    assert tube_volume_oracle(KOCH, eps, depth=1) == pytest.approx(manual, rel=1e-14)


@pytest.mark.parametrize("name", ["cantor", "koch", "sierpinski", "pentagasket", "koch-nonlattice"])
def test_oracle_depth_independence(name):
    m = catalog.get(name).model
    for eps in _grid(m, 7):
        n = oracle_depth(m, eps)
        a = tube_volume_oracle(m, eps)
        assert tube_volume_oracle(m, eps, depth=n + 2) == pytest.approx(a, rel=1e-12)
    with pytest.raises(ValueError):
        tube_volume_oracle(m, _grid(m)[0], depth=0)


def test_oracle_against_explicit_tiles():
    m = mixed_model()
    rep = m.reps[0]
    eps = 0.02
    total = 0.0
    stack = [1.0]
    while stack:
        lam = stack.pop()
        if lam * rep.g <= eps:  # this tile and all below it are saturated
            total += rep.volume * lam ** 2 / (1 - 0.25 - 1 / 9)
            continue
        total += gamma_tube(rep, 1 / lam, eps)
        stack += [lam * 0.5, lam / 3]
    assert tube_volume_oracle(m, eps) == pytest.approx(total, rel=1e-9)


@pytest.mark.parametrize("m", [CANTOR, SIERP], ids=["cantor", "sierpinski"])
def test_curves_monotone_and_bounded(m):
    eps = _grid(m, 40)
    total = m.total_volume()
    for source in ("oracle", "formula"):
        curve = tube_curve(m, eps, source, im_max=400, averaging="cesaro")
        assert np.all(np.diff(curve.values) >= -1e-9)
        assert np.all(curve.values <= total + 1e-9)
        assert np.all(curve.values >= 0)


def test_error_slope_diagnostic():
    eps = _grid(SIERP, 10)
    slope = error_slope(eps, tube_volume_formula(SIERP, eps, 50), tube_volume_oracle(SIERP, eps))
    assert np.isfinite(slope)
    assert math.isnan(error_slope([1, 2], [1, 1], [1, 1]))


# --- strings and finite sprays -------------------------------------------------

def test_string_adapter_zeta():
    rng = np.random.default_rng(6)
    for _ in range(20):
        s = complex(rng.uniform(-1, 3), rng.uniform(-20, 20))
        assert abs(STRING.zeta(s) - 2 ** -s * zeta_L(s)) <= 1e-12 * abs(zeta_L(s))
    assert STRING.zeta.D == pytest.approx(CANTOR.zeta.D, abs=1e-15)
    assert STRING.zeta.lattice.period == pytest.approx(CANTOR.zeta.lattice.period, rel=1e-15)


def test_string_matches_cantor_tiling():
    eps = np.geomspace(1e-4, 0.2, 25)
    a = tube_volume_formula(STRING, eps, 100)
    b = tube_volume_formula(CANTOR, eps, 100)
    assert np.max(np.abs(a - b) / np.abs(b)) <= 1e-12
    assert np.allclose(tube_volume_oracle(STRING, eps), tube_volume_oracle(CANTOR, eps), rtol=1e-12)


def test_string_published_series():
    eps = np.array([0.003, 0.04, 0.11])
    n = np.arange(-17, 18)
    w = D_C + 1j * n * P_C
    series = (1 / (2 * LN3)) * ((2 * eps[:, None]) ** (1 - w) / (w * (1 - w))).sum(axis=1) - 2 * eps
    assert tube_volume_formula(STRING, eps, 17.5 * P_C) == pytest.approx(series.real, rel=1e-12)


def test_string_from_lengths_is_finite():
    m = string_adapter(lengths=[0.5, 0.25, 0.25])
    assert m.zeta.finite
    assert tube_volume_formula(m, 0.05, 10) == pytest.approx(0.3, rel=1e-12)


def test_finite_spray_is_steiner_sum():
    rep = monophase_from_polygon(square(1.0))
    scales = (1.0, 0.5, 0.2)
    m = finite_spray(rep, scales)
    assert complex_dimensions(m.zeta, default_window(ScalingZeta((0.5, 0.5)), 10)) is not None
    assert tube_expansion(m, 50).scaling_terms == ()
    eps = np.linspace(1e-3, 0.099, 30)  # below the smallest saturation 0.1
    direct = sum(scale_rep(rep, lam).tube(eps) for lam in scales)
    assert np.allclose(tube_volume_formula(m, eps), direct, rtol=1e-12, atol=0)
    assert np.allclose(tube_volume_oracle(m, eps), direct, rtol=1e-12, atol=0)


def test_model_validation():
    with pytest.raises(ValueError):
        TilingModel(ScalingZeta((0.5, 0.5)), [])
    with pytest.raises(ValueError):
        TilingModel(ScalingZeta((0.5, 0.5)), [interval_rep(1.0), monophase_from_polygon(square(1.0))])
    with pytest.raises(ValueError):
        TilingModel(ScalingZeta((0.8, 0.8)), [monophase_from_polygon(square(1.0))])


# --- measurability ------------------------------------------------------------

def test_measurability():
    r = measurability_report(SIERP)
    assert r.classification == "lattice" and r.measurable is False
    r = measurability_report(mixed_model())
    assert r.classification == "nonlattice" and r.measurable is True
    assert r.to_dict()["nondegeneracy_flagged"]  # D < d - 1 here
    g = KOCH.reps[0].g
    D = KOCH.zeta.D
    k0, k1 = KOCH.reps[0].kappa
    expected = abs(g ** D / D * 2 * k0 + g ** (D - 1) / (D - 1) * k1)
    rk = measurability_report(KOCH)
    assert rk.nondegeneracy == pytest.approx(expected, rel=1e-12) and rk.nondegeneracy > 0
    rc = measurability_report(CANTOR).to_dict()
    assert rc["dimension_above_d_minus_1"] and not rc["nondegeneracy_flagged"]


def test_measurability_content_stable_nonlattice():
    m = mixed_model()
    a = measurability_report(m, 200).content_or_average
    b = measurability_report(m, 400).content_or_average
    assert a == pytest.approx(b, rel=1e-12)
