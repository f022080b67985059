import math

import numpy as np
import pytest

from fractube import catalog
from fractube.geometry2d import montecarlo_tube_area, polygon_area
from fractube.ifs import total_tiling_volume
from fractube.steiner import monophase_from_polygon
from fractube.tube import tube_expansion
from fractube.zeta import ScalingZeta

TILINGS = ["cantor", "koch", "sierpinski", "pentagasket"]


def computed(entry):
    m = entry.model
    z = m.zeta
    ints = dict(tube_expansion(m, 0.1).integer_terms)
    out = {"D": z.D, "p": z.lattice.period, "zeta0": float(np.real(z(0))), "zeta1": float(np.real(z(1))),
           "g": m.reps[0].g, "total_volume": total_tiling_volume(entry.system)}
    out.update({f"c{k}": v for k, v in ints.items()})
    return out


@pytest.mark.parametrize("name", TILINGS)
def test_golden_table(name):
    entry = catalog.get(name)
    got = computed(entry)
    checked = 0
    for key, gold in entry.golden.items():
        if key in got:
            assert got[key] == pytest.approx(gold.value, rel=gold.tol, abs=gold.tol), gold.source
            checked += 1
    assert checked >= 5


@pytest.mark.parametrize("name,d", [("koch", 2), ("sierpinski", 2), ("cantor", 1)])
def test_oscillatory_prefactor(name, d):
    entry = catalog.get(name)
    g = entry.model.reps[0].g
    K = entry.golden["prefactor"].value
    for w, c in tube_expansion(entry.model, 40).scaling_terms:
        if d == 2:
            shape = (-1 / w + 2 / (w - 1) - 1 / (w - 2)) * g ** (w - 2)
        else:
            shape = (1 / w - 1 / (w - 1)) * g ** (w - 1)
        assert c == pytest.approx(K * shape, rel=1e-12)


def test_pentagasket_terms_per_generator():
    e = catalog.pentagasket()
    ln = math.log(1 / catalog.PENTA_R)
    for w, c in tube_expansion(e.model, 30).scaling_terms:
        bracket = -1 / w + 2 / (w - 1) - 1 / (w - 2)
        ref = (e.extras["alpha_p"] * e.extras["g_p"] ** w + 5 * e.extras["alpha_t"] * e.extras["g_t"] ** w) / ln
        assert c == pytest.approx(ref * bracket, rel=1e-10)


def test_pentagasket_generators():
    reps = catalog.pentagasket().model.reps
    assert len(reps) == 6
    for rep, alpha in [(reps[0], catalog.ALPHA_P), (reps[1], catalog.ALPHA_T)]:
        assert rep.kappa == pytest.approx((-alpha, 2 * alpha * rep.g))
        assert rep.volume == pytest.approx(alpha * rep.g ** 2)
    # multiplicity 5**m at inradius g r**m
    from fractube.ifs import words_by_depth
    assert list(words_by_depth(catalog.pentagasket().system, 2)) == [
        (0, 1.0, 1), (1, catalog.PENTA_R, 5), (2, catalog.PENTA_R ** 2, 25)]


def test_pentagon_cross_check():
    p = catalog.pentagon_generator()
    rep = monophase_from_polygon(p)
    pent = catalog.pentagasket().model.reps[0]
    assert rep.g == pytest.approx(pent.g, rel=1e-10)
    assert rep.kappa == pytest.approx(pent.kappa, rel=1e-10)
    assert polygon_area(p) == pytest.approx(pent.volume, rel=1e-10)


def test_zeta_forms():
    rng = np.random.default_rng(9)
    s = rng.uniform(-1, 3, 10) + 1j * rng.uniform(-10, 10, 10)
    assert np.allclose(catalog.cantor().model.zeta(s), 1 / (1 - 2 * 3.0 ** -s))
    assert np.allclose(catalog.koch().model.zeta(s), 1 / (1 - 2 * 3.0 ** (-s / 2)))


def test_koch_nonlattice():
    e = catalog.get("koch-nonlattice:0.4,0.3")
    z = e.model.zeta
    assert z.lattice is None
    assert z.ratios == pytest.approx((math.hypot(0.6, 0.3), 0.5))
    assert total_tiling_volume(e.system) == pytest.approx(0.15, rel=1e-9)
    with pytest.raises(ValueError):
        catalog.koch_nonlattice(complex(0.5, 0.6))
    # xi on the Koch point reproduces the lattice tiling
    k = catalog.koch_nonlattice(complex(0.5, math.sqrt(3) / 6))
    assert k.model.zeta.lattice is not None


def test_pluriphase_square():
    e = catalog.pluriphase_square()
    rep = e.extras["rep"]
    assert rep.breakpoints == (0.0, 0.5, 1.0)
    left = sum(c * 0.5 ** (2 - k) for k, c in enumerate(rep.pieces[0]))
    right = sum(c * 0.5 ** (2 - k) for k, c in enumerate(rep.pieces[1]))
    assert abs(left - right) <= 1e-12
    assert rep.tube(1.0) == pytest.approx((math.pi - 4) / 16 + 4, abs=1e-14)
    assert rep.volume == pytest.approx(e.extras["sampler"].area(), abs=1e-14)
    assert e.extras["published"](2.0) == pytest.approx(e.golden["saturated"].value)
    # published branches are continuous too, and agree with the table from 1/2 on
    for eps in (0.5, 0.6, 0.9, 1.0):
        assert e.extras["published"](eps) == pytest.approx(rep.tube(eps), abs=1e-13)


def test_pluriphase_square_sampling_matches_table():
    e = catalog.pluriphase_square()
    eps = [0.1, 0.25, 0.4, 0.6, 0.75, 0.9]
    ests = montecarlo_tube_area(e.extras["sampler"], eps, 1_000_000, seed=21)
    for x, est in zip(eps, ests):
        assert abs(est.estimate - e.extras["rep"].tube(x)) <= 3.5 * est.std_error


def test_get_errors():
    with pytest.raises(KeyError):
        catalog.get("menger")
    with pytest.raises(KeyError):
        catalog.get("cantor:1,2")
