import numpy as np
import pytest
from scipy.integrate import quad

from perdist.cones import LatticeCone, standard_pair
from perdist.distributions import (ClosedFormSpec, CoefficientField, LocalizationWindow, UndersampledError,
                                   corpus, from_closed_form, order_estimate, periodize_localized)
from perdist.lattice import bracket_from_sq, weighted_norm
from perdist.traces import InconclusiveError


def quad_coefficient(func, n, a=0.0, b=1.0, points=None):
    re = quad(lambda x: func(x) * np.cos(2 * np.pi * n * x), a, b, points=points, limit=400, epsabs=1e-13)[0]
    im = quad(lambda x: -func(x) * np.sin(2 * np.pi * n * x), a, b, points=points, limit=400, epsabs=1e-13)[0]
    return re + 1j * im


# -- fields ------------------------------------------------------------------------

def test_field_validation():
    with pytest.raises(ValueError):
        CoefficientField(np.zeros(4))
    with pytest.raises(ValueError):
        CoefficientField(np.zeros((3, 5)))
    with pytest.raises(ValueError):
        CoefficientField(np.zeros((3, 3, 3, 3)))
    with pytest.raises(ValueError):
        CoefficientField(np.array([0.0, np.nan, 0.0]))


def test_field_indexing_and_resize():
    f = corpus("harmonic", index=(2, -1), radius=3)
    assert f.dim == 2 and f.radius == 3
    assert f[(2, -1)] == 1 and f[(0, 0)] == 0 and f[(9, 9)] == 0
    big = f.resized(5)
    assert big[(2, -1)] == 1 and big.radius == 5
    assert f.resized(1)[(0, 0)] == 0 and np.count_nonzero(f.resized(1).data) == 0


def test_field_arithmetic():
    a = corpus("constant", dim=1, radius=2)
    b = corpus("harmonic", index=(3,), radius=3)
    c = a + 2 * b - a
    assert c.radius == 3 and c[3] == 2 and c[0] == 0


def test_evaluate_partial_sum():
    f = corpus("harmonic", index=(1,), radius=2)
    vals = f.evaluate(8)
    x = np.arange(8) / 8
    assert np.allclose(vals, np.exp(2j * np.pi * x))


# -- closed-form corpus -----------------------------------------------------------

def test_constant_and_comb():
    c = corpus("constant", radius=4)
    assert c[0] == 1 and np.count_nonzero(c.data) == 1
    comb = corpus("dirac_comb", dim=3, radius=2)
    assert np.all(comb.data == 1)


def test_harmonic_outside_box_rejected():
    with pytest.raises(ValueError):
        corpus("harmonic", index=(5,), radius=4)


def test_sawtooth_matches_quadrature():
    f = corpus("sawtooth", radius=16)
    assert f[1] == pytest.approx(1j / (2 * np.pi), abs=1e-15)
    for n in range(-16, 17):
        assert abs(f[n] - quad_coefficient(lambda x: x - 0.5, n)) <= 1e-10


def test_square_wave_matches_quadrature():
    f = corpus("square_wave", radius=3)
    assert f[2] == 0
    assert f[3] == pytest.approx(1 / (3j * np.pi), abs=1e-15)
    for n in range(-3, 4):
        assert abs(f[n] - quad_coefficient(lambda x: 1.0, n, 0.0, 0.5)) <= 1e-10


def test_square_wave_parseval_from_below():
    mass = [np.sum(np.abs(corpus("square_wave", radius=n).data) ** 2) for n in (4, 8, 16, 32, 64)]
    assert all(m < 0.5 for m in mass)
    assert all(a <= b for a, b in zip(mass, mass[1:]))
    assert 0.5 - mass[-1] <= 0.02


def test_tensor_is_outer_product():
    f = corpus("tensor", radius=4, factors=("square_wave", "sawtooth"))
    sq, st = corpus("square_wave", radius=4), corpus("sawtooth", radius=4)
    assert f.dim == 2
    assert f[(3, -2)] == pytest.approx(sq[3] * st[-2])


def test_cone_supported_magnitudes():
    g1, _ = standard_pair()
    spec = ClosedFormSpec("cone_supported", cone=g1, inside_exp=0.5, outside_exp=-4.0, phase_seed=5)
    f = from_closed_form(spec, 8)
    assert abs(f[(4, 1)]) == pytest.approx((1 + 17) ** 0.25)
    assert abs(f[(-4, 1)]) == pytest.approx((1 + 17) ** -2.0)
    plain = from_closed_form(ClosedFormSpec("cone_supported", cone=g1, inside_exp=0.5, outside_exp=-4.0), 8)
    assert np.allclose(np.abs(f.data), plain.data.real)
    assert not np.allclose(f.data, plain.data)


def test_spec_validation():
    with pytest.raises(ValueError):
        ClosedFormSpec("triangle")
    with pytest.raises(ValueError):
        ClosedFormSpec("square_wave", dim=2)
    with pytest.raises(ValueError):
        ClosedFormSpec("cone_supported")
    with pytest.raises(ValueError):
        from_closed_form(ClosedFormSpec("constant"), 0)
    g1, _ = standard_pair()
    with pytest.raises(ValueError):
        ClosedFormSpec("cone_supported", cone=g1, inside_exp=np.inf)


# -- windows ----------------------------------------------------------------------

@pytest.mark.parametrize("order", [2, 3, 4, 8])
def test_window_shape(order):
    w = LocalizationWindow((0.4,), width=0.6, plateau=0.2, order=order)
    x = np.linspace(-0.5, 0.5, 2001)
    v = w.profile(x)
    assert np.all(v >= -1e-15) and np.all(v <= 1 + 1e-15)
    assert np.allclose(v[np.abs(x) <= 0.1], 1.0, atol=1e-14)
    assert np.all(np.abs(v[np.abs(x) >= 0.3]) <= 1e-15)


def test_window_coefficients_match_quadrature():
    w = LocalizationWindow((0.3,), 0.9, 0.3, 4)
    c = w.coefficients(4)
    for k in range(-4, 5):
        exact = quad_coefficient(lambda t: w.profile(t - 0.3), k, -0.2, 0.8)
        assert abs(c[k] - exact) <= 1e-9


def test_window_validation():
    with pytest.raises(ValueError):
        LocalizationWindow((0.0,), width=1.2)
    with pytest.raises(ValueError):
        LocalizationWindow((0.0,), width=0.5, plateau=0.5)
    with pytest.raises(ValueError):
        LocalizationWindow((0.0,), order=1)
    assert LocalizationWindow((0.0,), 1.0, 1.0).is_identity


# -- periodized localization --------------------------------------------------------

def test_localize_constant_gives_window_integral():
    # an order-4 spline window is only C^2, so the Riemann sum needs a finer grid than order 8
    for order, grid in ((4, 256), (8, 128)):
        w = LocalizationWindow((0.3, 0.7), 0.8, 0.4, order)
        a = periodize_localized(np.ones((grid, grid)), w, 16)
        assert abs(a[(0, 0)] - w.integral()) <= 1e-10
    assert w.integral() == pytest.approx(0.36)


def test_localize_harmonic_shifts_window_coefficients():
    w = LocalizationWindow((0.3,), 0.9, 0.3, 6)
    x = np.arange(512) / 512
    m = 3
    a = periodize_localized(np.exp(2j * np.pi * m * x), w, 32)
    wc = w.coefficients(64)
    assert max(abs(a[k] - wc[k - m]) for k in range(-32, 33)) <= 1e-8


def test_identity_window_reproduces_coefficients():
    w = LocalizationWindow((0.0,), 1.0, 1.0)
    sq = corpus("square_wave", radius=16)
    a = periodize_localized(sq.evaluate(128), w, 16)
    assert np.max(np.abs(a.data - sq.data)) <= 1e-8


def test_localize_off_jump_is_smooth_and_stable():
    w = LocalizationWindow((0.25, 0.5), width=0.4, plateau=0.1)
    norms = {}
    for n in (32, 64, 128):
        for mult in (4, 8):
            m = mult * n
            x = np.arange(m) / m
            f = np.where(x < 0.5, 1.0, 0.0)[:, None] * np.ones(m)[None, :]
            norms[n, mult] = weighted_norm(periodize_localized(f, w, n), 3.0)
    for n in (32, 64, 128):
        assert norms[n, 4] == pytest.approx(norms[n, 8], rel=1e-8)
    assert norms[32, 4] < norms[64, 4] < norms[128, 4]
    assert norms[64, 4] == pytest.approx(norms[128, 4], rel=1e-6)


def test_localize_undersampled():
    w = LocalizationWindow((0.0,))
    with pytest.raises(UndersampledError):
        periodize_localized(np.ones(60), w, 16)
    with pytest.raises(ValueError):
        periodize_localized(np.ones(64), w, 16, grid=128)


# -- order ------------------------------------------------------------------------

def test_order_of_combs():
    assert order_estimate(corpus("dirac_comb", dim=1, radius=1024))[0] == 0.75
    assert order_estimate(corpus("dirac_comb", dim=2, radius=128))[0] == 1.25


def test_order_of_constant():
    k0, trace = order_estimate(corpus("constant", dim=2, radius=16))
    assert k0 == 0.0 and trace.convergent


def test_order_needs_four_radii():
    with pytest.raises(ValueError):
        order_estimate(corpus("constant", radius=32), [8, 16, 32])
    with pytest.raises(ValueError):
        order_estimate(corpus("constant", radius=32), [4, 8, 16, 64])


def test_order_inconclusive_for_fast_growth():
    f = corpus("dirac_comb", radius=256)
    big = CoefficientField(f.data * bracket_from_sq(f.ksq, 30.0))
    with pytest.raises(InconclusiveError):
        order_estimate(big)


@pytest.mark.parametrize("seed", range(4))
def test_order_monotone_under_enlargement(seed):
    rng = np.random.default_rng(seed)
    f = corpus("dirac_comb", dim=1, radius=512)
    p = rng.uniform(-1, 1)
    a = CoefficientField(f.data * bracket_from_sq(f.ksq, p) * rng.uniform(0.5, 1.0, f.data.shape))
    b = CoefficientField(a.data * rng.uniform(1.0, 4.0, f.data.shape) * bracket_from_sq(f.ksq, rng.uniform(0, 1)))
    assert order_estimate(b)[0] >= order_estimate(a)[0]
