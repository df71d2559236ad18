import numpy as np
import pytest

from qubitdesign.fourier import FourierPosterior
from qubitdesign.grid import GridPosterior


def test_flat_prior():
    p = GridPosterior.flat(4)
    np.testing.assert_array_equal(p.values, [1, 1, 1, 1])
    assert p.total_mass() == pytest.approx(1.0, abs=1e-15)
    mean, _, var = GridPosterior.flat(10_000).moments()
    assert mean == pytest.approx(0.5, abs=1e-12)
    assert var == pytest.approx(1 / 12, abs=1e-8)


def test_grid_size_validation():
    with pytest.raises(ValueError):
        GridPosterior.flat(1)
    with pytest.raises(ValueError):
        GridPosterior(np.array([1.0, -1.0]))


def test_update_matches_fourier_pointwise():
    g = GridPosterior.flat(10_000).update(1, "+")
    f = FourierPosterior.flat().update(1, "+")
    np.testing.assert_allclose(g.values, f.evaluate(g.omegas), rtol=0, atol=1e-12)


def test_zero_time_update():
    p = GridPosterior.flat(100)
    assert p.update(0, "+").total_mass() == 0.0
    np.testing.assert_array_equal(p.update(0, "-").values, p.values)
    with pytest.raises(ValueError):
        p.update(0, "+").moments()
    with pytest.raises(ValueError):
        p.update(-1, "+")


def test_real_time_update_is_pointwise():
    p = GridPosterior.flat(10_000).update(2.870, "+")
    w = p.omegas
    np.testing.assert_allclose(p.values, np.sin(np.pi * 2.870 * w / 2) ** 2, rtol=1e-15)


def test_total_mass_after_plus():
    assert GridPosterior.flat(10_000).update(1, "+").total_mass() == pytest.approx(0.5, abs=1e-8)
    assert GridPosterior(np.zeros(10)).total_mass() == 0.0


def test_branches_partition_values():
    p = GridPosterior.flat(1000).update(1.3, "-")
    total = p.update(2.2, "+").values + p.update(2.2, "-").values
    np.testing.assert_allclose(total, p.values, rtol=1e-15)


def test_repeated_measurements_shrink_variance():
    p = GridPosterior.flat(10_000)
    for k in range(20):
        p = p.update(3, "+" if k % 3 else "-")
    assert p.moments()[2] < 1 / 12


@pytest.mark.parametrize("G", [1_000, 10_000, 100_000])
def test_moments_converge_to_fourier(G):
    steps = [(1, "+"), (2, "-"), (3, "+"), (1, "+")]
    f, g = FourierPosterior.flat(), GridPosterior.flat(G)
    for m, o in steps:
        f, g = f.update(m, o), g.update(m, o)
    err = max(abs(a - b) for a, b in zip(f.moments(), g.moments()))
    # midpoint rule: error shrinks as G^-2
    assert err <= 1e-6 * (10_000 / G) ** 2
    assert abs(f.total_mass() - g.total_mass()) <= 1e-6 * (10_000 / G) ** 2
