import math

import pytest

wrinkle = pytest.importorskip("wrinkle")


def test_geometry():
    d = wrinkle.Domain.ellipse(2.0, 1.0)
    assert d.contains((1.0, 0.5))
    assert not d.contains((2.1, 0.0))
    assert d.boundary_distance((0.0, 0.0)) == pytest.approx(1.0)
    assert len(d.nearest_boundary_points((0.0, 0.0))) == 2


def test_phi_plus_disc():
    d = wrinkle.Domain.disc(1.0)
    assert wrinkle.phi_plus(d, (0.3, 0.2)) == pytest.approx(0.5)
    assert wrinkle.phi_minus(d, (0.0, 0.0)) == pytest.approx(-0.5)


def test_defect_primal():
    f = wrinkle.defect_field(wrinkle.Domain.ellipse(2.0, 1.0), wrinkle.ShellProfile.constant(1.0), resolution=128)
    assert f.primal == pytest.approx(math.pi / 2, rel=1e-3)
    grid = f.lambda_grid()
    assert grid.shape == (128, 128)
    assert f.lambda_at((5.0, 0.0)) is None


def test_optimal_params():
    p = wrinkle.optimal_params(1e-8, 1.0, 0.0)
    assert p.l_wr == pytest.approx(0.01)
    assert p.l_sh == pytest.approx(math.sqrt(p.l_wr * p.l_avg))


def test_errors_carry_kind():
    with pytest.raises(wrinkle.WrinkleError):
        wrinkle.Domain.disc(-1.0)
    with pytest.raises(wrinkle.WrinkleError, match="parameter"):
        wrinkle.optimal_params(-1.0, 1.0)


def test_acceptance_subset():
    (r,) = wrinkle.run_acceptance([1])
    assert r.id == 1 and r.passed
