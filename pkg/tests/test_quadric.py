import numpy as np
import pytest

from principal_config.errors import DegenerateLocation, Unsupported
from principal_config.foliation import integrate_line
from principal_config.quadric import (QuadricPoint9, confocal_normals, confocal_of,
                                      confocal_on_surface, configuration_invariants,
                                      perturb_quadric, stability_probe)
from principal_config.surface import ImplicitQuadric

ABC = (3.0, 2.0, 1.0)


def test_confocal_roots_satisfy_the_defining_equation():
    p = np.array([1.1, -0.7, 0.4])
    cc = confocal_of(p, ABC)
    a2 = np.square(ABC)
    lo = [-a2[0], -a2[1], -a2[2]]
    hi = [-a2[1], -a2[2], np.inf]
    for lam, l0, l1 in zip(cc.lambdas, lo, hi):
        assert l0 < lam < l1
        assert np.sum(p * p / (a2 + lam)) == pytest.approx(1.0, rel=1e-12)
    assert cc.reconstruct() == pytest.approx(p * p, rel=1e-12)
    assert not cc.degenerate


def test_surface_point_has_zero_outer_coordinate(ellipsoid321):
    x = ellipsoid321.retract(np.array([1.0, 1.0, 0.5]))
    cc = confocal_on_surface(ellipsoid321, x)
    assert abs(cc.lambdas[2]) < 1e-12


def test_confocal_quadrics_meet_orthogonally():
    p = np.array([0.9, 1.3, -0.6])
    n = confocal_normals(p, confocal_of(p, ABC))
    assert np.abs(n @ n.T - np.eye(3)).max() < 1e-12


def test_coordinate_plane_is_degenerate():
    p = np.array([1.0, 0.0, 0.5])
    assert confocal_of(p, ABC).degenerate
    with pytest.raises(DegenerateLocation):
        confocal_of(p, ABC, strict=True)
    with pytest.raises(ValueError):
        confocal_of(p, (1.0, 2.0, 3.0))


def test_confocal_needs_an_ellipsoid():
    H = ImplicitQuadric((1, 1, -1, 0, 0, 0, 0, 0, 0, -1))
    with pytest.raises(Unsupported):
        confocal_on_surface(H, np.array([1.0, 0.0, 0.0]))


def test_lines_of_curvature_lie_on_confocal_hyperboloids(ellipsoid321):
    S = ellipsoid321
    x = S.retract(np.array([1.0, 1.0, 0.5]))
    kept = []
    for i in (1, 2):
        line = integrate_line(S, x, i)
        lam = np.array([confocal_on_surface(S, y).lambdas for y in line.x])
        spread = np.ptp(lam[:, :2], axis=0) / np.square(ABC[0])
        kept.append(int(np.argmin(spread)))
        assert spread.min() < 1e-6
        assert spread.max() > 1e-2
    assert sorted(kept) == [0, 1]


def test_perturbation_zero_is_identity_and_stays_on_sphere():
    q = QuadricPoint9.of(ImplicitQuadric.ellipsoid(*ABC))
    assert perturb_quadric(q, 0.0, 1).vector == pytest.approx(q.vector)
    for s in range(5):
        p = perturb_quadric(q, 1e-2, s)
        assert np.linalg.norm(p.vector) == pytest.approx(1.0, abs=1e-14)
        # a tangent step of length m subtends arctan(m) on the unit sphere
        ang = np.arccos(np.clip(p.vector @ q.vector, -1, 1))
        assert ang == pytest.approx(np.arctan(1e-2), rel=1e-10)
        assert p.signature() == "ellipsoid"
    with pytest.raises(ValueError):
        perturb_quadric(q, 0.2, 0)


def test_perturbation_is_seeded():
    q = QuadricPoint9.of(ImplicitQuadric.ellipsoid(*ABC))
    assert perturb_quadric(q, 1e-3, [4, 2]) == perturb_quadric(q, 1e-3, [4, 2])
    assert perturb_quadric(q, 1e-3, [4, 2]) != perturb_quadric(q, 1e-3, [4, 3])


def test_invariants_of_triaxial(config321):
    inv = configuration_invariants(config321)
    assert inv["umbilics"] == 4
    assert inv["verdicts"] == [["D1", 4]]
    assert inv["graph"].number_of_edges() == 4


def test_probe_triaxial_is_stable():
    rep = stability_probe(ImplicitQuadric.ellipsoid(*ABC), 1e-3, 3, seed=5)
    assert rep["failures"] == 0
    assert rep["all_equal_to_base"] and rep["all_trials_equal"]
    assert rep["base"]["verdicts"] == [["D1", 4]]


def test_probe_sphere_base_is_degenerate():
    rep = stability_probe(ImplicitQuadric.sphere(1.0), 1e-3, 3, seed=5)
    assert rep["base"]["degenerate"]
    assert not rep["all_equal_to_base"]
    assert all(r["umbilics"] == 4 for r in rep["rows"])


def test_probe_rejects_non_ellipsoid():
    with pytest.raises(Unsupported):
        stability_probe(ImplicitQuadric((1, 1, -1, 0, 0, 0, 0, 0, 0, -1)), 1e-3, 1)
