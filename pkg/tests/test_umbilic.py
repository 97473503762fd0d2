import math

import numpy as np
import pytest

from oracles import (closed_form_umbilics, cubic_harmonics, darboux_exact, quadric_height_cubic,
                     radial_separatrices)
from principal_config.errors import RootConditioning
from principal_config.surface import ImplicitQuadric, MongePatch, ParametricPatch
from principal_config.umbilic import (CubicJet, adapted_jet, adapted_rotations, classify_darbouxian,
                                      classify_umbilics, condition_values, find_umbilics,
                                      lie_cartan_resolution, sigma_membership_local)

# adapted cubic of the (3,2,1) ellipsoid at its umbilics, outward normal
# (frozen from the library; cross-checked below against the sympy height oracle)
JET321 = {"k": -0.375, "a": 0.5446382830604177, "b": 0.1815460943534726}


def _cubic_of(jet):
    return lambda u, v: jet.a / 6 * u**3 + jet.b / 2 * u * v * v + jet.c / 6 * v**3


@pytest.fixture(scope="module")
def umbs321(ellipsoid321):
    return classify_umbilics(ellipsoid321, find_umbilics(ellipsoid321))


def test_triaxial_umbilics_closed_form(umbs321):
    ref = closed_form_umbilics(3, 2, 1)
    got = np.array([u.point for u in umbs321])
    assert len(got) == 4
    for x in ref:
        assert np.min(np.linalg.norm(got - x, axis=1)) < 1e-9


def test_triaxial_umbilics_are_lemons(umbs321):
    for U in umbs321:
        assert U.verdict == "D1"
        assert U.separatrix_count == 1
        assert U.jet.k == pytest.approx(JET321["k"], rel=1e-9)
        assert abs(U.jet.a) == pytest.approx(JET321["a"], rel=1e-7)
        assert abs(U.jet.b) == pytest.approx(JET321["b"], rel=1e-7)
        assert abs(U.jet.c) < 1e-7


def test_adapted_jet_matches_sympy_height(ellipsoid321, umbs321):
    E = ellipsoid321
    U = umbs321[3]
    p, N, E1, E2 = U.jet.frame
    h2, h3 = quadric_height_cubic(E.A, E.b, p, N, E1, E2)
    assert h2(1.0, 0.0) == pytest.approx(U.jet.k / 2, rel=1e-10)
    assert h2(0.6, 0.8) == pytest.approx(U.jet.k / 2, rel=1e-10)
    ours = cubic_harmonics(_cubic_of(U.jet))
    ref = cubic_harmonics(h3)
    assert ours == pytest.approx(ref, rel=1e-7, abs=1e-10)


@pytest.mark.parametrize("rot", [0.0, 0.4, 2.1])
def test_cubic_normal_form_recovered_under_rotation(rot):
    M = MongePatch.cubic_normal_form(1.0, 1.5, 1.0, 0.3, half_width=0.2, rotation=rot)
    jet = adapted_jet(M, np.zeros(2))
    ref = cubic_harmonics(lambda u, v: 1.5 / 6 * u**3 + 0.5 * u * v * v + 0.3 / 6 * v**3)
    assert cubic_harmonics(_cubic_of(jet)) == pytest.approx(ref, rel=1e-8)
    assert jet.k == pytest.approx(1.0, rel=1e-10)
    assert classify_darbouxian(jet).verdict == darboux_exact(1.5, 1.0, 0.3) == "D2"


def test_rotation_cubic_verdict_agrees_on_every_root():
    rng = np.random.default_rng(7)
    for _ in range(200):
        A, B, C, D = rng.normal(size=4)
        phis, _, _ = adapted_rotations(A, B, C, D)
        verdicts = set()
        for phi in phis:
            c, s = math.cos(phi), math.sin(phi)
            # A..D are third derivatives; rotate the cubic and read off (a, b, c)
            f = lambda x, y: A / 6 * x**3 + B / 2 * x * x * y + C / 2 * x * y * y + D / 6 * y**3  # noqa: E731
            g = lambda x, y: f(c * x - s * y, s * x + c * y)  # noqa: E731
            pts = [(1, 0), (0, 1), (1, 1), (1, -1)]
            M = np.array([[x**3, x * x * y, x * y * y, y**3] for x, y in pts], float)
            co = np.linalg.solve(M, [g(x, y) for x, y in pts])
            assert abs(co[1]) < 1e-9 * np.abs(co).max()
            verdicts.add(classify_darbouxian((6 * co[0], 2 * co[2], 6 * co[3])).verdict)
        assert len(verdicts) == 1


@pytest.mark.parametrize("abc,verdict", [((3, 1, 1), "D1"), ((1.5, 1, 0), "D2"), ((-1, 1, 1), "D3"),
                                         ((0.5, 1, 0), "D3")])
def test_census_matches_radial_blowup(abc, verdict):
    jet = CubicJet(1.0, *abc)
    assert classify_darbouxian(jet).verdict == verdict
    res = lie_cartan_resolution(jet)
    n_saddle = sum(1 for s in res if s.type == "saddle")
    n_node = sum(1 for s in res if s.type == "node")
    assert n_saddle == int(verdict[1])
    assert n_node == (1 if verdict == "D2" else 0)
    assert radial_separatrices(1.0, *abc) == [n_saddle, n_saddle]


def test_boundary_cases_named():
    assert classify_darbouxian((1.0, 1.0, 0.0)).verdict == "NonDarbouxian"
    assert classify_darbouxian((1.0, 1.0, 0.0)).reason.startswith("T")
    assert classify_darbouxian((2.0, 1.0, 1.0)).reason == "BoundaryCase: a=2b"
    r = classify_darbouxian((2.25, 1.0, 1.0))
    assert r.verdict == "NonDarbouxian" and "c/2b" in r.reason
    assert classify_darbouxian((0.0, 0.0, 0.0)).verdict == "DegenerateFlat"


def test_condition_values_reported():
    cv = condition_values(3.0, 1.0, 2.0)
    assert cv == pytest.approx({"b(b-a)": -2.0, "a/b": 3.0, "(c/2b)^2+2": 3.0, "a-2b": 1.0})


def test_lie_cartan_rejects_b_zero():
    with pytest.raises(RootConditioning):
        lie_cartan_resolution(CubicJet(1.0, 1.0, 0.0, 1.0))


def test_spheroid_poles_are_not_darbouxian():
    S = ImplicitQuadric.ellipsoid(2, 2, 1)
    umbs = classify_umbilics(S, find_umbilics(S))
    assert len(umbs) == 2
    assert sorted(round(float(u.point[2]), 9) for u in umbs) == [-1.0, 1.0]
    assert all(u.verdict == "NonDarbouxian" for u in umbs)
    assert sigma_membership_local(umbs)["status"] == "fails"


def test_everywhere_umbilic_surfaces():
    for S in (ImplicitQuadric.sphere(1.5), ParametricPatch.sphere(1.0), MongePatch.plane()):
        found = find_umbilics(S, n=30)
        assert found.everywhere_umbilic
        assert sigma_membership_local(found)["reason"] == "EverywhereUmbilic"


def test_monge_patch_holds_on_region():
    M = MongePatch.cubic_normal_form(1.0, 3.0, 1.0, 0.0, half_width=0.2)
    umbs = classify_umbilics(M, find_umbilics(M))
    assert [u.verdict for u in umbs] == ["D1"]
    assert np.linalg.norm(umbs[0].point) < 1e-10
    assert sigma_membership_local(umbs)["status"] in ("holds", "holds-on-region")


def test_reflection_symmetry_of_umbilic_set(umbs321):
    P = np.array([u.point for u in umbs321])
    for axis in range(3):
        R = P.copy()
        R[:, axis] *= -1
        for x in R:
            assert np.min(np.linalg.norm(P - x, axis=1)) < 1e-9
