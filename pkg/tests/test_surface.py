import math

import numpy as np
import pytest

from oracles import normal_section_curvature, principal_by_sweep
from principal_config.errors import OutOfDomain, UmbilicReference
from principal_config.surface import (ImplicitQuadric, MongePatch, ParametricPatch, classify_quadric,
                                      fundamental_forms, normal_curvature, normal_curvature_quotient,
                                      principal_data)


@pytest.fixture(scope="module")
def torus():
    return ParametricPatch.torus(2.0, 1.0, bump=0.15)


def test_ellipsoid_vertex_curvatures(ellipsoid321):
    # at (3,0,0) the normal sections are ellipses with curvatures a/b^2 and a/c^2
    fr = principal_data(ellipsoid321, np.array([3.0, 0.0, 0.0]))
    assert fr.k1 == pytest.approx(-3.0, rel=1e-12)
    assert fr.k2 == pytest.approx(-0.75, rel=1e-12)
    assert abs(fr.L1 @ [0, 0, 1]) == pytest.approx(1.0, abs=1e-12)
    assert not fr.umbilic


def test_sphere_orientation_flips_sign():
    S = ImplicitQuadric.sphere(2.0)
    x = S.retract(np.array([0.3, 1.0, 1.2]))
    out = principal_data(S, x)
    inn = principal_data(S.oriented(-1), x)
    assert out.k1 == pytest.approx(-0.5) and out.k2 == pytest.approx(-0.5)
    assert inn.H == pytest.approx(0.5)
    assert out.umbilic and inn.umbilic


def test_cylinder_principal_data():
    C = ParametricPatch.cylinder(2.0, 3.0)
    fr = principal_data(C, np.array([1.0, 0.5]))
    assert fr.k1 == pytest.approx(-0.5, abs=1e-14)
    assert fr.k2 == pytest.approx(0.0, abs=1e-14)
    assert fr.K == pytest.approx(0.0, abs=1e-14)
    assert abs(fr.L2[2]) == pytest.approx(1.0, abs=1e-12)


def test_chart_independence_of_curvatures(ellipsoid321):
    """The implicit form and two polar parametrisations agree at the same point."""
    pz = ParametricPatch.ellipsoid(3, 2, 1, axis="z")
    px = ParametricPatch.ellipsoid(3, 2, 1, axis="x")
    for q in [(0.8, 0.4), (1.2, 2.0), (2.1, 4.0)]:
        frz = principal_data(pz, np.array(q))
        fri = principal_data(ellipsoid321, frz.point)
        qx = px.chart_of_point(frz.point)
        frx = principal_data(px, qx)
        for fr in (fri, frx):
            assert fr.k1 == pytest.approx(frz.k1, rel=1e-10)
            assert fr.k2 == pytest.approx(frz.k2, rel=1e-10)
            assert abs(fr.L1 @ frz.L1) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("name", ["ellipsoid", "torus", "monge"])
def test_principal_curvatures_match_normal_section_sweep(name, ellipsoid321, torus):
    S, q = {
        "ellipsoid": (ellipsoid321, ellipsoid321.retract(np.array([1.0, 1.2, 0.4]))),
        "torus": (torus, np.array([0.7, 2.2])),
        "monge": (MongePatch.cubic_normal_form(1.0, 0.5, 0.8, -0.3, half_width=0.3), np.array([0.1, -0.05])),
    }[name]
    fr = principal_data(S, q)
    e1 = fr.L1
    e2 = np.cross(fr.normal, e1)
    k1, k2 = principal_by_sweep(S, q, fr.normal, e1, e2, n=24)
    assert k1 == pytest.approx(fr.k1, abs=1e-6)
    assert k2 == pytest.approx(fr.k2, abs=1e-6)


def test_quotient_agrees_with_section(torus):
    q = np.array([1.3, 0.4])
    fr = principal_data(torus, q)
    t = math.cos(0.7) * fr.L1 + math.sin(0.7) * fr.L2
    assert normal_curvature_quotient(torus, q, t) == pytest.approx(
        normal_section_curvature(torus, q, t, fr.normal), abs=1e-8)


def test_fundamental_forms_of_plane_and_cylinder():
    P = MongePatch.plane()
    assert fundamental_forms(P, np.array([0.2, 0.3])) == pytest.approx((1, 0, 1, 0, 0, 0))
    C = ParametricPatch.cylinder(1.5)
    E, F, G, e, f, g = fundamental_forms(C, np.array([0.1, 0.2]))
    assert (E, F, G) == pytest.approx((2.25, 0.0, 1.0))
    assert (e, f, g) == pytest.approx((-1.5, 0.0, 0.0))


def test_normal_curvature_at_umbilic_raises():
    S = ImplicitQuadric.sphere(1.0)
    with pytest.raises(UmbilicReference):
        normal_curvature(S, np.array([0.0, 0.0, 1.0]), 0.3)


def test_out_of_domain():
    M = MongePatch.cubic_normal_form(1, 1, 1, 0, half_width=0.2)
    with pytest.raises(OutOfDomain):
        principal_data(M, np.array([0.5, 0.0]))


def test_quadric_classification():
    assert classify_quadric((1, 1, 1, 0, 0, 0, 0, 0, 0, -1)) == "ellipsoid"
    assert classify_quadric((1, 1, 1, 0, 0, 0, 0, 0, 0, 1)) == "empty"
    assert classify_quadric((1, 1, -1, 0, 0, 0, 0, 0, 0, -1)).startswith("hyperboloid")
    assert classify_quadric((1, 1, 0, 0, 0, 0, 0, 0, -1, 0)) == "paraboloid-or-cylinder"


def test_general_position_ellipsoid_matches_axis_aligned():
    # rotate and shift the (3,2,1) ellipsoid and compare curvatures at image points
    R = np.linalg.qr(np.random.default_rng(3).normal(size=(3, 3)))[0]
    shift = np.array([0.5, -1.0, 2.0])
    D = np.diag([1 / 9, 1 / 4, 1.0])
    A = R @ D @ R.T
    b = -A @ shift
    c = shift @ A @ shift - 1
    coeffs = (A[0, 0], A[1, 1], A[2, 2], 2 * A[0, 1], 2 * A[0, 2], 2 * A[1, 2], *(2 * b), c)
    G = ImplicitQuadric(coeffs)
    E = ImplicitQuadric.ellipsoid(3, 2, 1)
    x = E.retract(np.array([1.0, -1.0, 0.3]))
    f0 = principal_data(E, x)
    f1 = principal_data(G, R @ x + shift)
    assert (f1.k1, f1.k2) == pytest.approx((f0.k1, f0.k2), rel=1e-10)
    assert G.semi_axes == pytest.approx([3, 2, 1])
