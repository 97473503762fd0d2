import math

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import darboux_exact
from principal_config.quadric import QuadricPoint9, confocal_of, perturb_quadric
from principal_config.surface import ImplicitQuadric, _principal
from principal_config.umbilic import CubicJet, adapted_rotations, classify_darbouxian, rotated_jet

coef = st.floats(-5, 5, allow_nan=False).filter(lambda x: abs(x) > 1e-3)
entry = st.floats(-10, 10, allow_nan=False)


@given(entry, entry, entry)
def test_principal_matches_symmetric_eigenproblem(s11, s12, s22):
    k1, k2, H, K, alpha = _principal(s11, s12, s22)
    S = np.array([[s11, s12], [s12, s22]])
    ev = np.linalg.eigvalsh(S)
    scale = max(1.0, np.abs(S).max())
    assert k1 <= k2
    assert abs(k1 - ev[0]) < 1e-12 * scale and abs(k2 - ev[1]) < 1e-12 * scale
    assert H * H - K >= 0
    e = np.array([math.cos(alpha), math.sin(alpha)])
    assert np.linalg.norm(S @ e - k2 * e) < 1e-10 * scale


@settings(max_examples=200)
@given(coef, coef, st.floats(-5, 5, allow_nan=False), st.floats(0.1, 10))
def test_verdict_is_scale_invariant(a, b, c, lam):
    v = classify_darbouxian((a, b, c)).verdict
    assert classify_darbouxian((lam * a, lam * b, lam * c)).verdict == v
    assert classify_darbouxian((-lam * a, -lam * b, -lam * c)).verdict == v
    # reflecting v -> -v flips the sign of c only
    assert classify_darbouxian((a, b, -c)).verdict == v


@settings(max_examples=200)
@given(coef, coef, st.floats(-5, 5, allow_nan=False))
def test_verdict_agrees_with_exact_arithmetic_away_from_boundaries(a, b, c):
    r, q = a / b, (c / (2 * b)) ** 2 + 2
    assume(min(abs(r - q), abs(r - 1), abs(r - 2)) > 1e-3 * max(1.0, abs(r), q))
    assert classify_darbouxian((a, b, c)).verdict == darboux_exact(a, b, c)


@settings(max_examples=100)
@given(coef, coef, st.floats(-5, 5, allow_nan=False), st.floats(0, math.pi))
def test_readapting_a_rotated_cubic_keeps_the_verdict(a, b, c, phi):
    jet = CubicJet(1.0, a, b, c)
    A, B, C, D = rotated_jet(jet, phi)
    phis, f, _ = adapted_rotations(A, B, C, D)
    assert phis
    # undoing the rotation is one of the adapted angles
    back = (-phi) % math.pi
    assert min(min(abs(p - back), math.pi - abs(p - back)) for p in phis) < 1e-6
    assert abs(f(back)) < 1e-9 * max(abs(A), abs(B), abs(C), abs(D))


@given(st.floats(0.05, 2.9), st.floats(0.05, 1.9), st.floats(0.05, 0.95),
       st.sampled_from([-1, 1]), st.sampled_from([-1, 1]), st.sampled_from([-1, 1]))
def test_confocal_reconstruction(x, y, z, sx, sy, sz):
    p = np.array([sx * x, sy * y, sz * z])
    cc = confocal_of(p, (3.0, 2.0, 1.0))
    assert not cc.degenerate
    assert np.allclose(cc.reconstruct(), p * p, rtol=1e-9, atol=1e-12)


@given(st.floats(0, 0.099), st.integers(0, 2**32 - 1))
def test_perturbation_stays_on_the_unit_sphere(m, seed):
    q = QuadricPoint9.of(ImplicitQuadric.ellipsoid(3, 2, 1))
    p = perturb_quadric(q, m, seed)
    assert abs(np.linalg.norm(p.vector) - 1) < 1e-14
    assert abs(math.acos(min(1.0, p.vector @ q.vector)) - math.atan(m)) < 1e-7
