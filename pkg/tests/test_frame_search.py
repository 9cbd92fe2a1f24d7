import numpy as np
import pytest

from hefei.criteria import Verdict, correlation_data, hefei_margins
from hefei.dirac_frame import LocalFrame
from hefei.frame_search import SearchConfig, certify, grid_angles, seed_frames
from hefei.matrix_core import I4
from hefei.states import pure_to_density, random_mixed, random_pure, schmidt_decompose, singlet, werner


def bell_mixture(weights):
    bells = np.array([[1, 0, 0, 1], [1, 0, 0, -1], [0, 1, 1, 0], [0, 1, -1, 0]]) / np.sqrt(2)
    return sum(w * np.outer(b, b) for w, b in zip(weights, bells)).astype(complex)


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(grid_points_per_angle=1)
    with pytest.raises(ValueError):
        SearchConfig(violation_threshold=0)


def test_grid_contains_identity():
    ang = grid_angles(8)
    assert ang.shape == (512, 3)
    assert np.all(ang[0] == 0)
    assert ang[:, 1].max() == pytest.approx(np.pi)


def test_seed_frames_werner_and_mixed():
    frames = seed_frames(werner(0.4))
    assert len(frames) <= 9
    assert frames[0].angles == (0.0,) * 6
    frames = seed_frames(I4 / 4)
    for f in frames:
        assert hefei_margins(I4 / 4, f).m_plus == pytest.approx(0.25)


def test_seed_frames_recover_rotation():
    # non-degenerate correlations: T = diag(-0.1, -0.3, -0.5) after rotation by (u0, v0)
    rho0 = bell_mixture([0.1, 0.2, 0.3, 0.4])
    _, _, t0 = correlation_data(rho0)
    assert len(set(np.round(np.abs(np.diag(t0)), 9))) == 3
    f0 = LocalFrame.from_angles((0.4, 1.1, 2.0), (2.2, 0.7, 5.1))
    w = f0.unitary
    rho = w @ rho0 @ w.conj().T
    ru0, rv0 = f0.rotations
    hit = False
    for f in seed_frames(rho)[1:]:
        ru, rv = f.rotations
        pu, pv = ru0.T @ ru, rv0.T @ rv
        # each relative rotation must be a signed permutation
        if np.allclose(np.abs(pu), np.round(np.abs(pu)), atol=1e-6) and np.allclose(np.abs(pv), np.round(np.abs(pv)), atol=1e-6):
            hit = True
    assert hit


def test_seed_frames_rotated_singlet_attain_minimum():
    f0 = LocalFrame.from_angles((1.0, 2.0, 3.0), (0.5, 0.2, 4.0))
    w = f0.unitary
    rho = w @ pure_to_density(singlet()).matrix @ w.conj().T
    assert min(hefei_margins(rho, f).m_plus for f in seed_frames(rho)) == pytest.approx(-1, abs=1e-12)


def test_certify_singlet():
    r = certify(pure_to_density(singlet()))
    assert r.verdict == Verdict.ENTANGLED and r.agreement
    assert abs(r.min_m_plus + 1) < 1e-9
    assert r.min_m_minus_observed >= -1e-9


def test_certify_werner_02_and_maximally_mixed():
    r = certify(werner(0.2))
    assert r.verdict == Verdict.SEPARABLE and r.agreement
    assert r.min_m_plus >= -1e-7
    r = certify(I4 / 4)
    assert r.verdict == Verdict.SEPARABLE
    assert r.min_m_plus == pytest.approx(0.25)


def test_certify_random_pure_entangled():
    checked = 0
    for seed in range(60):
        psi = random_pure(seed)
        if schmidt_decompose(psi).s2 < 0.05:
            continue
        r = certify(pure_to_density(psi))
        assert r.verdict == Verdict.ENTANGLED and r.agreement
        checked += 1
    assert checked > 40


def test_certify_soundness_and_monotone_refinement():
    for seed in range(30):
        rho = random_mixed(seed, 1 + seed % 4)
        r = certify(rho)
        again = hefei_margins(rho, r.witness_frame).m_plus
        assert abs(again - r.min_m_plus) < 1e-9
        assert r.min_m_plus <= r.grid_min_m_plus + 1e-15
        if r.ppt.verdict != Verdict.BOUNDARY:
            assert r.verdict == r.ppt.verdict


def test_certify_deterministic():
    rho = random_mixed(123, 3)
    a, b = certify(rho), certify(rho)
    assert a.min_m_plus == b.min_m_plus
    assert a.witness_frame.angles == b.witness_frame.angles


def test_certify_budget_exhaustion_is_reported():
    r = certify(random_mixed(5), SearchConfig(refinement_iterations=3))
    assert r.converged is False


def test_certify_coarse_grid_without_refinement_uses_seeds():
    rho = pure_to_density(random_pure(9))
    r = certify(rho, SearchConfig(grid_points_per_angle=2, refinement_iterations=0))
    assert r.verdict == Verdict.ENTANGLED


def test_boundary_state_reports_boundary_agreement():
    r = certify(pure_to_density([0, 1, 0, 0]))  # product pure state, PT has a zero eigenvalue
    assert r.ppt.verdict == Verdict.BOUNDARY
    assert r.verdict in (Verdict.BOUNDARY, Verdict.SEPARABLE)
    assert r.agreement
