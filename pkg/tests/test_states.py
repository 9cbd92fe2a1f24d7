import numpy as np
import pytest

from hefei.errors import DomainError, HermiticityError, NormalizationError, PositivityError, TraceError
from hefei.matrix_core import I4
from hefei.states import (
    PureState,
    partial_time_reversal,
    partial_transpose,
    pure_to_density,
    random_mixed,
    random_pure,
    random_separable,
    schmidt_decompose,
    singlet,
    validate_density,
    werner,
)


def _ppt_min(m):
    # independent oracle: LAPACK on the partially transposed matrix
    return float(np.linalg.eigvalsh(partial_transpose(m))[0])


def test_validate_accepts_states():
    assert np.allclose(validate_density(I4 / 4).matrix, I4 / 4)
    assert validate_density(np.diag([1.0, 0, 0, 0])).min_eigenvalue == pytest.approx(0.0)


def test_validate_errors():
    with pytest.raises(PositivityError):
        validate_density(np.diag([0.5, 0.6, 0, -0.1]))
    with pytest.raises(TraceError):
        validate_density(np.diag([0.9, 0, 0, 0]))
    m = I4 / 4
    m = m.astype(complex)
    m[0, 1] = 0.1
    with pytest.raises(HermiticityError):
        validate_density(m)


def test_validate_renormalizes_small_trace_drift():
    d = validate_density(np.diag([1.0 + 5e-10, 0, 0, 0]))
    assert d.renormalized
    assert np.trace(d.matrix).real == pytest.approx(1.0, abs=1e-15)


def test_pure_to_density_examples():
    assert np.array_equal(pure_to_density([0, 1, 0, 0]).matrix, np.diag([0, 1, 0, 0]))
    s = pure_to_density(singlet()).matrix
    expected = np.zeros((4, 4))
    expected[1, 1] = expected[2, 2] = 0.5
    expected[1, 2] = expected[2, 1] = -0.5
    assert np.max(np.abs(s - expected)) < 1e-15
    with pytest.raises(NormalizationError):
        pure_to_density([1, 1, 0, 0])


def test_pure_to_density_random_property():
    for seed in range(200):
        m = pure_to_density(random_pure(seed)).matrix
        assert abs(np.trace(m) - 1) < 1e-12
        assert np.max(np.abs(m @ m - m)) < 1e-10
        assert abs(np.linalg.eigvalsh(m)[0]) < 1e-10


def test_schmidt_examples():
    f = schmidt_decompose(PureState([0, 1, 0, 0]))
    assert f.s1 == pytest.approx(1) and f.s2 == pytest.approx(0, abs=1e-15)
    f = schmidt_decompose(singlet())
    assert f.s1 == pytest.approx(1 / np.sqrt(2)) and f.s2 == pytest.approx(1 / np.sqrt(2))
    # (|++> - |-->)/√2: u trivial, v a half turn about axis 2
    f = schmidt_decompose(PureState.normalized([1, 0, 0, -1]))
    assert f.s1 == pytest.approx(f.s2)
    ry_pi = np.array([[0, -1], [1, 0]])
    assert min(np.abs(f.v - ry_pi).max(), np.abs(f.v + ry_pi).max()) < 1e-12
    assert min(np.abs(f.u - np.eye(2)).max(), np.abs(f.u + np.eye(2)).max()) < 1e-12


def test_schmidt_round_trip_haar():
    for seed in range(1000):
        p = random_pure(seed)
        f = schmidt_decompose(p)
        fid = abs(np.vdot(p.amplitudes, f.reconstruct())) ** 2
        assert fid >= 1 - 1e-10
        assert f.s1 >= f.s2 >= 0
        assert abs(f.s1**2 + f.s2**2 - 1) < 1e-10
        assert abs(np.linalg.det(f.u) - 1) < 1e-10 and abs(np.linalg.det(f.v) - 1) < 1e-10
        assert np.max(np.abs(f.u @ f.u.conj().T - np.eye(2))) < 1e-10
        assert 0 <= f.delta < 2 * np.pi


def test_partial_transpose_examples():
    assert np.allclose(partial_transpose(I4 / 4), I4 / 4)
    d = np.diag([0, 1.0, 0, 0])
    assert np.array_equal(partial_transpose(d), d)
    spectrum = np.linalg.eigvalsh(partial_transpose(pure_to_density(singlet())))
    assert np.max(np.abs(spectrum - [-0.5, 0.5, 0.5, 0.5])) < 1e-12


def test_partial_transpose_definition_elementwise():
    rho = random_mixed(5).matrix
    pt = partial_transpose(rho)
    for i, k, j, l in np.ndindex(2, 2, 2, 2):
        assert pt[2 * i + k, 2 * j + l] == rho[2 * i + l, 2 * j + k]


def test_partial_transpose_properties():
    for seed in range(200):
        rho = random_mixed(seed, 1 + seed % 4).matrix
        pt = partial_transpose(rho)
        assert np.array_equal(partial_transpose(pt), rho)
        assert np.max(np.abs(pt - pt.conj().T)) < 1e-12
        assert abs(np.trace(pt) - 1) < 1e-12
        ptr = partial_time_reversal(rho)
        assert np.max(np.abs(np.linalg.eigvalsh(ptr) - np.linalg.eigvalsh(pt))) < 1e-10


def test_partial_time_reversal_examples():
    assert np.allclose(partial_time_reversal(I4 / 4), I4 / 4)
    assert np.linalg.eigvalsh(partial_time_reversal(pure_to_density(singlet())))[0] == pytest.approx(-0.5)


def test_werner_endpoints_and_domain():
    assert np.allclose(werner(0).matrix, I4 / 4)
    assert np.allclose(werner(1).matrix, pure_to_density(singlet()).matrix)
    with pytest.raises(DomainError):
        werner(1.1)
    with pytest.raises(DomainError):
        werner(-0.5)
    assert np.linalg.eigvalsh(werner(-1 / 3).matrix)[0] == pytest.approx(0, abs=1e-15)


def test_werner_ppt_min_formula_brute_force():
    # oracle: direct eigendecomposition on a grid; formula (1 - 3β)/4 for β >= -1/3
    for beta in np.linspace(-1 / 3, 1, 401):
        assert abs(_ppt_min(werner(beta).matrix) - min((1 - 3 * beta) / 4, (1 + beta) / 4)) < 1e-10
    for beta in np.linspace(0, 1, 301):
        assert abs(_ppt_min(werner(beta).matrix) - (1 - 3 * beta) / 4) < 1e-10
    assert _ppt_min(werner(0.5).matrix) == pytest.approx(-1 / 8)


def test_random_generators_valid_and_deterministic():
    for rank in range(1, 5):
        rho = random_mixed(42, rank)
        vals = np.linalg.eigvalsh(rho.matrix)
        assert vals[0] > -1e-12 and abs(vals.sum() - 1) < 1e-12
        assert np.sum(vals > 1e-10) == rank
        assert np.array_equal(random_mixed(42, rank).matrix, rho.matrix)
    assert np.array_equal(random_pure(42).amplitudes, random_pure(42).amplitudes)
    assert np.array_equal(random_separable(42, 3).matrix, random_separable(42, 3).matrix)
    with pytest.raises(DomainError):
        random_mixed(0, 5)
    with pytest.raises(DomainError):
        random_separable(0, 0)


def test_random_separable_is_ppt():
    for seed in range(300):
        rho = random_separable(seed, 1 + seed % 5)
        assert _ppt_min(rho.matrix) >= -1e-10
    # one term is a product pure state
    m = random_separable(7, 1).matrix
    assert np.max(np.abs(m @ m - m)) < 1e-12
