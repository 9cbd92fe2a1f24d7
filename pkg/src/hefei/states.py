"""Two-qubit pure and mixed states.

Basis ordering is ``|++>, |+->, |-+>, |-->`` with ``|+> = (1, 0)`` and
``|-> = (0, 1)``, i.e. amplitude index ``2*i + k`` for the first qubit in
``i`` and the second in ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, HermiticityError, NormalizationError, PositivityError, ShapeError, TraceError
from .matrix_core import SIGMA, I2, as_cmat, hermitian_eigh

__all__ = [
    "PureState",
    "DensityMatrix",
    "SchmidtForm",
    "validate_density",
    "pure_to_density",
    "schmidt_decompose",
    "partial_transpose",
    "partial_time_reversal",
    "werner",
    "singlet",
    "product_state",
    "random_pure",
    "random_mixed",
    "random_separable",
    "make_rng",
]

DEFAULT_TOL = 1e-9
_TAU2_B = np.kron(I2, SIGMA[1])


@dataclass(frozen=True)
class PureState:
    """Normalized two-qubit ket."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape != (4,):
            raise ShapeError(f"a two-qubit ket has 4 amplitudes, got {amps.size}")
        if not np.all(np.isfinite(amps)):
            raise ShapeError("amplitudes contain NaN or Inf")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > 1e-8:
            raise NormalizationError(f"state norm^2 = {norm!r}, expected 1")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, amps) -> "PureState":
        amps = np.asarray(amps, dtype=np.complex128).reshape(-1)
        n = np.linalg.norm(amps)
        if n == 0:
            raise NormalizationError("zero vector cannot be normalized")
        return cls(amps / n)

    def __array__(self, dtype=None, copy=None):
        return self.amplitudes if dtype is None else self.amplitudes.astype(dtype)


@dataclass(frozen=True)
class DensityMatrix:
    """Validated 4x4 density matrix.

    ``renormalized`` records that the input trace was off by less than the
    tolerance and was rescaled; ``min_eigenvalue`` is the smallest eigenvalue
    seen at validation time (may sit in the accepted ``(-tol, 0)`` band).
    """

    matrix: np.ndarray
    renormalized: bool = False
    min_eigenvalue: float = field(default=0.0, compare=False)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


@dataclass(frozen=True)
class SchmidtForm:
    """``(u⊗v)(s1|+-> - s2 e^{iδ}|-+>)`` with ``u, v`` in SU(2)."""

    s1: float
    s2: float
    delta: float
    u: np.ndarray
    v: np.ndarray

    def reconstruct(self) -> np.ndarray:
        core = np.array([0.0, self.s1, -self.s2 * np.exp(1j * self.delta), 0.0], dtype=np.complex128)
        return np.kron(self.u, self.v) @ core


def _matrix_of(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    return as_cmat(rho, (4, 4))


def validate_density(m, tol: float = DEFAULT_TOL) -> DensityMatrix:
    """Check Hermiticity, trace and positivity of a 4x4 matrix.

    A trace within ``tol`` of one is rescaled to exactly one and flagged as
    ``renormalized``.  The returned matrix is the Hermitian part of the input.

    Raises
    ------
    ShapeError, HermiticityError, TraceError, PositivityError
    """
    m = as_cmat(m, (4, 4))
    dev = float(np.max(np.abs(m - m.conj().T)))
    if dev > tol:
        raise HermiticityError(f"hermiticity error: max|rho - rho^†| = {dev:.3e} exceeds {tol:.1e}")
    m = 0.5 * (m + m.conj().T)
    tr = float(np.trace(m).real)
    renormalized = False
    if abs(tr - 1.0) >= tol:
        raise TraceError(f"trace error: Tr(rho) = {tr!r}, expected 1 within {tol:.1e}")
    if tr != 1.0:
        m = m / tr
        renormalized = True
    lam_min = float(hermitian_eigh(m, tol).eigenvalues[0])
    if lam_min < -tol:
        raise PositivityError(f"positivity error: minimum eigenvalue {lam_min:.3e} below -{tol:.1e}")
    return DensityMatrix(m, renormalized, lam_min)


def pure_to_density(p) -> DensityMatrix:
    """Rank-one projector ``|p><p|``."""
    if not isinstance(p, PureState):
        p = PureState(p)
    psi = p.amplitudes
    m = np.outer(psi, psi.conj())
    return DensityMatrix(m, False, 0.0)


def singlet() -> PureState:
    """``(|+-> - |-+>)/√2``."""
    return PureState(np.array([0, 1, -1, 0], dtype=np.complex128) / np.sqrt(2))


def product_state(a, b) -> PureState:
    """Product ket of two single-qubit kets (normalized on the way in)."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    return PureState.normalized(np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b)))


def schmidt_decompose(p) -> SchmidtForm:
    """Schmidt form with the relative minus sign kept explicit.

    Writes ``p = (u⊗v)(s1|+-> - s2 e^{iδ}|-+>)`` with ``s1 >= s2 >= 0``,
    ``det u = det v = 1`` and ``δ`` in ``[0, 2π)``.  For ``s2 = 0`` the phase
    ``δ`` is immaterial and returned as whatever the construction yields.
    """
    if not isinstance(p, PureState):
        p = PureState(p)
    mat = p.amplitudes.reshape(2, 2)
    w, svals, vh = np.linalg.svd(mat)
    s1, s2 = float(svals[0]), float(svals[1])
    # mat = u C v^T, with C = diag(s1, -s2 e^{iδ}) X and X the swap matrix
    half = np.exp(-0.5j * np.angle(np.linalg.det(w)))
    u = w * half
    delta = float(np.mod(np.angle(np.linalg.det(w)) + np.angle(np.linalg.det(vh)), 2 * np.pi))
    ph_a = half
    ph_b = half * np.exp(1j * delta)
    swap = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    v_t = swap @ np.diag([1 / ph_a, -1 / ph_b]) @ vh
    return SchmidtForm(s1, s2, delta, u, v_t.T)


def partial_transpose(rho) -> np.ndarray:
    """Transpose on the second qubit: ``<i k|ρ^{T_B}|j l> = <i l|ρ|j k>``."""
    m = _matrix_of(rho)
    return m.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def partial_time_reversal(rho) -> np.ndarray:
    """``(1⊗τ2) ρ^{T_B} (1⊗τ2)``, unitarily equivalent to the partial transpose."""
    return _TAU2_B @ partial_transpose(rho) @ _TAU2_B


def werner(beta: float) -> DensityMatrix:
    """``(1 - β) I/4 + β |ψ_s><ψ_s|`` for ``-1/3 <= β <= 1``."""
    beta = float(beta)
    if not np.isfinite(beta) or beta < -1.0 / 3.0 - 1e-12 or beta > 1.0 + 1e-12:
        raise DomainError(f"Werner parameter beta={beta!r} outside the positive range [-1/3, 1]")
    s = singlet().amplitudes
    m = 0.25 * (1.0 - beta) * np.eye(4, dtype=np.complex128) + beta * np.outer(s, s.conj())
    return DensityMatrix(m, False, (1.0 - beta) / 4.0 if beta >= 0 else (1.0 + 3.0 * beta) / 4.0)


def make_rng(seed=None) -> np.random.Generator:
    """Counter-based (Philox) generator from an int, ``SeedSequence`` or existing generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        seed = 0
    return np.random.Generator(np.random.Philox(seed))


def _complex_gaussian(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_pure(seed=None) -> PureState:
    """Haar-random two-qubit ket."""
    rng = make_rng(seed)
    return PureState.normalized(_complex_gaussian(rng, 4))


def random_mixed(seed=None, rank: int = 4) -> DensityMatrix:
    """Hilbert-Schmidt (Ginibre) random state ``G G^† / Tr`` with ``G`` 4 x rank."""
    if int(rank) != rank or not 1 <= rank <= 4:
        raise DomainError(f"rank must be in 1..4, got {rank!r}")
    rng = make_rng(seed)
    g = _complex_gaussian(rng, (4, int(rank)))
    m = g @ g.conj().T
    m = m / np.trace(m).real
    return DensityMatrix(0.5 * (m + m.conj().T))


def random_separable(seed=None, terms: int = 1) -> DensityMatrix:
    """Convex mixture of ``terms`` random product projectors, Dirichlet(1,...,1) weights."""
    if int(terms) != terms or terms < 1:
        raise DomainError(f"terms must be a positive integer, got {terms!r}")
    rng = make_rng(seed)
    weights = rng.dirichlet(np.ones(int(terms)))
    m = np.zeros((4, 4), dtype=np.complex128)
    for w in weights:
        a = _complex_gaussian(rng, 2)
        b = _complex_gaussian(rng, 2)
        psi = np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b))
        m += w * np.outer(psi, psi.conj())
    m = m / np.trace(m).real
    return DensityMatrix(0.5 * (m + m.conj().T))
