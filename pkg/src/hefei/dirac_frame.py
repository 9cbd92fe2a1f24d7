"""Local frames, frame observables and the chiral Dirac matrices built from them.

A frame is a pair ``(u, v)`` of SU(2) matrices.  The observables are
``A_k = u σ_k u^† ⊗ 1`` and ``B_k = 1 ⊗ v τ_k v^†`` and the Dirac matrices are

    γ0 = A1,  γ1 = i A3 B1,  γ2 = i A3 B2,  γ3 = i A2,  γ5 = A3 B3,

with chiral projectors ``P± = (1 ± γ5)/2``.  With these definitions the
products are ``γ1γ0 = -A2B1``, ``γ2γ0 = -A2B2`` and ``γ3γ0 = A3``;
``verify_algebra`` checks the identities in exactly that form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import FrameMismatchError
from .matrix_core import I2, I4, SIGMA
from .states import DensityMatrix, _matrix_of

__all__ = [
    "LocalFrame",
    "GammaSet",
    "su2_from_euler",
    "euler_from_su2",
    "so3_from_euler",
    "euler_from_so3",
    "so3_from_su2",
    "frame_from_angles",
    "build_observables",
    "build_gammas",
    "expansion_coefficients",
    "pure_projector",
    "verify_algebra",
]

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
_TAU2_B = np.kron(I2, SIGMA[1])
_TWO_PI = 2 * np.pi


def su2_from_euler(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """``Rz(α) Ry(β) Rz(γ)`` with ``Rz(a) = exp(-i a σ3/2)``, ``Ry(b) = exp(-i b σ2/2)``."""
    ca, cb = np.cos(beta / 2), np.sin(beta / 2)
    return np.array(
        [
            [np.exp(-0.5j * (alpha + gamma)) * ca, -np.exp(-0.5j * (alpha - gamma)) * cb],
            [np.exp(0.5j * (alpha - gamma)) * cb, np.exp(0.5j * (alpha + gamma)) * ca],
        ],
        dtype=np.complex128,
    )


def _wrap(x):
    return float(np.mod(x, _TWO_PI))


def euler_from_su2(u) -> tuple[float, float, float]:
    """Z-Y-Z angles of an SU(2) matrix; ``su2_from_euler`` of the result equals ``±u``."""
    u = np.asarray(u, dtype=np.complex128)
    a, c = u[0, 0], u[1, 0]
    beta = 2 * np.arctan2(abs(c), abs(a))
    if abs(c) < 1e-14:
        return _wrap(-2 * np.angle(a)), 0.0, 0.0
    if abs(a) < 1e-14:
        return _wrap(2 * np.angle(c)), float(np.pi), 0.0
    s = -2 * np.angle(a)
    d = 2 * np.angle(c)
    return _wrap((s + d) / 2), float(beta), _wrap((s - d) / 2)


def so3_from_euler(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Rotation with ``u σ_k u^† = Σ_j R[j, k] σ_j`` for ``u = su2_from_euler(...)``."""
    ca, sa = np.cos(alpha), np.sin(alpha)
    cb, sb = np.cos(beta), np.sin(beta)
    cg, sg = np.cos(gamma), np.sin(gamma)
    return np.array(
        [
            [ca * cb * cg - sa * sg, -ca * cb * sg - sa * cg, ca * sb],
            [sa * cb * cg + ca * sg, -sa * cb * sg + ca * cg, sa * sb],
            [-sb * cg, sb * sg, cb],
        ]
    )


def euler_from_so3(r) -> tuple[float, float, float]:
    """Z-Y-Z angles of a proper rotation matrix."""
    r = np.asarray(r, dtype=float)
    cb = float(np.clip(r[2, 2], -1.0, 1.0))
    beta = float(np.arccos(cb))
    sb = np.hypot(r[0, 2], r[1, 2])
    if sb > 1e-12:
        return _wrap(np.arctan2(r[1, 2], r[0, 2])), beta, _wrap(np.arctan2(r[2, 1], -r[2, 0]))
    if cb > 0:
        return _wrap(np.arctan2(r[1, 0], r[0, 0])), 0.0, 0.0
    return _wrap(np.arctan2(-r[1, 0], -r[0, 0])), float(np.pi), 0.0


def so3_from_su2(u) -> np.ndarray:
    """Adjoint action ``R[j, k] = Tr(σ_j u σ_k u^†)/2``."""
    u = np.asarray(u, dtype=np.complex128)
    ud = u.conj().T
    return np.array([[0.5 * np.trace(SIGMA[j] @ u @ SIGMA[k] @ ud).real for k in range(3)] for j in range(3)])


@dataclass(frozen=True)
class LocalFrame:
    """Pair of single-qubit rotations given by Z-Y-Z Euler angles.

    ``u`` and ``v`` are cached SU(2) matrices derived from the angles.  Frames
    built from matrices reproduce them up to an overall sign, which never
    matters here since only conjugations ``u σ_k u^†`` enter.
    """

    angles_u: tuple[float, float, float]
    angles_v: tuple[float, float, float]
    u: np.ndarray
    v: np.ndarray

    @classmethod
    def from_angles(cls, angles_u, angles_v) -> "LocalFrame":
        au = tuple(float(x) for x in angles_u)
        av = tuple(float(x) for x in angles_v)
        if len(au) != 3 or len(av) != 3:
            raise ValueError("each side of a frame needs exactly three Euler angles")
        if not all(np.isfinite(au + av)):
            raise ValueError("frame angles must be finite")
        return cls(au, av, su2_from_euler(*au), su2_from_euler(*av))

    @classmethod
    def identity(cls) -> "LocalFrame":
        return cls.from_angles((0.0, 0.0, 0.0), (0.0, 0.0, 0.0))

    @classmethod
    def from_unitaries(cls, u, v) -> "LocalFrame":
        return cls.from_angles(euler_from_su2(_to_su2(u)), euler_from_su2(_to_su2(v)))

    @classmethod
    def from_rotations(cls, ru, rv) -> "LocalFrame":
        return cls.from_angles(euler_from_so3(ru), euler_from_so3(rv))

    @property
    def angles(self) -> tuple[float, ...]:
        return self.angles_u + self.angles_v

    @property
    def rotations(self) -> tuple[np.ndarray, np.ndarray]:
        return so3_from_euler(*self.angles_u), so3_from_euler(*self.angles_v)

    @property
    def unitary(self) -> np.ndarray:
        return np.kron(self.u, self.v)


def _to_su2(u) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    return u / np.sqrt(np.linalg.det(u))


def frame_from_angles(angles_u, angles_v) -> LocalFrame:
    return LocalFrame.from_angles(angles_u, angles_v)


@dataclass(frozen=True)
class GammaSet:
    A: tuple[np.ndarray, np.ndarray, np.ndarray]
    B: tuple[np.ndarray, np.ndarray, np.ndarray]
    gamma: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    gamma5: np.ndarray
    P_plus: np.ndarray
    P_minus: np.ndarray
    gk_g0: tuple[np.ndarray, np.ndarray, np.ndarray]


def build_observables(frame: LocalFrame):
    """``(A1, A2, A3), (B1, B2, B3)`` at the given frame."""
    u, v = frame.u, frame.v
    A = tuple(np.kron(u @ s @ u.conj().T, I2) for s in SIGMA)
    B = tuple(np.kron(I2, v @ s @ v.conj().T) for s in SIGMA)
    return A, B


def build_gammas(frame: LocalFrame) -> GammaSet:
    A, B = build_observables(frame)
    g0 = A[0]
    g1 = 1j * A[2] @ B[0]
    g2 = 1j * A[2] @ B[1]
    g3 = 1j * A[1]
    g5 = A[2] @ B[2]
    gamma = (g0, g1, g2, g3)
    return GammaSet(
        A=A,
        B=B,
        gamma=gamma,
        gamma5=g5,
        P_plus=0.5 * (I4 + g5),
        P_minus=0.5 * (I4 - g5),
        gk_g0=(g1 @ g0, g2 @ g0, g3 @ g0),
    )


def pure_projector(theta: float, phi: float, frame: LocalFrame) -> np.ndarray:
    """Rank-one projector ``(P- + γ3γ0P- cosθ + γ2γ0P- sinθ sinφ + γ1γ0P- sinθ cosφ)/2``."""
    g = build_gammas(frame)
    pm = g.P_minus
    return 0.5 * (
        pm
        + np.cos(theta) * g.gk_g0[2] @ pm
        + np.sin(theta) * np.sin(phi) * g.gk_g0[1] @ pm
        + np.sin(theta) * np.cos(phi) * g.gk_g0[0] @ pm
    )


def expansion_coefficients(rho_pure, frame: LocalFrame, tol: float = 1e-8):
    """Coordinates ``(a1, a2, a3)`` of a chirality-minus pure projector.

    For ``ρ = |Φ><Φ|`` with ``P- ρ P- = ρ`` the expansion
    ``ρ = (P- + Σ a_k γ_kγ0 P-)/2`` holds with ``a_k = Tr(γ_kγ0 P- ρ)``; the
    operators ``γ_kγ0P-`` are trace-orthogonal with squared norm 2, which is
    what fixes the unit normalization.

    Returns
    -------
    (a1, a2, a3, residual)
        ``residual`` is the max-abs difference between ``ρ`` and the
        reconstructed expansion.

    Raises
    ------
    FrameMismatchError
        If ``P- ρ P- != ρ`` within ``tol`` or ``ρ`` is not a projector.
    """
    rho = _matrix_of(rho_pure)
    g = build_gammas(frame)
    pm = g.P_minus
    mismatch = float(np.max(np.abs(pm @ rho @ pm - rho)))
    if mismatch > tol:
        raise FrameMismatchError(f"state is not inside the P- subspace of this frame (residual {mismatch:.3e})")
    idem = float(np.max(np.abs(rho @ rho - rho)))
    if idem > tol:
        raise FrameMismatchError(f"state is not a rank-one projector (idempotency residual {idem:.3e})")
    coeffs = []
    for op in g.gk_g0:
        t = np.trace(op @ pm @ rho)
        if abs(t.imag) > 1e-10:
            raise RuntimeError(f"non-real expansion coefficient {t!r}")
        coeffs.append(float(t.real))
    recon = 0.5 * (pm + sum(a * op @ pm for a, op in zip(coeffs, g.gk_g0)))
    residual = float(np.max(np.abs(rho - recon)))
    return coeffs[0], coeffs[1], coeffs[2], residual


def _levi_civita(k, l, m):
    return (k - l) * (l - m) * (m - k) / 2


def verify_algebra(frame: LocalFrame) -> dict[str, float]:
    """Max residual of every algebraic identity the construction relies on.

    Keys
    ----
    clifford : ``{γμ, γν} = 2 g_μν``
    gamma5_product : ``γ5 = A3B3 = -i γ0γ1γ2γ3``
    gamma5_anticommute : ``{γ5, γμ} = 0``
    gamma5_commute : ``[γ5, γkγ0] = 0``
    gk_g0 : ``γ1γ0 = -A2B1``, ``γ2γ0 = -A2B2``, ``γ3γ0 = A3``
    duality : ``i γkγ0γ5 = -(1/2) ε_klm γl γm``
    time_reversal : ``(1⊗τ2) B_k^T (1⊗τ2) = -B_k``
    projectors : ``P±² = P±``, ``P+P- = 0``, ``P+ + P- = 1``
    pauli : ``A1A2 = iA3`` and cyclic, likewise for B
    local_commute : ``[A_k, B_l] = 0``
    hermitian_unitary : each ``A_k``, ``B_k`` Hermitian, unitary and traceless
    """
    g = build_gammas(frame)
    A, B, gam = g.A, g.B, g.gamma

    def dev(x, y):
        return float(np.max(np.abs(x - y)))

    res = {}
    res["clifford"] = max(
        dev(gam[m] @ gam[n] + gam[n] @ gam[m], 2 * METRIC[m, n] * I4) for m in range(4) for n in range(4)
    )
    res["gamma5_product"] = max(
        dev(g.gamma5, A[2] @ B[2]), dev(g.gamma5, -1j * gam[0] @ gam[1] @ gam[2] @ gam[3])
    )
    res["gamma5_anticommute"] = max(dev(g.gamma5 @ x + x @ g.gamma5, 0 * I4) for x in gam)
    res["gamma5_commute"] = max(dev(g.gamma5 @ x, x @ g.gamma5) for x in g.gk_g0)
    res["gk_g0"] = max(
        dev(g.gk_g0[0], -A[1] @ B[0]),
        dev(g.gk_g0[1], -A[1] @ B[1]),
        dev(g.gk_g0[2], A[2]),
    )
    duality = 0.0
    for k in range(3):
        rhs = sum(
            0.5 * _levi_civita(k, l, m) * gam[l + 1] @ gam[m + 1]
            for l, m in itertools.product(range(3), repeat=2)
            if _levi_civita(k, l, m)
        )
        duality = max(duality, dev(1j * gam[k + 1] @ gam[0] @ g.gamma5, -rhs))
    res["duality"] = duality
    res["time_reversal"] = max(dev(_TAU2_B @ b.T @ _TAU2_B, -b) for b in B)
    res["projectors"] = max(
        dev(g.P_plus @ g.P_plus, g.P_plus),
        dev(g.P_minus @ g.P_minus, g.P_minus),
        dev(g.P_plus @ g.P_minus, 0 * I4),
        dev(g.P_plus + g.P_minus, I4),
    )
    pauli = 0.0
    for ops in (A, B):
        for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            pauli = max(pauli, dev(ops[i] @ ops[j], 1j * ops[k]))
    res["pauli"] = pauli
    res["local_commute"] = max(dev(a @ b, b @ a) for a in A for b in B)
    res["hermitian_unitary"] = max(
        max(dev(x, x.conj().T), dev(x @ x.conj().T, I4), abs(np.trace(x))) for x in A + B
    )
    return res
