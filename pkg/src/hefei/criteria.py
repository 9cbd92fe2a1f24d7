"""Separability criteria for two-qubit states.

``ppt_test`` is the exact partial-transpose oracle.  ``hefei_margins``
evaluates the two chiral inequalities at one local frame:

    <P->^2 >= <γ3γ0P->^2 + <γ2γ0P->^2 + <γ1γ0P->^2      (always holds)
    <P+>^2 >= <γ3γ0P+>^2 + <γ2γ0P->^2 + <γ1γ0P->^2      (separable states)

A negative second margin at any frame certifies entanglement.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .dirac_frame import LocalFrame, build_gammas, pure_projector
from .matrix_core import SIGMA, hermitian_eigh
from .states import DEFAULT_TOL, _matrix_of, partial_time_reversal, partial_transpose

__all__ = [
    "Verdict",
    "PptResult",
    "HefeiMargins",
    "ppt_test",
    "hefei_margins",
    "expectation_identity_check",
    "concurrence",
    "chsh_max",
    "correlation_data",
    "margins_from_correlations",
    "margin_pair",
]

_SY_SY = np.kron(SIGMA[1], SIGMA[1])


class Verdict(str, enum.Enum):
    SEPARABLE = "separable"
    ENTANGLED = "entangled"
    BOUNDARY = "boundary"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class PptResult:
    min_eigenvalue: float
    spectrum: tuple[float, float, float, float]
    verdict: Verdict
    tol: float


@dataclass(frozen=True)
class HefeiMargins:
    """Both chiral margins plus the all-``P+`` diagnostic and the raw traces."""

    m_minus: float
    m_plus: float
    m_plus_all: float
    expectations: dict


def _expect(op, rho) -> float:
    t = np.trace(op @ rho)
    if abs(t.imag) > 1e-10:
        raise RuntimeError(f"expectation of a Hermitian operator has imaginary part {t.imag:.3e}")
    return float(t.real)


def ppt_test(rho, tol: float = DEFAULT_TOL) -> PptResult:
    """Spectrum of the partial transpose and the resulting verdict.

    ``min λ < -tol`` is entangled, ``|min λ| <= tol`` is boundary, and
    anything above is separable.
    """
    pt = partial_transpose(rho)
    vals = hermitian_eigh(pt, tol=max(tol, 1e-9)).eigenvalues
    lam = float(vals[0])
    if lam < -tol:
        verdict = Verdict.ENTANGLED
    elif lam <= tol:
        verdict = Verdict.BOUNDARY
    else:
        verdict = Verdict.SEPARABLE
    return PptResult(lam, tuple(float(x) for x in vals), verdict, tol)


def hefei_margins(rho, frame: LocalFrame | None = None) -> HefeiMargins:
    """Chiral margins of ``rho`` at ``frame`` (identity frame by default)."""
    m = _matrix_of(rho)
    g = build_gammas(frame or LocalFrame.identity())
    g1g0, g2g0, g3g0 = g.gk_g0
    pm, pp = g.P_minus, g.P_plus
    e = {
        "P_minus": _expect(pm, m),
        "P_plus": _expect(pp, m),
        "g3g0_P_minus": _expect(g3g0 @ pm, m),
        "g3g0_P_plus": _expect(g3g0 @ pp, m),
        "g2g0_P_minus": _expect(g2g0 @ pm, m),
        "g1g0_P_minus": _expect(g1g0 @ pm, m),
        "g2g0_P_plus": _expect(g2g0 @ pp, m),
        "g1g0_P_plus": _expect(g1g0 @ pp, m),
    }
    transverse = e["g2g0_P_minus"] ** 2 + e["g1g0_P_minus"] ** 2
    return HefeiMargins(
        m_minus=e["P_minus"] ** 2 - e["g3g0_P_minus"] ** 2 - transverse,
        m_plus=e["P_plus"] ** 2 - e["g3g0_P_plus"] ** 2 - transverse,
        m_plus_all=e["P_plus"] ** 2 - e["g3g0_P_plus"] ** 2 - e["g2g0_P_plus"] ** 2 - e["g1g0_P_plus"] ** 2,
        expectations=e,
    )


def expectation_identity_check(rho, frame: LocalFrame, theta: float, phi: float) -> tuple[float, float]:
    """Residuals of the two trace identities for the projector at ``(θ, φ)``.

    The first compares ``Tr(ρ Φ)`` with the chiral expansion in ``P-``
    expectations; the second compares ``Tr(τ2 ρ^{T_B} τ2 Φ)`` with the same
    expansion where ``P-`` becomes ``P+`` in the first two terms and the
    transverse terms change sign.
    """
    m = _matrix_of(rho)
    proj = pure_projector(theta, phi, frame)
    e = hefei_margins(m, frame).expectations
    ct, st = np.cos(theta), np.sin(theta)
    cp, sp = np.cos(phi), np.sin(phi)
    transverse = e["g2g0_P_minus"] * st * sp + e["g1g0_P_minus"] * st * cp
    rhs_direct = 0.5 * (e["P_minus"] + e["g3g0_P_minus"] * ct + transverse)
    rhs_pt = 0.5 * (e["P_plus"] + e["g3g0_P_plus"] * ct - transverse)
    lhs_direct = np.trace(m @ proj)
    lhs_pt = np.trace(partial_time_reversal(m) @ proj)
    return float(abs(lhs_direct - rhs_direct)), float(abs(lhs_pt - rhs_pt))


def concurrence(rho) -> float:
    """Wootters concurrence ``max(0, λ1 - λ2 - λ3 - λ4)``.

    The ``λ_i`` are square roots of the eigenvalues of ``ρ ρ̃`` with
    ``ρ̃ = (σ2⊗σ2) ρ* (σ2⊗σ2)``.  They are obtained from the Hermitian matrix
    ``√ρ ρ̃ √ρ``, which has the same spectrum.
    """
    m = _matrix_of(rho)
    vals, vecs = hermitian_eigh(m)
    sqrt_rho = (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T
    tilde = _SY_SY @ m.conj() @ _SY_SY
    r = sqrt_rho @ tilde @ sqrt_rho
    lam = np.sqrt(np.clip(hermitian_eigh(0.5 * (r + r.conj().T)).eigenvalues, 0.0, None))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def correlation_data(rho) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Local Bloch vectors and the correlation matrix ``T_kl = Tr(ρ σ_k⊗τ_l)``."""
    m = _matrix_of(rho)
    a = np.array([_expect(np.kron(s, np.eye(2)), m) for s in SIGMA])
    b = np.array([_expect(np.kron(np.eye(2), s), m) for s in SIGMA])
    t = np.array([[_expect(np.kron(sk, sl), m) for sl in SIGMA] for sk in SIGMA])
    return a, b, t


def chsh_max(rho) -> float:
    """Largest CHSH value over measurement settings, ``2 sqrt(m1 + m2)``.

    ``m1 >= m2`` are the two largest eigenvalues of ``T^T T``.
    """
    _, _, t = correlation_data(rho)
    vals = hermitian_eigh(t.T @ t).eigenvalues
    return float(2.0 * np.sqrt(max(vals[-1] + vals[-2], 0.0)))


def margins_from_correlations(a, b, t, ru, rv):
    """Vectorized ``(m_plus, m_minus)`` from Pauli correlations.

    Writing the frame observables in the fixed Pauli basis gives
    ``<P±> = (1 ± T'33)/2``, ``<γ3γ0P±> = (a'3 ± b'3)/2``,
    ``<γ2γ0P-> = -(T'11 + T'22)/2`` and ``<γ1γ0P-> = (T'12 - T'21)/2`` with
    ``a' = Ru^T a``, ``b' = Rv^T b``, ``T' = Ru^T T Rv``.  ``ru`` has shape
    ``(N, 3, 3)`` and ``rv`` shape ``(M, 3, 3)``; results have shape ``(N, M)``.
    """
    ru = np.asarray(ru, dtype=float).reshape(-1, 3, 3)
    rv = np.asarray(rv, dtype=float).reshape(-1, 3, 3)
    a3 = ru[:, :, 2] @ a
    b3 = rv[:, :, 2] @ b
    # row i of Ru^T T, then T'_ij = (Ru^T T)_i . (Rv)_j
    tu = np.matmul(ru.transpose(0, 2, 1), t)

    def tprime(i, j):
        return tu[:, i, :] @ rv[:, :, j].T

    t33 = tprime(2, 2)
    x2 = 0.5 * (tprime(0, 0) + tprime(1, 1))
    x1 = 0.5 * (tprime(0, 1) - tprime(1, 0))
    transverse = x1 * x1 + x2 * x2
    m_plus = (0.5 * (1 + t33)) ** 2 - (0.5 * (a3[:, None] + b3[None, :])) ** 2 - transverse
    m_minus = (0.5 * (1 - t33)) ** 2 - (0.5 * (a3[:, None] - b3[None, :])) ** 2 - transverse
    return m_plus, m_minus


def margin_pair(a, b, t, ru, rv) -> tuple[float, float]:
    """Scalar ``(m_plus, m_minus)`` at one pair of rotations."""
    tp = ru.T @ t @ rv
    a3 = ru[:, 2] @ a
    b3 = rv[:, 2] @ b
    x2 = 0.5 * (tp[0, 0] + tp[1, 1])
    x1 = 0.5 * (tp[0, 1] - tp[1, 0])
    transverse = x1 * x1 + x2 * x2
    m_plus = (0.5 * (1 + tp[2, 2])) ** 2 - (0.5 * (a3 + b3)) ** 2 - transverse
    m_minus = (0.5 * (1 - tp[2, 2])) ** 2 - (0.5 * (a3 - b3)) ** 2 - transverse
    return float(m_plus), float(m_minus)
