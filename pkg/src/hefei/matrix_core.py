"""Small dense complex matrices and a Jacobi eigensolver for Hermitian input.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.  The
helpers here only add shape checking and the conventions the rest of the
package relies on (phase-fixed eigenvectors, deterministic ordering).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import HermiticityError, ShapeError

__all__ = [
    "EigenDecomposition",
    "as_cmat",
    "kron",
    "add",
    "mul",
    "adjoint",
    "scale",
    "trace",
    "frobenius_norm",
    "max_abs_diff",
    "hermitian_eigh",
    "SIGMA",
    "I2",
    "I4",
]

DEFAULT_HERMITIAN_TOL = 1e-9

I2 = np.eye(2, dtype=np.complex128)
I4 = np.eye(4, dtype=np.complex128)
SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


def as_cmat(m, shape=None) -> np.ndarray:
    """Convert ``m`` to a finite complex matrix, optionally enforcing ``shape``."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ShapeError(f"expected a 2-d matrix, got ndim={a.ndim}")
    if shape is not None and a.shape != tuple(shape):
        raise ShapeError(f"expected shape {tuple(shape)}, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ShapeError("matrix contains NaN or Inf entries")
    return a


def _same_shape(a, b):
    a = as_cmat(a)
    b = as_cmat(b)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def kron(a, b) -> np.ndarray:
    """Kronecker product of two 2x2 matrices, ``(a⊗b)[2i+k, 2j+l] = a[i,j] b[k,l]``."""
    a = as_cmat(a, (2, 2))
    b = as_cmat(b, (2, 2))
    return np.kron(a, b)


def add(a, b) -> np.ndarray:
    a, b = _same_shape(a, b)
    return a + b


def mul(a, b) -> np.ndarray:
    a = as_cmat(a)
    b = as_cmat(b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a) -> np.ndarray:
    return as_cmat(a).conj().T


def scale(a, c: complex) -> np.ndarray:
    return complex(c) * as_cmat(a)


def trace(a) -> complex:
    a = as_cmat(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"trace of non-square matrix {a.shape}")
    return complex(np.trace(a))


def frobenius_norm(a) -> float:
    return float(np.linalg.norm(as_cmat(a)))


def max_abs_diff(a, b) -> float:
    a, b = _same_shape(a, b)
    return float(np.max(np.abs(a - b))) if a.size else 0.0


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues with the matching eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __iter__(self):
        yield self.eigenvalues
        yield self.eigenvectors


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    mags = np.abs(vec)
    # first index attaining the maximum magnitude, up to roundoff
    idx = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
    ph = vec[idx] / mags[idx]
    return vec / ph


def _jacobi_sweeps(h: np.ndarray, max_sweeps: int = 64):
    n = h.shape[0]
    a = h.copy()
    v = np.eye(n, dtype=np.complex128)
    scale_ = max(np.linalg.norm(a), 1e-300)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a[~np.eye(n, dtype=bool)]) ** 2))
        if off <= 1e-16 * scale_:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                c = abs(apq)
                if c <= 1e-18 * scale_:
                    a[p, q] = a[q, p] = 0.0
                    continue
                w = apq / c
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * c)
                if abs(tau) > 1e150:
                    t = 0.5 / abs(tau)
                else:
                    t = 1.0 / (abs(tau) + np.sqrt(1.0 + tau * tau))
                if tau < 0:
                    t = -t
                cs = 1.0 / np.sqrt(1.0 + t * t)
                sn = t * cs
                # phase rotation makes a[p, q] real, then a real Givens rotation zeros it
                rot = np.eye(n, dtype=np.complex128)
                rot[p, p] = cs
                rot[p, q] = sn * w
                rot[q, p] = -sn * np.conj(w)
                rot[q, q] = cs
                a = rot.conj().T @ a @ rot
                a[p, q] = a[q, p] = 0.0
                v = v @ rot
    return np.real(np.diag(a)).copy(), v


def hermitian_eigh(h, tol: float = DEFAULT_HERMITIAN_TOL) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.

    Parameters
    ----------
    h : array_like
        Square complex matrix with ``max|h - h^†| <= tol``.
    tol : float
        Hermiticity tolerance.

    Returns
    -------
    EigenDecomposition
        Eigenvalues ascending.  Each eigenvector is phase-fixed so that its
        largest-magnitude component (lowest index on ties) is real positive;
        degenerate eigenvalues are ordered lexicographically by eigenvector.
    """
    h = as_cmat(h)
    if h.shape[0] != h.shape[1]:
        raise ShapeError(f"eigendecomposition of non-square matrix {h.shape}")
    dev = float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0
    if dev > tol:
        raise HermiticityError(f"matrix is not Hermitian: max|H - H^†| = {dev:.3e} > {tol:.1e}")
    h = 0.5 * (h + h.conj().T)
    vals, vecs = _jacobi_sweeps(h)
    vecs = np.column_stack([_fix_phase(vecs[:, i]) for i in range(len(vals))])

    spread = max(1.0, float(np.max(np.abs(vals)))) * 1e-12
    def key(i):
        # group near-equal eigenvalues, then order by eigenvector components
        col = vecs[:, i]
        comps = tuple(x for z in col for x in (round(z.real, 10), round(z.imag, 10)))
        return (round(vals[i] / spread) * spread, comps)

    order = sorted(range(len(vals)), key=key)
    return EigenDecomposition(vals[order], vecs[:, order])
