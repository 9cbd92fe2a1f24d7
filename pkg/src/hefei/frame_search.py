"""Search over local frames for a violation of the second chiral inequality.

The second margin ``m_plus`` is evaluated on a product grid of Z-Y-Z Euler
angles for both qubits, plus a handful of frames that diagonalize the
correlation matrix.  The most negative candidates are polished with
Nelder-Mead.  A negative margin is an entanglement certificate that can be
checked independently by calling ``hefei_margins`` at ``witness_frame``.  A
non-negative minimum only means no violating frame was found; the report
always carries the exact partial-transpose verdict next to it.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .criteria import (
    HefeiMargins,
    PptResult,
    Verdict,
    correlation_data,
    hefei_margins,
    margin_pair,
    margins_from_correlations,
    ppt_test,
)
from .dirac_frame import LocalFrame, so3_from_euler
from .states import DEFAULT_TOL

__all__ = ["SearchConfig", "CriterionReport", "seed_frames", "certify", "grid_angles"]


@dataclass(frozen=True)
class SearchConfig:
    grid_points_per_angle: int = 8
    refinement_iterations: int = 1000
    refinement_tolerance: float = 1e-9
    violation_threshold: float = 1e-7
    seed_frames_from_correlation: bool = True
    refine_starts: int = 4
    ppt_tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.grid_points_per_angle < 2:
            raise ValueError("grid_points_per_angle must be at least 2")
        if self.refinement_iterations < 0 or self.refine_starts < 0:
            raise ValueError("iteration counts must be non-negative")
        if not (self.refinement_tolerance > 0 and self.violation_threshold > 0 and self.ppt_tol > 0):
            raise ValueError("tolerances and thresholds must be positive")


@dataclass(frozen=True)
class CriterionReport:
    verdict: Verdict
    min_m_plus: float
    witness_frame: LocalFrame
    min_m_minus_observed: float
    ppt: PptResult
    agreement: bool
    converged: bool
    grid_min_m_plus: float
    margins: HefeiMargins = field(repr=False)
    evaluations: int = 0


@functools.lru_cache(maxsize=8)
def grid_angles(n: int) -> np.ndarray:
    """All ``n**3`` Euler triples: ``α, γ`` on ``[0, 2π)`` and ``β`` on ``[0, π]``."""
    outer = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
    polar = np.linspace(0.0, np.pi, n)
    return np.array(list(itertools.product(outer, polar, outer)))


@functools.lru_cache(maxsize=8)
def _grid_rotations(n: int) -> np.ndarray:
    return np.array([so3_from_euler(*ang) for ang in grid_angles(n)])


_CYCLIC = [np.eye(3), np.eye(3)[:, [1, 2, 0]], np.eye(3)[:, [2, 0, 1]]]
_FLIP = np.diag([1.0, -1.0, -1.0])


def seed_frames(rho) -> list[LocalFrame]:
    """Identity frame plus frames that diagonalize the correlation matrix.

    With ``T = U S V^T`` (``U, V`` made proper), the frame ``(U, V)`` puts ``T``
    in diagonal form.  Each cyclic relabelling of the axes is included, with
    and without a π rotation of the second qubit about its first axis, since
    the margin singles out axis 3 and the sign of ``T'33``.
    """
    _, _, t = correlation_data(rho)
    u, _, vt = np.linalg.svd(t)
    v = vt.T
    if np.linalg.det(u) < 0:
        u[:, 2] *= -1
    if np.linalg.det(v) < 0:
        v[:, 2] *= -1
    frames = [LocalFrame.identity()]
    for perm in _CYCLIC:
        for flip in (np.eye(3), _FLIP):
            frames.append(LocalFrame.from_rotations(u @ perm, v @ perm @ flip))
    return frames


def _objective(a, b, t):
    def f(x):
        ru = so3_from_euler(x[0], x[1], x[2])
        rv = so3_from_euler(x[3], x[4], x[5])
        return margin_pair(a, b, t, ru, rv)[0]

    return f


def _agree(verdict: Verdict, ppt: PptResult) -> bool:
    if Verdict.BOUNDARY in (verdict, ppt.verdict):
        return True
    return verdict == ppt.verdict


def certify(rho, cfg: SearchConfig | None = None) -> CriterionReport:
    """Decide separability of ``rho`` by a frame search on the chiral margin.

    Parameters
    ----------
    rho : DensityMatrix or array_like
        Validated two-qubit state.
    cfg : SearchConfig, optional

    Returns
    -------
    CriterionReport
        ``verdict`` is entangled when the best margin is below
        ``-violation_threshold``, boundary when its magnitude is within the
        threshold, separable otherwise.  ``agreement`` compares with the
        partial-transpose verdict (a boundary on either side counts as
        agreement).  ``converged`` is false if a refinement run hit its
        iteration budget before reaching ``refinement_tolerance``.
    """
    cfg = cfg or SearchConfig()
    a, b, t = correlation_data(rho)
    n = cfg.grid_points_per_angle
    angles = grid_angles(n)
    rots = _grid_rotations(n)

    mp, mm = margins_from_correlations(a, b, t, rots, rots)
    grid_min = float(mp.min())
    min_m_minus = float(mm.min())
    evaluations = mp.size

    # candidates: (value, order index, 6 angles); grid first so ties resolve to grid index
    k = max(cfg.refine_starts, 1)
    flat_mp = mp.ravel()
    part = np.argpartition(flat_mp, min(k, flat_mp.size - 1))[: k + 1] if flat_mp.size > k else np.arange(flat_mp.size)
    order = sorted(part.tolist(), key=lambda idx: (flat_mp[idx], idx))[:k]
    candidates = []
    for rank, flat in enumerate(order):
        i, j = np.unravel_index(flat, mp.shape)
        candidates.append((float(mp[i, j]), rank, np.concatenate([angles[i], angles[j]])))
    if cfg.seed_frames_from_correlation:
        for k, fr in enumerate(seed_frames(rho)):
            ru, rv = fr.rotations
            sp, sm = margin_pair(a, b, t, ru, rv)
            evaluations += 1
            min_m_minus = min(min_m_minus, sm)
            candidates.append((sp, len(order) + k, np.array(fr.angles)))
    candidates.sort(key=lambda c: (c[0], c[1]))

    best_val, _, best_x = candidates[0]
    converged = True
    if cfg.refinement_iterations > 0 and cfg.refine_starts > 0:
        f = _objective(a, b, t)
        step = np.pi / n
        for val, _, x0 in candidates[: cfg.refine_starts]:
            simplex = np.vstack([x0, x0 + step * np.eye(6)])
            res = minimize(
                f,
                x0,
                method="Nelder-Mead",
                options={
                    "maxiter": cfg.refinement_iterations,
                    "xatol": cfg.refinement_tolerance,
                    "fatol": cfg.refinement_tolerance,
                    "initial_simplex": simplex,
                },
            )
            evaluations += int(res.nfev)
            converged = converged and bool(res.success)
            if res.fun < best_val:
                best_val, best_x = float(res.fun), np.asarray(res.x)
            ru = so3_from_euler(*res.x[:3])
            rv = so3_from_euler(*res.x[3:])
            min_m_minus = min(min_m_minus, margin_pair(a, b, t, ru, rv)[1])

    witness = LocalFrame.from_rotations(so3_from_euler(*best_x[:3]), so3_from_euler(*best_x[3:]))
    margins = hefei_margins(rho, witness)
    best = margins.m_plus
    min_m_minus = min(min_m_minus, margins.m_minus)

    thr = cfg.violation_threshold
    if best < -thr:
        verdict = Verdict.ENTANGLED
    elif best <= thr:
        verdict = Verdict.BOUNDARY
    else:
        verdict = Verdict.SEPARABLE
    ppt = ppt_test(rho, cfg.ppt_tol)
    return CriterionReport(
        verdict=verdict,
        min_m_plus=float(best),
        witness_frame=witness,
        min_m_minus_observed=float(min_m_minus),
        ppt=ppt,
        agreement=_agree(verdict, ppt),
        converged=converged,
        grid_min_m_plus=grid_min,
        margins=margins,
        evaluations=evaluations,
    )
