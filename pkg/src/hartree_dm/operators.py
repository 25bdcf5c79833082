"""Dense operator algebra in the plane-wave basis.

Operators are plain ``(N, N)`` complex ndarrays with entries
``A[k, k'] = <e_k, A e_k'>``.  Functions that need the lattice take the grid
explicitly; everything else is basis-agnostic linear algebra.
"""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np
from scipy.stats import unitary_group

from .lattice import MomentumGrid

HERMITIAN_RTOL = 1e-12
CLAMP_TOL = 1e-8


class OperatorError(ValueError):
    """Raised on shape mismatch, non-Hermitian input or spectral failures."""


class ConstraintError(OperatorError):
    """A density matrix left ``[0, 1]`` by more than the clamp tolerance."""

    def __init__(self, message, violation):
        super().__init__(message)
        self.violation = violation


def check_shape(A: np.ndarray, N: Optional[int] = None) -> np.ndarray:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise OperatorError(f"expected a square matrix, got shape {A.shape}")
    if N is not None and A.shape[0] != N:
        raise OperatorError(f"operator has dimension {A.shape[0]}, grid has {N} modes")
    return A


def hermiticity_defect(A: np.ndarray) -> float:
    A = check_shape(A)
    if A.size == 0:
        return 0.0
    return float(np.max(np.abs(A - A.conj().T)))


def is_hermitian(A: np.ndarray) -> bool:
    scale = 1.0 + (float(np.max(np.abs(A))) if A.size else 0.0)
    return hermiticity_defect(A) <= HERMITIAN_RTOL * scale


def check_hermitian(A: np.ndarray) -> np.ndarray:
    A = check_shape(A)
    if not is_hermitian(A):
        raise OperatorError(f"operator is not Hermitian (defect {hermiticity_defect(A):.3e})")
    return A


def eigh(A: np.ndarray):
    """Hermitian eigendecomposition; failures are raised, never swallowed."""
    A = check_shape(A)
    try:
        return np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise OperatorError(f"eigendecomposition did not converge: {exc}") from exc


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    A = check_shape(A)
    B = check_shape(B, A.shape[0])
    return A @ B - B @ A


def free_phases(grid: MomentumGrid, t: float) -> np.ndarray:
    """Diagonal of ``exp(i t Delta)`` in the plane-wave basis."""
    return np.exp(-1j * t * grid.dispersion)


def free_evolve(grid: MomentumGrid, Q: np.ndarray, t: float) -> np.ndarray:
    """``exp(i t Delta) Q exp(-i t Delta)``, entrywise ``exp(-i t (|k|^2 - |k'|^2)) Q[k, k']``."""
    Q = check_shape(Q, grid.N)
    if t == 0:
        return Q.copy()
    ph = free_phases(grid, t)
    return ph[:, None] * Q * ph.conj()[None, :]


def schatten_norm(A: np.ndarray, p: float = 2) -> float:
    """Schatten ``p``-norm, the ``l^p`` norm of the singular values (``p=inf`` is the operator norm)."""
    A = check_shape(A)
    if not p >= 1:
        raise OperatorError(f"Schatten exponent must be >= 1, got {p}")
    if A.size == 0:
        return 0.0
    if p == 2:
        return float(np.linalg.norm(A, "fro"))
    sv = np.linalg.svd(A, compute_uv=False)
    if np.isinf(p):
        return float(sv[0])
    if p == 1:
        return float(np.sum(sv))
    return float(np.sum(sv**p) ** (1.0 / p))


def sobolev_schatten_norm(grid: MomentumGrid, Q: np.ndarray, p: float = 2, s: float = 0.0) -> float:
    """``||Q (1 - Delta)^{s/2}||_{S^p}``: scale column ``k'`` by ``(1 + |k'|^2)^{s/2}``."""
    Q = check_shape(Q, grid.N)
    if s < 0:
        raise OperatorError(f"Sobolev index must be >= 0, got {s}")
    weight = (1.0 + grid.dispersion) ** (s / 2.0)
    return schatten_norm(Q * weight[None, :], p)


def spectral_projector_above(A: np.ndarray, lam: float) -> np.ndarray:
    """Orthogonal projector ``1(A >= lam)``; ties at ``lam`` are included."""
    A = check_hermitian(A)
    w, v = eigh(A)
    keep = w >= lam
    vk = v[:, keep]
    return vk @ vk.conj().T


def clamp_spectrum(w: np.ndarray, lo: float, hi: float, tol: float = CLAMP_TOL) -> np.ndarray:
    """Clamp eigenvalues into ``[lo, hi]``; excursions beyond ``tol`` raise :class:`ConstraintError`."""
    below = lo - np.min(w) if w.size else 0.0
    above = np.max(w) - hi if w.size else 0.0
    violation = max(below, above, 0.0)
    if violation > tol:
        raise ConstraintError(
            f"spectrum [{np.min(w):.6g}, {np.max(w):.6g}] leaves [{lo}, {hi}] by {violation:.3e}",
            violation,
        )
    return np.clip(w, lo, hi)


def apply_scalar_function(
    A: np.ndarray,
    g: Callable[[np.ndarray], np.ndarray],
    domain: tuple = (-np.inf, np.inf),
) -> np.ndarray:
    """``g(A)`` through the eigendecomposition of the Hermitian ``A``."""
    A = check_hermitian(A)
    w, v = eigh(A)
    w = clamp_spectrum(w, *domain)
    gw = np.asarray(g(w), dtype=float)
    return (v * gw[None, :]) @ v.conj().T


def laplacian_spectral_projectors(grid: MomentumGrid, mu: float):
    """Diagonal projectors ``1(-Delta <= mu)`` and ``1(-Delta >= mu)``."""
    disp = grid.dispersion
    minus = np.diag((disp <= mu).astype(float)).astype(complex)
    plus = np.diag((disp >= mu).astype(float)).astype(complex)
    return minus, plus


def projector_mask(grid: MomentumGrid, mu: float, side: str) -> np.ndarray:
    """Boolean diagonal of a Laplacian spectral projector; ``side`` is ``'-'`` or ``'+'``."""
    if side == "-":
        return grid.dispersion <= mu
    if side == "+":
        return grid.dispersion >= mu
    raise ValueError(f"side must be '-' or '+', got {side!r}")


def random_admissible_perturbation(
    grid: MomentumGrid,
    occupations: np.ndarray,
    bandwidth: float,
    magnitude: float,
    seed,
) -> np.ndarray:
    """Random Hermitian ``Q`` on modes ``|k|^2 <= bandwidth`` with ``0 <= gamma_f + Q <= 1``.

    The perturbed block is a convex combination ``(1 - s) g + s Y`` of the
    reference occupations ``g`` and a random density matrix ``0 <= Y <= 1``, so
    admissibility holds by construction for every ``s`` in ``[0, 1]``.  ``s`` is
    chosen so that ``||Q||_op = magnitude`` when that is reachable.

    Parameters
    ----------
    occupations : ndarray or ReferenceState
        Diagonal ``g_k`` of the reference state.
    seed : int or numpy Generator
        Makes the draw deterministic.
    """
    occupations = np.asarray(getattr(occupations, "occupations", occupations), dtype=float)
    if magnitude < 0:
        raise OperatorError(f"magnitude must be >= 0, got {magnitude}")
    Q = np.zeros((grid.N, grid.N), dtype=complex)
    band = np.flatnonzero(grid.dispersion <= bandwidth)
    if magnitude == 0 or band.size == 0:
        return Q
    rng = np.random.default_rng(seed)
    n = band.size
    U = unitary_group.rvs(n, random_state=rng) if n > 1 else np.ones((1, 1), dtype=complex)
    y = rng.uniform(0.0, 1.0, size=n)
    Y = (U * y[None, :]) @ U.conj().T
    D = Y - np.diag(occupations[band])
    D = 0.5 * (D + D.conj().T)
    size = schatten_norm(D, np.inf)
    if size == 0:
        return Q
    s = min(1.0, magnitude / size)
    Q[np.ix_(band, band)] = s * D
    gamma = np.diag(occupations).astype(complex) + Q
    w = np.linalg.eigvalsh(gamma)
    violation = max(-w.min(), w.max() - 1.0, 0.0)
    if violation > 1e-10:
        raise ConstraintError(f"generated perturbation violates 0 <= gamma <= 1 by {violation:.3e}", violation)
    return Q
